#include "lrga/rgnn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lrga {

RandomFeatureConfig RandomFeatureConfig::gaussian(std::size_t d, double variance,
                                                  std::uint64_t seed) {
  RandomFeatureConfig cfg;
  cfg.d = d;
  cfg.distribution = FeatureDistribution::gaussian;
  cfg.variance = variance;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

RandomFeatureConfig RandomFeatureConfig::uniform(std::size_t d, double bound, std::uint64_t seed) {
  RandomFeatureConfig cfg;
  cfg.d = d;
  cfg.distribution = FeatureDistribution::uniform;
  cfg.bound = bound;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

void RandomFeatureConfig::validate() const {
  if (d == 0) throw std::invalid_argument("random feature dimension must be positive");
  if (distribution == FeatureDistribution::gaussian && !(variance > 0.0)) {
    throw std::invalid_argument("gaussian variance must be positive");
  }
  if (distribution == FeatureDistribution::uniform && !(bound > 0.0)) {
    throw std::invalid_argument("uniform bound must be positive");
  }
}

double RandomFeatureConfig::entry_variance() const {
  return distribution == FeatureDistribution::gaussian ? variance : bound * bound / 12.0;
}

Matrix sample_features(std::size_t n, const RandomFeatureConfig& cfg) {
  cfg.validate();
  if (n == 0) throw std::invalid_argument("sample_features needs n >= 1");
  Rng rng = make_rng(cfg.seed);
  Matrix r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cfg.d));
  if (cfg.distribution == FeatureDistribution::gaussian) {
    std::normal_distribution<double> normal(0.0, std::sqrt(cfg.variance));
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = normal(rng);
    }
  } else {
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = (uniform01(rng) - 0.5) * cfg.bound;
    }
  }
  return r;
}

Matrix standardize(const Matrix& r, const RandomFeatureConfig& cfg) {
  return r / std::sqrt(cfg.entry_variance());
}

Matrix message_passing_layer(const Matrix& adjacency, const Matrix& r) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() != r.rows()) {
    throw std::invalid_argument("message_passing_layer: adjacency is " +
                                std::to_string(adjacency.rows()) + "x" +
                                std::to_string(adjacency.cols()) + ", features have " +
                                std::to_string(r.rows()) + " rows");
  }
  if (r.cols() == 0) throw std::invalid_argument("message_passing_layer: empty feature matrix");
  const double scale = 1.0 / std::sqrt(static_cast<double>(r.cols()));
  Matrix out(r.rows(), 2 * r.cols());
  out.leftCols(r.cols()).noalias() = adjacency * r;
  out.rightCols(r.cols()) = r;
  out *= scale;
  return out;
}

FactorizationError factorization_error(const Matrix& adjacency, const Matrix& r) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() != r.rows() || r.cols() == 0) {
    throw std::invalid_argument("factorization_error: incompatible dimensions");
  }
  const double inv_d = 1.0 / static_cast<double>(r.cols());
  Matrix gram = r * r.transpose();
  gram *= inv_d;
  FactorizationError err;
  err.adj_dev = (adjacency * gram - adjacency).norm();
  gram.diagonal().array() -= 1.0;
  err.gram_dev = gram.cwiseAbs().maxCoeff();
  return err;
}

double required_dimension(std::size_t n, double xi, double delta_fail, double m_prime) {
  if (!(xi > 0.0)) throw std::invalid_argument("required_dimension: xi must be positive");
  if (!(delta_fail > 0.0 && delta_fail < 1.0)) {
    throw std::invalid_argument("required_dimension: delta_fail must lie in (0, 1)");
  }
  if (!(m_prime > 0.0)) throw std::invalid_argument("required_dimension: m_prime must be positive");
  const double nd = static_cast<double>(n);
  return m_prime * std::pow(nd, 6) / (xi * xi) * std::log(2.0 * nd * nd / delta_fail);
}

Matrix extended_factorization(const Graph& g, const Matrix& r) {
  const auto n = static_cast<Eigen::Index>(g.size());
  if (r.rows() != n) {
    throw std::invalid_argument("extended_factorization: R has " + std::to_string(r.rows()) +
                                " rows, graph has " + std::to_string(n) + " nodes");
  }
  const Matrix& x = g.features();
  Matrix out(n, 1 + x.cols() + 2 * r.cols());
  out.col(0).setOnes();
  out.middleCols(1, x.cols()) = x;
  out.middleCols(1 + x.cols(), r.cols()) = r;
  out.rightCols(r.cols()).noalias() = g.adjacency() * r;
  return out;
}

double expectation_equivariance_check(const NodeForward& forward, const Matrix& adjacency,
                                      const Matrix& x, const Permutation& p,
                                      const RandomFeatureConfig& cfg, std::size_t n_trials) {
  const auto n = static_cast<std::size_t>(adjacency.rows());
  if (n_trials == 0) throw std::invalid_argument("expectation_equivariance_check: n_trials == 0");
  if (p.size() != n || static_cast<std::size_t>(x.rows()) != n) {
    throw std::invalid_argument("expectation_equivariance_check: size mismatch");
  }
  const Matrix pa = p.conjugate(adjacency);
  const Matrix px = p.apply_rows(x);

  Matrix sum_permuted;
  Matrix sum_plain;
  for (std::size_t t = 0; t < n_trials; ++t) {
    RandomFeatureConfig trial = cfg;
    trial.seed = derive_seed(cfg.seed, t);
    const Matrix r = sample_features(n, trial);

    Matrix input(x.rows(), x.cols() + r.cols());
    input << x, r;
    Matrix permuted_input(x.rows(), x.cols() + r.cols());
    permuted_input << px, p.apply_rows(r);

    const Matrix a = forward(pa, permuted_input);
    const Matrix b = forward(adjacency, input);
    if (t == 0) {
      sum_permuted = a;
      sum_plain = b;
    } else {
      sum_permuted += a;
      sum_plain += b;
    }
  }
  const double inv = 1.0 / static_cast<double>(n_trials);
  const Matrix diff = sum_permuted * inv - p.apply_rows(sum_plain * inv);
  return diff.cwiseAbs().maxCoeff();
}

}  // namespace lrga
