#include "lrga/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrga/fwl_matrix.hpp"
#include "lrga/graph.hpp"
#include "lrga/poly_kernels.hpp"

namespace lrga {

namespace {

enum Stream : std::uint64_t { kKernel = 10, kLemma = 11, kGraphInt = 12, kGraphReal = 13, kHead = 14 };

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

Vector gaussian_vector(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = normal(rng);
  return v;
}

/// Random exponents over `len` slots with total degree at most `max_degree`.
MultiIndex random_multi_index(Rng& rng, std::size_t len, unsigned max_degree) {
  MultiIndex m = MultiIndex::zeros(len);
  const auto total = static_cast<unsigned>(pick(rng, 0, max_degree));
  for (unsigned k = 0; k < total; ++k) ++m.exponents[pick(rng, 0, len - 1)];
  return m;
}

double perturbed(double value, double scale, double perturbation) {
  return value + perturbation * scale;
}

Graph sample_graph(Rng& rng, std::size_t max_nodes, std::size_t feature_dim) {
  const std::size_t n = pick(rng, 2, max_nodes);
  Graph g = random_graph(n, 0.2 + 0.6 * uniform01(rng), rng());
  if (feature_dim == 0) return g;
  std::normal_distribution<double> normal;
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(feature_dim));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = normal(rng);
  }
  return Graph::from_adjacency(g.adjacency(), x);
}

}  // namespace

IdentityCheck check_kernel_identity(const KernelCheckConfig& cfg) {
  IdentityCheck out{"kernel_identity", cfg.kernel_cases, 0.0, 1e-9};
  Rng rng = make_rng(cfg.seed, kKernel);
  for (std::size_t c = 0; c < cfg.kernel_cases; ++c) {
    const std::size_t blocks = pick(rng, 1, cfg.kernel_max_blocks);
    BlockVector x, y;
    for (std::size_t l = 0; l < blocks; ++l) {
      const std::size_t dim = pick(rng, 1, cfg.kernel_max_block_dim);
      x.blocks.push_back(gaussian_vector(rng, dim));
      y.blocks.push_back(gaussian_vector(rng, dim));
    }
    const MultiIndex beta = random_multi_index(rng, blocks, cfg.kernel_max_degree);

    double rhs = 1.0;
    double scale = 1.0;
    for (std::size_t l = 0; l < blocks; ++l) {
      const double e = static_cast<double>(beta[l]);
      rhs *= std::pow(x.blocks[l].dot(y.blocks[l]), e);
      scale *= std::pow(x.blocks[l].norm() * y.blocks[l].norm(), e);
    }
    const double denom = std::max(std::abs(rhs), scale);
    const double lhs = perturbed(phi_product(x, beta).dot(phi_product(y, beta)), denom,
                                 cfg.perturbation);
    out.max_error = std::max(out.max_error, std::abs(lhs - rhs) / denom);
  }
  return out;
}

IdentityCheck check_lemma_residual(const KernelCheckConfig& cfg) {
  IdentityCheck out{"lemma_residual", 0, 0.0, 1e-6};
  Rng rng = make_rng(cfg.seed, kLemma);
  std::vector<double> x;
  for (const auto& [n, dim] : cfg.lemma_systems) {
    const VandermondeSystem sys = build_vandermonde(n, dim);
    for (const MultiIndex& delta : sys.basis) {
      const MonomialDecomposition dec = solve_monomial_coeffs(delta, sys);
      for (std::size_t p = 0; p < cfg.lemma_points; ++p) {
        x.resize(dim);
        for (double& v : x) v = 2.0 * uniform01(rng) - 1.0;
        const double expected = monomial(x, delta);
        const double denom = std::max(1.0, std::abs(expected));
        const double got = perturbed(dec.evaluate(x), denom, cfg.perturbation);
        out.max_error = std::max(out.max_error, std::abs(got - expected) / denom);
        ++out.cases;
      }
    }
  }
  return out;
}

IdentityCheck check_lemma_norm(const KernelCheckConfig& cfg) {
  // An inequality with slack; the perturbation hook does not apply here.
  IdentityCheck out{"lemma_norm_bound", 0, -std::numeric_limits<double>::infinity(), 1e-6};
  for (const auto& [n, dim] : cfg.lemma_systems) {
    const VandermondeSystem sys = build_vandermonde(n, dim);
    for (const MultiIndex& delta : sys.basis) {
      const MonomialDecomposition dec = solve_monomial_coeffs(delta, sys);
      out.max_error = std::max(out.max_error, dec.l1_norm - sys.c);
      ++out.cases;
    }
  }
  return out;
}

IdentityCheck check_fwl_matrix(const KernelCheckConfig& cfg, bool real_features) {
  IdentityCheck out{real_features ? "fwl_matrix_vs_pmp_real" : "fwl_matrix_vs_pmp_integer",
                    cfg.graph_cases, 0.0, real_features ? 1e-8 : 0.0};
  Rng rng = make_rng(cfg.seed, real_features ? kGraphReal : kGraphInt);
  for (std::size_t c = 0; c < cfg.graph_cases; ++c) {
    const Graph g = sample_graph(rng, cfg.graph_max_nodes, real_features ? 1 : 0);
    const PairTensor y = build_iso_type_tensor(g);
    const EncodedTensor enc = fwl2_update_matrix(y, cfg.head_degree);
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const Vector pmp = pmp_encode(neighborhood_multiset(y, i, j), cfg.head_degree);
        for (std::size_t h = 0; h < enc.heads.size(); ++h) {
          const double expected = pmp(static_cast<Eigen::Index>(h));
          const double got = perturbed(
              enc.heads[h].values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
              std::max(1.0, std::abs(expected)), cfg.perturbation);
          out.max_error = std::max(out.max_error, std::abs(got - expected));
        }
      }
    }
  }
  return out;
}

IdentityCheck check_factorized_head(const KernelCheckConfig& cfg) {
  IdentityCheck out{"factorized_head", cfg.graph_cases, 0.0, 1e-9};
  Rng rng = make_rng(cfg.seed, kHead);
  for (std::size_t c = 0; c < cfg.graph_cases; ++c) {
    const Graph g = sample_graph(rng, std::min<std::size_t>(cfg.graph_max_nodes, 6), 1);
    const NodeFactorization f = exact_iso_factorization(g);
    const PairTensor y = f.reconstruct();
    const MultiIndex beta = random_multi_index(rng, y.depth(), 1);
    const MultiIndex gamma = random_multi_index(rng, y.depth(), 1);
    const Matrix expected = tensor_power(y, beta) * tensor_power(y, gamma);
    const Matrix got = factorized_fwl_head(f, beta, gamma).product;
    const double denom = std::max(1.0, expected.cwiseAbs().maxCoeff());
    const double err = (got - expected).cwiseAbs().maxCoeff() / denom;
    out.max_error = std::max(out.max_error, err + cfg.perturbation);
  }
  return out;
}

std::vector<IdentityCheck> run_kernel_suite(const KernelCheckConfig& cfg) {
  return {check_kernel_identity(cfg),     check_lemma_residual(cfg),
          check_lemma_norm(cfg),          check_fwl_matrix(cfg, false),
          check_fwl_matrix(cfg, true),    check_factorized_head(cfg)};
}

nlohmann::json to_json(const IdentityCheck& check) {
  return {{"name", check.name},
          {"cases", check.cases},
          {"max_error", check.max_error},
          {"tolerance", check.tolerance},
          {"passed", check.passed()}};
}

}  // namespace lrga
