#include "lrga/poly_kernels.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lrga/error.hpp"

namespace lrga {

namespace {

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

/// Row i of m restricted to columns [offset, offset + dim).
Vector row_slice(const Matrix& m, std::size_t i, std::size_t offset, std::size_t dim) {
  return m.row(idx(i)).segment(idx(offset), idx(dim)).transpose();
}

}  // namespace

std::size_t BlockVector::total_dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks) d += static_cast<std::size_t>(b.size());
  return d;
}

std::vector<std::size_t> BlockVector::dims() const {
  std::vector<std::size_t> d;
  d.reserve(blocks.size());
  for (const auto& b : blocks) d.push_back(static_cast<std::size_t>(b.size()));
  return d;
}

FeatureMapSpec::FeatureMapSpec(MultiIndex b, std::vector<std::size_t> dims)
    : beta(std::move(b)), block_dims(std::move(dims)) {
  if (beta.size() != block_dims.size()) {
    throw std::invalid_argument("feature map: beta has " + std::to_string(beta.size()) +
                                " entries for " + std::to_string(block_dims.size()) + " blocks");
  }
  for (std::size_t d : block_dims) {
    if (d == 0) throw std::invalid_argument("feature map: block dims must be positive");
  }
}

std::uint64_t FeatureMapSpec::output_dim() const {
  std::uint64_t total = 1;
  for (std::size_t l = 0; l < block_dims.size(); ++l) {
    const std::uint64_t f = binomial(beta[l] + block_dims[l] - 1, block_dims[l] - 1);
    if (f != 0 && total > std::numeric_limits<std::uint64_t>::max() / f) {
      throw std::overflow_error("feature map dimension overflows 64 bits");
    }
    total *= f;
  }
  return total;
}

Vector phi_homogeneous(std::span<const double> x, unsigned degree) {
  if (x.empty()) throw std::invalid_argument("phi_homogeneous: empty input");
  const auto nus = homogeneous_multi_indices(x.size(), degree);
  Vector out(idx(nus.size()));
  for (std::size_t k = 0; k < nus.size(); ++k) {
    out(idx(k)) = std::sqrt(static_cast<double>(multinomial(nus[k]))) * monomial(x, nus[k]);
  }
  return out;
}

Vector phi_product(const BlockVector& x, const MultiIndex& beta, std::size_t cap) {
  const FeatureMapSpec spec(beta, x.dims());
  const std::uint64_t dim = spec.output_dim();
  if (dim > cap) throw CapExceeded("phi_product output dimension", dim, cap);

  Vector out = Vector::Ones(1);
  for (std::size_t l = 0; l < x.blocks.size(); ++l) {
    const Vector f = phi_homogeneous(as_span(x.blocks[l]), beta[l]);
    Vector next(out.size() * f.size());
    for (Eigen::Index a = 0; a < out.size(); ++a) {
      next.segment(a * f.size(), f.size()) = out(a) * f;
    }
    out = std::move(next);
  }
  return out;
}

void NodeFactorization::validate() const {
  const std::size_t total = std::accumulate(block_dims.begin(), block_dims.end(), std::size_t{0});
  if (total != static_cast<std::size_t>(features.cols())) {
    throw std::invalid_argument("node factorization: block dims sum to " +
                                std::to_string(total) + " but features have " +
                                std::to_string(features.cols()) + " columns");
  }
  for (const auto& [s, t] : channels) {
    if (s >= block_dims.size() || t >= block_dims.size()) {
      throw std::invalid_argument("node factorization: channel selector out of range");
    }
    if (block_dims[s] != block_dims[t]) {
      throw std::invalid_argument("node factorization: source and target blocks differ in width");
    }
  }
}

Matrix NodeFactorization::block(std::size_t b) const {
  const std::size_t offset =
      std::accumulate(block_dims.begin(), block_dims.begin() + static_cast<std::ptrdiff_t>(b),
                      std::size_t{0});
  return features.middleCols(idx(offset), idx(block_dims.at(b)));
}

PairTensor NodeFactorization::reconstruct() const {
  validate();
  std::vector<Matrix> chans;
  chans.reserve(channels.size());
  for (const auto& [s, t] : channels) chans.push_back(block(s) * block(t).transpose());
  return PairTensor::from_channels(chans);
}

BlockVector NodeFactorization::source_blocks(std::size_t i) const {
  std::vector<std::size_t> offsets(block_dims.size(), 0);
  std::exclusive_scan(block_dims.begin(), block_dims.end(), offsets.begin(), std::size_t{0});
  BlockVector bv;
  for (const auto& [s, t] : channels) bv.blocks.push_back(row_slice(features, i, offsets[s], block_dims[s]));
  return bv;
}

BlockVector NodeFactorization::target_blocks(std::size_t i) const {
  std::vector<std::size_t> offsets(block_dims.size(), 0);
  std::exclusive_scan(block_dims.begin(), block_dims.end(), offsets.begin(), std::size_t{0});
  BlockVector bv;
  for (const auto& [s, t] : channels) bv.blocks.push_back(row_slice(features, i, offsets[t], block_dims[t]));
  return bv;
}

NodeFactorization NodeFactorization::permuted(const Permutation& p) const {
  return {p.apply_rows(features), block_dims, channels};
}

NodeFactorization exact_iso_factorization(const Graph& g) {
  const std::size_t n = g.size();
  const std::size_t d0 = g.feature_dim();
  NodeFactorization f;
  f.features.resize(idx(n), idx(2 * n + 1 + d0));
  f.features << Matrix::Identity(idx(n), idx(n)), g.adjacency(), Matrix::Ones(idx(n), 1),
      g.features();
  f.block_dims = {n, n, 1};
  for (std::size_t c = 0; c < d0; ++c) f.block_dims.push_back(1);
  f.channels.emplace_back(0, 0);                                 // I
  for (std::size_t c = 0; c < d0; ++c) f.channels.emplace_back(2, 3 + c);  // x_j
  for (std::size_t c = 0; c < d0; ++c) f.channels.emplace_back(3 + c, 2);  // x_i
  f.channels.emplace_back(1, 0);                                 // A
  return f;
}

FactorizedHead factorized_fwl_head(const NodeFactorization& x, const MultiIndex& beta,
                                   const MultiIndex& gamma, std::size_t cap) {
  x.validate();
  if (beta.size() != x.channels.size() || gamma.size() != x.channels.size()) {
    throw std::invalid_argument("factorized head: multi-index length must equal channel count");
  }
  const std::size_t n = x.node_count();
  std::vector<std::size_t> dims;
  for (const auto& [s, t] : x.channels) dims.push_back(x.block_dims[s]);
  for (const MultiIndex* m : {&beta, &gamma}) {
    const std::uint64_t width = FeatureMapSpec(*m, dims).output_dim();
    if (width > cap) throw CapExceeded("factorized head feature dimension", width, cap);
  }

  auto feature_rows = [&](const MultiIndex& m, bool source) {
    Matrix out;
    for (std::size_t i = 0; i < n; ++i) {
      const Vector f = phi_product(source ? x.source_blocks(i) : x.target_blocks(i), m, cap);
      if (i == 0) out.resize(idx(n), f.size());
      out.row(idx(i)) = f.transpose();
    }
    return out;
  };
  const Matrix psi_b = feature_rows(beta, true);
  const Matrix phi_b = feature_rows(beta, false);
  const Matrix psi_g = feature_rows(gamma, true);
  const Matrix phi_g = feature_rows(gamma, false);

  FactorizedHead head;
  head.left = psi_b * (phi_b.transpose() * psi_g);
  head.right = phi_g;
  head.product = head.left * head.right.transpose();
  return head;
}

VandermondeSystem build_vandermonde(unsigned degree, std::size_t dim, std::size_t cap) {
  if (dim == 0) throw std::invalid_argument("Vandermonde dimension must be positive");
  const std::uint64_t count = count_multi_indices(dim, degree);
  if (count > cap) throw CapExceeded("Vandermonde size", count, cap);

  VandermondeSystem sys;
  sys.degree = degree;
  sys.dim = dim;
  sys.basis = enumerate_multi_indices(dim, degree);
  const auto N = idx(sys.basis.size());
  sys.V.resize(N, N);
  for (Eigen::Index b = 0; b < N; ++b) {
    const auto& point = sys.basis[static_cast<std::size_t>(b)].exponents;
    const std::vector<double> x(point.begin(), point.end());
    for (Eigen::Index a = 0; a < N; ++a) {
      sys.V(a, b) = monomial(x, sys.basis[static_cast<std::size_t>(a)]);
    }
  }
  sys.V_inv = sys.V.partialPivLu().inverse();
  sys.residual = (sys.V * sys.V_inv - Matrix::Identity(N, N)).cwiseAbs().rowwise().sum().maxCoeff();
  if (!(sys.residual <= kVandermondeResidualTol)) {
    throw SingularSystem("Vandermonde inverse for n = " + std::to_string(degree) +
                             ", D = " + std::to_string(dim),
                         sys.residual);
  }
  sys.c = sys.V_inv.cwiseAbs().rowwise().sum().maxCoeff();
  return sys;
}

MonomialDecomposition solve_monomial_coeffs(const MultiIndex& delta, unsigned degree,
                                            std::size_t dim) {
  if (delta.size() != dim) {
    throw std::invalid_argument("monomial decomposition: delta has length " +
                                std::to_string(delta.size()) + ", expected " +
                                std::to_string(dim));
  }
  if (delta.degree() > degree) {
    throw std::invalid_argument("monomial decomposition: |delta| = " +
                                std::to_string(delta.degree()) + " exceeds n = " +
                                std::to_string(degree));
  }
  return solve_monomial_coeffs(delta, build_vandermonde(degree, dim));
}

MonomialDecomposition solve_monomial_coeffs(const MultiIndex& delta,
                                            const VandermondeSystem& system) {
  const unsigned n = system.degree;
  if (delta.size() != system.dim || delta.degree() > n) {
    throw std::invalid_argument("monomial decomposition: delta " + delta.to_string() +
                                " outside the Vandermonde basis");
  }
  const auto N = idx(system.size());

  // (<beta, x> + 1)^n = sum_alpha d_alpha beta^alpha x^alpha with
  // d_alpha = n! / (alpha! (n - |alpha|)!), so the system matrix is diag(d) V.
  Vector scale(N);
  for (Eigen::Index a = 0; a < N; ++a) {
    MultiIndex full = system.basis[static_cast<std::size_t>(a)];
    full.exponents.push_back(n - full.degree());
    scale(a) = static_cast<double>(multinomial(full));
  }
  const Matrix scaled = scale.asDiagonal() * system.V;
  Vector rhs = Vector::Zero(N);
  rhs(idx(graded_position(delta, n))) = 1.0;

  MonomialDecomposition out;
  out.delta = delta;
  out.degree = n;
  out.basis = system.basis;
  out.coeffs = scaled.partialPivLu().solve(rhs);
  out.residual = (scaled * out.coeffs - rhs).cwiseAbs().maxCoeff();
  if (!(out.residual <= kVandermondeResidualTol)) {
    throw SingularSystem("monomial decomposition solve", out.residual);
  }
  out.l1_norm = out.coeffs.cwiseAbs().sum();
  out.c_nd = system.c;
  return out;
}

double MonomialDecomposition::evaluate(std::span<const double> x) const {
  if (x.size() != delta.size()) throw std::invalid_argument("evaluate: dimension mismatch");
  double total = 0.0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double inner = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) inner += basis[b][i] * x[i];
    total += coeffs(idx(b)) * std::pow(inner, static_cast<double>(degree));
  }
  return total;
}

double sample_complexity_bound(unsigned degree, std::size_t dim, double epsilon,
                               double delta_fail) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(delta_fail > 0.0 && delta_fail < 1.0)) {
    throw std::invalid_argument("failure probability must lie in (0, 1)");
  }
  const unsigned n = promote_even(degree);
  const double c = build_vandermonde(n, dim).c;
  const double nn = static_cast<double>(n);
  const double complexity = std::pow(nn * nn + 1.0, (nn + 1.0) / 2.0) * c;
  return (complexity + std::log(1.0 / delta_fail)) / (epsilon * epsilon);
}

}  // namespace lrga
