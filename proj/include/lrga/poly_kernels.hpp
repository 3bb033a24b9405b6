#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lrga/graph.hpp"
#include "lrga/multi_index.hpp"
#include "lrga/types.hpp"

namespace lrga {

inline constexpr std::size_t kDefaultFeatureCap = 1'000'000;
inline constexpr std::size_t kDefaultVandermondeCap = 4'096;
/// Required bound on ||V V^-1 - I||_inf for a Vandermonde inverse.
inline constexpr double kVandermondeResidualTol = 1e-6;

/// Concatenation x = [x_1, ..., x_k] of real blocks.
struct BlockVector {
  std::vector<Vector> blocks;

  std::size_t total_dim() const;
  std::vector<std::size_t> dims() const;
};

/// Shape of phi_product for a given beta over blocks of the given dims.
struct FeatureMapSpec {
  MultiIndex beta;
  std::vector<std::size_t> block_dims;

  FeatureMapSpec(MultiIndex beta, std::vector<std::size_t> block_dims);
  /// prod_l C(beta_l + D_l - 1, D_l - 1)
  std::uint64_t output_dim() const;
};

/// Feature map of the homogeneous polynomial kernel <x, y>^degree:
/// coordinates sqrt(multinomial(nu)) x^nu over |nu| = degree, in
/// homogeneous_multi_indices order.
Vector phi_homogeneous(std::span<const double> x, unsigned degree);
inline Vector phi_homogeneous(const Vector& x, unsigned degree) {
  return phi_homogeneous(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                         degree);
}

/// Product-kernel feature map: all products of per-block coordinates of
/// phi_homogeneous(x_l, beta_l), first block outermost. Satisfies
/// <phi(x), phi(y)> = prod_l <x_l, y_l>^beta_l.
Vector phi_product(const BlockVector& x, const MultiIndex& beta,
                   std::size_t cap = kDefaultFeatureCap);

/// Block-structured node features X = [X^1, ..., X^k] together with the
/// (source, target) block pair of every tensor channel, so that channel l of
/// the represented tensor is X^{s_l} (X^{t_l})^T.
struct NodeFactorization {
  Matrix features;
  std::vector<std::size_t> block_dims;
  std::vector<std::pair<std::size_t, std::size_t>> channels;

  std::size_t node_count() const noexcept { return static_cast<std::size_t>(features.rows()); }
  /// Throws std::invalid_argument when dims or selectors are inconsistent.
  void validate() const;
  Matrix block(std::size_t b) const;
  PairTensor reconstruct() const;
  /// [x_i^{s_1}, ..., x_i^{s_d}] and [x_i^{t_1}, ..., x_i^{t_d}] for node i.
  BlockVector source_blocks(std::size_t i) const;
  BlockVector target_blocks(std::size_t i) const;
  NodeFactorization permuted(const Permutation& p) const;
};

/// Exact factorization of the isomorphism-type tensor with blocks
/// [I, A, 1, X_1, ..., X_d0] and channels matching build_iso_type_tensor.
NodeFactorization exact_iso_factorization(const Graph& g);

/// Node factorization [psi_b phi_b^T psi_g, phi_g] of the head Y^beta Y^gamma,
/// plus the assembled n x n product. The left factor is computed through the
/// (features x features) product so no n x n intermediate is formed.
struct FactorizedHead {
  Matrix left;
  Matrix right;
  Matrix product;
};

FactorizedHead factorized_fwl_head(const NodeFactorization& x, const MultiIndex& beta,
                                   const MultiIndex& gamma, std::size_t cap = kDefaultFeatureCap);

/// Multivariate Vandermonde matrix V(alpha, beta) = beta^alpha over the basis
/// {beta in N^D : |beta| <= n} in graded order, with its inverse and
/// c = ||V^-1||_inf (max absolute row sum).
struct VandermondeSystem {
  unsigned degree = 0;
  std::size_t dim = 0;
  std::vector<MultiIndex> basis;
  Matrix V;
  Matrix V_inv;
  double c = 0.0;
  double residual = 0.0;

  std::size_t size() const noexcept { return basis.size(); }
};

/// Throws CapExceeded when N exceeds `cap` and SingularSystem when the
/// inverse fails the residual check.
VandermondeSystem build_vandermonde(unsigned degree, std::size_t dim,
                                    std::size_t cap = kDefaultVandermondeCap);

/// Coefficients a with x^delta = sum_beta a_beta (<beta, x> + 1)^n.
struct MonomialDecomposition {
  MultiIndex delta;
  unsigned degree = 0;
  std::vector<MultiIndex> basis;
  Vector coeffs;
  double l1_norm = 0.0;
  double c_nd = 0.0;
  double residual = 0.0;

  /// sum_beta a_beta (<beta, x> + 1)^n
  double evaluate(std::span<const double> x) const;
};

MonomialDecomposition solve_monomial_coeffs(const MultiIndex& delta, unsigned degree,
                                            std::size_t dim);
MonomialDecomposition solve_monomial_coeffs(const MultiIndex& delta,
                                            const VandermondeSystem& system);

/// 2 * ceil(n / 2)
constexpr unsigned promote_even(unsigned n) noexcept { return n + (n % 2); }

/// ((n^2 + 1)^((n+1)/2) c_{n,D} + ln(1/delta_fail)) / epsilon^2 with n
/// promoted to even. This is the sample-complexity expression with its
/// big-O constant set to 1, so it is a bound only up to that constant.
double sample_complexity_bound(unsigned degree, std::size_t dim, double epsilon,
                               double delta_fail);

}  // namespace lrga
