#pragma once

#include <cstddef>
#include <vector>

#include "lrga/graph.hpp"
#include "lrga/multi_index.hpp"
#include "lrga/types.hpp"
#include "lrga/wl.hpp"

namespace lrga {

inline constexpr std::size_t kDefaultHeadCap = 10'000;

/// Entrywise multi-power over the feature axis: out(i, j) = prod_l y(i,j,l)^beta_l.
Matrix tensor_power(const PairTensor& y, const MultiIndex& beta);

/// Power-sum multi-symmetric encoding of the multiset whose elements are the
/// rows of z: coordinate alpha is sum_k z_k^alpha, for every |alpha| <=
/// max_degree in enumerate_multi_indices order.
Vector pmp_encode(const Matrix& z, unsigned max_degree);

/// Z_(i,j): n x 2d matrix whose k-th row is [y(i,k,:), y(k,j,:)].
Matrix neighborhood_multiset(const PairTensor& y, std::size_t i, std::size_t j);

struct EncodedHead {
  MultiIndex beta;
  MultiIndex gamma;
  Matrix values;
};

/// One matrix-form 2-FWL update: the carried tensor followed by the heads
/// Y^beta * Y^gamma for every |beta| + |gamma| <= degree bound, in the order
/// of enumerate_multi_indices(2d, bound) split as alpha = (beta, gamma).
struct EncodedTensor {
  std::vector<EncodedHead> heads;
  PairTensor carried;

  /// [carried(i, j, :), head_0(i, j), head_1(i, j), ...]
  std::vector<double> pair_vector(std::size_t i, std::size_t j) const;
  /// Equality classes of pair_vector over all (i, j), as canonical ids.
  std::vector<ColorId> pair_partition() const;
};

/// Throws CapExceeded when the number of heads exceeds `head_cap`.
EncodedTensor fwl2_update_matrix(const PairTensor& y, unsigned max_degree,
                                 std::size_t head_cap = kDefaultHeadCap);

}  // namespace lrga
