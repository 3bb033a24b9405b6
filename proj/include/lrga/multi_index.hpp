#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lrga {

/// Vector of non-negative exponents; x^beta is the coordinatewise power
/// product with 0^0 = 1.
struct MultiIndex {
  std::vector<unsigned> exponents;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<unsigned> e) : exponents(std::move(e)) {}
  static MultiIndex zeros(std::size_t dim) { return MultiIndex(std::vector<unsigned>(dim, 0)); }

  std::size_t size() const noexcept { return exponents.size(); }
  unsigned operator[](std::size_t i) const { return exponents[i]; }
  unsigned degree() const noexcept;
  std::string to_string() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

/// C(n, k), throwing std::overflow_error when it does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// degree! / (nu_1! ... nu_m!) where degree = |nu|, exact.
std::uint64_t multinomial(const MultiIndex& nu);

/// Number of multi-indices of length `dim` with degree <= max_degree,
/// C(max_degree + dim, dim). Throws std::overflow_error on overflow.
std::uint64_t count_multi_indices(std::size_t dim, unsigned max_degree);

/// Multi-indices of length `dim` and degree exactly `degree`, in descending
/// lexicographic order: (2,0), (1,1), (0,2).
std::vector<MultiIndex> homogeneous_multi_indices(std::size_t dim, unsigned degree);

/// All multi-indices with degree <= max_degree in graded lexicographic order
/// (by degree, then descending lexicographic within a degree). This order is
/// the coordinate order of every encoding and feature map in the library.
std::vector<MultiIndex> enumerate_multi_indices(std::size_t dim, unsigned max_degree);

/// Index of `a` within enumerate_multi_indices(a.size(), max_degree).
std::size_t graded_position(const MultiIndex& a, unsigned max_degree);

/// x^a with 0^0 = 1.
double monomial(std::span<const double> x, const MultiIndex& a);

}  // namespace lrga
