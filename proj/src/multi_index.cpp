#include "lrga/multi_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lrga {

namespace {

void append_homogeneous(std::vector<unsigned>& prefix, std::size_t dim, unsigned remaining,
                        std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == dim) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned e = remaining + 1; e-- > 0;) {
    prefix.push_back(e);
    append_homogeneous(prefix, dim, remaining - e, out);
    prefix.pop_back();
  }
}

}  // namespace

unsigned MultiIndex::degree() const noexcept {
  return std::accumulate(exponents.begin(), exponents.end(), 0u);
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(exponents[i]);
  }
  return s + ")";
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; split by gcd to delay overflow.
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    const std::uint64_t g1 = std::gcd(num, den);
    num /= g1;
    den /= g1;
    const std::uint64_t g2 = std::gcd(result, den);
    result /= g2;
    den /= g2;
    if (num != 0 && result > std::numeric_limits<std::uint64_t>::max() / num) {
      throw std::overflow_error("binomial coefficient overflows 64 bits");
    }
    result = result * num / den;
  }
  return result;
}

std::uint64_t multinomial(const MultiIndex& nu) {
  std::uint64_t result = 1;
  std::uint64_t running = 0;
  for (unsigned e : nu.exponents) {
    running += e;
    const std::uint64_t b = binomial(running, e);
    if (b != 0 && result > std::numeric_limits<std::uint64_t>::max() / b) {
      throw std::overflow_error("multinomial coefficient overflows 64 bits");
    }
    result *= b;
  }
  return result;
}

std::uint64_t count_multi_indices(std::size_t dim, unsigned max_degree) {
  return binomial(static_cast<std::uint64_t>(max_degree) + dim, dim);
}

std::vector<MultiIndex> homogeneous_multi_indices(std::size_t dim, unsigned degree) {
  if (dim == 0) throw std::invalid_argument("multi-index dimension must be positive");
  std::vector<MultiIndex> out;
  std::vector<unsigned> prefix;
  prefix.reserve(dim);
  append_homogeneous(prefix, dim, degree, out);
  return out;
}

std::vector<MultiIndex> enumerate_multi_indices(std::size_t dim, unsigned max_degree) {
  if (dim == 0) throw std::invalid_argument("multi-index dimension must be positive");
  const std::uint64_t count = count_multi_indices(dim, max_degree);
  if (count > std::numeric_limits<std::size_t>::max() / sizeof(MultiIndex)) {
    throw std::overflow_error("multi-index enumeration does not fit in memory");
  }
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (unsigned deg = 0; deg <= max_degree; ++deg) {
    auto level = homogeneous_multi_indices(dim, deg);
    std::move(level.begin(), level.end(), std::back_inserter(out));
  }
  return out;
}

std::size_t graded_position(const MultiIndex& a, unsigned max_degree) {
  const unsigned deg = a.degree();
  if (deg > max_degree) throw std::invalid_argument("multi-index degree exceeds bound");
  const std::size_t dim = a.size();
  // Indices of lower degree come first.
  std::size_t pos = deg == 0 ? 0 : static_cast<std::size_t>(count_multi_indices(dim, deg - 1));
  // Within the degree, count the indices that precede `a` in descending lex order.
  unsigned remaining = deg;
  for (std::size_t i = 0; i + 1 < dim; ++i) {
    for (unsigned e = remaining; e > a[i]; --e) {
      // Indices with this prefix and coordinate i equal to e: homogeneous
      // completions of degree remaining - e over dim - i - 1 coordinates.
      pos += static_cast<std::size_t>(binomial(remaining - e + dim - i - 2, dim - i - 2));
    }
    remaining -= a[i];
  }
  return pos;
}

double monomial(std::span<const double> x, const MultiIndex& a) {
  if (x.size() != a.size()) throw std::invalid_argument("monomial: dimension mismatch");
  double v = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (unsigned k = 0; k < a[i]; ++k) v *= x[i];
  }
  return v;
}

}  // namespace lrga
