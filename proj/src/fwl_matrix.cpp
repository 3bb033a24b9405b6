#include "lrga/fwl_matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "lrga/error.hpp"

namespace lrga {

Matrix tensor_power(const PairTensor& y, const MultiIndex& beta) {
  if (beta.size() != y.depth()) {
    throw std::invalid_argument("tensor_power: multi-index length " +
                                std::to_string(beta.size()) + " != tensor depth " +
                                std::to_string(y.depth()));
  }
  const std::size_t n = y.size();
  Matrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = monomial(y.pair(i, j), beta);
    }
  }
  return out;
}

Vector pmp_encode(const Matrix& z, unsigned max_degree) {
  const auto alphas = enumerate_multi_indices(static_cast<std::size_t>(z.cols()), max_degree);
  Vector enc = Vector::Zero(static_cast<Eigen::Index>(alphas.size()));
  std::vector<double> row(static_cast<std::size_t>(z.cols()));
  for (Eigen::Index k = 0; k < z.rows(); ++k) {
    for (Eigen::Index c = 0; c < z.cols(); ++c) row[static_cast<std::size_t>(c)] = z(k, c);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      enc(static_cast<Eigen::Index>(a)) += monomial(row, alphas[a]);
    }
  }
  return enc;
}

Matrix neighborhood_multiset(const PairTensor& y, std::size_t i, std::size_t j) {
  const std::size_t n = y.size();
  const std::size_t d = y.depth();
  Matrix z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * d));
  for (std::size_t k = 0; k < n; ++k) {
    const auto left = y.pair(i, k);
    const auto right = y.pair(k, j);
    for (std::size_t c = 0; c < d; ++c) {
      z(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) = left[c];
      z(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d + c)) = right[c];
    }
  }
  return z;
}

std::vector<double> EncodedTensor::pair_vector(std::size_t i, std::size_t j) const {
  const auto base = carried.pair(i, j);
  std::vector<double> v(base.begin(), base.end());
  v.reserve(base.size() + heads.size());
  for (const auto& h : heads) {
    v.push_back(h.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  }
  return v;
}

std::vector<ColorId> EncodedTensor::pair_partition() const {
  const std::size_t n = carried.size();
  std::vector<std::vector<double>> vecs;
  vecs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) vecs.push_back(pair_vector(i, j));
  }
  std::vector<std::size_t> order(vecs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return vecs[a] < vecs[b]; });
  std::vector<ColorId> ids(vecs.size());
  ColorId next = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && vecs[order[k - 1]] < vecs[order[k]]) ++next;
    ids[order[k]] = next;
  }
  return ids;
}

EncodedTensor fwl2_update_matrix(const PairTensor& y, unsigned max_degree, std::size_t head_cap) {
  const std::size_t d = y.depth();
  const std::uint64_t head_count = count_multi_indices(2 * d, max_degree);
  if (head_count > head_cap) {
    throw CapExceeded("fwl2_update_matrix head count", static_cast<std::size_t>(head_count),
                      head_cap);
  }

  // Every beta and gamma has degree <= max_degree, so one power per index of
  // the d-dimensional enumeration covers all heads.
  std::map<MultiIndex, Matrix> powers;
  for (auto& beta : enumerate_multi_indices(d, max_degree)) {
    Matrix p = tensor_power(y, beta);
    powers.emplace(std::move(beta), std::move(p));
  }

  EncodedTensor out{{}, y};
  out.heads.reserve(static_cast<std::size_t>(head_count));
  for (const auto& alpha : enumerate_multi_indices(2 * d, max_degree)) {
    MultiIndex beta(std::vector<unsigned>(alpha.exponents.begin(),
                                          alpha.exponents.begin() + static_cast<std::ptrdiff_t>(d)));
    MultiIndex gamma(std::vector<unsigned>(alpha.exponents.begin() + static_cast<std::ptrdiff_t>(d),
                                           alpha.exponents.end()));
    Matrix values = powers.at(beta) * powers.at(gamma);
    out.heads.push_back({std::move(beta), std::move(gamma), std::move(values)});
  }
  return out;
}

}  // namespace lrga
