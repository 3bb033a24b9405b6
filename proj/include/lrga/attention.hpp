#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "lrga/random.hpp"
#include "lrga/types.hpp"

namespace lrga {

enum class Activation { relu, identity };

/// Affine map plus activation applied to every row independently:
/// out.row(i) = act(x.row(i) * weight + bias^T).
struct RowMap {
  Matrix weight;  // in_dim x out_dim
  Vector bias;    // out_dim
  Activation activation = Activation::relu;

  std::size_t in_dim() const noexcept { return static_cast<std::size_t>(weight.rows()); }
  std::size_t out_dim() const noexcept { return static_cast<std::size_t>(weight.cols()); }

  Matrix apply(const Matrix& x) const;
  /// Writes into a preallocated n x out_dim destination (e.g. a column block).
  void apply_into(const Matrix& x, Eigen::Ref<Matrix> out) const;

  /// Gaussian weights with variance 1/in_dim, bias uniform in +-1/sqrt(in_dim).
  static RowMap random(std::size_t in_dim, std::size_t out_dim, Rng& rng,
                       Activation activation = Activation::relu);
};

/// Parameters of one low-rank global attention module. m1..m4 map
/// in_dim -> kappa; the optional m5 maps in_dim + 2 kappa + d_gnn -> in_dim.
struct LrgaParams {
  RowMap m1, m2, m3, m4;
  std::optional<RowMap> m5;
  double eta_epsilon = 1e-12;

  std::size_t kappa() const noexcept { return m1.out_dim(); }
  std::size_t in_dim() const noexcept { return m1.in_dim(); }
  /// Throws std::invalid_argument on inconsistent shapes.
  void validate() const;

  static LrgaParams random(std::size_t in_dim, std::size_t kappa, std::uint64_t seed,
                           Activation activation = Activation::relu);
};

/// eta(X) = (1/n) <colsum(m1(X)), colsum(m2(X))>
double eta(const Matrix& x, const LrgaParams& params);

/// [eta^-1 m1(X) (m2(X)^T m3(X)), m4(X)], evaluated through the kappa x kappa
/// product m2(X)^T m3(X); auxiliary storage is O(n kappa).
/// Throws DegenerateNormalization when |eta| <= params.eta_epsilon.
Matrix lrga_forward(const Matrix& x, const LrgaParams& params);

/// [X, LRGA(X), gnn_out], followed by m5 when present.
Matrix augment_layer(const Matrix& x, const Matrix& gnn_out, const LrgaParams& params);

/// [X, LRGA_1(X), ..., LRGA_k(X), gnn_out].
Matrix multi_head_forward(const Matrix& x, const std::vector<LrgaParams>& heads,
                          const Matrix& gnn_out);

/// Reference evaluation that materializes the n x n attention matrix
/// eta^-1 m1(X) m2(X)^T. Only for n <= kDenseOracleMaxNodes.
inline constexpr std::size_t kDenseOracleMaxNodes = 256;
Matrix dense_attention_oracle(const Matrix& x, const LrgaParams& params);

nlohmann::json params_to_json(const LrgaParams& params);
LrgaParams params_from_json(const nlohmann::json& j);

}  // namespace lrga
