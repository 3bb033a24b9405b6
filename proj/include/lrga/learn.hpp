#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrga/multi_index.hpp"
#include "lrga/random.hpp"
#include "lrga/types.hpp"

namespace lrga {

/// f(x) = a2^T relu(w1^T x + b1)
struct TwoLayerMlp {
  Matrix w1;  // d_in x h
  Vector b1;  // h
  Vector a2;  // h
  double init_scale = 1.0;
  std::uint64_t seed = 0;

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(w1.rows()); }
  std::size_t width() const noexcept { return static_cast<std::size_t>(w1.cols()); }
  void validate() const;

  /// w1 ~ N(0, (init_scale / sqrt(d_in))^2), a2 ~ N(0, 1/h), b1 = 0.
  static TwoLayerMlp init(std::size_t d_in, std::size_t h, double init_scale, std::uint64_t seed);
};

inline constexpr const char* kMlpInitScheme =
    "w1~N(0,(init_scale/sqrt(d_in))^2), b1=0, a2~N(0,1/h)";

Vector forward(const TwoLayerMlp& mlp, const Matrix& x);

/// (1/m) sum (f(x_i) - y_i)^2
double mse_loss(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y);

struct MlpGradients {
  Matrix w1;
  Vector b1;
  Vector a2;

  double max_abs() const;
};

/// Exact gradients of mse_loss; relu'(0) = 0.
MlpGradients gradients(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y);

/// Largest error of gradients() against central differences of mse_loss,
/// relative to max(1, |numeric|). Meaningful only away from ReLU kinks.
double gradient_check(const TwoLayerMlp& mlp, const Matrix& x, const Vector& y,
                      double step = 1e-5);

/// Smallest |pre-activation| over the batch, i.e. the distance to a kink.
double min_abs_preactivation(const TwoLayerMlp& mlp, const Matrix& x);

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t steps = 1000;
  std::optional<std::size_t> batch;  // nullopt: full batch
  std::uint64_t seed = 0;
  /// Loss recorded every `curve_stride` steps (and at the last step).
  std::size_t curve_stride = 1;

  void validate() const;
};

/// Target x^delta on x ~ U[-1, 1]^D. With append_one the network sees (x, 1).
struct MonomialTask {
  MultiIndex delta;
  bool append_one = true;

  std::size_t input_dim() const noexcept { return delta.size(); }
  std::size_t network_input_dim() const noexcept { return delta.size() + (append_one ? 1 : 0); }
};

struct MonomialDataset {
  Matrix x;  // network inputs, including the constant column when appended
  Vector y;
};

/// `m` i.i.d. samples from stream `stream` of `seed`.
MonomialDataset sample_monomial_data(const MonomialTask& task, std::size_t m,
                                     std::uint64_t seed, std::uint64_t stream);

struct TrainResult {
  double initial_train_mse = 0.0;
  double train_mse = 0.0;
  double test_mse = 0.0;
  std::vector<std::pair<std::size_t, double>> curve;  // (step, train loss)
  std::size_t steps_run = 0;
  bool diverged = false;
  TwoLayerMlp model;
};

/// Loss above this multiple of the initial loss counts as divergence.
inline constexpr double kDivergenceFactor = 1e3;

/// Gradient descent on m training samples, evaluated on 10 m held-out
/// samples. Requires m >= 10. cfg.steps == 0 reports the untrained model.
TrainResult train_monomial(const MonomialTask& task, std::size_t m, std::size_t width,
                           const TrainConfig& cfg, double init_scale = 1.0);

struct ComplexityRow {
  std::size_t m = 0;
  double median_test_mse = 0.0;
  double median_train_mse = 0.0;
  std::size_t diverged = 0;
  /// sample_complexity_bound at epsilon = sqrt(median_test_mse); NaN when
  /// that is zero.
  double bound = 0.0;
};

struct ComplexityTable {
  std::vector<ComplexityRow> rows;
  /// test MSE per (m index, seed index)
  std::vector<std::vector<double>> per_seed;
  std::size_t inversions = 0;
  bool monotone = true;  // at most one increase along the grid

  std::string to_csv() const;
};

/// Seed s trains with cfg.seed = s. m_grid must be strictly ascending.
/// Cells run on up to hardware_concurrency threads with identical results.
ComplexityTable sample_complexity_experiment(const MonomialTask& task,
                                             const std::vector<std::size_t>& m_grid,
                                             const std::vector<std::uint64_t>& seeds,
                                             std::size_t width, const TrainConfig& cfg,
                                             double init_scale = 1.0);

double median(std::vector<double> values);

}  // namespace lrga
