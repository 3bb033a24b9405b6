#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "lrga/graph.hpp"
#include "lrga/types.hpp"

namespace lrga {

enum class FeatureDistribution { gaussian, uniform };

/// gaussian: N(0, variance); uniform: U[-bound/2, bound/2].
struct RandomFeatureConfig {
  std::size_t d = 1;
  FeatureDistribution distribution = FeatureDistribution::gaussian;
  double variance = 1.0;
  double bound = 2.0;
  std::uint64_t seed = 0;

  static RandomFeatureConfig gaussian(std::size_t d, double variance, std::uint64_t seed);
  static RandomFeatureConfig uniform(std::size_t d, double bound, std::uint64_t seed);

  /// Throws std::invalid_argument for d == 0 or a non-positive scale.
  void validate() const;
  /// Per-entry variance of the configured law (bound^2 / 12 for uniform).
  double entry_variance() const;
};

/// i.i.d. n x d draw, reproducible for a fixed (n, cfg).
Matrix sample_features(std::size_t n, const RandomFeatureConfig& cfg);

/// Divides by sqrt(entry_variance) so the entries have unit variance.
Matrix standardize(const Matrix& r, const RandomFeatureConfig& cfg);

/// d^{-1/2} [A R, R]
Matrix message_passing_layer(const Matrix& adjacency, const Matrix& r);

struct FactorizationError {
  double gram_dev = 0.0;  // max_ij |(1/d)(R R^T)_ij - I_ij|
  double adj_dev = 0.0;   // ||(1/d) A R R^T - A||_F
};

/// Expects unit-variance entries; rescale with standardize() first otherwise.
FactorizationError factorization_error(const Matrix& adjacency, const Matrix& r);

/// m_prime * n^6 / xi^2 * ln(2 n^2 / delta_fail). m_prime is not pinned down
/// by the concentration argument and defaults to 1.
double required_dimension(std::size_t n, double xi, double delta_fail, double m_prime = 1.0);

/// [1, X, R, A R]: width 1 + d0 + 2d.
Matrix extended_factorization(const Graph& g, const Matrix& r);

/// Row map over the node input [X, R] of a graph with adjacency A.
using NodeForward = std::function<Matrix(const Matrix& adjacency, const Matrix& input)>;

/// Paired Monte-Carlo estimate of
///   max | E_R forward(P A P^T, P[X, R]) - P E_R forward(A, [X, R]) |,
/// sampling R once per trial and feeding the permuted pipeline P R. X may
/// have zero columns.
double expectation_equivariance_check(const NodeForward& forward, const Matrix& adjacency,
                                      const Matrix& x, const Permutation& p,
                                      const RandomFeatureConfig& cfg, std::size_t n_trials);

}  // namespace lrga
