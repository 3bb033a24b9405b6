#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lrga {

/// Outcome of one randomized identity check: the worst error over all cases.
struct IdentityCheck {
  std::string name;
  std::size_t cases = 0;
  double max_error = 0.0;
  double tolerance = 0.0;

  bool passed() const noexcept { return max_error <= tolerance; }
};

struct KernelCheckConfig {
  std::uint64_t seed = 0;

  std::size_t kernel_cases = 1000;
  unsigned kernel_max_degree = 4;
  std::size_t kernel_max_block_dim = 4;
  std::size_t kernel_max_blocks = 4;

  std::vector<std::pair<unsigned, std::size_t>> lemma_systems{{2, 1}, {3, 1}, {4, 1}, {2, 2}, {3, 2}};
  std::size_t lemma_points = 100;

  std::size_t graph_cases = 20;
  std::size_t graph_max_nodes = 8;
  unsigned head_degree = 3;

  /// Relative offset added to every computed value; nonzero values exist to
  /// prove that violations are detected.
  double perturbation = 0.0;
};

/// <phi(x), phi(y)> against prod_l <x_l, y_l>^beta_l; error relative to
/// max(|rhs|, prod_l (|x_l| |y_l|)^beta_l).
IdentityCheck check_kernel_identity(const KernelCheckConfig& cfg);

/// sum_beta a_beta (<beta, x> + 1)^n against x^delta for every |delta| <= n,
/// error relative to max(1, |x^delta|), x uniform in [-1, 1]^D.
IdentityCheck check_lemma_residual(const KernelCheckConfig& cfg);

/// max ||a||_1 - c_{n,D} over the same systems (passes when <= 1e-6).
IdentityCheck check_lemma_norm(const KernelCheckConfig& cfg);

/// Matrix heads Y^beta Y^gamma against the power-sum encoding of every
/// neighborhood multiset, as an absolute error. `real_features` adds Gaussian node features, so
/// the tensor is no longer integer valued.
IdentityCheck check_fwl_matrix(const KernelCheckConfig& cfg, bool real_features);

/// Factorized heads against the dense tensor-power products.
IdentityCheck check_factorized_head(const KernelCheckConfig& cfg);

std::vector<IdentityCheck> run_kernel_suite(const KernelCheckConfig& cfg);

nlohmann::json to_json(const IdentityCheck& check);

}  // namespace lrga
