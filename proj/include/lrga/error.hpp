#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrga {

/// Raised when a graph6 record or JSON graph cannot be decoded.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        detail_(what),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  /// The message without the offset suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t offset_;
};

/// A combinatorial size (heads, feature-map coordinates, Vandermonde rows)
/// exceeded its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::size_t requested, std::size_t cap)
      : std::runtime_error(what + ": requested " + std::to_string(requested) +
                           " exceeds cap " + std::to_string(cap)),
        requested_(requested),
        cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// The attention normalization |eta| fell below the configured guard.
class DegenerateNormalization : public std::runtime_error {
 public:
  explicit DegenerateNormalization(double eta, const std::string& context = {})
      : std::runtime_error((context.empty() ? std::string() : context + ": ") +
                           "degenerate normalization eta = " +
                           std::to_string(eta)),
        eta_(eta) {}

  double eta() const noexcept { return eta_; }

 private:
  double eta_;
};

/// A linear solve whose residual check failed.
class SingularSystem : public std::runtime_error {
 public:
  SingularSystem(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace lrga
