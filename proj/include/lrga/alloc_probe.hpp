#pragma once

#include <cstddef>

// Heap accounting through malloc interposition. Only binaries that link the
// lrga_alloc_probe object library get these definitions.
namespace lrga::alloc_probe {

/// Live heap bytes (usable sizes) allocated through malloc and friends.
std::size_t current_bytes() noexcept;
std::size_t peak_bytes() noexcept;
/// Sets the peak watermark to the current live size.
void reset_peak() noexcept;

/// Peak live bytes above the level at construction.
class Scope {
 public:
  Scope() noexcept;
  std::size_t peak_delta() const noexcept;

 private:
  std::size_t base_;
};

}  // namespace lrga::alloc_probe
