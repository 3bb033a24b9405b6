#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lrga/graph.hpp"

namespace lrga {

using ColorId = std::uint32_t;

struct ColorCount {
  ColorId color;
  std::size_t count;
  friend bool operator==(const ColorCount&, const ColorCount&) = default;
};

/// (color, count) pairs sorted by color.
using Histogram = std::vector<ColorCount>;

Histogram histogram_of(const std::vector<ColorId>& colors);

/// Stable 1-WL vertex coloring.
///
/// Color ids are canonical: at every round they are the ranks of the sorted
/// distinct refinement signatures, so two graphs related by a permutation get
/// identical histograms, and ids are contiguous 0..k-1.
struct Coloring {
  std::vector<ColorId> colors;
  Histogram histogram;
  /// Rounds that strictly refined the partition before it became stable.
  std::size_t iterations = 0;
  /// Histogram after each round; index 0 is the initial coloring.
  std::vector<Histogram> history;

  std::size_t class_count() const noexcept { return histogram.size(); }
};

/// Stable 2-FWL coloring of ordered pairs, colors[i * n + j] for pair (i, j).
struct PairColoring {
  std::size_t n = 0;
  std::vector<ColorId> colors;
  Histogram histogram;
  std::size_t iterations = 0;
  std::vector<Histogram> history;

  ColorId at(std::size_t i, std::size_t j) const { return colors[i * n + j]; }
  std::size_t class_count() const noexcept { return histogram.size(); }
};

enum class WlAlgorithm { wl1, fwl2 };

struct IsoVerdict {
  enum class Kind { distinguished, indistinguishable };
  Kind kind = Kind::indistinguishable;
  /// First round at which the histograms differ; set iff distinguished.
  std::optional<std::size_t> witness_round;
  /// Synchronized rounds executed, including round 0.
  std::size_t rounds = 0;

  bool distinguished() const noexcept { return kind == Kind::distinguished; }
};

/// Initial node colors: equality classes of feature rows (one class when the
/// graph has no features).
std::vector<ColorId> wl1_initial_colors(const Graph& g);
/// One 1-WL round: recolor v by (color(v), sorted neighbor colors).
std::vector<ColorId> wl1_step(const Graph& g, const std::vector<ColorId>& colors);
Coloring wl1_refine(const Graph& g);

/// Initial pair colors: equality classes of isomorphism types, i.e. of the
/// entries of build_iso_type_tensor(g).
std::vector<ColorId> fwl2_initial_colors(const Graph& g);
/// One 2-FWL round: recolor (i, j) by (color(i, j), sorted multiset over k of
/// (color(i, k), color(k, j))).
std::vector<ColorId> fwl2_step(const Graph& g, const std::vector<ColorId>& colors);
/// Refines until stable or until `max_rounds` rounds ran (default n^2).
PairColoring fwl2_refine(const Graph& g, std::optional<std::size_t> max_rounds = {});

/// Synchronized refinement of both graphs against a shared color dictionary.
IsoVerdict iso_test(const Graph& g1, const Graph& g2, WlAlgorithm algorithm);

/// True when every class of `finer` lies inside one class of `coarser`.
bool partition_refines(const std::vector<ColorId>& finer, const std::vector<ColorId>& coarser);
bool same_partition(const std::vector<ColorId>& a, const std::vector<ColorId>& b);

}  // namespace lrga
