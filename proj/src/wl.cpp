#include "lrga/wl.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lrga {

namespace {

/// Dense ids by rank of the sorted distinct signatures. Ranking (rather than
/// first-seen order) keeps ids independent of the node numbering.
template <class Sig>
std::vector<ColorId> rank_signatures(const std::vector<Sig>& sigs) {
  std::vector<std::size_t> order(sigs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sigs[a] < sigs[b]; });
  std::vector<ColorId> ids(sigs.size());
  ColorId next = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && sigs[order[k - 1]] < sigs[order[k]]) ++next;
    ids[order[k]] = next;
  }
  return ids;
}

std::size_t count_classes(const std::vector<ColorId>& colors) {
  if (colors.empty()) return 0;
  return static_cast<std::size_t>(*std::max_element(colors.begin(), colors.end())) + 1;
}

using RealSig = std::vector<double>;
using Wl1Sig = std::vector<ColorId>;
using Fwl2Sig = std::vector<std::uint64_t>;

std::vector<RealSig> wl1_initial_signatures(const Graph& g) {
  std::vector<RealSig> sigs(g.size());
  const Matrix& x = g.features();
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      sigs[v].push_back(x(static_cast<Eigen::Index>(v), c) + 0.0);
    }
  }
  return sigs;
}

std::vector<Wl1Sig> wl1_signatures(const Graph& g, const std::vector<ColorId>& colors) {
  std::vector<Wl1Sig> sigs(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    Wl1Sig& s = sigs[v];
    for (std::size_t u = 0; u < g.size(); ++u) {
      if (g.adjacent(v, u)) s.push_back(colors[u]);
    }
    std::sort(s.begin(), s.end());
    s.insert(s.begin(), colors[v]);
  }
  return sigs;
}

std::vector<RealSig> fwl2_initial_signatures(const Graph& g) {
  const PairTensor iso = build_iso_type_tensor(g);
  const std::size_t n = g.size();
  std::vector<RealSig> sigs(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto p = iso.pair(i, j);
      RealSig& s = sigs[i * n + j];
      s.reserve(p.size());
      for (double v : p) s.push_back(v + 0.0);
    }
  }
  return sigs;
}

std::vector<Fwl2Sig> fwl2_signatures(const Graph& g, const std::vector<ColorId>& colors) {
  const std::size_t n = g.size();
  std::vector<Fwl2Sig> sigs(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Fwl2Sig& s = sigs[i * n + j];
      s.resize(n + 1);
      for (std::size_t k = 0; k < n; ++k) {
        s[k + 1] = (std::uint64_t{colors[i * n + k]} << 32) | colors[k * n + j];
      }
      std::sort(s.begin() + 1, s.end());
      s[0] = colors[i * n + j];
    }
  }
  return sigs;
}

/// Ranks the concatenated signatures of several graphs against one shared
/// dictionary and splits the ids back per graph.
template <class Sig>
std::vector<std::vector<ColorId>> joint_rank(std::vector<std::vector<Sig>> per_graph) {
  std::vector<Sig> all;
  for (auto& s : per_graph) std::move(s.begin(), s.end(), std::back_inserter(all));
  const auto ids = rank_signatures(all);
  std::vector<std::vector<ColorId>> out;
  std::size_t offset = 0;
  for (const auto& s : per_graph) {
    out.emplace_back(ids.begin() + static_cast<std::ptrdiff_t>(offset),
                     ids.begin() + static_cast<std::ptrdiff_t>(offset + s.size()));
    offset += s.size();
  }
  return out;
}

struct RefinementTrace {
  std::vector<ColorId> colors;
  std::size_t iterations = 0;
  std::vector<Histogram> history;
};

template <class StepFn>
RefinementTrace refine(std::vector<ColorId> colors, StepFn step, std::size_t max_rounds) {
  RefinementTrace trace;
  trace.history.push_back(histogram_of(colors));
  std::size_t classes = count_classes(colors);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    auto next = step(colors);
    const std::size_t next_classes = count_classes(next);
    colors = std::move(next);
    trace.history.push_back(histogram_of(colors));
    if (next_classes == classes) break;
    classes = next_classes;
    ++trace.iterations;
  }
  trace.colors = std::move(colors);
  return trace;
}

}  // namespace

Histogram histogram_of(const std::vector<ColorId>& colors) {
  std::map<ColorId, std::size_t> counts;
  for (ColorId c : colors) ++counts[c];
  Histogram h;
  h.reserve(counts.size());
  for (const auto& [c, k] : counts) h.push_back({c, k});
  return h;
}

std::vector<ColorId> wl1_initial_colors(const Graph& g) {
  return rank_signatures(wl1_initial_signatures(g));
}

std::vector<ColorId> wl1_step(const Graph& g, const std::vector<ColorId>& colors) {
  return rank_signatures(wl1_signatures(g, colors));
}

Coloring wl1_refine(const Graph& g) {
  auto trace = refine(
      wl1_initial_colors(g), [&](const auto& c) { return wl1_step(g, c); }, g.size() + 1);
  Coloring out;
  out.histogram = trace.history.back();
  out.colors = std::move(trace.colors);
  out.iterations = trace.iterations;
  out.history = std::move(trace.history);
  return out;
}

std::vector<ColorId> fwl2_initial_colors(const Graph& g) {
  return rank_signatures(fwl2_initial_signatures(g));
}

std::vector<ColorId> fwl2_step(const Graph& g, const std::vector<ColorId>& colors) {
  return rank_signatures(fwl2_signatures(g, colors));
}

PairColoring fwl2_refine(const Graph& g, std::optional<std::size_t> max_rounds) {
  const std::size_t n = g.size();
  auto trace = refine(
      fwl2_initial_colors(g), [&](const auto& c) { return fwl2_step(g, c); },
      max_rounds.value_or(n * n));
  PairColoring out;
  out.n = n;
  out.histogram = trace.history.back();
  out.colors = std::move(trace.colors);
  out.iterations = trace.iterations;
  out.history = std::move(trace.history);
  return out;
}

IsoVerdict iso_test(const Graph& g1, const Graph& g2, WlAlgorithm algorithm) {
  const bool pairs = algorithm == WlAlgorithm::fwl2;
  std::vector<std::vector<ColorId>> colors =
      pairs ? joint_rank(std::vector{fwl2_initial_signatures(g1), fwl2_initial_signatures(g2)})
            : joint_rank(std::vector{wl1_initial_signatures(g1), wl1_initial_signatures(g2)});
  const std::size_t cells = colors[0].size() + colors[1].size();

  IsoVerdict verdict;
  std::size_t classes = 0;
  for (std::size_t round = 0;; ++round) {
    verdict.rounds = round + 1;
    if (histogram_of(colors[0]) != histogram_of(colors[1])) {
      verdict.kind = IsoVerdict::Kind::distinguished;
      verdict.witness_round = round;
      return verdict;
    }
    std::vector<ColorId> joint = colors[0];
    joint.insert(joint.end(), colors[1].begin(), colors[1].end());
    const std::size_t next_classes = count_classes(joint);
    if ((round > 0 && next_classes == classes) || round > cells) break;
    classes = next_classes;
    colors = pairs ? joint_rank(std::vector{fwl2_signatures(g1, colors[0]),
                                            fwl2_signatures(g2, colors[1])})
                   : joint_rank(std::vector{wl1_signatures(g1, colors[0]),
                                            wl1_signatures(g2, colors[1])});
  }
  verdict.kind = IsoVerdict::Kind::indistinguishable;
  return verdict;
}

bool partition_refines(const std::vector<ColorId>& finer, const std::vector<ColorId>& coarser) {
  if (finer.size() != coarser.size()) return false;
  std::map<ColorId, ColorId> parent;
  for (std::size_t k = 0; k < finer.size(); ++k) {
    const auto [it, inserted] = parent.emplace(finer[k], coarser[k]);
    if (!inserted && it->second != coarser[k]) return false;
  }
  return true;
}

bool same_partition(const std::vector<ColorId>& a, const std::vector<ColorId>& b) {
  return partition_refines(a, b) && partition_refines(b, a);
}

}  // namespace lrga
