#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lrga/random.hpp"
#include "lrga/types.hpp"

namespace lrga {

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph with dense 0/1 adjacency and an optional n x d0
/// node-feature matrix. A graph without features carries an n x 0 matrix.
class Graph {
 public:
  explicit Graph(std::size_t n, const std::vector<Edge>& edges = {},
                 Matrix features = Matrix());

  /// Throws std::invalid_argument unless `adjacency` is square, symmetric,
  /// 0/1-valued with a zero diagonal.
  static Graph from_adjacency(const Matrix& adjacency, Matrix features = Matrix());

  std::size_t size() const noexcept { return n_; }
  const Matrix& adjacency() const noexcept { return adjacency_; }
  const Matrix& features() const noexcept { return features_; }
  std::size_t feature_dim() const noexcept {
    return static_cast<std::size_t>(features_.cols());
  }
  bool has_features() const noexcept { return features_.cols() > 0; }

  bool adjacent(std::size_t i, std::size_t j) const { return adjacency_(i, j) != 0.0; }
  std::size_t edge_count() const;
  /// Edges (i, j) with i < j in lexicographic order.
  std::vector<Edge> edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.adjacency_ == b.adjacency_ &&
           a.features_.cols() == b.features_.cols() && a.features_ == b.features_;
  }

 private:
  Graph() = default;
  void check_features() const;

  std::size_t n_ = 0;
  Matrix adjacency_;
  Matrix features_;
};

/// Bijection on [n]. Acting on rows, output row i is input row mapping[i],
/// i.e. the permutation matrix P has P(i, mapping[i]) = 1.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, Rng& rng);

  std::size_t size() const noexcept { return mapping_.size(); }
  std::size_t operator[](std::size_t i) const { return mapping_[i]; }
  const std::vector<std::size_t>& mapping() const noexcept { return mapping_; }
  Permutation inverse() const;

  /// P * m
  Matrix apply_rows(const Matrix& m) const;
  /// P * m * P^T
  Matrix conjugate(const Matrix& m) const;
  Matrix matrix() const;

 private:
  std::vector<std::size_t> mapping_;
};

/// Dense n x n x depth tensor of per-pair feature vectors, stored row-major
/// in (i, j, channel) order.
class PairTensor {
 public:
  PairTensor(std::size_t n, std::size_t depth);
  PairTensor(std::size_t n, std::size_t depth, std::vector<double> data);
  /// Stacks n x n matrices along the feature axis.
  static PairTensor from_channels(const std::vector<Matrix>& channels);

  std::size_t size() const noexcept { return n_; }
  std::size_t depth() const noexcept { return depth_; }

  double& operator()(std::size_t i, std::size_t j, std::size_t c) {
    return data_[(i * n_ + j) * depth_ + c];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t c) const {
    return data_[(i * n_ + j) * depth_ + c];
  }
  std::span<const double> pair(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * n_ + j) * depth_, depth_};
  }

  Matrix channel(std::size_t c) const;
  /// Permutes both pair axes: out(i, j) = in(p[i], p[j]).
  PairTensor permuted(const Permutation& p) const;
  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const PairTensor&, const PairTensor&) = default;

 private:
  std::size_t n_;
  std::size_t depth_;
  std::vector<double> data_;
};

/// [I, 1 (x) X, X (x) 1, A]: entry (i, j) is (delta_ij, x_j, x_i, A_ij).
/// Depth is 2 + 2 d0, i.e. [I, A] for a featureless graph.
PairTensor build_iso_type_tensor(const Graph& g);

/// Relabels nodes: adjacency P A P^T, features P X.
Graph apply_permutation(const Graph& g, const Permutation& p);

/// Erdos-Renyi G(n, p); deterministic for a fixed seed.
Graph random_graph(std::size_t n, double p, std::uint64_t seed);

Graph complete_graph(std::size_t n);
Graph cycle_graph(std::size_t n);
Graph path_graph(std::size_t n);
Graph star_graph(std::size_t leaves);
/// Vertex-disjoint union; features are stacked and must have equal width.
Graph disjoint_union(const Graph& a, const Graph& b);

}  // namespace lrga
