#include "lrga/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lrga {

Graph::Graph(std::size_t n, const std::vector<Edge>& edges, Matrix features)
    : n_(n), adjacency_(Matrix::Zero(n, n)), features_(std::move(features)) {
  if (n == 0) throw std::invalid_argument("graph must have at least one node");
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) {
      throw std::invalid_argument("edge (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ") out of range for n = " +
                                  std::to_string(n));
    }
    if (i == j) throw std::invalid_argument("self-loop at node " + std::to_string(i));
    adjacency_(i, j) = 1.0;
    adjacency_(j, i) = 1.0;
  }
  if (features_.rows() == 0 && features_.cols() == 0) {
    features_.resize(static_cast<Eigen::Index>(n), 0);
  }
  check_features();
}

Graph Graph::from_adjacency(const Matrix& adjacency, Matrix features) {
  const auto n = adjacency.rows();
  if (n == 0 || adjacency.cols() != n) {
    throw std::invalid_argument("adjacency must be a non-empty square matrix");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) {
      throw std::invalid_argument("adjacency diagonal must be zero");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = adjacency(i, j);
      if (v != 0.0 && v != 1.0) throw std::invalid_argument("adjacency must be 0/1");
      if (v != adjacency(j, i)) throw std::invalid_argument("adjacency must be symmetric");
    }
  }
  Graph g;
  g.n_ = static_cast<std::size_t>(n);
  g.adjacency_ = adjacency;
  g.features_ = std::move(features);
  if (g.features_.rows() == 0 && g.features_.cols() == 0) g.features_.resize(n, 0);
  g.check_features();
  return g;
}

void Graph::check_features() const {
  if (static_cast<std::size_t>(features_.rows()) != n_) {
    throw std::invalid_argument("node features must have exactly n rows");
  }
}

std::size_t Graph::edge_count() const {
  return static_cast<std::size_t>(adjacency_.sum() / 2.0);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (adjacent(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t v : mapping_) {
    if (v >= mapping_.size() || seen[v]) {
      throw std::invalid_argument("permutation mapping is not a bijection");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  return Permutation(std::move(m));
}

Permutation Permutation::random(std::size_t n, Rng& rng) {
  std::vector<std::size_t> m(n);
  std::iota(m.begin(), m.end(), std::size_t{0});
  // Fisher-Yates with our own index draw so the result does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(m[i - 1], m[std::min(j, i - 1)]);
  }
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = i;
  return Permutation(std::move(inv));
}

Matrix Permutation::apply_rows(const Matrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != size()) {
    throw std::invalid_argument("permutation size does not match row count");
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(mapping_[i]));
  }
  return out;
}

Matrix Permutation::conjugate(const Matrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != size() ||
      static_cast<std::size_t>(m.cols()) != size()) {
    throw std::invalid_argument("permutation size does not match matrix");
  }
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(mapping_[i]), static_cast<Eigen::Index>(mapping_[j]));
    }
  }
  return out;
}

Matrix Permutation::matrix() const {
  Matrix p = Matrix::Zero(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(mapping_[i])) = 1.0;
  }
  return p;
}

PairTensor::PairTensor(std::size_t n, std::size_t depth)
    : n_(n), depth_(depth), data_(n * n * depth, 0.0) {}

PairTensor::PairTensor(std::size_t n, std::size_t depth, std::vector<double> data)
    : n_(n), depth_(depth), data_(std::move(data)) {
  if (data_.size() != n * n * depth) {
    throw std::invalid_argument("pair tensor data has wrong length");
  }
}

PairTensor PairTensor::from_channels(const std::vector<Matrix>& channels) {
  if (channels.empty()) throw std::invalid_argument("no channels");
  const auto n = static_cast<std::size_t>(channels.front().rows());
  PairTensor t(n, channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const Matrix& m = channels[c];
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
      throw std::invalid_argument("channel " + std::to_string(c) + " is not n x n");
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        t(i, j, c) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return t;
}

Matrix PairTensor::channel(std::size_t c) const {
  if (c >= depth_) throw std::out_of_range("channel index out of range");
  const auto n = static_cast<Eigen::Index>(n_);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j, c);
    }
  }
  return m;
}

PairTensor PairTensor::permuted(const Permutation& p) const {
  if (p.size() != n_) throw std::invalid_argument("permutation size mismatch");
  PairTensor out(n_, depth_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const auto src = pair(p[i], p[j]);
      std::copy(src.begin(), src.end(), out.data_.begin() + static_cast<std::ptrdiff_t>((i * n_ + j) * depth_));
    }
  }
  return out;
}

PairTensor build_iso_type_tensor(const Graph& g) {
  const std::size_t n = g.size();
  const std::size_t d0 = g.feature_dim();
  const Matrix& x = g.features();
  PairTensor t(n, 2 + 2 * d0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t(i, j, 0) = (i == j) ? 1.0 : 0.0;
      for (std::size_t c = 0; c < d0; ++c) {
        t(i, j, 1 + c) = x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
        t(i, j, 1 + d0 + c) = x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      }
      t(i, j, 1 + 2 * d0) = g.adjacent(i, j) ? 1.0 : 0.0;
    }
  }
  return t;
}

Graph apply_permutation(const Graph& g, const Permutation& p) {
  if (p.size() != g.size()) {
    throw std::invalid_argument("permutation of size " + std::to_string(p.size()) +
                                " applied to graph with " + std::to_string(g.size()) +
                                " nodes");
  }
  Matrix features = g.has_features() ? p.apply_rows(g.features()) : Matrix();
  return Graph::from_adjacency(p.conjugate(g.adjacency()), std::move(features));
}

Graph random_graph(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must be in [0, 1]");
  Rng rng = make_rng(seed);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.emplace_back(i, j);
    }
  }
  return Graph(n, edges);
}

Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, edges);
}

Graph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

Graph star_graph(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph(leaves + 1, edges);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  if (a.feature_dim() != b.feature_dim()) {
    throw std::invalid_argument("disjoint union of graphs with different feature widths");
  }
  const std::size_t n = a.size() + b.size();
  auto edges = a.edges();
  for (const auto& [i, j] : b.edges()) edges.emplace_back(i + a.size(), j + a.size());
  Matrix features;
  if (a.has_features()) {
    features.resize(static_cast<Eigen::Index>(n), a.features().cols());
    features << a.features(), b.features();
  }
  return Graph(n, edges, std::move(features));
}

}  // namespace lrga
