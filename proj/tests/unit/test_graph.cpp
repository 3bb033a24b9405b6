#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "generators.hpp"
#include "lrga/graph.hpp"

using namespace lrga;

TEST_SUITE("graph") {

TEST_CASE("construction validates nodes and edges") {
  CHECK_THROWS_AS(Graph(0), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {}, Matrix::Zero(2, 1)), std::invalid_argument);

  const Graph g(4, {{0, 1}, {2, 1}, {3, 0}});
  CHECK(g.size() == 4);
  CHECK(g.edge_count() == 3);
  CHECK(g.adjacent(1, 2));
  CHECK(g.adjacent(2, 1));
  CHECK_FALSE(g.adjacent(2, 3));
  CHECK(g.edges() == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
  CHECK_FALSE(g.has_features());
  CHECK(g.features().rows() == 4);
  CHECK(g.feature_dim() == 0);
}

TEST_CASE("from_adjacency rejects malformed matrices") {
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = 1;
  CHECK_THROWS_AS(Graph::from_adjacency(a), std::invalid_argument);  // asymmetric
  a(1, 0) = 1;
  CHECK_NOTHROW(Graph::from_adjacency(a));
  a(2, 2) = 1;
  CHECK_THROWS_AS(Graph::from_adjacency(a), std::invalid_argument);  // self-loop
  a(2, 2) = 0;
  a(0, 2) = a(2, 0) = 2;
  CHECK_THROWS_AS(Graph::from_adjacency(a), std::invalid_argument);  // weight
  CHECK_THROWS_AS(Graph::from_adjacency(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("named graphs") {
  CHECK(complete_graph(5).edge_count() == 10);
  CHECK(cycle_graph(6).edge_count() == 6);
  CHECK(path_graph(7).edge_count() == 6);
  const Graph s = star_graph(3);
  CHECK(s.size() == 4);
  CHECK(s.edge_count() == 3);
  const Graph u = disjoint_union(cycle_graph(3), cycle_graph(3));
  CHECK(u.size() == 6);
  CHECK(u.edge_count() == 6);
  CHECK_FALSE(u.adjacent(0, 3));
  CHECK(u.adjacent(3, 5));
}

TEST_CASE("random_graph is reproducible per seed") {
  CHECK(random_graph(20, 0.3, 7) == random_graph(20, 0.3, 7));
  CHECK_FALSE(random_graph(20, 0.3, 7) == random_graph(20, 0.3, 8));
  CHECK(random_graph(10, 0.0, 1).edge_count() == 0);
  CHECK(random_graph(10, 1.0, 1).edge_count() == 45);
  CHECK_THROWS_AS(random_graph(5, 1.5, 0), std::invalid_argument);
}

TEST_CASE("permutation conventions") {
  const Permutation p({2, 0, 1});
  Matrix m(3, 2);
  m << 0, 1, 10, 11, 20, 21;
  const Matrix pm = p.apply_rows(m);
  CHECK(pm(0, 0) == 20);
  CHECK(pm(1, 0) == 0);
  CHECK(pm(2, 1) == 11);
  CHECK(pm == p.matrix() * m);
  CHECK(p.inverse().apply_rows(pm) == m);

  Rng rng = make_rng(3);
  const Matrix a = gen::matrix(rng, 3, 3);
  CHECK(p.conjugate(a).isApprox(p.matrix() * a * p.matrix().transpose()));

  CHECK_THROWS_AS(Permutation({0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(p.apply_rows(Matrix::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("random permutations are bijections and reproducible") {
  Rng a = make_rng(11), b = make_rng(11);
  for (int t = 0; t < 20; ++t) {
    const Permutation p = Permutation::random(9, a);
    const Permutation q = Permutation::random(9, b);
    CHECK(p.mapping() == q.mapping());
    std::vector<bool> seen(9, false);
    for (std::size_t i = 0; i < 9; ++i) seen[p[i]] = true;
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }));
  }
}

TEST_CASE("pair tensor indexing and channels") {
  const Matrix a = complete_graph(3).adjacency();
  const PairTensor t = PairTensor::from_channels({Matrix::Identity(3, 3), a});
  CHECK(t.depth() == 2);
  CHECK(t(1, 1, 0) == 1);
  CHECK(t(1, 2, 0) == 0);
  CHECK(t(1, 2, 1) == 1);
  CHECK(t.channel(1) == a);
  CHECK(t.pair(0, 1).size() == 2);
  CHECK_THROWS_AS(t.channel(2), std::out_of_range);
  CHECK_THROWS_AS(PairTensor::from_channels({Matrix::Zero(2, 2), Matrix::Zero(3, 3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PairTensor(2, 2, std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("isomorphism-type tensor layout") {
  Matrix x(3, 1);
  x << 5, 6, 7;
  const Graph g(3, {{0, 1}}, x);
  const PairTensor t = build_iso_type_tensor(g);
  REQUIRE(t.depth() == 4);
  // (delta_ij, x_j, x_i, A_ij)
  CHECK(t(0, 1, 0) == 0);
  CHECK(t(0, 1, 1) == 6);
  CHECK(t(0, 1, 2) == 5);
  CHECK(t(0, 1, 3) == 1);
  CHECK(t(2, 2, 0) == 1);
  CHECK(t(2, 0, 3) == 0);

  const PairTensor plain = build_iso_type_tensor(cycle_graph(4));
  CHECK(plain.depth() == 2);
  CHECK(plain.channel(0) == Matrix::Identity(4, 4));
  CHECK(plain.channel(1) == cycle_graph(4).adjacency());
}

TEST_CASE("property: relabelling commutes with the isomorphism-type tensor") {
  Rng rng = make_rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = gen::featured_graph(rng, 1, 9, gen::size_in(rng, 0, 2));
    const Permutation p = Permutation::random(g.size(), rng);
    const Graph h = apply_permutation(g, p);
    CHECK(h.edge_count() == g.edge_count());
    CHECK(build_iso_type_tensor(h) == build_iso_type_tensor(g).permuted(p));
    CHECK(apply_permutation(h, p.inverse()) == g);
  }
}

TEST_CASE("small worked tensors") {
  const PairTensor k1 = build_iso_type_tensor(Graph(1));
  CHECK(k1.data() == std::vector<double>{1, 0});

  const PairTensor k3 = build_iso_type_tensor(complete_graph(3));
  CHECK(k3(1, 1, 0) == 1);
  CHECK(k3(1, 1, 1) == 0);
  CHECK(k3(0, 2, 0) == 0);
  CHECK(k3(0, 2, 1) == 1);

  Matrix x(3, 1);
  x << 1, 2, 3;
  const PairTensor p3 = build_iso_type_tensor(Graph(3, {{0, 1}, {1, 2}}, x));
  const auto e = p3.pair(0, 2);
  CHECK(std::vector<double>(e.begin(), e.end()) == std::vector<double>{0, 3, 1, 0});
}

TEST_CASE("relabelling examples") {
  const Graph p3 = path_graph(3);
  CHECK(apply_permutation(p3, Permutation::identity(3)) == p3);
  CHECK(apply_permutation(p3, Permutation({2, 1, 0})) == p3);
  CHECK(apply_permutation(complete_graph(3), Permutation({1, 2, 0})) == complete_graph(3));
  CHECK_FALSE(apply_permutation(p3, Permutation({1, 0, 2})) == p3);
}

}  // TEST_SUITE
