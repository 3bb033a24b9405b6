#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "lrga/rgnn.hpp"

using namespace lrga;

TEST_SUITE("rgnn") {

TEST_CASE("sampling is reproducible and has the configured law") {
  const auto g = RandomFeatureConfig::gaussian(1000, 2.0, 5);
  const Matrix a = sample_features(1000, g);
  CHECK(a == sample_features(1000, g));
  auto other = g;
  other.seed = 6;
  CHECK_FALSE(a == sample_features(1000, other));

  const double sigma = std::sqrt(2.0);
  const double nd = static_cast<double>(a.size());
  CHECK(std::abs(a.mean()) <= 4.0 * sigma / std::sqrt(nd));
  CHECK((a.array().square().mean()) == doctest::Approx(2.0).epsilon(0.01));

  const auto u = RandomFeatureConfig::uniform(1000, 2.0, 7);
  const Matrix b = sample_features(1000, u);
  CHECK(b.maxCoeff() <= 1.0);
  CHECK(b.minCoeff() >= -1.0);
  CHECK(std::abs(b.mean()) <= 4.0 * std::sqrt(u.entry_variance() / nd));
  CHECK(u.entry_variance() == doctest::Approx(4.0 / 12.0));
  CHECK(standardize(b, u).array().square().mean() == doctest::Approx(1.0).epsilon(0.01));

  CHECK_THROWS_AS(RandomFeatureConfig::gaussian(0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(RandomFeatureConfig::uniform(3, -1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_features(0, g), std::invalid_argument);
}

TEST_CASE("message passing layer examples") {
  const Matrix a = complete_graph(3).adjacency();
  const Matrix out = message_passing_layer(a, Matrix::Identity(3, 3));
  Matrix expected(3, 6);
  expected << a, Matrix::Identity(3, 3);
  CHECK(gen::max_abs(out - expected / std::sqrt(3.0)) <= 1e-15);

  Rng rng = make_rng(51);
  const Matrix r = gen::matrix(rng, 4, 5);
  Matrix zero_expected(4, 10);
  zero_expected << Matrix::Zero(4, 5), r;
  CHECK(gen::max_abs(message_passing_layer(Matrix::Zero(4, 4), r) - zero_expected / std::sqrt(5.0)) <= 1e-15);
  CHECK_THROWS_AS(message_passing_layer(Matrix::Zero(3, 3), r), std::invalid_argument);
}

TEST_CASE("property: the message passing layer is equivariant") {
  Rng rng = make_rng(52);
  for (int t = 0; t < 30; ++t) {
    const Graph g = gen::graph(rng, 1, 12);
    const Matrix r = gen::matrix(rng, g.size(), gen::size_in(rng, 1, 6));
    const Permutation p = Permutation::random(g.size(), rng);
    const Matrix lhs = message_passing_layer(p.conjugate(g.adjacency()), p.apply_rows(r));
    CHECK(gen::max_abs(lhs - p.apply_rows(message_passing_layer(g.adjacency(), r))) <= 1e-12);
  }
}

TEST_CASE("factorization error") {
  Matrix r(2, 2);
  r << 1, 1, 1, -1;  // orthogonal rows of squared norm d
  const Matrix a = complete_graph(2).adjacency();
  const FactorizationError exact = factorization_error(a, r);
  CHECK(exact.gram_dev == 0.0);
  CHECK(exact.adj_dev == 0.0);

  const Matrix bad = Matrix::Ones(2, 2);
  const FactorizationError e = factorization_error(a, bad);
  CHECK(e.gram_dev == doctest::Approx(1.0));
  CHECK_THROWS_AS(factorization_error(Matrix::Zero(3, 3), r), std::invalid_argument);
}

TEST_CASE("standardized uniform features concentrate as d grows") {
  const Matrix a = random_graph(50, 0.3, 1).adjacency();
  std::vector<double> medians;
  for (std::size_t d : {100u, 1000u, 10000u}) {
    std::vector<double> devs;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto cfg = RandomFeatureConfig::uniform(d, 2.0, s);
      devs.push_back(factorization_error(a, standardize(sample_features(50, cfg), cfg)).gram_dev);
    }
    std::sort(devs.begin(), devs.end());
    medians.push_back(devs[2]);
  }
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);
}

TEST_CASE("required dimension") {
  CHECK(required_dimension(10, 0.1, 0.01) == doctest::Approx(1e8 * std::log(20000.0)).epsilon(1e-12));
  CHECK(required_dimension(10, 0.1, 0.01) == doctest::Approx(9.903e8).epsilon(1e-3));
  CHECK(required_dimension(10, 0.2, 0.01) == doctest::Approx(required_dimension(10, 0.1, 0.01) / 4.0));
  CHECK(required_dimension(10, 0.1, 0.01, 3.0) == doctest::Approx(3.0 * required_dimension(10, 0.1, 0.01)));
  // n^6 log n growth: the ratio for n -> 2n is 64 up to the log argument.
  const double ratio = required_dimension(40, 0.1, 0.01) / required_dimension(20, 0.1, 0.01);
  CHECK(ratio == doctest::Approx(64.0 * std::log(2.0 * 1600 / 0.01) / std::log(2.0 * 400 / 0.01)));
  CHECK_THROWS_AS(required_dimension(10, 0.0, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(required_dimension(10, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("extended factorization layout") {
  Rng rng = make_rng(53);
  const Graph plain = path_graph(4);
  const Matrix r = gen::matrix(rng, 4, 3);
  const Matrix e = extended_factorization(plain, r);
  CHECK(e.cols() == 1 + 0 + 6);
  CHECK(e.col(0) == Vector::Ones(4));
  CHECK(e.middleCols(1, 3) == r);
  CHECK(e.rightCols(3) == plain.adjacency() * r);

  Matrix x(4, 2);
  x << 1, 2, 3, 4, 5, 6, 7, 8;
  const Graph featured = Graph::from_adjacency(plain.adjacency(), x);
  const Matrix f = extended_factorization(featured, r);
  CHECK(f.cols() == 1 + 2 + 6);
  // Outer products of the ones column with an X column rebuild 1 (x) X and X (x) 1.
  for (Eigen::Index l = 0; l < 2; ++l) {
    const Matrix outer = f.col(1 + l) * f.col(0).transpose();  // (i, j) -> x_i
    CHECK(outer.transpose() == build_iso_type_tensor(featured).channel(static_cast<std::size_t>(1 + l)));
    CHECK(outer == build_iso_type_tensor(featured).channel(static_cast<std::size_t>(3 + l)));
  }
  CHECK_THROWS_AS(extended_factorization(plain, gen::matrix(rng, 3, 2)), std::invalid_argument);
}

TEST_CASE("equivariance in expectation") {
  Rng rng = make_rng(54);
  const Graph g = gen::graph(rng, 6, 6);
  const Permutation p({3, 0, 5, 1, 2, 4});
  const auto cfg = RandomFeatureConfig::gaussian(8, 1.0, 9);

  const NodeForward layer = [](const Matrix& a, const Matrix& input) {
    return message_passing_layer(a, input);
  };
  CHECK(expectation_equivariance_check(layer, g.adjacency(), Matrix(6, 0), p, cfg, 1) <= 1e-9);
  CHECK(expectation_equivariance_check(layer, g.adjacency(), Matrix(6, 0), p, cfg, 20) <= 1e-9);

  Matrix x(6, 1);
  x << 1, 2, 3, 4, 5, 6;
  const NodeForward first_row = [](const Matrix&, const Matrix& input) {
    return Matrix(input.row(0).replicate(input.rows(), 1));
  };
  CHECK(expectation_equivariance_check(first_row, g.adjacency(), x, p, cfg, 20) >= 0.5);
  CHECK_THROWS_AS(expectation_equivariance_check(layer, g.adjacency(), x, p, cfg, 0),
                  std::invalid_argument);
}

}  // TEST_SUITE
