#include <doctest.h>

#include <cmath>
#include <numeric>

#include "imbal/neighbors.hpp"
#include "imbal/random.hpp"
#include "oracles.hpp"

using namespace imbal;

namespace {

NeighborIndex line(std::vector<double> xs, std::vector<Label> labels = {}) {
  if (labels.empty()) labels.assign(xs.size(), Label::majority);
  return NeighborIndex(std::move(xs), 1, std::move(labels));
}

double total(const std::vector<MstEdge>& edges) {
  double w = 0.0;
  for (const auto& e : edges) w += e.weight;
  return w;
}

}  // namespace

TEST_CASE("knn: ordering by distance") {
  const auto idx = line({0, 1, 3});
  const std::vector<double> q{0.9};
  const auto nn = idx.query(q, 2);
  REQUIRE(nn.size() == 2);
  CHECK(nn[0].index == 1);
  CHECK(nn[1].index == 0);
  CHECK(nn[0].distance == doctest::Approx(0.1));
}

TEST_CASE("knn: self exclusion and candidate limit") {
  const auto idx = line({0, 1, 3});
  CHECK(idx.neighbors_of(1, 1)[0].index == 0);
  CHECK(idx.query(idx.point(1), 1)[0].index == 1);
  const std::vector<double> q{0.0};
  CHECK_THROWS_AS(idx.query(q, 4), std::invalid_argument);
  CHECK_THROWS_AS(idx.neighbors_of(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(idx.query(q, 0), std::invalid_argument);
}

TEST_CASE("knn: distance ties go to the smaller index") {
  const auto idx = line({2, 0, 4, 2});
  const std::vector<double> q{2};
  const auto nn = idx.query(q, 4);
  CHECK(nn[0].index == 0);
  CHECK(nn[1].index == 3);
  CHECK(nn[2].index == 1);
  CHECK(nn[3].index == 2);
}

TEST_CASE("knn: classification votes") {
  const auto idx = line({0, 1, 2, 10}, {Label::minority, Label::minority, Label::minority,
                                        Label::majority});
  const std::vector<double> q{0.5};
  CHECK(idx.classify(q, 3) == Label::minority);
  const auto idx2 = line({0, 1}, {Label::majority, Label::minority});
  const std::vector<double> near_maj{0.1};
  CHECK(idx2.classify(near_maj, 1) == Label::majority);
  CHECK(idx2.classify(near_maj, 2) == Label::minority);
  const auto empty = NeighborIndex({}, 1, {});
  CHECK_THROWS(empty.classify(near_maj, 1));
}

TEST_CASE("knn: results are a prefix of the full ranked scan") {
  Rng gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto d = oracle::random_dataset(gen, 20 + gen.below(480), 1 + gen.below(4), 0.3,
                                          trial % 2 == 0);
    const auto pts = oracle::normalized(d);
    const auto idx = NeighborIndex::from_dataset(d);
    for (int q = 0; q < 5; ++q) {
      const std::size_t i = gen.below(d.rows());
      const std::size_t k = 1 + gen.below(d.rows() - 1);
      const auto expect = oracle::ranked(pts, pts[i], static_cast<long>(i));
      const auto got = idx.neighbors_of(i, k);
      REQUIRE(got.size() == k);
      for (std::size_t j = 0; j < k; ++j) CHECK(got[j].index == expect[j]);
    }
  }
}

TEST_CASE("mst: small fixtures") {
  const auto e = build_mst(line({0, 1, 2}));
  REQUIRE(e.size() == 2);
  CHECK(e[0].u == 0);
  CHECK(e[0].v == 1);
  CHECK(e[1].u == 1);
  CHECK(e[1].v == 2);
  CHECK(total(e) == doctest::Approx(2.0));

  const NeighborIndex square({0, 0, 1, 0, 0, 1, 1, 1}, 2, std::vector<Label>(4, Label::majority));
  CHECK(total(build_mst(square)) == doctest::Approx(3.0));
  CHECK(build_mst(line({4, 5})).size() == 1);
  CHECK_THROWS_AS(build_mst(line({4})), std::invalid_argument);
}

TEST_CASE("mst: tied weights prefer the smaller pair") {
  // Equilateral-ish 1-D chain with equal gaps: every spanning path has
  // weight 3; the lexicographic choice is the chain itself.
  const auto e = build_mst(line({0, 1, 2, 3}));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(e[i].u == i);
    CHECK(e[i].v == i + 1);
  }
}

TEST_CASE("mst: weight matches exhaustive enumeration") {
  Rng gen(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + gen.below(7);
    const auto d = oracle::random_dataset(gen, n, 2, 0.4, trial % 3 == 0);
    const auto pts = oracle::normalized(d);
    const auto idx = NeighborIndex::from_dataset(d);
    const auto edges = build_mst(idx);
    CHECK(edges.size() == n - 1);
    CHECK(total(edges) == doctest::Approx(oracle::exhaustive_mst_weight(pts)).epsilon(1e-12));
    // Spanning: union-find over the edges joins everything.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x];
      return x;
    };
    for (const auto& e : edges) {
      CHECK(e.u < e.v);
      parent[find(e.u)] = find(e.v);
    }
    for (std::size_t i = 1; i < n; ++i) CHECK(find(i) == find(0));
  }
}
