#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigloop/error.hpp"
#include "sigloop/grouping.hpp"
#include "support.hpp"

using namespace sigloop;

namespace {

SimilarityMatrix matrix_of(const std::vector<std::vector<double>>& v) {
  SimilarityMatrix m;
  m.values.resize(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    m.order.push_back("i" + std::to_string(i));
    for (std::size_t j = 0; j < v.size(); ++j) m.values(i, j) = v[i][j];
  }
  return m;
}

std::vector<std::vector<double>> random_sim(oracle::Rng& rng, std::size_t n, double link_p) {
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) v[i][j] = v[j][i] = rng.coin(link_p) ? 0.7 + 0.3 * rng.uniform() : 0.66 * rng.uniform();
  return v;
}

}  // namespace

TEST_CASE("threshold is strict") {
  const auto m = matrix_of({{1, 0.66, 0}, {0.66, 1, 0.67}, {0, 0.67, 1}});
  const auto g = group_items(m);
  REQUIRE(g.groups.size() == 2);
  CHECK(g.groups[0] == std::vector<std::size_t>{1, 2});
  CHECK(g.groups[1] == std::vector<std::size_t>{0});
}

TEST_CASE("transitive chaining merges groups") {
  const auto m = matrix_of({{1, 0.9, 0, 0}, {0.9, 1, 0.8, 0}, {0, 0.8, 1, 0}, {0, 0, 0, 1}});
  const auto g = group_items(m);
  CHECK(g.groups.size() == 2);
  CHECK(g.groups[0] == std::vector<std::size_t>{0, 1, 2});
  const auto a = g.assignment();
  CHECK(a == std::vector<std::size_t>{0, 0, 0, 1});
  CHECK(g.item_count() == 4);
}

TEST_CASE("ordering by size then smallest member") {
  const auto m = matrix_of({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0.9}, {0, 0, 1, 0.9, 0}, {0, 0, 0.9, 1, 0}, {0, 0.9, 0, 0, 1}});
  const auto g = group_items(m);
  REQUIRE(g.groups.size() == 3);
  CHECK(g.groups[0] == std::vector<std::size_t>{1, 4});
  CHECK(g.groups[1] == std::vector<std::size_t>{2, 3});
  CHECK(g.groups[2] == std::vector<std::size_t>{0});
}

TEST_CASE("components equal the relaxation fixpoint") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(30);
    const auto v = random_sim(rng, n, 2.0 / static_cast<double>(n));
    const auto g = group_items(matrix_of(v));
    const auto label = oracle::fixpoint_components(v, 0.66);
    const auto a = g.assignment();
    std::size_t covered = 0;
    for (const auto& grp : g.groups) covered += grp.size();
    CHECK(covered == n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK((a[i] == a[j]) == (label[i] == label[j]));
    for (std::size_t k = 1; k < g.groups.size(); ++k) {
      const auto& p = g.groups[k - 1];
      const auto& q = g.groups[k];
      CHECK((p.size() > q.size() || (p.size() == q.size() && p.front() < q.front())));
    }
  }
}

TEST_CASE("threshold validation") {
  const auto m = matrix_of({{1, 0.5}, {0.5, 1}});
  CHECK_THROWS_AS(group_items(m, 0.0), Error);
  CHECK_THROWS_AS(group_items(m, 1.0), Error);
  CHECK(group_items(m, 0.4).groups.size() == 1);
}

TEST_CASE("group similarity is the max member pair") {
  const auto m = matrix_of({{1, 0.9, 0.2, 0.1}, {0.9, 1, 0.3, 0.5}, {0.2, 0.3, 1, 0.95}, {0.1, 0.5, 0.95, 1}});
  const auto g = group_items(m);
  REQUIRE(g.groups.size() == 2);
  const auto gs = group_similarity(m, g);
  CHECK(gs.values(0, 1) == 0.5);
  CHECK(gs.values(1, 0) == 0.5);
  CHECK(gs.values(0, 0) == 1.0);
}

TEST_CASE("union find") {
  UnionFind uf(5);
  uf.unite(0, 1);
  uf.unite(3, 4);
  uf.unite(1, 4);
  CHECK(uf.find(0) == uf.find(3));
  CHECK(uf.find(2) != uf.find(0));
}

TEST_CASE("all links below the threshold leave singletons") {
  const auto g = group_items(matrix_of({{1, 0.5, 0.65}, {0.5, 1, 0.1}, {0.65, 0.1, 1}}));
  CHECK(g.groups.size() == 3);
  const auto chain = group_items(matrix_of({{1, 0.7, 0.1}, {0.7, 1, 0.7}, {0.1, 0.7, 1}}));
  CHECK(chain.groups == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
}
