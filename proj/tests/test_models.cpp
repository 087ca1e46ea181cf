#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "qcomp/errors.hpp"
#include "qcomp/models.hpp"
#include "qcomp/theory.hpp"

using namespace qcomp;

namespace {

double mean_of(const std::vector<double>& xs) { return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size(); }

double stderr_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1) / xs.size());
}

void check_ring(const KeyRing& ring, std::uint32_t P) {
  REQUIRE(std::is_sorted(ring.begin(), ring.end()));
  REQUIRE(std::adjacent_find(ring.begin(), ring.end()) == ring.end());
  for (auto k : ring) REQUIRE(k < P);
}

}  // namespace

TEST_CASE("ModelParams validation names every bad field") {
  ModelParams bad{1, 2, 1, 3, 1.5};
  try {
    bad.validate();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    std::set<std::string> fields;
    for (const auto& fe : e.errors()) fields.insert(fe.field);
    CHECK(fields == std::set<std::string>{"n", "K", "P", "p"});
  }
  CHECK_NOTHROW(ModelParams{2, 3, 3, 3, 0.0}.validate());
}

TEST_CASE("sample_uniform_rings: forced ring when P = K = 1") {
  const auto a = sample_uniform_rings({5, 1, 1, 1, 1.0}, {1, 0});
  for (const auto& r : a.rings) CHECK(r == KeyRing{0});
  CHECK_THROWS_AS(sample_uniform_rings({5, 3, 2, 1, 1.0}, {1, 0}), std::invalid_argument);
}

TEST_CASE("sample_uniform_rings: all 6 rings of size 2 from 4 keys equally likely") {
  const std::uint32_t draws = 60000;
  const auto a = sample_uniform_rings({draws, 2, 4, 1, 1.0}, {2024, 7});
  std::map<KeyRing, int> counts;
  for (const auto& r : a.rings) {
    check_ring(r, 4);
    REQUIRE(r.size() == 2);
    ++counts[r];
  }
  REQUIRE(counts.size() == 6);
  const double expected = draws / 6.0;
  double chi2 = 0;
  for (const auto& [ring, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square, 5 degrees of freedom: P[X > 20.515] = 0.001
  CHECK(chi2 < 20.515);
}

TEST_CASE("sample_uniform_rings: key marginal is K/P") {
  const std::uint32_t n = 20000, K = 3, P = 10;
  const auto a = sample_uniform_rings({n, K, P, 1, 1.0}, {3, 3});
  std::vector<int> hits(P, 0);
  for (const auto& r : a.rings) {
    REQUIRE(r.size() == K);
    for (auto k : r) ++hits[k];
  }
  const double pi = static_cast<double>(K) / P;
  const double se = std::sqrt(pi * (1 - pi) / n);
  for (auto h : hits) CHECK(std::abs(h / double(n) - pi) < 4 * se);
}

TEST_CASE("sample_uniform_rings works with K close to P") {
  const auto a = sample_uniform_rings({200, 9, 10, 1, 1.0}, {8, 1});
  for (const auto& r : a.rings) {
    check_ring(r, 10);
    CHECK(r.size() == 9);
  }
}

TEST_CASE("sample_binomial_rings") {
  const auto empty = sample_binomial_rings(50, 0.0, 10, {1, 0});
  for (const auto& r : empty.rings) CHECK(r.empty());

  const auto full = sample_binomial_rings(7, 1.0, 4, {1, 0});
  for (const auto& r : full.rings) CHECK(r == KeyRing{0, 1, 2, 3, 4, 5, 6});

  const auto a = sample_binomial_rings(100, 0.3, 10000, {77, 1});
  std::vector<double> sizes;
  for (const auto& r : a.rings) {
    check_ring(r, 100);
    sizes.push_back(r.size());
  }
  // Binomial(100, 0.3): variance 21
  CHECK(std::abs(mean_of(sizes) - 30.0) < 4 * std::sqrt(21.0 / 10000));

  CHECK_THROWS_AS(sample_binomial_rings(10, 1.5, 2, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(sample_binomial_rings(10, -0.1, 2, {1, 0}), std::invalid_argument);
}

TEST_CASE("intersection_graph") {
  KeyAssignment a{{{0, 1}, {1, 2}, {3, 4}}, 5};
  const Graph g1 = intersection_graph(a, 1);
  CHECK(g1.edges() == std::vector<Edge>{{0, 1}});
  CHECK(intersection_graph(a, 2).edge_count() == 0);

  KeyAssignment same{{{2, 5, 7}, {2, 5, 7}, {2, 5, 7}, {2, 5, 7}}, 8};
  CHECK(intersection_graph(same, 3) == Graph::complete(4));
  CHECK(intersection_graph(same, 4).edge_count() == 0);
}

TEST_CASE("intersection_graph agrees with pairwise set intersection") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const ModelParams mp{60, 6, 40, 1, 1.0};
    const auto a = sample_uniform_rings(mp, {5, trial});
    for (std::uint32_t q = 1; q <= 3; ++q) {
      const Graph g = intersection_graph(a, q);
      for (NodeId i = 0; i < mp.n; ++i) {
        for (NodeId j = i + 1; j < mp.n; ++j) {
          std::vector<std::uint32_t> common;
          std::set_intersection(a.rings[i].begin(), a.rings[i].end(), a.rings[j].begin(), a.rings[j].end(),
                                std::back_inserter(common));
          REQUIRE(g.has_edge(i, j) == (common.size() >= q));
          REQUIRE(shared_keys(a.rings[i], a.rings[j]) == common.size());
        }
      }
    }
  }
}

TEST_CASE("small-pool edge frequency matches exact s") {
  // independent node pairs, 10^5 of them
  const std::uint32_t K = 3, P = 8;
  const int pairs = 100000;
  int hit1 = 0, hit2 = 0;
  for (int t = 0; t < pairs; ++t) {
    const auto a = sample_uniform_rings({2, K, P, 1, 1.0}, {42, static_cast<std::uint64_t>(t)});
    const auto common = shared_keys(a.rings[0], a.rings[1]);
    hit1 += common >= 1;
    hit2 += common >= 2;
  }
  for (auto [q, hits] : {std::pair{1u, hit1}, std::pair{2u, hit2}}) {
    const double s = theory::exact_s_probability(K, P, q);
    const double se = std::sqrt(s * (1 - s) / pairs);
    CHECK(std::abs(hits / double(pairs) - s) < 4 * se);
  }
}

TEST_CASE("sample_er") {
  CHECK(sample_er(20, 0.0, {1, 1}).edge_count() == 0);
  CHECK(sample_er(20, 1.0, {1, 1}) == Graph::complete(20));
  CHECK_THROWS_AS(sample_er(5, 1.2, {1, 1}), std::invalid_argument);

  std::vector<double> edges;
  for (std::uint64_t t = 0; t < 2000; ++t) edges.push_back(sample_er(50, 0.2, {9, t}).edge_count());
  // 1225 pairs: mean 245, per-sample variance 196
  CHECK(std::abs(mean_of(edges) - 245.0) < 4 * std::sqrt(196.0 / 2000));
}

TEST_CASE("sample_er pair marginals are uniform") {
  const std::uint32_t n = 6;
  std::vector<int> count(n * n, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    for (const auto& [i, j] : sample_er(n, 0.3, {4, static_cast<std::uint64_t>(t)}).edges()) ++count[i * n + j];
  }
  const double se = std::sqrt(0.3 * 0.7 / trials);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) CHECK(std::abs(count[i * n + j] / double(trials) - 0.3) < 4.5 * se);
}

TEST_CASE("sample_composed") {
  const ModelParams mp{80, 8, 100, 2, 1.0};
  const Seed seed{12, 3};
  CHECK(sample_composed(mp, seed) == intersection_graph(sample_uniform_rings(mp, seed), 2));

  ModelParams half = mp;
  half.p = 0.5;
  const Graph composed = sample_composed(half, seed);
  CHECK(composed == intersect(intersection_graph(sample_uniform_rings(half, seed), 2), sample_er(80, 0.5, seed)));

  // all rings are the whole pool: the key graph is complete, leaving G(n, p)
  const ModelParams whole{30, 4, 4, 4, 0.4};
  CHECK(sample_composed(whole, seed) == sample_er(30, 0.4, seed));

  CHECK_THROWS_AS(sample_composed({1, 2, 10, 1, 1.0}, seed), ValidationError);
}

TEST_CASE("composed edge frequency matches exact t at n = 1000") {
  const ModelParams mp{1000, 35, 10000, 2, 1.0};
  const double pairs = 1000.0 * 999 / 2;
  std::vector<double> freq;
  for (std::uint64_t t = 0; t < 200; ++t) freq.push_back(sample_composed(mp, {31337, t}).edge_count() / pairs);
  const double t_exact = theory::exact_t_probability(mp);
  CHECK(std::abs(mean_of(freq) - t_exact) < 3 * stderr_of(freq));
}

TEST_CASE("samplers are deterministic in (params, seed)") {
  const ModelParams mp{300, 20, 2000, 2, 0.7};
  CHECK(sample_composed(mp, {5, 9}) == sample_composed(mp, {5, 9}));
  CHECK_FALSE(sample_composed(mp, {5, 9}) == sample_composed(mp, {5, 10}));
  CHECK_FALSE(sample_composed(mp, {5, 9}) == sample_composed(mp, {6, 9}));
  CHECK(sample_binomial_rings(500, 0.02, 50, {1, 2}).rings == sample_binomial_rings(500, 0.02, 50, {1, 2}).rings);
}

TEST_CASE("sample_coupled_pair: x = 0") {
  const ModelParams mp{50, 10, 200, 2, 1.0};
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto pair = sample_coupled_pair(mp, 0.0, {3, t});
    CHECK(pair.coupling_ok);
    for (const auto& r : pair.binomial_rings.rings) CHECK(r.empty());
    CHECK(intersection_graph(pair.binomial_rings, 1).edge_count() == 0);
  }
}

TEST_CASE("sample_coupled_pair: ok trials give per-node containment and a spanning subgraph") {
  const ModelParams mp{100, 12, 150, 1, 1.0};
  int ok = 0, failed = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    // x = K/P puts the ring-size mean at K, so both branches occur
    const auto pair = sample_coupled_pair(mp, 12.0 / 150, {8, t});
    bool contained = true;
    for (std::uint32_t i = 0; i < mp.n; ++i) {
      const auto& b = pair.binomial_rings.rings[i];
      const auto& u = pair.uniform_rings.rings[i];
      check_ring(b, mp.P);
      contained = contained && std::includes(u.begin(), u.end(), b.begin(), b.end());
    }
    CHECK(contained == pair.coupling_ok);
    if (pair.coupling_ok) {
      ++ok;
      const Graph h = intersection_graph(pair.binomial_rings, 1);
      const Graph g = intersection_graph(pair.uniform_rings, 1);
      CHECK(intersect(h, g) == h);
    } else {
      ++failed;
    }
  }
  CHECK(ok + failed == 200);
  CHECK(failed > 0);
}

TEST_CASE("sample_coupled_pair: marginals match the standalone samplers") {
  const ModelParams mp{20000, 8, 20, 1, 1.0};
  const double x = 0.3;
  const auto pair = sample_coupled_pair(mp, x, {21, 0});
  // uniform side is the very same stream as sample_uniform_rings
  CHECK(pair.uniform_rings.rings == sample_uniform_rings(mp, {21, 0}).rings);

  const auto reference = sample_binomial_rings(mp.P, x, mp.n, {22, 0});
  std::vector<double> coupled_sizes, ref_sizes;
  std::vector<int> coupled_keys(mp.P, 0), ref_keys(mp.P, 0);
  for (std::uint32_t i = 0; i < mp.n; ++i) {
    coupled_sizes.push_back(pair.binomial_rings.rings[i].size());
    ref_sizes.push_back(reference.rings[i].size());
    for (auto k : pair.binomial_rings.rings[i]) ++coupled_keys[k];
    for (auto k : reference.rings[i]) ++ref_keys[k];
  }
  // two-sample comparison of ring sizes (Binomial(20, 0.3), variance 4.2)
  const double se_sizes = std::sqrt(2 * 4.2 / mp.n);
  CHECK(std::abs(mean_of(coupled_sizes) - mean_of(ref_sizes)) < 4 * se_sizes);
  CHECK(std::abs(mean_of(coupled_sizes) - mp.P * x) < 4 * std::sqrt(4.2 / mp.n));
  const double se_key = std::sqrt(2 * x * (1 - x) / mp.n);
  for (std::uint32_t k = 0; k < mp.P; ++k) {
    CHECK(std::abs(coupled_keys[k] / double(mp.n) - ref_keys[k] / double(mp.n)) < 4.5 * se_key);
  }
}

TEST_CASE("sample_coupled_pair at n = 1000, K = 100, P = 10^6") {
  const ModelParams mp{1000, 100, 1000000, 2, 1.0};
  const double x = theory::coupling_x(mp.n, mp.K, mp.P);
  int ok = 0;
  for (std::uint64_t t = 0; t < 100; ++t) ok += sample_coupled_pair(mp, x, {1000, t}).coupling_ok;
  CHECK(ok >= 99);
}
