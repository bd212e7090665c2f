#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hyperemb/hyperbolicity.hpp"
#include "hyperemb/synth.hpp"

using namespace hyperemb;

namespace {

DistanceMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  DistanceMatrix m;
  m.n = rows.size();
  m.d.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) m.at(i, j) = rows[i][j];
  return m;
}

DistanceMatrix path_metric(std::size_t n) {
  DistanceMatrix m;
  m.n = n;
  m.d.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m.at(i, j) = std::fabs(static_cast<double>(i) - static_cast<double>(j));
  return m;
}

DistanceMatrix star_metric(std::size_t leaves) {
  const std::size_t n = leaves + 1;  // node 0 is the hub
  DistanceMatrix m;
  m.n = n;
  m.d.assign(n * n, 2.0);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 0.0;
  for (std::size_t i = 1; i < n; ++i) m.at(0, i) = m.at(i, 0) = 1.0;
  return m;
}

DistanceMatrix c4_metric() {
  DistanceMatrix m;
  m.n = 4;
  m.d.assign(16, 0.0);
  const double d[4][4] = {{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = d[i][j];
  return m;
}

}  // namespace

TEST_CASE("distance matrix construction") {
  const CurvatureSpace cs(1.0);
  const LorentzPoint o = origin(cs, 3);
  const LorentzPoint p = expmap_origin(cs, std::vector<double>{0.6, 0.0, 0.8});

  DistanceMatrix dup = distance_matrix_geodesic({p, p});
  CHECK(dup.at(0, 0) == 0.0);
  CHECK(dup.at(0, 1) < 2e-6);  // acosh floor, not exactly zero

  DistanceMatrix pair = distance_matrix_geodesic({o, p});
  CHECK(pair.at(0, 1) == doctest::Approx(1.0).epsilon(1e-9));  // radial isometry, ||u|| = 1
  CHECK(pair.at(0, 1) == pair.at(1, 0));

  std::mt19937_64 rng(127);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<LorentzPoint> pts;
  for (int i = 0; i < 10; ++i)
    pts.push_back(expmap_origin(cs, std::vector<double>{g(rng), g(rng), g(rng)}));
  DistanceMatrix m = distance_matrix_geodesic(pts);
  m.validate();
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = i + 1; j < 10; ++j)
      CHECK(m.at(i, j) == geodesic_distance(pts[i], pts[j]));

  CHECK_THROWS_AS(distance_matrix_geodesic({p}), ContractViolation);
}

TEST_CASE("DistanceMatrix validation rejects bad matrices") {
  DistanceMatrix m = path_metric(4);
  m.validate();
  DistanceMatrix asym = m;
  asym.at(1, 2) += 0.5;
  CHECK_THROWS_AS(asym.validate(), ContractViolation);
  DistanceMatrix diag = m;
  diag.at(2, 2) = 0.1;
  CHECK_THROWS_AS(diag.validate(), ContractViolation);
}

TEST_CASE("tree metrics are exactly 0-hyperbolic") {
  CHECK(gromov_delta(path_metric(6), 0) == 0.0);
  CHECK(gromov_delta(star_metric(5), 0) == 0.0);
  CHECK(gromov_delta_bruteforce(path_metric(6), 0) == 0.0);
  CHECK(gromov_delta_bruteforce(star_metric(5), 0) == 0.0);

  // random trees up to 64 nodes via the synthetic generator's graph metric
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ConceptTree tree = generate_tree(3, 4, 0.4, seed, 8);  // 40 nodes
    const DistanceMatrix m = from_rows(tree_graph_distances(tree));
    CHECK(m.n <= 64);
    CHECK(gromov_delta(m, 0) == 0.0);
    CHECK(delta_rel(m, 0) == 0.0);
  }
}

TEST_CASE("unit 4-cycle: frozen delta against the brute-force oracle") {
  const DistanceMatrix m = c4_metric();
  const double bf = gromov_delta_bruteforce(m, 0);
  CHECK(gromov_delta(m, 0) == bf);
  CHECK(bf == 1.0);
  CHECK(m.diameter() == 2.0);
  CHECK(delta_rel(m, 0) == 1.0);
}

TEST_CASE("uniform 4-point metric via the oracle") {
  DistanceMatrix m;
  m.n = 4;
  m.d.assign(16, 1.0);
  for (std::size_t i = 0; i < 4; ++i) m.at(i, i) = 0.0;
  CHECK(gromov_delta(m, 0) == gromov_delta_bruteforce(m, 0));
  CHECK(gromov_delta(m, 0) == 0.0);
}

TEST_CASE("max-min product equals brute force exactly, 100 random 32-point instances") {
  std::mt19937_64 rng(131);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<double>> feats(32, std::vector<double>(6));
    for (auto& f : feats)
      for (auto& x : f) x = g(rng);
    const DistanceMatrix m = distance_matrix_euclidean(feats);
    const std::size_t base = trial % 32;
    CHECK(gromov_delta(m, base) == gromov_delta_bruteforce(m, base));
  }
}

TEST_CASE("perturbed tree: small positive, equal across implementations") {
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  DistanceMatrix m = path_metric(16);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = i + 1; j < m.n; ++j) {
      const double perturbed = m.at(i, j) * (1.0 + noise(rng));
      m.at(i, j) = m.at(j, i) = perturbed;
    }
  const double d = gromov_delta(m, 0);
  CHECK(d == gromov_delta_bruteforce(m, 0));
  CHECK(d >= 0.0);
  CHECK(d < 0.2);  // small relative to unit edges
}

TEST_CASE("delta_rel scale invariance and range") {
  std::mt19937_64 rng(139);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<double>> feats(8, std::vector<double>(4));
    for (auto& f : feats)
      for (auto& x : f) x = g(rng);
    DistanceMatrix m = distance_matrix_euclidean(feats);
    const double dr = delta_rel(m, 0);
    CHECK(dr >= 0.0);
    CHECK(dr <= 1.0);
    if (trial < 50) {
      for (const double scale : {1000.0, 1e-3}) {
        DistanceMatrix s = m;
        for (auto& x : s.d) x *= scale;
        CHECK(std::fabs(delta_rel(s, 0) - dr) <= 1e-12 * std::max(dr, 1e-30));
      }
    }
  }

  DistanceMatrix degenerate;
  degenerate.n = 4;
  degenerate.d.assign(16, 0.0);
  CHECK_THROWS_AS(delta_rel(degenerate, 0), ContractViolation);
}

TEST_CASE("batched protocol: determinism and report shape") {
  const CurvatureSpace cs(1.0);
  std::mt19937_64 rng(149);
  std::normal_distribution<double> g(0.0, 0.8);
  std::vector<LorentzPoint> pts;
  for (int i = 0; i < 70; ++i)
    pts.push_back(expmap_origin(cs, std::vector<double>{g(rng), g(rng), g(rng), g(rng)}));

  const HyperbolicityReport a = batched_hyperbolicity(pts, 16, 7);
  const HyperbolicityReport b = batched_hyperbolicity(pts, 16, 7);
  CHECK(a.num_batches == 4);  // 70 / 16, remainder dropped
  CHECK(a.batch_size == 16);
  CHECK(a.basepoint == 0);
  CHECK(a.mean_delta_rel == b.mean_delta_rel);
  CHECK(a.std_delta_rel == b.std_delta_rel);
  REQUIRE(a.batches.size() == b.batches.size());
  for (std::size_t i = 0; i < a.batches.size(); ++i) {
    CHECK(a.batches[i].delta == b.batches[i].delta);
    CHECK(a.batches[i].diam == b.batches[i].diam);
    CHECK(a.batches[i].delta_rel == b.batches[i].delta_rel);
  }

  // population std of the per-batch values
  double mean = 0.0;
  for (const auto& bd : a.batches) mean += bd.delta_rel;
  mean /= static_cast<double>(a.batches.size());
  double var = 0.0;
  for (const auto& bd : a.batches) var += (bd.delta_rel - mean) * (bd.delta_rel - mean);
  var /= static_cast<double>(a.batches.size());
  CHECK(a.mean_delta_rel == doctest::Approx(mean).epsilon(1e-14));
  CHECK(a.std_delta_rel == doctest::Approx(std::sqrt(var)).epsilon(1e-12));

  CHECK_THROWS_AS(batched_hyperbolicity(pts, 2, 7), ContractViolation);
  std::vector<LorentzPoint> few(pts.begin(), pts.begin() + 3);
  CHECK_THROWS_AS(batched_hyperbolicity(few, 16, 7), ContractViolation);
}

TEST_CASE("embedded tree is measurably more hyperbolic than a uniform shell") {
  const CurvatureSpace cs(1.0);
  // balanced binary tree, depth 6 (127 nodes), embedded radially: each node
  // at radius depth * step along a direction that bisects its parent's
  // angular sector in a 2-dim slice
  std::vector<LorentzPoint> tree_pts;
  const double step = 1.5;
  struct Item {
    int depth;
    double lo, hi;
  };
  std::vector<Item> stack{{0, 0.0, 2.0 * M_PI}};
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const double ang = 0.5 * (it.lo + it.hi);
    const double r = step * it.depth;
    tree_pts.push_back(
        expmap_origin(cs, std::vector<double>{r * std::cos(ang), r * std::sin(ang)}));
    if (it.depth < 6) {
      const double mid = 0.5 * (it.lo + it.hi);
      stack.push_back({it.depth + 1, it.lo, mid});
      stack.push_back({it.depth + 1, mid, it.hi});
    }
  }
  REQUIRE(tree_pts.size() == 127);

  std::mt19937_64 rng(151);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  std::vector<LorentzPoint> shell_pts;
  const double shell_r = step * 6.0;
  for (int i = 0; i < 127; ++i) {
    const double ang = u(rng);
    shell_pts.push_back(expmap_origin(
        cs, std::vector<double>{shell_r * std::cos(ang), shell_r * std::sin(ang)}));
  }

  const auto tree_rep = batched_hyperbolicity(tree_pts, 32, 3);
  const auto shell_rep = batched_hyperbolicity(shell_pts, 32, 3);
  CHECK(tree_rep.mean_delta_rel < shell_rep.mean_delta_rel);
}
