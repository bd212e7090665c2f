#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hyperemb/hyperbolicity.hpp"
#include "hyperemb/synth.hpp"

using namespace hyperemb;

TEST_CASE("tree generation: counts, determinism, contracts") {
  const ConceptTree t = generate_tree(2, 3, 0.5, 11, 8);
  CHECK(t.nodes.size() == 7);  // 1 + 2 + 4
  CHECK(t.nodes[0].parent == -1);
  for (const auto& n : t.nodes) {
    if (n.parent >= 0) CHECK(t.nodes[n.parent].depth == n.depth - 1);
    CHECK(n.proto.size() == 8);
  }
  CHECK(t.leaf_ids().size() == 4);

  const ConceptTree t2 = generate_tree(2, 3, 0.5, 11, 8);
  for (std::size_t i = 0; i < t.nodes.size(); ++i)
    CHECK(t.nodes[i].proto == t2.nodes[i].proto);

  CHECK_THROWS_AS(generate_tree(1, 3, 0.5, 11, 8), ContractViolation);
  CHECK_THROWS_AS(generate_tree(2, 1, 0.5, 11, 8), ContractViolation);
}

TEST_CASE("ancestor chains run root to node") {
  const ConceptTree t = generate_tree(3, 4, 0.5, 13, 4);
  for (int leaf : t.leaf_ids()) {
    const auto chain = t.ancestor_chain(leaf);
    CHECK(chain.front() == 0);
    CHECK(chain.back() == leaf);
    CHECK(chain.size() == 4);  // depth levels 0..3
    for (std::size_t i = 1; i < chain.size(); ++i)
      CHECK(t.nodes[chain[i]].parent == chain[i - 1]);
  }
}

TEST_CASE("tree graph metric is 0-hyperbolic") {
  const ConceptTree t = generate_tree(2, 4, 0.5, 17, 4);
  const auto rows = tree_graph_distances(t);
  DistanceMatrix m;
  m.n = rows.size();
  m.d.resize(m.n * m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) m.at(i, j) = rows[i][j];
  m.validate();
  CHECK(gromov_delta(m, 0) == 0.0);
  // siblings are 2 apart, root to leaf = depth - 1
  CHECK(rows[0][static_cast<std::size_t>(t.leaf_ids()[0])] == 3.0);
}

TEST_CASE("sampling: masking counts, containment, determinism") {
  const ConceptTree t = generate_tree(3, 4, 0.5, 19, 8);
  SampleOptions opts;  // mask_ratio 0.25
  const auto batch = sample_batch(t, 6, opts, 23);
  REQUIRE(batch.size() == 6);
  const auto leaves = t.leaf_ids();
  for (const auto& s : batch) {
    CHECK(std::count(leaves.begin(), leaves.end(), s.concept_id) == 1);
    CHECK(s.pts_raw.size() == kPointsPerCloud);
    CHECK(s.pts_part_raw.size() == kPointsPerCloud / 4);  // 64 of 256
    CHECK(s.text_feat.size() == 8);
    CHECK(s.img_feat.size() == 8);
    CHECK(s.text_part_feat.empty());

    // exact membership: every part point is one of the whole's points
    std::set<std::array<double, 3>> whole(s.pts_raw.points.begin(), s.pts_raw.points.end());
    for (const auto& p : s.pts_part_raw.points) CHECK(whole.count(p) == 1);
  }

  const auto batch2 = sample_batch(t, 6, opts, 23);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(batch[i].concept_id == batch2[i].concept_id);
    CHECK(batch[i].text_feat == batch2[i].text_feat);
    CHECK(batch[i].pts_raw.points == batch2[i].pts_raw.points);
    CHECK(batch[i].pts_part_raw.points == batch2[i].pts_part_raw.points);
  }

  SampleOptions with_text_part = opts;
  with_text_part.text_part = true;
  const auto batch3 = sample_batch(t, 2, with_text_part, 23);
  CHECK(batch3[0].text_part_feat.size() == 8);
}

TEST_CASE("pooled point features are deterministic and dimension-correct") {
  const ConceptTree t = generate_tree(2, 3, 0.5, 29, 8);
  const auto batch = sample_batch(t, 1, SampleOptions{}, 31);
  const auto f1 = pooled_point_features(batch[0].pts_raw, 8);
  const auto f2 = pooled_point_features(batch[0].pts_raw, 8);
  CHECK(f1.size() == 8);
  CHECK(f1 == f2);
}

TEST_CASE("encoder: zero weights map to the origin") {
  const CurvatureSpace cs(1.0);
  ToyEncoder enc("enc_zero", 4, 6, 37);
  std::fill(enc.W.value.begin(), enc.W.value.end(), 0.0);
  const LorentzPoint p = encode(cs, enc, std::vector<double>{1.0, -2.0, 0.5, 3.0, 0.1, -0.7}, 0.0);
  CHECK(vsqnorm(p.space) == 0.0);
}

TEST_CASE("encoder scale absorption: (2W, alpha/2) = (W, alpha)") {
  const CurvatureSpace cs(1.0);
  ToyEncoder enc("enc_a", 4, 6, 41);
  ToyEncoder enc2 = enc;
  for (auto& w : enc2.W.value) w *= 2.0;
  const std::vector<double> feat{0.3, -0.8, 0.2, 1.1, -0.4, 0.6};
  const double log_alpha = -0.3;
  const LorentzPoint a = encode(cs, enc, feat, log_alpha);
  const LorentzPoint b = encode(cs, enc2, feat, log_alpha - std::log(2.0));
  for (std::size_t d = 0; d < 4; ++d)
    CHECK(a.space[d] == doctest::Approx(b.space[d]).epsilon(1e-12));
}

TEST_CASE("downstream gradients through the encoder pass finite differences") {
  const CurvatureSpace cs(1.0);
  ToyEncoder enc("enc_g", 3, 5, 43);
  Parameter log_alpha("log_alpha", 0.1);
  const std::vector<double> feat{0.9, -0.2, 0.4, 0.8, -0.5};
  const auto report = finite_diff_check(
      "encode_distance_to_origin",
      [&](Tape& t) {
        const LorentzVarPoint p = encode(cs, enc, t.leaves(enc.W), feat, t.leaf(log_alpha, 0));
        return distance_to_origin(p);
      },
      {&enc.W, &log_alpha}, 1e-5);
  CHECK(report.max_rel_error < 1e-4);
}
