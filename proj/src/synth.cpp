#include "hyperemb/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hyperemb {

std::vector<int> ConceptTree::leaf_ids() const {
  std::vector<bool> has_child(nodes.size(), false);
  for (const auto& n : nodes)
    if (n.parent >= 0) has_child[static_cast<std::size_t>(n.parent)] = true;
  std::vector<int> out;
  for (const auto& n : nodes)
    if (!has_child[static_cast<std::size_t>(n.id)]) out.push_back(n.id);
  return out;
}

std::vector<int> ConceptTree::ancestor_chain(int id) const {
  std::vector<int> chain;
  int cur = id;
  while (cur >= 0) {
    chain.push_back(cur);
    cur = nodes[static_cast<std::size_t>(cur)].parent;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

ConceptTree generate_tree(std::size_t branching, std::size_t depth, double noise,
                          std::uint64_t seed, std::size_t proto_dim) {
  require(branching >= 2, "generate_tree: branching must be >= 2");
  require(depth >= 2, "generate_tree: depth must be >= 2");
  require(proto_dim >= 1, "generate_tree: proto_dim must be >= 1");

  ConceptTree tree;
  tree.branching = branching;
  tree.depth = depth;
  tree.seed = seed;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  TreeNode root;
  root.id = 0;
  root.parent = -1;
  root.depth = 0;
  root.proto.resize(proto_dim);
  for (auto& v : root.proto) v = gauss(rng);
  tree.nodes.push_back(std::move(root));

  std::size_t level_begin = 0, level_end = 1;
  for (std::size_t level = 1; level < depth; ++level) {
    const double level_noise = noise * std::pow(0.5, static_cast<double>(level - 1));
    const std::size_t next_begin = tree.nodes.size();
    for (std::size_t p = level_begin; p < level_end; ++p) {
      for (std::size_t b = 0; b < branching; ++b) {
        TreeNode child;
        child.id = static_cast<int>(tree.nodes.size());
        child.parent = tree.nodes[p].id;
        child.depth = static_cast<int>(level);
        child.proto = tree.nodes[p].proto;
        for (auto& v : child.proto) v += level_noise * gauss(rng);
        tree.nodes.push_back(std::move(child));
      }
    }
    level_begin = next_begin;
    level_end = tree.nodes.size();
  }
  return tree;
}

std::vector<std::vector<double>> tree_graph_distances(const ConceptTree& tree) {
  const std::size_t n = tree.nodes.size();
  // depth-based LCA walk; trees here are small
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      int a = static_cast<int>(i), b = static_cast<int>(j);
      double dist = 0.0;
      while (a != b) {
        const auto& na = tree.nodes[static_cast<std::size_t>(a)];
        const auto& nb = tree.nodes[static_cast<std::size_t>(b)];
        if (na.depth >= nb.depth) {
          a = na.parent;
          dist += 1.0;
        } else {
          b = nb.parent;
          dist += 1.0;
        }
      }
      d[i][j] = dist;
      d[j][i] = dist;
    }
  }
  return d;
}

namespace {

// deterministic prototype -> 3D blob center projection, independent of dim
std::array<double, 3> project3(const std::vector<double>& proto) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < proto.size(); ++j) {
    // fixed quasi-random mixing weights
    const double w = std::sin(0.7 * static_cast<double>(j + 1));
    out[j % 3] += w * proto[j];
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(proto.size() / 3, 1)));
  for (auto& v : out) v *= s;
  return out;
}

PointSet make_cloud(const ConceptTree& tree, int leaf, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::vector<int> chain = tree.ancestor_chain(leaf);
  std::vector<std::array<double, 3>> centers;
  centers.reserve(chain.size());
  for (int id : chain) centers.push_back(project3(tree.nodes[static_cast<std::size_t>(id)].proto));

  PointSet ps;
  ps.points.resize(kPointsPerCloud);
  for (std::size_t k = 0; k < kPointsPerCloud; ++k) {
    const std::size_t a = k % chain.size();
    const double radius = 0.5 * std::pow(0.7, static_cast<double>(a));
    for (int c = 0; c < 3; ++c)
      ps.points[k][static_cast<std::size_t>(c)] =
          centers[a][static_cast<std::size_t>(c)] + radius * gauss(rng);
  }
  return ps;
}

// contiguous part: the mask_ratio fraction nearest the anchor point
PointSet mask_part(const PointSet& whole, double mask_ratio) {
  const std::size_t keep = static_cast<std::size_t>(
      std::lround(mask_ratio * static_cast<double>(whole.size())));
  require(keep >= 1 && keep <= whole.size(), "mask_part: mask_ratio out of range");
  const auto& anchor = whole.points[0];
  std::vector<std::size_t> order(whole.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> dist(whole.size());
  for (std::size_t i = 0; i < whole.size(); ++i) {
    double acc = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = whole.points[i][static_cast<std::size_t>(c)] - anchor[static_cast<std::size_t>(c)];
      acc += d * d;
    }
    dist[i] = acc;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  PointSet part;
  part.points.reserve(keep);
  std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
  std::sort(chosen.begin(), chosen.end());  // keep original ordering
  for (std::size_t i : chosen) part.points.push_back(whole.points[i]);
  return part;
}

}  // namespace

std::vector<ModalitySample> sample_batch(const ConceptTree& tree, std::size_t batch_size,
                                         const SampleOptions& opts, std::uint64_t seed) {
  require(!tree.nodes.empty(), "sample_batch: empty tree");
  require(opts.mask_ratio > 0.0 && opts.mask_ratio < 1.0,
          "sample_batch: mask_ratio must be in (0, 1)");
  const std::vector<int> leaves = tree.leaf_ids();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, leaves.size() - 1);

  std::vector<ModalitySample> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < batch_size; ++i) {
    ModalitySample s;
    s.concept_id = leaves[pick(rng)];
    const auto& proto = tree.nodes[static_cast<std::size_t>(s.concept_id)].proto;
    s.text_feat = proto;
    s.img_feat = proto;
    for (auto& v : s.text_feat) v += opts.feature_noise * gauss(rng);
    for (auto& v : s.img_feat) v += opts.feature_noise * gauss(rng);
    if (opts.text_part) {
      s.text_part_feat = s.text_feat;
      for (std::size_t j = s.text_part_feat.size() / 2; j < s.text_part_feat.size(); ++j)
        s.text_part_feat[j] = 0.0;
    }
    s.pts_raw = make_cloud(tree, s.concept_id, rng);
    s.pts_part_raw = mask_part(s.pts_raw, opts.mask_ratio);
    batch.push_back(std::move(s));
  }
  return batch;
}

std::vector<double> pooled_point_features(const PointSet& ps, std::size_t feat_dim) {
  require(ps.size() > 0, "pooled_point_features: empty point set");
  std::vector<double> pooled(feat_dim, 0.0);
  for (const auto& p : ps.points) {
    const double x = p[0], y = p[1], z = p[2];
    const double basis[10] = {x, y, z, x * x, y * y, z * z, x * y, y * z, z * x,
                              x * x + y * y + z * z};
    for (std::size_t j = 0; j < feat_dim; ++j) {
      const double scale = 1.0 / (1.0 + static_cast<double>(j / 10));
      pooled[j] += scale * basis[j % 10];
    }
  }
  for (auto& v : pooled) v /= static_cast<double>(ps.size());
  return pooled;
}

ToyEncoder::ToyEncoder(std::string tag, std::size_t out, std::size_t in, std::uint64_t seed)
    : W(std::move(tag), std::vector<double>(out * in, 0.0)), out_dim(out), in_dim(in) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(in));
  for (auto& w : W.value) w = scale * gauss(rng);
}

std::vector<double> ToyEncoder::apply(const std::vector<double>& feat) const {
  require(feat.size() == in_dim, "ToyEncoder: feature dimension mismatch");
  std::vector<double> out(out_dim, 0.0);
  for (std::size_t i = 0; i < out_dim; ++i)
    out[i] = kernels::dot(W.value.data() + i * in_dim, feat.data(), in_dim);
  return out;
}

std::vector<Var> ToyEncoder::apply(const std::vector<Var>& w_leaves,
                                   const std::vector<double>& feat) const {
  require(feat.size() == in_dim, "ToyEncoder: feature dimension mismatch");
  require(w_leaves.size() == W.size(), "ToyEncoder: weight leaf count mismatch");
  std::vector<Var> out;
  out.reserve(out_dim);
  for (std::size_t i = 0; i < out_dim; ++i) {
    Var acc = w_leaves[i * in_dim] * feat[0];
    for (std::size_t j = 1; j < in_dim; ++j) acc = acc + w_leaves[i * in_dim + j] * feat[j];
    out.push_back(acc);
  }
  return out;
}

LorentzPoint encode(const CurvatureSpace& cs, const ToyEncoder& enc,
                    const std::vector<double>& feat, double log_alpha) {
  return lift(cs, enc.apply(feat), log_alpha);
}

LorentzVarPoint encode(const CurvatureSpace& cs, const ToyEncoder& enc,
                       const std::vector<Var>& w_leaves, const std::vector<double>& feat,
                       Var log_alpha) {
  return lift(cs, enc.apply(w_leaves, feat), log_alpha);
}

}  // namespace hyperemb
