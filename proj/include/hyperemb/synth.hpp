#pragma once

// Synthetic hierarchical data: a concept tree whose nodes carry prototype
// vectors, three index-aligned modality views per sampled leaf (text-like,
// image-like, point-cloud-like), masked part views, and toy linear
// encoders standing in for the full-scale text/image/point-cloud models.

#include <cstdint>
#include <vector>

#include "hyperemb/losses.hpp"
#include "hyperemb/tape.hpp"

namespace hyperemb {

struct TreeNode {
  int id = 0;
  int parent = -1;  // -1 for the root
  int depth = 0;
  std::vector<double> proto;
};

struct ConceptTree {
  std::vector<TreeNode> nodes;
  std::size_t branching = 0;
  std::size_t depth = 0;  // number of levels; a full tree has (b^d - 1)/(b - 1) nodes
  std::uint64_t seed = 0;

  std::vector<int> leaf_ids() const;
  std::vector<int> ancestor_chain(int id) const;  // root .. id
};

// Child prototypes are bounded-norm perturbations of the parent's, with
// noise shrinking by half per level.
ConceptTree generate_tree(std::size_t branching, std::size_t depth, double noise,
                          std::uint64_t seed, std::size_t proto_dim);

// Graph (shortest-path) distances between all tree nodes, unit edges.
// Used as an exactly-0-hyperbolic reference metric.
std::vector<std::vector<double>> tree_graph_distances(const ConceptTree& tree);

inline constexpr std::size_t kPointsPerCloud = 256;

struct ModalitySample {
  int concept_id = -1;
  std::vector<double> text_feat;
  std::vector<double> img_feat;
  std::vector<double> text_part_feat;  // empty unless enabled
  PointSet pts_raw;
  PointSet pts_part_raw;  // contiguous subset, |part| = mask_ratio * |whole|
};

struct SampleOptions {
  double mask_ratio = 0.25;
  double feature_noise = 0.05;
  bool text_part = false;
};

std::vector<ModalitySample> sample_batch(const ConceptTree& tree, std::size_t batch_size,
                                         const SampleOptions& opts, std::uint64_t seed);

// Per-point polynomial featurization, mean-pooled over the cloud. The pool
// commutes with the linear encoder, so the pooled vector is a constant input
// to the differentiable path.
std::vector<double> pooled_point_features(const PointSet& ps, std::size_t feat_dim);

struct ToyEncoder {
  Parameter W;  // out_dim x in_dim, row-major
  std::size_t out_dim = 0;
  std::size_t in_dim = 0;

  ToyEncoder(std::string tag, std::size_t out, std::size_t in, std::uint64_t seed);

  std::vector<double> apply(const std::vector<double>& feat) const;
  // feat is constant; weight leaves are created by the caller once per tape
  std::vector<Var> apply(const std::vector<Var>& w_leaves,
                         const std::vector<double>& feat) const;
};

LorentzPoint encode(const CurvatureSpace& cs, const ToyEncoder& enc,
                    const std::vector<double>& feat, double log_alpha);

LorentzVarPoint encode(const CurvatureSpace& cs, const ToyEncoder& enc,
                       const std::vector<Var>& w_leaves, const std::vector<double>& feat,
                       Var log_alpha);

}  // namespace hyperemb
