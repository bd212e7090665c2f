#pragma once

// Run configuration: key=value file format, flag overrides, validation.
// Serialization is canonical (fixed key order, max-precision floats) so the
// config hash embedded in checkpoints is stable.

#include <cstdint>
#include <map>
#include <string>

namespace hyperemb {

struct RunConfig {
  std::uint64_t seed = 42;
  std::size_t dim = 16;        // embedding dimension n
  std::size_t proto_dim = 16;  // prototype / feature dimension m
  double curvature = 1.0;
  double k_aperture = 0.1;
  double eps_clamp = 1e-8;
  bool curvature_trainable = false;  // reserved; fixed c is the default

  double target_p = 1.5;  // point-cloud centroid distance target
  double target_q = 1.0;  // text
  double target_r = 0.5;  // image

  std::size_t branching = 3;
  std::size_t tree_depth = 5;
  double tree_noise = 0.5;
  double feature_noise = 0.05;
  double mask_ratio = 0.25;
  bool text_part = false;

  std::size_t batch_size = 128;
  std::size_t steps = 3000;
  double lr = 5e-4;
  double momentum = 0.9;
  std::size_t warmup_steps = 10;
  double temperature = 0.07;
  // Bound on the learned task log-variances s_i. Without it, any loss term
  // that reaches ~0 drives its s_i to -inf and the e^{-s_i} weight explodes,
  // freezing every other objective.
  double s_clamp = 3.0;

  bool loss_cent = true;
  bool loss_entail = true;
  bool loss_rec = true;
  bool loss_con = true;
  bool con_infonce = false;  // add InfoNCE alongside the Smooth-l1 alignment
  bool entail_part = true;   // whole -> part entailment edge for point clouds

  std::size_t num_samples = 512;  // dataset size for gen / analyze / eval
  std::string out_dir = "out";

  void validate() const;
  std::string serialize() const;
  std::uint64_t hash() const;  // FNV-1a of serialize()

  static RunConfig from_file(const std::string& path);
  static RunConfig from_kv(const std::map<std::string, std::string>& kv, RunConfig base);
  static RunConfig from_kv(const std::map<std::string, std::string>& kv) {
    return from_kv(kv, RunConfig{});
  }
};

}  // namespace hyperemb
