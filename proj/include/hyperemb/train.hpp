#pragma once

// Trainable model (three toy encoders, per-modality scales, task weights),
// the SGD training loop with warmup + cosine schedule, and checkpointing.

#include <memory>
#include <string>
#include <vector>

#include "hyperemb/centroid.hpp"
#include "hyperemb/config.hpp"
#include "hyperemb/synth.hpp"

namespace hyperemb {

struct Model {
  CurvatureSpace cs;
  ToyEncoder enc_txt;
  ToyEncoder enc_img;
  ToyEncoder enc_pts;
  Parameter log_alpha_txt;
  Parameter log_alpha_img;
  Parameter log_alpha_pts;
  Parameter s;  // task log-variances: cent, entail, rec, con

  explicit Model(const RunConfig& cfg);

  std::vector<Parameter*> trainable();

  LorentzPoint embed_text(const ModalitySample& m) const;
  LorentzPoint embed_image(const ModalitySample& m) const;
  LorentzPoint embed_pts(const ModalitySample& m) const;
  LorentzPoint embed_pts_part(const ModalitySample& m) const;
};

struct StepLosses {
  double cent = 0.0;
  double entail = 0.0;
  double rec = 0.0;
  double con = 0.0;
  double joint = 0.0;
};

// Builds the joint loss for one batch on `tape` and returns the per-term
// values. If `backprop`, runs backward and accumulates parameter gradients.
StepLosses compute_losses(Model& model, const std::vector<ModalitySample>& batch,
                          const RunConfig& cfg, bool backprop);

struct TrainResult {
  StepLosses first;
  StepLosses last;
  std::string metrics_log;  // lines "step,term_name,value"
  std::size_t steps = 0;
};

TrainResult train(Model& model, const ConceptTree& tree, const RunConfig& cfg);

// Checkpoint: config text + step count + raw parameter values. Reloading
// restores every trainable bit-for-bit.
void save_checkpoint(const std::string& path, const Model& model, const RunConfig& cfg,
                     std::size_t step);

struct LoadedCheckpoint {
  RunConfig config;
  std::unique_ptr<Model> model;
  std::size_t step = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace hyperemb
