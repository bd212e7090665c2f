#pragma once

// Command implementations behind the CLI subcommands. Everything is
// deterministic given the config seed; outputs carry no timestamps so
// repeated runs are byte-identical.

#include <string>
#include <vector>

#include "hyperemb/hyperbolicity.hpp"
#include "hyperemb/train.hpp"

namespace hyperemb {

// gen: writes tree.csv, prototypes.lemb, text.lemb, img.lemb, samples.csv
// and per-sample raw point sets under <out-dir>/pts/.
void cmd_gen(const RunConfig& cfg);

// train: builds the tree, trains, writes checkpoint.bin and metrics.csv.
// Returns the train result (first/last losses) for callers that assert on it.
TrainResult cmd_train(const RunConfig& cfg);

// analyze: per-modality batched delta_rel report written to
// <out-dir>/hyperbolicity.csv (+ per-batch CSVs). Either over a trained
// checkpoint (fresh held-out samples per modality) or over a single LEMB file.
struct AnalyzeRow {
  std::string modality;
  HyperbolicityReport report;
};
std::vector<AnalyzeRow> cmd_analyze_checkpoint(const std::string& checkpoint_path,
                                               const std::string& out_dir,
                                               std::size_t batch_size, std::uint64_t seed);
std::vector<AnalyzeRow> cmd_analyze_lemb(const std::string& lemb_path,
                                         const std::string& out_dir,
                                         std::size_t batch_size, std::uint64_t seed);

// eval: hierarchy metrics on held-out batches.
struct EvalMetrics {
  double centroid_d_pts = 0.0;
  double centroid_d_txt = 0.0;
  double centroid_d_img = 0.0;
  bool centroid_ordering_ok = false;  // d_pts > d_txt > d_img
  double containment_rate = 0.0;      // fraction of triples with entailment loss 0
  double part_mean_dist = 0.0;
  double whole_mean_dist = 0.0;
  bool part_exceeds_whole = false;
};
EvalMetrics cmd_eval(const std::string& checkpoint_path, const std::string& out_dir,
                     std::uint64_t seed);

// held-out seed derivation shared by analyze/eval
inline std::uint64_t holdout_seed(std::uint64_t base, std::uint64_t salt) {
  return base * 2654435761ull + 0x9e3779b97f4a7c15ull + salt;
}

}  // namespace hyperemb
