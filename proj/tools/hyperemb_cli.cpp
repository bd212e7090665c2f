// hyperemb command line: gen | train | analyze | eval
//
// Exit codes: 0 success, 1 contract violation, 2 I/O or format error.

#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hyperemb/pipeline.hpp"

namespace {

using hyperemb::RunConfig;

struct ConfigCli {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value config file");
    auto add = [&](const std::string& flag) {
      app->add_option_function<std::string>(
          "--" + flag, [this, flag](const std::string& v) { overrides[flag] = v; },
          "override config key '" + flag + "'");
    };
    for (const char* key :
         {"seed", "dim", "proto-dim", "curvature", "k-aperture", "eps-clamp",
          "curvature-trainable", "target-p", "target-q", "target-r", "branching",
          "tree-depth", "tree-noise", "feature-noise", "mask-ratio", "text-part",
          "batch-size", "steps", "lr", "momentum", "warmup-steps", "temperature", "s-clamp",
          "loss-cent", "loss-entail", "loss-rec", "loss-con", "con-infonce",
          "entail-part", "num-samples", "out-dir"})
      add(key);
  }

  RunConfig resolve() const {
    RunConfig base;
    if (!config_path.empty()) base = RunConfig::from_file(config_path);
    RunConfig cfg = RunConfig::from_kv(overrides, base);
    cfg.validate();
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic multi-modal embedding harness"};
  app.require_subcommand(1);

  ConfigCli gen_cfg, train_cfg;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset directory");
  gen_cfg.attach(gen);
  CLI::App* train = app.add_subcommand("train", "train encoders on synthetic batches");
  train_cfg.attach(train);

  std::string analyze_checkpoint, analyze_lemb, analyze_out = "out";
  std::size_t analyze_batch = hyperemb::kDefaultHyperbolicityBatch;
  std::uint64_t analyze_seed = 42;
  CLI::App* analyze = app.add_subcommand("analyze", "batched delta-hyperbolicity report");
  analyze->add_option("--checkpoint", analyze_checkpoint, "trained checkpoint path");
  analyze->add_option("--embeddings", analyze_lemb, "LEMB embedding file path");
  analyze->add_option("--out-dir", analyze_out, "output directory");
  analyze->add_option("--batch-size", analyze_batch, "hyperbolicity batch size");
  analyze->add_option("--seed", analyze_seed, "shuffle seed");

  std::string eval_checkpoint, eval_out = "out";
  std::uint64_t eval_seed = 42;
  CLI::App* eval = app.add_subcommand("eval", "hierarchy metrics on held-out batches");
  eval->add_option("--checkpoint", eval_checkpoint, "trained checkpoint path")->required();
  eval->add_option("--out-dir", eval_out, "output directory");
  eval->add_option("--seed", eval_seed, "held-out sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      hyperemb::cmd_gen(gen_cfg.resolve());
    } else if (train->parsed()) {
      const RunConfig cfg = train_cfg.resolve();
      const auto result = hyperemb::cmd_train(cfg);
      std::printf("trained %zu steps, joint %.6f -> %.6f\n", result.steps,
                  result.first.joint, result.last.joint);
    } else if (analyze->parsed()) {
      if (analyze_checkpoint.empty() == analyze_lemb.empty()) {
        std::fprintf(stderr, "analyze: pass exactly one of --checkpoint / --embeddings\n");
        return 1;
      }
      const auto rows = analyze_checkpoint.empty()
                            ? hyperemb::cmd_analyze_lemb(analyze_lemb, analyze_out,
                                                         analyze_batch, analyze_seed)
                            : hyperemb::cmd_analyze_checkpoint(analyze_checkpoint, analyze_out,
                                                               analyze_batch, analyze_seed);
      for (const auto& row : rows)
        std::printf("%s: delta_rel %.4f +/- %.4f over %zu batches\n", row.modality.c_str(),
                    row.report.mean_delta_rel, row.report.std_delta_rel,
                    row.report.num_batches);
    } else if (eval->parsed()) {
      const auto m = hyperemb::cmd_eval(eval_checkpoint, eval_out, eval_seed);
      std::printf("containment_rate=%.4f centroid_ordering_ok=%s part_exceeds_whole=%s\n",
                  m.containment_rate, m.centroid_ordering_ok ? "true" : "false",
                  m.part_exceeds_whole ? "true" : "false");
    }
  } catch (const hyperemb::ContractViolation& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const hyperemb::FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
