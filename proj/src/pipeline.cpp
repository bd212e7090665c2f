#include "hyperemb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "hyperemb/entailment.hpp"
#include "hyperemb/io.hpp"

namespace fs = std::filesystem;

namespace hyperemb {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create directory: " + dir);
}

std::vector<ModalitySample> holdout_batchset(const RunConfig& cfg, std::uint64_t salt) {
  ConceptTree tree =
      generate_tree(cfg.branching, cfg.tree_depth, cfg.tree_noise, cfg.seed, cfg.proto_dim);
  const SampleOptions opts{cfg.mask_ratio, cfg.feature_noise, cfg.text_part};
  return sample_batch(tree, cfg.num_samples, opts, holdout_seed(cfg.seed, salt));
}

}  // namespace

void cmd_gen(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  ensure_dir(cfg.out_dir + "/pts");

  ConceptTree tree =
      generate_tree(cfg.branching, cfg.tree_depth, cfg.tree_noise, cfg.seed, cfg.proto_dim);

  std::ostringstream tree_csv;
  tree_csv << "id,parent,depth\n";
  std::vector<std::vector<double>> protos;
  for (const auto& n : tree.nodes) {
    tree_csv << n.id << "," << n.parent << "," << n.depth << "\n";
    protos.push_back(n.proto);
  }
  write_text_file(cfg.out_dir + "/tree.csv", tree_csv.str());
  write_lemb(cfg.out_dir + "/prototypes.lemb", lemb_from_rows(protos, cfg.curvature));

  const SampleOptions opts{cfg.mask_ratio, cfg.feature_noise, cfg.text_part};
  const auto samples = sample_batch(tree, cfg.num_samples, opts, cfg.seed + 1);

  std::vector<std::vector<double>> text_rows, img_rows;
  std::ostringstream samples_csv;
  samples_csv << "index,concept_id\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    text_rows.push_back(samples[i].text_feat);
    img_rows.push_back(samples[i].img_feat);
    samples_csv << i << "," << samples[i].concept_id << "\n";
    char name[64];
    std::snprintf(name, sizeof(name), "/pts/sample_%05zu.bin", i);
    write_pointset(cfg.out_dir + name, samples[i].pts_raw);
    std::snprintf(name, sizeof(name), "/pts/part_%05zu.bin", i);
    write_pointset(cfg.out_dir + name, samples[i].pts_part_raw);
  }
  write_text_file(cfg.out_dir + "/samples.csv", samples_csv.str());
  write_lemb(cfg.out_dir + "/text.lemb", lemb_from_rows(text_rows, cfg.curvature));
  write_lemb(cfg.out_dir + "/img.lemb", lemb_from_rows(img_rows, cfg.curvature));
}

TrainResult cmd_train(const RunConfig& cfg) {
  cfg.validate();
  ensure_dir(cfg.out_dir);
  ConceptTree tree =
      generate_tree(cfg.branching, cfg.tree_depth, cfg.tree_noise, cfg.seed, cfg.proto_dim);
  Model model(cfg);
  TrainResult result = train(model, tree, cfg);
  save_checkpoint(cfg.out_dir + "/checkpoint.bin", model, cfg, cfg.steps);
  write_text_file(cfg.out_dir + "/metrics.csv", "step,term_name,value\n" + result.metrics_log);
  if (cfg.steps > 0 && !(result.last.joint < result.first.joint))
    throw ContractViolation("train: joint loss did not decrease over the run");
  return result;
}

namespace {

void write_analyze_outputs(const std::vector<AnalyzeRow>& rows, const std::string& out_dir) {
  ensure_dir(out_dir);
  std::ostringstream report;
  report << "modality,mean_delta_rel,std_delta_rel,num_batches,batch_size\n";
  for (const auto& row : rows) {
    report << row.modality << "," << fmt(row.report.mean_delta_rel) << ","
           << fmt(row.report.std_delta_rel) << "," << row.report.num_batches << ","
           << row.report.batch_size << "\n";
    std::ostringstream per_batch;
    per_batch << "batch_index,delta,diam,delta_rel\n";
    for (std::size_t b = 0; b < row.report.batches.size(); ++b) {
      const auto& bd = row.report.batches[b];
      per_batch << b << "," << fmt(bd.delta) << "," << fmt(bd.diam) << ","
                << fmt(bd.delta_rel) << "\n";
    }
    write_text_file(out_dir + "/batches_" + row.modality + ".csv", per_batch.str());
  }
  write_text_file(out_dir + "/hyperbolicity.csv", report.str());
}

}  // namespace

std::vector<AnalyzeRow> cmd_analyze_checkpoint(const std::string& checkpoint_path,
                                               const std::string& out_dir,
                                               std::size_t batch_size, std::uint64_t seed) {
  LoadedCheckpoint lc = load_checkpoint(checkpoint_path);
  const auto samples = holdout_batchset(lc.config, seed);

  std::vector<LorentzPoint> txt, img, pts, part;
  for (const auto& m : samples) {
    txt.push_back(lc.model->embed_text(m));
    img.push_back(lc.model->embed_image(m));
    pts.push_back(lc.model->embed_pts(m));
    part.push_back(lc.model->embed_pts_part(m));
  }

  std::vector<AnalyzeRow> rows;
  rows.push_back({"text", batched_hyperbolicity(txt, batch_size, seed)});
  rows.push_back({"image", batched_hyperbolicity(img, batch_size, seed)});
  rows.push_back({"pts", batched_hyperbolicity(pts, batch_size, seed)});
  rows.push_back({"pts_part", batched_hyperbolicity(part, batch_size, seed)});
  write_analyze_outputs(rows, out_dir);
  return rows;
}

std::vector<AnalyzeRow> cmd_analyze_lemb(const std::string& lemb_path,
                                         const std::string& out_dir,
                                         std::size_t batch_size, std::uint64_t seed) {
  const LembData data = read_lemb(lemb_path);
  const CurvatureSpace cs(data.curvature);
  std::vector<AnalyzeRow> rows;
  const std::string modality = fs::path(lemb_path).stem().string();
  rows.push_back({modality, batched_hyperbolicity_matrix(data.to_rows(), /*euclidean=*/false,
                                                         &cs, batch_size, seed)});
  write_analyze_outputs(rows, out_dir);
  return rows;
}

EvalMetrics cmd_eval(const std::string& checkpoint_path, const std::string& out_dir,
                     std::uint64_t seed) {
  LoadedCheckpoint lc = load_checkpoint(checkpoint_path);
  require(lc.step > 0, "eval: checkpoint is untrained (step 0)");
  ensure_dir(out_dir);
  const auto samples = holdout_batchset(lc.config, seed + 1);

  std::vector<LorentzPoint> txt, img, pts, part;
  for (const auto& m : samples) {
    txt.push_back(lc.model->embed_text(m));
    img.push_back(lc.model->embed_image(m));
    pts.push_back(lc.model->embed_pts(m));
    part.push_back(lc.model->embed_pts_part(m));
  }

  EvalMetrics em;
  em.centroid_d_pts = distance_to_origin(einstein_midpoint(pts));
  em.centroid_d_txt = distance_to_origin(einstein_midpoint(txt));
  em.centroid_d_img = distance_to_origin(einstein_midpoint(img));
  em.centroid_ordering_ok =
      em.centroid_d_pts > em.centroid_d_txt && em.centroid_d_txt > em.centroid_d_img;

  std::size_t contained = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (entailment_loss(txt[i], pts[i], img[i]) == 0.0) ++contained;
  em.containment_rate = static_cast<double>(contained) / static_cast<double>(samples.size());

  auto mean_dist = [](const std::vector<LorentzPoint>& ps) {
    double acc = 0.0;
    for (const auto& p : ps) acc += distance_to_origin(p);
    return acc / static_cast<double>(ps.size());
  };
  em.part_mean_dist = mean_dist(part);
  em.whole_mean_dist = mean_dist(pts);
  em.part_exceeds_whole = em.part_mean_dist > em.whole_mean_dist;

  // distance-to-origin histograms, shared bins across modalities
  double max_d = 0.0;
  const std::vector<std::pair<std::string, const std::vector<LorentzPoint>*>> mods = {
      {"text", &txt}, {"image", &img}, {"pts", &pts}, {"pts_part", &part}};
  for (const auto& [name, ps] : mods)
    for (const auto& p : *ps) max_d = std::max(max_d, distance_to_origin(p));
  const std::size_t nbins = 24;
  const double width = max_d > 0.0 ? max_d / static_cast<double>(nbins) : 1.0;
  std::ostringstream hist;
  hist << "modality,bin_left,bin_right,count\n";
  for (const auto& [name, ps] : mods) {
    std::vector<std::size_t> counts(nbins, 0);
    for (const auto& p : *ps) {
      auto bin = static_cast<std::size_t>(distance_to_origin(p) / width);
      counts[std::min(bin, nbins - 1)]++;
    }
    for (std::size_t b = 0; b < nbins; ++b)
      hist << name << "," << fmt(width * static_cast<double>(b)) << ","
           << fmt(width * static_cast<double>(b + 1)) << "," << counts[b] << "\n";
  }
  write_text_file(out_dir + "/distance_hist.csv", hist.str());

  std::ostringstream metrics;
  metrics << "centroid_d_pts=" << fmt(em.centroid_d_pts) << "\n"
          << "centroid_d_txt=" << fmt(em.centroid_d_txt) << "\n"
          << "centroid_d_img=" << fmt(em.centroid_d_img) << "\n"
          << "centroid_ordering_ok=" << (em.centroid_ordering_ok ? "true" : "false") << "\n"
          << "containment_rate=" << fmt(em.containment_rate) << "\n"
          << "part_mean_dist=" << fmt(em.part_mean_dist) << "\n"
          << "whole_mean_dist=" << fmt(em.whole_mean_dist) << "\n"
          << "part_exceeds_whole=" << (em.part_exceeds_whole ? "true" : "false") << "\n"
          << "std_convention=population\n";
  write_text_file(out_dir + "/hierarchy_metrics.txt", metrics.str());
  return em;
}

}  // namespace hyperemb
