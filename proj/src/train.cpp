#include "hyperemb/train.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hyperemb/entailment.hpp"
#include "hyperemb/io.hpp"

namespace hyperemb {

Model::Model(const RunConfig& cfg)
    : cs(cfg.curvature, cfg.k_aperture, cfg.eps_clamp),
      enc_txt("encoder_txt_W", cfg.dim, cfg.proto_dim, cfg.seed + 101),
      enc_img("encoder_img_W", cfg.dim, cfg.proto_dim, cfg.seed + 202),
      enc_pts("encoder_pts_W", cfg.dim, cfg.proto_dim, cfg.seed + 303),
      log_alpha_txt("log_alpha_txt", std::log(1.0 / std::sqrt(static_cast<double>(cfg.dim)))),
      log_alpha_img("log_alpha_img", std::log(1.0 / std::sqrt(static_cast<double>(cfg.dim)))),
      log_alpha_pts("log_alpha_pts", std::log(1.0 / std::sqrt(static_cast<double>(cfg.dim)))),
      s("s_task_weights", std::vector<double>(4, 0.0)) {
  cfg.validate();
}

std::vector<Parameter*> Model::trainable() {
  return {&enc_txt.W, &enc_img.W, &enc_pts.W,
          &log_alpha_txt, &log_alpha_img, &log_alpha_pts, &s};
}

LorentzPoint Model::embed_text(const ModalitySample& m) const {
  return encode(cs, enc_txt, m.text_feat, log_alpha_txt.value[0]);
}
LorentzPoint Model::embed_image(const ModalitySample& m) const {
  return encode(cs, enc_img, m.img_feat, log_alpha_img.value[0]);
}
LorentzPoint Model::embed_pts(const ModalitySample& m) const {
  return encode(cs, enc_pts, pooled_point_features(m.pts_raw, enc_pts.in_dim),
                log_alpha_pts.value[0]);
}
LorentzPoint Model::embed_pts_part(const ModalitySample& m) const {
  return encode(cs, enc_pts, pooled_point_features(m.pts_part_raw, enc_pts.in_dim),
                log_alpha_pts.value[0]);
}

StepLosses compute_losses(Model& model, const std::vector<ModalitySample>& batch,
                          const RunConfig& cfg, bool backprop) {
  require(!batch.empty(), "compute_losses: empty batch");
  Tape tape;
  const CurvatureSpace& cs = model.cs;

  const std::vector<Var> w_txt = tape.leaves(model.enc_txt.W);
  const std::vector<Var> w_img = tape.leaves(model.enc_img.W);
  const std::vector<Var> w_pts = tape.leaves(model.enc_pts.W);
  const Var a_txt = tape.leaf(model.log_alpha_txt, 0);
  const Var a_img = tape.leaf(model.log_alpha_img, 0);
  const Var a_pts = tape.leaf(model.log_alpha_pts, 0);

  EmbeddingBatchT<Var> emb;
  for (const auto& m : batch) {
    emb.text.push_back(encode(cs, model.enc_txt, w_txt, m.text_feat, a_txt));
    emb.image.push_back(encode(cs, model.enc_img, w_img, m.img_feat, a_img));
    emb.pts.push_back(encode(cs, model.enc_pts, w_pts,
                             pooled_point_features(m.pts_raw, model.enc_pts.in_dim), a_pts));
    if (cfg.entail_part)
      emb.pts_part.push_back(
          encode(cs, model.enc_pts, w_pts,
                 pooled_point_features(m.pts_part_raw, model.enc_pts.in_dim), a_pts));
  }

  std::vector<std::pair<std::string, Var>> terms;
  std::vector<Var> weights;
  StepLosses out;

  if (cfg.loss_cent) {
    Var cent = centroid_loss(emb.text, emb.image, emb.pts,
                             CentroidTargets{cfg.target_p, cfg.target_q, cfg.target_r});
    out.cent = cent.val();
    terms.emplace_back("cent", cent);
    weights.push_back(tape.leaf(model.s, 0));
  }
  if (cfg.loss_entail) {
    Var entail = entailment_loss_batch(emb.text, emb.pts, emb.image);
    if (cfg.entail_part) {
      std::optional<Var> part_acc;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        Var t = entailment_pair_loss(emb.pts[i], emb.pts_part[i]);
        part_acc = part_acc ? *part_acc + t : t;
      }
      entail = entail + *part_acc * (1.0 / static_cast<double>(batch.size()));
    }
    out.entail = entail.val();
    terms.emplace_back("entail", entail);
    weights.push_back(tape.leaf(model.s, 1));
  }
  if (cfg.loss_rec) {
    // desk-scale stand-in: Chamfer between the masked part view and the
    // full cloud, averaged over the batch (no learned decoder)
    double rec_val = 0.0;
    for (const auto& m : batch) rec_val += chamfer_recon(m.pts_part_raw, m.pts_raw);
    rec_val /= static_cast<double>(batch.size());
    out.rec = rec_val;
    terms.emplace_back("rec", tape.constant(rec_val));
    weights.push_back(tape.leaf(model.s, 2));
  }
  if (cfg.loss_con) {
    Var con = recon_con_loss(emb);
    if (cfg.con_infonce) {
      con = con + infonce_lorentz(emb.pts, emb.text, cfg.temperature) +
            infonce_lorentz(emb.pts, emb.image, cfg.temperature);
    }
    out.con = con.val();
    terms.emplace_back("con", con);
    weights.push_back(tape.leaf(model.s, 3));
  }

  require(!terms.empty(), "compute_losses: all loss terms disabled");
  Var joint = joint_loss(terms, weights);
  out.joint = joint.val();
  if (backprop) tape.backward(joint);
  return out;
}

namespace {

double lr_at(const RunConfig& cfg, std::size_t step) {
  if (cfg.warmup_steps > 0 && step < cfg.warmup_steps)
    return cfg.lr * static_cast<double>(step + 1) / static_cast<double>(cfg.warmup_steps);
  const std::size_t total = cfg.steps > cfg.warmup_steps ? cfg.steps - cfg.warmup_steps : 1;
  const double t = static_cast<double>(step - cfg.warmup_steps) / static_cast<double>(total);
  return cfg.lr * 0.5 * (1.0 + std::cos(3.14159265358979323846 * t));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void log_step(std::ostringstream& log, std::size_t step, const StepLosses& l,
              const RunConfig& cfg, const Model& model) {
  if (cfg.loss_cent) log << step << ",cent," << fmt(l.cent) << "\n";
  if (cfg.loss_entail) log << step << ",entail," << fmt(l.entail) << "\n";
  if (cfg.loss_rec) log << step << ",rec," << fmt(l.rec) << "\n";
  if (cfg.loss_con) log << step << ",con," << fmt(l.con) << "\n";
  log << step << ",joint," << fmt(l.joint) << "\n";
  for (std::size_t i = 0; i < model.s.size(); ++i)
    log << step << ",s" << i << "," << fmt(model.s.value[i]) << "\n";
}

}  // namespace

TrainResult train(Model& model, const ConceptTree& tree, const RunConfig& cfg) {
  cfg.validate();
  TrainResult result;
  result.steps = cfg.steps;
  std::ostringstream log;

  const SampleOptions opts{cfg.mask_ratio, cfg.feature_noise, cfg.text_part};
  std::vector<Parameter*> params = model.trainable();
  std::vector<std::vector<double>> velocity;
  for (auto* p : params) velocity.emplace_back(p->size(), 0.0);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const auto batch =
        sample_batch(tree, cfg.batch_size, opts, cfg.seed * 1000003ull + step);
    for (auto* p : params) p->zero_grad();
    StepLosses losses = compute_losses(model, batch, cfg, /*backprop=*/true);
    if (!std::isfinite(losses.joint))
      throw ContractViolation("train: non-finite joint loss at step " + std::to_string(step));
    if (step == 0) result.first = losses;
    result.last = losses;
    log_step(log, step, losses, cfg, model);

    const double lr = lr_at(cfg, step);
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
      Parameter& p = *params[pi];
      for (std::size_t e = 0; e < p.size(); ++e) {
        velocity[pi][e] = cfg.momentum * velocity[pi][e] + p.grad[e];
        p.value[e] -= lr * velocity[pi][e];
      }
    }
    for (std::size_t e = 0; e < model.s.size(); ++e) {
      double& sv = model.s.value[e];
      if (sv > cfg.s_clamp) sv = cfg.s_clamp;
      if (sv < -cfg.s_clamp) sv = -cfg.s_clamp;
    }
  }
  result.metrics_log = log.str();
  return result;
}

namespace {

constexpr char kCheckpointMagic[4] = {'L', 'C', 'K', 'P'};

void write_param(std::ofstream& out, const Parameter& p) {
  const std::uint32_t name_len = static_cast<std::uint32_t>(p.tag.size());
  out.write(reinterpret_cast<const char*>(&name_len), 4);
  out.write(p.tag.data(), name_len);
  const std::uint64_t count = p.value.size();
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(p.value.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
}

void read_param(std::ifstream& in, const std::string& path, Parameter& p) {
  std::uint32_t name_len = 0;
  in.read(reinterpret_cast<char*>(&name_len), 4);
  std::string name(name_len, '\0');
  in.read(name.data(), name_len);
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), 8);
  if (!in || name != p.tag || count != p.value.size())
    throw FormatError(path + ": checkpoint parameter mismatch, expected " + p.tag);
  in.read(reinterpret_cast<char*>(p.value.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw FormatError(path + ": truncated checkpoint");
}

}  // namespace

void save_checkpoint(const std::string& path, const Model& model, const RunConfig& cfg,
                     std::size_t step) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open for writing: " + path);
  out.write(kCheckpointMagic, 4);
  const std::uint32_t version = 1;
  out.write(reinterpret_cast<const char*>(&version), 4);
  const std::uint64_t cfg_hash = cfg.hash();
  out.write(reinterpret_cast<const char*>(&cfg_hash), 8);
  const std::uint64_t step64 = step;
  out.write(reinterpret_cast<const char*>(&step64), 8);
  const std::string cfg_text = cfg.serialize();
  const std::uint64_t cfg_len = cfg_text.size();
  out.write(reinterpret_cast<const char*>(&cfg_len), 8);
  out.write(cfg_text.data(), static_cast<std::streamsize>(cfg_len));
  write_param(out, model.enc_txt.W);
  write_param(out, model.enc_img.W);
  write_param(out, model.enc_pts.W);
  write_param(out, model.log_alpha_txt);
  write_param(out, model.log_alpha_img);
  write_param(out, model.log_alpha_pts);
  write_param(out, model.s);
  if (!out) throw FormatError("write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0)
    throw FormatError(path + ": bad checkpoint magic at byte offset 0");
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  if (version != 1)
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
  std::uint64_t cfg_hash = 0, step = 0, cfg_len = 0;
  in.read(reinterpret_cast<char*>(&cfg_hash), 8);
  in.read(reinterpret_cast<char*>(&step), 8);
  in.read(reinterpret_cast<char*>(&cfg_len), 8);
  std::string cfg_text(cfg_len, '\0');
  in.read(cfg_text.data(), static_cast<std::streamsize>(cfg_len));
  if (!in) throw FormatError(path + ": truncated checkpoint header");

  // reuse the config file parser on the embedded text
  std::map<std::string, std::string> kv;
  std::istringstream cfg_in(cfg_text);
  std::string line;
  while (std::getline(cfg_in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(path + ": malformed embedded config");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  LoadedCheckpoint lc;
  lc.config = RunConfig::from_kv(kv);
  if (lc.config.hash() != cfg_hash)
    throw FormatError(path + ": embedded config does not match its hash");
  lc.step = step;
  lc.model = std::make_unique<Model>(lc.config);
  read_param(in, path, lc.model->enc_txt.W);
  read_param(in, path, lc.model->enc_img.W);
  read_param(in, path, lc.model->enc_pts.W);
  read_param(in, path, lc.model->log_alpha_txt);
  read_param(in, path, lc.model->log_alpha_img);
  read_param(in, path, lc.model->log_alpha_pts);
  read_param(in, path, lc.model->s);
  return lc;
}

}  // namespace hyperemb
