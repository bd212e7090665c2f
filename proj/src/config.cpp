#include "hyperemb/config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "hyperemb/errors.hpp"
#include "hyperemb/io.hpp"

namespace hyperemb {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw FormatError("config: bad integer value for " + key + ": '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw FormatError("config: bad boolean value for " + key + ": '" + v + "'");
}

}  // namespace

void RunConfig::validate() const {
  require(dim >= 2, "config: dim must be >= 2");
  require(proto_dim >= 1, "config: proto-dim must be >= 1");
  require(curvature > 0.0, "config: curvature must be positive");
  require(k_aperture > 0.0, "config: k-aperture must be positive");
  require(eps_clamp > 0.0 && eps_clamp < 1e-4, "config: eps-clamp must be in (0, 1e-4)");
  require(target_p > target_q && target_q > target_r && target_r > 0.0,
          "config: centroid targets must satisfy p > q > r > 0");
  require(branching >= 2, "config: branching must be >= 2");
  require(tree_depth >= 2, "config: tree-depth must be >= 2");
  require(mask_ratio > 0.0 && mask_ratio < 1.0, "config: mask-ratio must be in (0, 1)");
  require(batch_size >= 2, "config: batch-size must be >= 2");
  require(lr > 0.0, "config: lr must be positive");
  require(momentum >= 0.0 && momentum < 1.0, "config: momentum must be in [0, 1)");
  require(temperature > 0.0, "config: temperature must be positive");
  require(s_clamp > 0.0, "config: s-clamp must be positive");
  require(num_samples >= batch_size, "config: num-samples must cover one batch");
  require(!out_dir.empty(), "config: out-dir must be set");
}

std::string RunConfig::serialize() const {
  std::ostringstream out;
  out << "seed=" << seed << "\n";
  out << "dim=" << dim << "\n";
  out << "proto-dim=" << proto_dim << "\n";
  out << "curvature=" << fmt_double(curvature) << "\n";
  out << "k-aperture=" << fmt_double(k_aperture) << "\n";
  out << "eps-clamp=" << fmt_double(eps_clamp) << "\n";
  out << "curvature-trainable=" << (curvature_trainable ? "true" : "false") << "\n";
  out << "target-p=" << fmt_double(target_p) << "\n";
  out << "target-q=" << fmt_double(target_q) << "\n";
  out << "target-r=" << fmt_double(target_r) << "\n";
  out << "branching=" << branching << "\n";
  out << "tree-depth=" << tree_depth << "\n";
  out << "tree-noise=" << fmt_double(tree_noise) << "\n";
  out << "feature-noise=" << fmt_double(feature_noise) << "\n";
  out << "mask-ratio=" << fmt_double(mask_ratio) << "\n";
  out << "text-part=" << (text_part ? "true" : "false") << "\n";
  out << "batch-size=" << batch_size << "\n";
  out << "steps=" << steps << "\n";
  out << "lr=" << fmt_double(lr) << "\n";
  out << "momentum=" << fmt_double(momentum) << "\n";
  out << "warmup-steps=" << warmup_steps << "\n";
  out << "temperature=" << fmt_double(temperature) << "\n";
  out << "s-clamp=" << fmt_double(s_clamp) << "\n";
  out << "loss-cent=" << (loss_cent ? "true" : "false") << "\n";
  out << "loss-entail=" << (loss_entail ? "true" : "false") << "\n";
  out << "loss-rec=" << (loss_rec ? "true" : "false") << "\n";
  out << "loss-con=" << (loss_con ? "true" : "false") << "\n";
  out << "con-infonce=" << (con_infonce ? "true" : "false") << "\n";
  out << "entail-part=" << (entail_part ? "true" : "false") << "\n";
  out << "num-samples=" << num_samples << "\n";
  // out-dir is deliberately omitted: it names a location in the environment,
  // not part of the experiment, and the canonical form is embedded in
  // checkpoints that must be byte-identical across runs in different dirs.
  return out.str();
}

std::uint64_t RunConfig::hash() const {
  const std::string s = serialize();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

RunConfig RunConfig::from_kv(const std::map<std::string, std::string>& kv, RunConfig base) {
  RunConfig c = base;
  for (const auto& [key, v] : kv) {
    if (key == "seed") c.seed = parse_u64(key, v);
    else if (key == "dim") c.dim = parse_u64(key, v);
    else if (key == "proto-dim") c.proto_dim = parse_u64(key, v);
    else if (key == "curvature") c.curvature = parse_double(key, v);
    else if (key == "k-aperture") c.k_aperture = parse_double(key, v);
    else if (key == "eps-clamp") c.eps_clamp = parse_double(key, v);
    else if (key == "curvature-trainable") c.curvature_trainable = parse_bool(key, v);
    else if (key == "target-p") c.target_p = parse_double(key, v);
    else if (key == "target-q") c.target_q = parse_double(key, v);
    else if (key == "target-r") c.target_r = parse_double(key, v);
    else if (key == "branching") c.branching = parse_u64(key, v);
    else if (key == "tree-depth") c.tree_depth = parse_u64(key, v);
    else if (key == "tree-noise") c.tree_noise = parse_double(key, v);
    else if (key == "feature-noise") c.feature_noise = parse_double(key, v);
    else if (key == "mask-ratio") c.mask_ratio = parse_double(key, v);
    else if (key == "text-part") c.text_part = parse_bool(key, v);
    else if (key == "batch-size") c.batch_size = parse_u64(key, v);
    else if (key == "steps") c.steps = parse_u64(key, v);
    else if (key == "lr") c.lr = parse_double(key, v);
    else if (key == "momentum") c.momentum = parse_double(key, v);
    else if (key == "warmup-steps") c.warmup_steps = parse_u64(key, v);
    else if (key == "temperature") c.temperature = parse_double(key, v);
    else if (key == "s-clamp") c.s_clamp = parse_double(key, v);
    else if (key == "loss-cent") c.loss_cent = parse_bool(key, v);
    else if (key == "loss-entail") c.loss_entail = parse_bool(key, v);
    else if (key == "loss-rec") c.loss_rec = parse_bool(key, v);
    else if (key == "loss-con") c.loss_con = parse_bool(key, v);
    else if (key == "con-infonce") c.con_infonce = parse_bool(key, v);
    else if (key == "entail-part") c.entail_part = parse_bool(key, v);
    else if (key == "num-samples") c.num_samples = parse_u64(key, v);
    else if (key == "out-dir") c.out_dir = v;
    else throw FormatError("config: unknown key '" + key + "'");
  }
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  const std::string text = read_text_file(path);
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return from_kv(kv);
}

}  // namespace hyperemb
