#include "hyperemb/losses.hpp"

namespace hyperemb {

namespace {

struct Soa3 {
  std::vector<double> x, y, z;

  explicit Soa3(const std::vector<std::array<double, 3>>& pts) {
    x.reserve(pts.size());
    y.reserve(pts.size());
    z.reserve(pts.size());
    for (const auto& p : pts) {
      x.push_back(p[0]);
      y.push_back(p[1]);
      z.push_back(p[2]);
    }
  }
};

}  // namespace

double chamfer_recon(const PointSet& pred, const PointSet& gt) {
  require(pred.size() > 0 && gt.size() > 0, "chamfer_recon: empty point set");
  const Soa3 p(pred.points);
  const Soa3 g(gt.points);
  double fwd = 0.0;
  for (const auto& q : pred.points)
    fwd += kernels::min_sqdist3(q[0], q[1], q[2], g.x.data(), g.y.data(), g.z.data(),
                                gt.size());
  double bwd = 0.0;
  for (const auto& q : gt.points)
    bwd += kernels::min_sqdist3(q[0], q[1], q[2], p.x.data(), p.y.data(), p.z.data(),
                                pred.size());
  return fwd / static_cast<double>(pred.size()) + bwd / static_cast<double>(gt.size());
}

Var chamfer_recon(Tape& tape, const std::vector<std::array<Var, 3>>& pred,
                  const PointSet& gt) {
  require(!pred.empty() && gt.size() > 0, "chamfer_recon: empty point set");

  std::vector<std::array<double, 3>> pred_vals;
  pred_vals.reserve(pred.size());
  for (const auto& q : pred)
    pred_vals.push_back({q[0].val(), q[1].val(), q[2].val()});
  const Soa3 p(pred_vals);
  const Soa3 g(gt.points);

  auto sqdist_to_gt = [&](const std::array<Var, 3>& q, std::size_t j) {
    Var dx = q[0] - gt.points[j][0];
    Var dy = q[1] - gt.points[j][1];
    Var dz = q[2] - gt.points[j][2];
    return dx * dx + dy * dy + dz * dz;
  };

  std::optional<Var> fwd;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::size_t j = kernels::argmin_sqdist3(p.x[i], p.y[i], p.z[i], g.x.data(),
                                                  g.y.data(), g.z.data(), gt.size());
    Var term = sqdist_to_gt(pred[i], j);
    fwd = fwd ? *fwd + term : term;
  }
  std::optional<Var> bwd;
  for (std::size_t j = 0; j < gt.size(); ++j) {
    const auto& q = gt.points[j];
    const std::size_t i = kernels::argmin_sqdist3(q[0], q[1], q[2], p.x.data(), p.y.data(),
                                                  p.z.data(), pred.size());
    Var term = sqdist_to_gt(pred[i], j);
    bwd = bwd ? *bwd + term : term;
  }
  (void)tape;
  return *fwd * (1.0 / static_cast<double>(pred.size())) +
         *bwd * (1.0 / static_cast<double>(gt.size()));
}

}  // namespace hyperemb
