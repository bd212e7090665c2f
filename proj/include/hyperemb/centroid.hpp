#pragma once

// Klein-coordinate projections, Einstein midpoints, and the centroid
// ordering regularizer. The Klein model appears only as an internal
// coordinate chart for midpoint computation.

#include <cmath>
#include <vector>

#include "hyperemb/lorentz.hpp"

namespace hyperemb {

template <class S>
struct KleinPt {
  std::vector<S> coords;  // inside the ball c ||k||^2 < 1
  const CurvatureSpace* cs = nullptr;
};

using KleinPoint = KleinPt<double>;

// Targets for the centroid distances to O: pts farthest (p), then text (q),
// then image (r); p > q > r > 0.
struct CentroidTargets {
  double p = 1.5;  // point cloud
  double q = 1.0;  // text
  double r = 0.5;  // image

  void validate() const {
    require(p > q && q > r && r > 0.0, "CentroidTargets: need p > q > r > 0");
  }
};

// k = x.space / (sqrt(c) x.time), the Klein ball of radius 1/sqrt(c); this
// is the chart for which gamma = 1/sqrt(1 - c||k||^2) equals sqrt(c) x.time
// and the ball constraint c||k||^2 < 1 holds for every curvature.
template <class S>
KleinPt<S> to_klein(const LorentzPt<S>& x) {
  S t = time_component(x) * x.cs->sqrt_c();
  KleinPt<S> k;
  k.cs = x.cs;
  k.coords.reserve(x.dim());
  for (const S& s : x.space) k.coords.push_back(s / t);
  return k;
}

template <class S>
S lorentz_factor(const KleinPt<S>& k) {
  using std::sqrt;
  S r2 = vsqnorm(k.coords) * k.cs->c();
  require(value_of(r2) < 1.0, "lorentz_factor: point outside Klein ball");
  return 1.0 / sqrt(1.0 - r2);
}

template <class S>
LorentzPt<S> from_klein(const KleinPt<S>& k) {
  S gamma = lorentz_factor(k);  // also validates the ball constraint
  LorentzPt<S> x;
  x.cs = k.cs;
  x.space.reserve(k.coords.size());
  for (const S& ki : k.coords) x.space.push_back(ki * gamma);
  return x;
}

// Lorentz-factor-weighted Klein average, projected back to the hyperboloid.
template <class S>
LorentzPt<S> einstein_midpoint(const std::vector<LorentzPt<S>>& points) {
  require(!points.empty(), "einstein_midpoint: empty point list");
  for (const auto& p : points) check_same_space(points.front(), p);
  const std::size_t n = points.front().dim();
  KleinPt<S> k0 = to_klein(points[0]);
  S gamma = lorentz_factor(k0);
  std::vector<S> acc;
  acc.reserve(n);
  for (std::size_t d = 0; d < n; ++d) acc.push_back(k0.coords[d] * gamma);
  S gamma_sum = gamma;
  for (std::size_t j = 1; j < points.size(); ++j) {
    KleinPt<S> kj = to_klein(points[j]);
    S gj = lorentz_factor(kj);
    for (std::size_t d = 0; d < n; ++d) acc[d] = acc[d] + kj.coords[d] * gj;
    gamma_sum = gamma_sum + gj;
  }
  KleinPt<S> mid;
  mid.cs = points.front().cs;
  mid.coords.reserve(n);
  for (std::size_t d = 0; d < n; ++d) mid.coords.push_back(acc[d] / gamma_sum);
  return from_klein(mid);
}

// L_cent = (d(O, mid_pts) - p)^2 + (d(O, mid_txt) - q)^2 + (d(O, mid_img) - r)^2.
template <class S>
S centroid_loss(const std::vector<LorentzPt<S>>& text_batch,
                const std::vector<LorentzPt<S>>& img_batch,
                const std::vector<LorentzPt<S>>& pts_batch,
                const CentroidTargets& targets) {
  targets.validate();
  S d_pts = distance_to_origin(einstein_midpoint(pts_batch));
  S d_txt = distance_to_origin(einstein_midpoint(text_batch));
  S d_img = distance_to_origin(einstein_midpoint(img_batch));
  S ep = d_pts - targets.p;
  S eq = d_txt - targets.q;
  S er = d_img - targets.r;
  return ep * ep + eq * eq + er * er;
}

}  // namespace hyperemb
