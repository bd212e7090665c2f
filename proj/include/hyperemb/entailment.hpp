#pragma once

// Entailment-cone geometry on the hyperboloid. Cones emanate outward from
// an embedding; a more specific concept must fall inside the cone of the
// more general one. Roles in the three-way loss are fixed as
// text (outermost) -> point cloud -> image (innermost).

#include <cmath>
#include <vector>

#include "hyperemb/lorentz.hpp"

namespace hyperemb {

// aper(x) = asin(clamp(2K / (sqrt(c) ||x_space||), eps, 1-eps)).
// Implemented by clamping the denominator, which gives identical values and
// gradients without materializing an inf at the exact origin.
template <class S>
S half_aperture(const LorentzPt<S>& x) {
  using std::sqrt;
  using std::asin;
  const double eps = x.cs->eps_clamp();
  const double num = 2.0 * x.cs->k_aperture();
  S den = sqrt(clamp_min(vsqnorm(x.space), 1e-300)) * x.cs->sqrt_c();
  return asin(num / clamp(den, num / (1.0 - eps), num / eps));
}

// ext(x, y) = pi - angle(O, x, y); undefined at the cone apex x = O.
template <class S>
S exterior_angle(const LorentzPt<S>& x, const LorentzPt<S>& y) {
  using std::sqrt;
  using std::acos;
  check_same_space(x, y);
  const double eps = x.cs->eps_clamp();
  const double c = x.cs->c();
  S xnorm_sq = vsqnorm(x.space);
  require(value_of(xnorm_sq) > 0.0, "exterior_angle: x at origin, angle undefined");
  S ci = lorentz_inner(x, y) * c;
  S num = time_component(y) + time_component(x) * ci;
  S den = sqrt(xnorm_sq) * sqrt(clamp_min(ci * ci - 1.0, eps));
  return acos(clamp(num / den, -1.0 + eps, 1.0 - eps));
}

// L_entail = max(0, ext(text, pts) + ext(pts, img) - aper(text) - aper(pts));
// zero exactly when pts sits in the text cone and img in the pts cone.
template <class S>
S entailment_loss(const LorentzPt<S>& text, const LorentzPt<S>& pts,
                  const LorentzPt<S>& img) {
  S slack = exterior_angle(text, pts) + exterior_angle(pts, img) -
            half_aperture(text) - half_aperture(pts);
  return clamp_min(slack, 0.0);
}

// Single-edge variant used for the intra-modal whole -> part relation.
template <class S>
S entailment_pair_loss(const LorentzPt<S>& general, const LorentzPt<S>& specific) {
  return clamp_min(exterior_angle(general, specific) - half_aperture(general), 0.0);
}

// Mean entailment loss over index-aligned modality batches.
template <class S>
S entailment_loss_batch(const std::vector<LorentzPt<S>>& text,
                        const std::vector<LorentzPt<S>>& pts,
                        const std::vector<LorentzPt<S>>& img) {
  require(!text.empty() && text.size() == pts.size() && pts.size() == img.size(),
          "entailment_loss_batch: batch size mismatch");
  S acc = entailment_loss(text[0], pts[0], img[0]);
  for (std::size_t i = 1; i < text.size(); ++i)
    acc = acc + entailment_loss(text[i], pts[i], img[i]);
  return acc * (1.0 / static_cast<double>(text.size()));
}

}  // namespace hyperemb
