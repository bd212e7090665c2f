#pragma once

// Lorentz (hyperboloid) model of hyperbolic space, curvature -c with c > 0.
// Points store only their space components; the time component is always
// recomputed from the hyperboloid constraint, so membership cannot drift.
//
// All geometry is templated over the scalar type: plain double for
// analysis paths, Var for differentiable training paths.

#include <cmath>
#include <vector>

#include "hyperemb/errors.hpp"
#include "hyperemb/kernels.hpp"
#include "hyperemb/tape.hpp"

namespace hyperemb {

// Shared geometric constants: curvature magnitude c (kept in log form so it
// stays positive), entailment-cone boundary constant K and numerical clamp.
class CurvatureSpace {
 public:
  explicit CurvatureSpace(double c, double k_aperture = 0.1, double eps_clamp = 1e-8)
      : log_c_(std::log(c)), k_aperture_(k_aperture), eps_clamp_(eps_clamp) {
    require(c > 0.0 && std::isfinite(c), "CurvatureSpace: c must be positive");
    require(k_aperture > 0.0, "CurvatureSpace: k_aperture must be positive");
    require(eps_clamp > 0.0 && eps_clamp < 1e-4, "CurvatureSpace: eps_clamp outside (0, 1e-4)");
  }

  double c() const { return std::exp(log_c_); }
  double sqrt_c() const { return std::sqrt(c()); }
  double k_aperture() const { return k_aperture_; }
  double eps_clamp() const { return eps_clamp_; }

 private:
  double log_c_;
  double k_aperture_;
  double eps_clamp_;
};

template <class S>
struct LorentzPt {
  std::vector<S> space;
  const CurvatureSpace* cs = nullptr;

  std::size_t dim() const { return space.size(); }
};

using LorentzPoint = LorentzPt<double>;
using LorentzVarPoint = LorentzPt<Var>;

// Tangent vector at the hyperboloid origin O = [0, sqrt(1/c)]; the time
// component is identically zero and never materialized.
template <class S>
struct TangentAtOrigin {
  std::vector<S> vec;
};

// Per-modality scale alpha, stored as log(alpha) so it stays positive.
struct ScaleParam {
  double log_alpha = 0.0;
  double alpha() const { return std::exp(log_alpha); }
};

// below this tangent norm the sinh ratio is evaluated by its series
inline constexpr double kExpmapSeriesThreshold = 1e-6;
// floor margin on the acosh argument (a floor at 1 is analytically forced)
inline constexpr double kAcoshFloor = 1.0 + 1e-12;

// ---- vector helpers ----

inline double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  return kernels::dot(a.data(), b.data(), a.size());
}
inline double vsqnorm(const std::vector<double>& a) {
  return kernels::sqnorm(a.data(), a.size());
}
inline Var vdot(const std::vector<Var>& a, const std::vector<Var>& b) {
  Var acc = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) acc = acc + a[i] * b[i];
  return acc;
}
inline Var vsqnorm(const std::vector<Var>& a) { return vdot(a, a); }

// ---- core operations ----

template <class S>
S time_component(const LorentzPt<S>& p) {
  using std::sqrt;
  return sqrt(vsqnorm(p.space) + 1.0 / p.cs->c());
}

template <class S>
void check_same_space(const LorentzPt<S>& a, const LorentzPt<S>& b) {
  require(a.cs == b.cs, "points live in different curvature spaces");
  require(a.dim() == b.dim(), "point dimension mismatch");
}

template <class S>
S lorentz_inner(const LorentzPt<S>& a, const LorentzPt<S>& b) {
  check_same_space(a, b);
  return vdot(a.space, b.space) - time_component(a) * time_component(b);
}

// expm_O(u): space part sinh(sqrt(c) r)/(sqrt(c) r) * u with the 0/0 at
// r -> 0 handled by the series 1 + c r^2 / 6.
template <class S>
LorentzPt<S> expmap_origin(const CurvatureSpace& cs, const std::vector<S>& u) {
  using std::sqrt;
  using std::sinh;
  const double c = cs.c();
  S sq = vsqnorm(u);
  require(std::isfinite(value_of(sq)), "expmap_origin: non-finite tangent vector");
  S coef = [&] {
    if (value_of(sq) < kExpmapSeriesThreshold * kExpmapSeriesThreshold)
      return 1.0 + sq * (c / 6.0);
    S arg = sqrt(sq) * cs.sqrt_c();
    return sinh(arg) / arg;
  }();
  LorentzPt<S> out;
  out.cs = &cs;
  out.space.reserve(u.size());
  for (const S& ui : u) out.space.push_back(ui * coef);
  return out;
}

template <class S>
LorentzPt<S> lift(const CurvatureSpace& cs, const std::vector<S>& encoder_output,
                  const S& log_alpha) {
  using std::exp;
  S alpha = exp(log_alpha);
  std::vector<S> scaled;
  scaled.reserve(encoder_output.size());
  for (const S& e : encoder_output) scaled.push_back(e * alpha);
  return expmap_origin(cs, scaled);
}

inline LorentzPoint lift(const CurvatureSpace& cs, const std::vector<double>& encoder_output,
                         const ScaleParam& scale) {
  return lift(cs, encoder_output, scale.log_alpha);
}

inline LorentzPoint origin(const CurvatureSpace& cs, std::size_t dim) {
  return LorentzPoint{std::vector<double>(dim, 0.0), &cs};
}

// d(x, y) = sqrt(1/c) * acosh(-c <x,y>_L), argument floored at 1 + 1e-12.
template <class S>
S geodesic_distance(const LorentzPt<S>& a, const LorentzPt<S>& b) {
  using std::acosh;
  const double c = a.cs->c();
  S arg = clamp_min(lorentz_inner(a, b) * (-c), kAcoshFloor);
  return acosh(arg) * (1.0 / a.cs->sqrt_c());
}

// d(O, x) without materializing O: acosh(sqrt(1 + c ||x_space||^2)).
template <class S>
S distance_to_origin(const LorentzPt<S>& p) {
  using std::sqrt;
  using std::acosh;
  const double c = p.cs->c();
  S arg = clamp_min(sqrt(vsqnorm(p.space) * c + 1.0), kAcoshFloor);
  return acosh(arg) * (1.0 / p.cs->sqrt_c());
}

}  // namespace hyperemb
