#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hyperemb/entailment.hpp"

using namespace hyperemb;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

LorentzPoint radial_point(const CurvatureSpace& cs, const std::vector<double>& dir, double r) {
  double norm = std::sqrt(vsqnorm(dir));
  std::vector<double> u(dir.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = dir[i] * (r / norm);
  return expmap_origin(cs, u);
}

// Independent straightforward re-implementation of all four sub-terms.
double oracle_aperture(const LorentzPoint& x) {
  const double eps = x.cs->eps_clamp();
  double arg = 2.0 * x.cs->k_aperture() / (x.cs->sqrt_c() * std::sqrt(vsqnorm(x.space)));
  return std::asin(std::min(std::max(arg, eps), 1.0 - eps));
}

double oracle_exterior(const LorentzPoint& x, const LorentzPoint& y) {
  const double eps = x.cs->eps_clamp();
  const double c = x.cs->c();
  double xt = std::sqrt(vsqnorm(x.space) + 1.0 / c);
  double yt = std::sqrt(vsqnorm(y.space) + 1.0 / c);
  double ci = c * (vdot(x.space, y.space) - xt * yt);
  double num = yt + xt * ci;
  double den = std::sqrt(vsqnorm(x.space)) * std::sqrt(std::max(ci * ci - 1.0, eps));
  return std::acos(std::min(std::max(num / den, -1.0 + eps), 1.0 - eps));
}

}  // namespace

TEST_CASE("half-aperture reference values") {
  const CurvatureSpace cs(1.0);  // K = 0.1, eps = 1e-8

  // boundary radius 2K/sqrt(c) saturates the clamp
  LorentzPoint boundary{{0.2, 0.0}, &cs};
  CHECK(half_aperture(boundary) == doctest::Approx(std::asin(1.0 - 1e-8)).epsilon(1e-12));

  // aperture vanishes at infinity, floored by the clamp at asin(eps)
  LorentzPoint far{{1e12, 0.0}, &cs};
  CHECK(half_aperture(far) == doctest::Approx(std::asin(1e-8)).epsilon(1e-12));

  // c = 1, K = 0.1, ||x_space|| = 1 -> asin(0.2)
  LorentzPoint unit{{1.0, 0.0}, &cs};
  CHECK(half_aperture(unit) == doctest::Approx(0.20135792079033079).epsilon(1e-14));

  // exact origin: clamp saturates to 1 - eps, no error
  LorentzPoint o = origin(cs, 2);
  CHECK(half_aperture(o) == doctest::Approx(std::asin(1.0 - 1e-8)).epsilon(1e-12));
}

TEST_CASE("aperture monotonicity in radius") {
  const CurvatureSpace cs(1.0);
  double prev = half_aperture(LorentzPoint{{0.25}, &cs});
  for (double r = 0.3; r < 20.0; r += 0.3) {
    double cur = half_aperture(LorentzPoint{{r}, &cs});
    CHECK(cur <= prev + 1e-15);
    prev = cur;
  }
}

TEST_CASE("exterior angle on radial rays") {
  // With the default eps = 1e-8 an exactly-radial configuration saturates
  // the acos clamp at acos(1 - eps) ~ 1.41e-4; a tighter eps shows the
  // analytic limits 0 and pi.
  const CurvatureSpace tight(1.0, 0.1, 1e-12);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dir = random_vec(rng, 5, 1.0);
    const LorentzPoint x = radial_point(tight, dir, 0.8);
    const LorentzPoint y_in = radial_point(tight, dir, 2.1);
    CHECK(exterior_angle(x, y_in) < 1e-5);

    std::vector<double> neg = dir;
    for (auto& v : neg) v = -v;
    const LorentzPoint y_opp = radial_point(tight, neg, 2.1);
    CHECK(std::fabs(exterior_angle(x, y_opp) - M_PI) < 1e-4);
  }

  // clamp contract at the default eps: coincident directions stay finite
  const CurvatureSpace cs(1.0);
  const LorentzPoint a = radial_point(cs, {1.0, 0.0}, 1.0);
  const LorentzPoint b = radial_point(cs, {1.0, 0.0}, 2.0);
  const double e = exterior_angle(a, b);
  CHECK(e >= std::acos(1.0 - 1e-8) - 1e-12);
  CHECK(e <= std::acos(-1.0 + 1e-8) + 1e-12);
}

TEST_CASE("exterior angle rejects the apex") {
  const CurvatureSpace cs(1.0);
  const LorentzPoint o = origin(cs, 3);
  const LorentzPoint y = radial_point(cs, {1.0, 0.0, 0.0}, 1.0);
  CHECK_THROWS_AS(exterior_angle(o, y), ContractViolation);
}

TEST_CASE("entailment loss on nested radial chains") {
  const CurvatureSpace cs(1.0);
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dir = random_vec(rng, 6, 1.0);
    const double r = 0.7;
    const LorentzPoint text = radial_point(cs, dir, r);
    const LorentzPoint pts = radial_point(cs, dir, 2.0 * r);
    const LorentzPoint img = radial_point(cs, dir, 3.0 * r);
    CHECK(entailment_loss(text, pts, img) == 0.0);

    // image diametrically opposite the text: exterior angle pi beats any apertures
    std::vector<double> neg = dir;
    for (auto& v : neg) v = -v;
    const LorentzPoint img_opp = radial_point(cs, neg, 3.0 * r);
    CHECK(entailment_loss(text, img_opp, pts) > 0.0);
  }
}

TEST_CASE("duplicate-formula oracle on random triples") {
  const CurvatureSpace cs(1.3, 0.1, 1e-8);
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    LorentzPoint x = expmap_origin(cs, random_vec(rng, 6, 0.9));
    LorentzPoint z = expmap_origin(cs, random_vec(rng, 6, 0.9));
    LorentzPoint y = expmap_origin(cs, random_vec(rng, 6, 0.9));
    const double expect = std::max(
        0.0, oracle_exterior(x, z) + oracle_exterior(z, y) - oracle_aperture(x) - oracle_aperture(z));
    CHECK(entailment_loss(x, z, y) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("cone membership soundness, 1e3 rejection-sampled points") {
  const CurvatureSpace cs(1.0);
  std::mt19937_64 rng(53);
  const LorentzPoint x = radial_point(cs, {1.0, 0.0, 0.0, 0.0}, 1.0);
  const double aper = half_aperture(x);
  int accepted = 0;
  while (accepted < 1000) {
    LorentzPoint y = expmap_origin(cs, random_vec(rng, 4, 1.5));
    if (exterior_angle(x, y) > aper) continue;
    ++accepted;
    CHECK(exterior_angle(x, y) - aper <= 0.0);
  }
}

TEST_CASE("entailment gradients vs finite differences, 100 non-degenerate configs") {
  const CurvatureSpace cs(1.0);
  std::mt19937_64 rng(59);
  int done = 0, skipped_clamped = 0;
  while (done < 100) {
    std::vector<double> tv = random_vec(rng, 5, 0.8);
    std::vector<double> pv = random_vec(rng, 5, 0.8);
    std::vector<double> iv = random_vec(rng, 5, 0.8);
    // non-degenerate: radii bounded away from the apex and the loss away
    // from its hinge and internal clamp boundaries
    LorentzPoint t{tv, &cs}, p{pv, &cs}, im{iv, &cs};
    if (vsqnorm(tv) < 0.05 || vsqnorm(pv) < 0.05 || vsqnorm(iv) < 0.05) continue;
    const double loss = entailment_loss(t, p, im);
    if (loss < 1e-2) {
      ++skipped_clamped;
      continue;
    }
    auto interior = [](const LorentzPoint& a, const LorentzPoint& b) {
      const double ci = a.cs->c() * lorentz_inner(a, b);
      if (ci * ci - 1.0 < 1e-4) return false;
      const double e = exterior_angle(a, b);
      return e > 1e-3 && e < M_PI - 1e-3;
    };
    if (!interior(t, p) || !interior(p, im)) {
      ++skipped_clamped;
      continue;
    }
    Parameter wt("text", tv), wp("pts", pv), wi("img", iv);
    const auto report = finite_diff_check(
        "entailment_loss",
        [&](Tape& tape) {
          LorentzVarPoint vt{tape.leaves(wt), &cs};
          LorentzVarPoint vp{tape.leaves(wp), &cs};
          LorentzVarPoint vi{tape.leaves(wi), &cs};
          return entailment_loss(vt, vp, vi);
        },
        {&wt, &wp, &wi}, 1e-5);
    CHECK(report.max_rel_error < 1e-4);
    ++done;
  }
  CHECK(done == 100);  // skipped clamp-active configs counted, not asserted
}

TEST_CASE("batch entailment is the mean of per-triple losses") {
  const CurvatureSpace cs(1.0);
  std::mt19937_64 rng(61);
  std::vector<LorentzPoint> t, p, im;
  double sum = 0.0;
  for (int i = 0; i < 7; ++i) {
    t.push_back(expmap_origin(cs, random_vec(rng, 4, 0.8)));
    p.push_back(expmap_origin(cs, random_vec(rng, 4, 0.8)));
    im.push_back(expmap_origin(cs, random_vec(rng, 4, 0.8)));
    sum += entailment_loss(t.back(), p.back(), im.back());
  }
  CHECK(entailment_loss_batch(t, p, im) == doctest::Approx(sum / 7.0).epsilon(1e-14));
  CHECK_THROWS_AS(entailment_loss_batch(t, p, std::vector<LorentzPoint>{}), ContractViolation);
}
