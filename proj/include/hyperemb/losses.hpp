#pragma once

// Training losses: symmetric InfoNCE over negative Lorentzian distance,
// positive-only Smooth-l1 alignment against gradient-stopped teachers,
// two-sided Chamfer reconstruction, and the homoscedastic-uncertainty
// joint combiner sum_i (exp(-s_i) L_i + s_i).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperemb/kernels.hpp"
#include "hyperemb/lorentz.hpp"

namespace hyperemb {

struct PointSet {
  std::vector<std::array<double, 3>> points;
  std::size_t size() const { return points.size(); }
};

struct TaskWeights {
  std::vector<double> s;  // one log-variance per loss term
};

template <class S>
struct EmbeddingBatchT {
  std::vector<LorentzPt<S>> text;
  std::vector<LorentzPt<S>> image;
  std::vector<LorentzPt<S>> pts;
  std::vector<LorentzPt<S>> pts_part;   // optional, may be empty
  std::vector<LorentzPt<S>> text_part;  // optional, may be empty
};

using EmbeddingBatch = EmbeddingBatchT<double>;

namespace detail {

// log sum exp with the max pulled out as a constant; the gradient of the
// result w.r.t. the inputs is the softmax either way.
inline double logsumexp(const std::vector<double>& v) {
  double m = v[0];
  for (double x : v) m = std::max(m, x);
  double acc = 0.0;
  for (double x : v) acc += std::exp(x - m);
  return std::log(acc) + m;
}

inline Var logsumexp(const std::vector<Var>& v) {
  double m = v[0].val();
  for (const Var& x : v) m = std::max(m, x.val());
  Var acc = exp(v[0] - m);
  for (std::size_t i = 1; i < v.size(); ++i) acc = acc + exp(v[i] - m);
  return log(acc) + m;
}

}  // namespace detail

// Symmetric InfoNCE with logits_ij = -d_L(a_i, b_j) / temperature.
template <class S>
S infonce_lorentz(const std::vector<LorentzPt<S>>& a_batch,
                  const std::vector<LorentzPt<S>>& b_batch, double temperature) {
  require(temperature > 0.0, "infonce_lorentz: temperature must be positive");
  require(a_batch.size() == b_batch.size(), "infonce_lorentz: batch length mismatch");
  const std::size_t n = a_batch.size();
  require(n >= 2, "infonce_lorentz: need batch size >= 2");

  std::vector<std::vector<S>> logits(n);
  for (std::size_t i = 0; i < n; ++i) {
    logits[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      logits[i].push_back(geodesic_distance(a_batch[i], b_batch[j]) * (-1.0 / temperature));
  }

  S acc = detail::logsumexp(logits[0]) - logits[0][0];
  for (std::size_t i = 1; i < n; ++i)
    acc = acc + detail::logsumexp(logits[i]) - logits[i][i];
  std::vector<S> col(n, logits[0][0]);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = logits[i][j];
    acc = acc + detail::logsumexp(col) - logits[j][j];
  }
  return acc * (0.5 / static_cast<double>(n));
}

// smooth-l1 with threshold beta, applied to one residual coordinate
template <class S>
S smooth_l1(S residual, double beta) {
  using std::abs;
  S a = abs(residual);
  if (value_of(a) < beta) return residual * residual * (0.5 / beta);
  return a - 0.5 * beta;
}

inline constexpr double kSmoothL1Beta = 1.0;

// Mean over the batch of coordinate-wise Smooth-l1 between student and
// gradient-stopped teacher space components.
template <class S>
S smooth_l1_align(const std::vector<LorentzPt<S>>& student,
                  const std::vector<LorentzPt<S>>& teacher) {
  require(!student.empty() && student.size() == teacher.size(),
          "smooth_l1_align: batch length mismatch");
  std::optional<S> acc;
  for (std::size_t i = 0; i < student.size(); ++i) {
    require(student[i].dim() == teacher[i].dim(), "smooth_l1_align: dimension mismatch");
    for (std::size_t d = 0; d < student[i].dim(); ++d) {
      S r = student[i].space[d] - stopgrad(teacher[i].space[d]);
      S term = smooth_l1(r, kSmoothL1Beta);
      acc = acc ? *acc + term : term;
    }
  }
  return *acc * (1.0 / static_cast<double>(student.size()));
}

// L_Con: point-cloud student aligned to stop-gradded text and image teachers.
template <class S>
S recon_con_loss(const EmbeddingBatchT<S>& batch) {
  require(!batch.text.empty() && batch.text.size() == batch.image.size() &&
              batch.image.size() == batch.pts.size(),
          "recon_con_loss: batch must carry aligned text/image/pts");
  return smooth_l1_align(batch.pts, batch.text) + smooth_l1_align(batch.pts, batch.image);
}

// Two-sided Chamfer on raw point sets (plain evaluation path).
double chamfer_recon(const PointSet& pred, const PointSet& gt);

// Differentiable Chamfer: nearest neighbors are found on current values,
// the selected pair enters the tape (subgradient at ties).
Var chamfer_recon(Tape& tape, const std::vector<std::array<Var, 3>>& pred,
                  const PointSet& gt);

// sum_i (exp(-s_i) L_i + s_i); stationary in s_i at s_i = ln L_i.
template <class S>
S joint_loss(const std::vector<std::pair<std::string, S>>& terms,
             const std::vector<S>& weights) {
  require(!terms.empty(), "joint_loss: no terms");
  require(terms.size() == weights.size(), "joint_loss: one weight per term required");
  using std::exp;
  S acc = exp(-weights[0]) * terms[0].second + weights[0];
  for (std::size_t i = 1; i < terms.size(); ++i)
    acc = acc + exp(-weights[i]) * terms[i].second + weights[i];
  return acc;
}

inline double joint_loss(const std::vector<std::pair<std::string, double>>& terms,
                         const TaskWeights& weights) {
  return joint_loss(terms, weights.s);
}

}  // namespace hyperemb
