#include "hyperemb/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "hyperemb/kernels.hpp"

namespace hyperemb {

void DistanceMatrix::validate() const {
  require(n >= 2 && d.size() == n * n, "DistanceMatrix: need n >= 2 with n*n entries");
  for (std::size_t i = 0; i < n; ++i) {
    require(at(i, i) == 0.0, "DistanceMatrix: nonzero diagonal");
    for (std::size_t j = 0; j < i; ++j) {
      require(std::isfinite(at(i, j)), "DistanceMatrix: non-finite entry");
      require(at(i, j) == at(j, i), "DistanceMatrix: not symmetric");
      require(at(i, j) >= 0.0, "DistanceMatrix: negative entry");
    }
  }
}

double DistanceMatrix::diameter() const {
  double diam = 0.0;
  for (double v : d) diam = std::max(diam, v);
  return diam;
}

DistanceMatrix distance_matrix_geodesic(const std::vector<LorentzPoint>& points) {
  require(points.size() >= 2, "distance_matrix_geodesic: need >= 2 points");
  const std::size_t n = points.size();
  DistanceMatrix m{n, std::vector<double>(n * n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = geodesic_distance(points[i], points[j]);
      m.at(i, j) = dij;
      m.at(j, i) = dij;
    }
  }
  return m;
}

DistanceMatrix distance_matrix_euclidean(const std::vector<std::vector<double>>& points) {
  require(points.size() >= 2, "distance_matrix_euclidean: need >= 2 points");
  const std::size_t n = points.size();
  DistanceMatrix m{n, std::vector<double>(n * n, 0.0)};
  std::vector<double> diff(points[0].size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      require(points[i].size() == points[j].size(), "distance_matrix_euclidean: dim mismatch");
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = points[i][k] - points[j][k];
      const double dij = std::sqrt(kernels::sqnorm(diff.data(), diff.size()));
      m.at(i, j) = dij;
      m.at(j, i) = dij;
    }
  }
  return m;
}

namespace {

// G[i][j] = 1/2 (d[base][i] + d[base][j] - d[i][j]); symmetric
std::vector<double> gromov_products(const DistanceMatrix& d, std::size_t base) {
  const std::size_t n = d.n;
  std::vector<double> g(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g[i * n + j] = 0.5 * (d.at(base, i) + d.at(base, j) - d.at(i, j));
  return g;
}

}  // namespace

double gromov_delta(const DistanceMatrix& d, std::size_t basepoint) {
  d.validate();
  require(basepoint < d.n, "gromov_delta: basepoint out of range");
  const std::size_t n = d.n;
  const std::vector<double> g = gromov_products(d, basepoint);
  double delta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* row_i = g.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      // G is symmetric, so column j is row j
      const double mm = kernels::maxmin(row_i, g.data() + j * n, n);
      delta = std::max(delta, mm - row_i[j]);
    }
  }
  return delta;
}

double gromov_delta_bruteforce(const DistanceMatrix& d, std::size_t basepoint) {
  d.validate();
  require(basepoint < d.n, "gromov_delta_bruteforce: basepoint out of range");
  require(d.n <= 256, "gromov_delta_bruteforce: n > 256");
  const std::size_t n = d.n;
  const std::vector<double> g = gromov_products(d, basepoint);
  double delta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double mm = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < n; ++k)
        mm = std::max(mm, std::min(g[i * n + k], g[k * n + j]));
      delta = std::max(delta, mm - g[i * n + j]);
    }
  }
  return delta;
}

double delta_rel(const DistanceMatrix& d, std::size_t basepoint) {
  const double diam = d.diameter();
  require(diam > 0.0, "delta_rel: zero diameter (degenerate sample)");
  return 2.0 * gromov_delta(d, basepoint) / diam;
}

namespace {

HyperbolicityReport batched_impl(std::size_t count, std::size_t batch_size,
                                 std::uint64_t seed,
                                 const std::function<DistanceMatrix(const std::vector<std::size_t>&)>& dm) {
  require(batch_size >= 4, "batched_hyperbolicity: batch_size must be >= 4");
  require(count >= batch_size, "batched_hyperbolicity: not enough points for one batch");

  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  HyperbolicityReport report;
  report.batch_size = batch_size;
  report.basepoint = 0;
  const std::size_t num_batches = count / batch_size;  // remainder dropped
  report.num_batches = num_batches;

  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t b = 0; b < num_batches; ++b) {
    std::vector<std::size_t> idx(order.begin() + static_cast<std::ptrdiff_t>(b * batch_size),
                                 order.begin() + static_cast<std::ptrdiff_t>((b + 1) * batch_size));
    const DistanceMatrix m = dm(idx);
    BatchDelta bd;
    bd.delta = gromov_delta(m, 0);
    bd.diam = m.diameter();
    require(bd.diam > 0.0, "batched_hyperbolicity: degenerate batch (zero diameter)");
    bd.delta_rel = 2.0 * bd.delta / bd.diam;
    report.batches.push_back(bd);
    sum += bd.delta_rel;
    sum_sq += bd.delta_rel * bd.delta_rel;
  }
  const double nb = static_cast<double>(num_batches);
  report.mean_delta_rel = sum / nb;
  const double var = std::max(0.0, sum_sq / nb - report.mean_delta_rel * report.mean_delta_rel);
  report.std_delta_rel = std::sqrt(var);
  return report;
}

}  // namespace

HyperbolicityReport batched_hyperbolicity(const std::vector<LorentzPoint>& points,
                                          std::size_t batch_size, std::uint64_t seed) {
  return batched_impl(points.size(), batch_size, seed,
                      [&](const std::vector<std::size_t>& idx) {
                        std::vector<LorentzPoint> sel;
                        sel.reserve(idx.size());
                        for (std::size_t i : idx) sel.push_back(points[i]);
                        return distance_matrix_geodesic(sel);
                      });
}

HyperbolicityReport batched_hyperbolicity_matrix(
    const std::vector<std::vector<double>>& feature_rows, bool euclidean,
    const CurvatureSpace* cs, std::size_t batch_size, std::uint64_t seed) {
  if (euclidean) {
    return batched_impl(feature_rows.size(), batch_size, seed,
                        [&](const std::vector<std::size_t>& idx) {
                          std::vector<std::vector<double>> sel;
                          sel.reserve(idx.size());
                          for (std::size_t i : idx) sel.push_back(feature_rows[i]);
                          return distance_matrix_euclidean(sel);
                        });
  }
  require(cs != nullptr, "batched_hyperbolicity_matrix: curvature space required");
  std::vector<LorentzPoint> pts;
  pts.reserve(feature_rows.size());
  for (const auto& row : feature_rows) pts.push_back(LorentzPoint{row, cs});
  return batched_hyperbolicity(pts, batch_size, seed);
}

}  // namespace hyperemb
