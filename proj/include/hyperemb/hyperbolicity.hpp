#pragma once

// Gromov delta-hyperbolicity over embedding sets: Gromov products from a
// distance matrix, the max-min matrix-product algorithm (SIMD-backed) with
// an explicit triple-loop oracle, and the batched delta_rel protocol
// (shuffle, fixed-size batches, mean +/- population std).

#include <cstdint>
#include <vector>

#include "hyperemb/lorentz.hpp"

namespace hyperemb {

struct DistanceMatrix {
  std::size_t n = 0;
  std::vector<double> d;  // row-major n x n, symmetric, zero diagonal

  double at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  double& at(std::size_t i, std::size_t j) { return d[i * n + j]; }

  void validate() const;
  double diameter() const;
};

struct BatchDelta {
  double delta = 0.0;
  double diam = 0.0;
  double delta_rel = 0.0;
};

struct HyperbolicityReport {
  double mean_delta_rel = 0.0;
  double std_delta_rel = 0.0;  // population std
  std::size_t batch_size = 0;
  std::size_t num_batches = 0;
  std::size_t basepoint = 0;
  std::vector<BatchDelta> batches;
};

DistanceMatrix distance_matrix_geodesic(const std::vector<LorentzPoint>& points);

// Euclidean backend for baseline comparisons on raw feature vectors.
DistanceMatrix distance_matrix_euclidean(const std::vector<std::vector<double>>& points);

// Basepointed delta via (G (x) G)[i][j] = max_k min(G[i][k], G[k][j]);
// delta = max_ij ((G (x) G) - G).
double gromov_delta(const DistanceMatrix& d, std::size_t basepoint);

// Explicit triple loop; must equal gromov_delta exactly. n <= 256.
double gromov_delta_bruteforce(const DistanceMatrix& d, std::size_t basepoint);

// 2 delta / diam, in [0, 1]; scale invariant.
double delta_rel(const DistanceMatrix& d, std::size_t basepoint);

inline constexpr std::size_t kDefaultHyperbolicityBatch = 128;

HyperbolicityReport batched_hyperbolicity(const std::vector<LorentzPoint>& points,
                                          std::size_t batch_size, std::uint64_t seed);

HyperbolicityReport batched_hyperbolicity_matrix(
    const std::vector<std::vector<double>>& feature_rows, bool euclidean,
    const CurvatureSpace* cs, std::size_t batch_size, std::uint64_t seed);

}  // namespace hyperemb
