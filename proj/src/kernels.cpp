#include "hyperemb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#if defined(__x86_64__) || defined(_M_X64)
#define HYPEREMB_X86 1
#include <immintrin.h>
#else
#define HYPEREMB_X86 0
#endif

namespace hyperemb::kernels {

namespace {

// ---- scalar reference ----

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sqnorm_scalar(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double maxmin_scalar(const double* a, const double* b, std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::min(a[i], b[i]));
  return best;
}

std::size_t argmin_sqdist3_scalar(double qx, double qy, double qz,
                                  const double* xs, const double* ys,
                                  const double* zs, std::size_t count) {
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double dx = xs[i] - qx, dy = ys[i] - qy, dz = zs[i] - qz;
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return best_i;
}

// ---- AVX2 variants ----

#if HYPEREMB_X86

__attribute__((target("avx2,fma"))) double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* a, const double* b,
                                                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return hsum(acc) + tail;
}

__attribute__((target("avx2,fma"))) double sqnorm_avx2(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * a[i];
  return hsum(acc) + tail;
}

__attribute__((target("avx2"))) double maxmin_avx2(const double* a, const double* b,
                                                   std::size_t n) {
  double best = -std::numeric_limits<double>::infinity();
  __m256d vbest = _mm256_set1_pd(best);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    vbest = _mm256_max_pd(vbest, m);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vbest);
  for (double v : lanes) best = std::max(best, v);
  for (; i < n; ++i) best = std::max(best, std::min(a[i], b[i]));
  return best;
}

__attribute__((target("avx2,fma"))) std::size_t argmin_sqdist3_avx2(
    double qx, double qy, double qz, const double* xs, const double* ys,
    const double* zs, std::size_t count) {
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vqz = _mm256_set1_pd(qz);
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  alignas(32) double d4[4];
  for (; i + 4 <= count; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vqx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vqy);
    const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), vqz);
    __m256d d = _mm256_mul_pd(dx, dx);
    d = _mm256_fmadd_pd(dy, dy, d);
    d = _mm256_fmadd_pd(dz, dz, d);
    _mm256_store_pd(d4, d);
    for (int k = 0; k < 4; ++k) {
      if (d4[k] < best) {
        best = d4[k];
        best_i = i + static_cast<std::size_t>(k);
      }
    }
  }
  for (; i < count; ++i) {
    const double dx = xs[i] - qx, dy = ys[i] - qy, dz = zs[i] - qz;
    const double d = dx * dx + dy * dy + dz * dz;
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return best_i;
}

bool detect_avx2() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

#else

bool detect_avx2() { return false; }

#endif

Backend g_backend = detect_avx2() ? Backend::Avx2 : Backend::Scalar;

}  // namespace

Backend active_backend() { return g_backend; }

bool avx2_supported() { return detect_avx2(); }

void force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) return;
  g_backend = b;
}

std::string backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

double dot(const double* a, const double* b, std::size_t n) {
#if HYPEREMB_X86
  if (g_backend == Backend::Avx2) return dot_avx2(a, b, n);
#endif
  return dot_scalar(a, b, n);
}

double sqnorm(const double* a, std::size_t n) {
#if HYPEREMB_X86
  if (g_backend == Backend::Avx2) return sqnorm_avx2(a, n);
#endif
  return sqnorm_scalar(a, n);
}

double maxmin(const double* a, const double* b, std::size_t n) {
#if HYPEREMB_X86
  if (g_backend == Backend::Avx2) return maxmin_avx2(a, b, n);
#endif
  return maxmin_scalar(a, b, n);
}

std::size_t argmin_sqdist3(double qx, double qy, double qz, const double* xs,
                           const double* ys, const double* zs, std::size_t count) {
#if HYPEREMB_X86
  if (g_backend == Backend::Avx2) return argmin_sqdist3_avx2(qx, qy, qz, xs, ys, zs, count);
#endif
  return argmin_sqdist3_scalar(qx, qy, qz, xs, ys, zs, count);
}

double min_sqdist3(double qx, double qy, double qz, const double* xs,
                   const double* ys, const double* zs, std::size_t count) {
  const std::size_t i = argmin_sqdist3(qx, qy, qz, xs, ys, zs, count);
  const double dx = xs[i] - qx, dy = ys[i] - qy, dz = zs[i] - qz;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace hyperemb::kernels
