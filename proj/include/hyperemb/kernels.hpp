#pragma once

// Data-parallel inner loops used by the geometry and analysis code.
// Every kernel has a scalar reference implementation and an AVX2 variant;
// the active backend is picked once at startup from CPUID and can be
// overridden (tests exercise both and check equivalence).
//
// maxmin/argmin kernels are exact across backends (only min/max, no
// reassociation); dot/sqnorm reductions may differ by rounding, so callers
// that need bit-stable results must pin one backend.

#include <cstddef>
#include <string>

namespace hyperemb::kernels {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
void force_backend(Backend b);
bool avx2_supported();
std::string backend_name(Backend b);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

// sum_i a[i]^2
double sqnorm(const double* a, std::size_t n);

// max_k min(a[k], b[k]); n >= 1
double maxmin(const double* a, const double* b, std::size_t n);

// index of the point (xs[i], ys[i], zs[i]) closest to (qx, qy, qz)
// in squared euclidean distance; first index wins ties. count >= 1.
std::size_t argmin_sqdist3(double qx, double qy, double qz,
                           const double* xs, const double* ys,
                           const double* zs, std::size_t count);

// the squared distance at that argmin
double min_sqdist3(double qx, double qy, double qz,
                   const double* xs, const double* ys,
                   const double* zs, std::size_t count);

}  // namespace hyperemb::kernels
