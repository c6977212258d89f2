#pragma once

#include <cstddef>

// Data-parallel primitives used by the convolution, maximal-function and
// quadrature inner loops. Scalar reference implementations always exist;
// an AVX2 variant is selected at runtime when the CPU supports it.
namespace aniso::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void max_inplace(double* dst, const double* src, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
}  // namespace scalar

#ifdef ANISO_HAVE_AVX2_BUILD
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void max_inplace(double* dst, const double* src, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);
}  // namespace avx2
#endif

// Runtime-dispatched entry points.
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void max_inplace(double* dst, const double* src, std::size_t n);
void axpy(double* y, double alpha, const double* x, std::size_t n);

// "avx2" or "scalar".
const char* active_backend();

}  // namespace aniso::kernels
