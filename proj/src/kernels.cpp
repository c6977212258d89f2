#include "aniso/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace aniso::kernels {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double max_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void max_inplace(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

void axpy(double* y, double alpha, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace scalar

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*max_inplace)(double*, const double*, std::size_t);
  void (*axpy)(double*, double, const double*, std::size_t);
  const char* name;
};

Table pick_backend() {
#ifdef ANISO_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2")) {
    return {avx2::dot, avx2::sum, avx2::max_abs, avx2::max_inplace,
            avx2::axpy, "avx2"};
  }
#endif
  return {scalar::dot, scalar::sum, scalar::max_abs, scalar::max_inplace,
          scalar::axpy, "scalar"};
}

const Table& table() {
  static const Table t = pick_backend();
  return t;
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  return table().dot(a, b, n);
}
double sum(const double* a, std::size_t n) { return table().sum(a, n); }
double max_abs(const double* a, std::size_t n) { return table().max_abs(a, n); }
void max_inplace(double* dst, const double* src, std::size_t n) {
  table().max_inplace(dst, src, n);
}
void axpy(double* y, double alpha, const double* x, std::size_t n) {
  table().axpy(y, alpha, x, n);
}
const char* active_backend() { return table().name; }

}  // namespace aniso::kernels
