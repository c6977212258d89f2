#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace aniso {

using Point = std::array<double, 2>;  // x[1] ignored when n == 1
using Mat2 = std::array<double, 4>;   // row-major; only [0] used when n == 1

struct NotExpansive : std::runtime_error {
  NotExpansive() : std::runtime_error("dilation matrix is not expansive") {}
};
struct DimensionUnsupported : std::runtime_error {
  DimensionUnsupported() : std::runtime_error("only n in {1,2} supported") {}
};
struct SeriesDiverged : std::runtime_error {
  SeriesDiverged() : std::runtime_error("adapted-form series did not converge") {}
};

// Anisotropic geometry induced by an expansive dilation matrix A:
// the volume-1 ellipsoid Delta = {x : x'Mx < 1}, the ball family
// B_k = A^k Delta, the step quasinorm rho_A, and the derived constants
// b = |det A|, omega, r0, lambda_-, lambda_+.
class DilationStructure {
 public:
  // lambda: optional series parameter in (1, min|eig(A)|); <= 0 picks the
  // default (1 + min|eig|)/2.
  DilationStructure(int n, const Mat2& A, double lambda = 0.0);

  int dim() const { return n_; }
  double det_abs() const { return b_; }
  double lambda_minus() const { return lambda_minus_; }
  double lambda_plus() const { return lambda_plus_; }
  double min_eig_abs() const { return min_eig_abs_; }
  double r0() const { return r0_; }
  int omega() const { return omega_; }
  const Mat2& matrix() const { return A_; }
  const Mat2& ellipsoid_form() const { return M_; }

  // Quadratic form (A^-k x)' M (A^-k x); the gauge of B_k squared.
  double ball_form(const Point& x, int k) const;
  bool ball_contains(const Point& x, int k) const { return ball_form(x, k) < 1.0; }

  // b^k where x in B_{k+1} \ B_k; 0 at the origin.
  double step_quasinorm(const Point& x) const;
  // The shell index: smallest k with x in B_k (so rho_A = b^{k-1}).
  int shell_index(const Point& x) const;

  Point apply(const Point& x) const;          // A x
  Point apply_inverse(const Point& x) const;  // A^-1 x
  Point apply_power(const Point& x, int k) const;  // A^k x

  // Half-axis extents of B_k along the coordinate directions (bounding box).
  Point ball_bbox_halfwidth(int k) const;

  // Empirical lower bound for the quasinorm triangle constant H,
  // max over random pairs of rho(x+y)/(rho(x)+rho(y)).
  double estimate_quasinorm_constant(int sample_count, unsigned seed = 1234) const;

 private:
  int n_ = 1;
  Mat2 A_{};
  Mat2 Ainv_{};
  Mat2 M_{};
  double b_ = 0.0;
  double lambda_minus_ = 0.0, lambda_plus_ = 0.0;
  double min_eig_abs_ = 0.0;
  double r0_ = 0.0;
  int omega_ = 0;
};

}  // namespace aniso
