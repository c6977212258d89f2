#include "aniso/dilation.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

namespace aniso {

namespace {

Eigen::Matrix2d to_eigen(int n, const Mat2& m) {
  Eigen::Matrix2d e = Eigen::Matrix2d::Identity();
  if (n == 1) {
    e(0, 0) = m[0];
  } else {
    e << m[0], m[1], m[2], m[3];
  }
  return e;
}

Mat2 from_eigen(int n, const Eigen::Matrix2d& e) {
  if (n == 1) return {e(0, 0), 0.0, 0.0, 0.0};
  return {e(0, 0), e(0, 1), e(1, 0), e(1, 1)};
}

double unit_ball_volume(int n) { return n == 1 ? 2.0 : std::numbers::pi; }

// Largest eigenvalue of M^-1/2 (A^-j)' M A^-j M^-1/2, i.e. the squared
// gauge contraction from B_j back to B_0.
double contraction_eig(const Eigen::Matrix2d& M, const Eigen::Matrix2d& Ainv,
                       int j) {
  Eigen::Matrix2d Aj = Eigen::Matrix2d::Identity();
  for (int i = 0; i < j; ++i) Aj = Ainv * Aj;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es_m(M);
  Eigen::Matrix2d Msqrt = es_m.operatorSqrt();
  Eigen::Matrix2d Minvsqrt = es_m.operatorInverseSqrt();
  Eigen::Matrix2d G = Minvsqrt * Aj.transpose() * M * Aj * Minvsqrt;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

DilationStructure::DilationStructure(int n, const Mat2& A, double lambda) {
  if (n < 1 || n > 2) throw DimensionUnsupported();
  n_ = n;
  A_ = A;

  Eigen::Matrix2d Ae = to_eigen(n, A);
  Eigen::EigenSolver<Eigen::Matrix2d> es(Ae);
  double mn = 1e300, mx = 0.0;
  for (int i = 0; i < (n == 1 ? 1 : 2); ++i) {
    double m = std::abs(es.eigenvalues()(i));
    mn = std::min(mn, m);
    mx = std::max(mx, m);
  }
  if (n == 1) mn = mx = std::abs(Ae(0, 0));
  if (!(mn > 1.0)) throw NotExpansive();
  min_eig_abs_ = mn;
  lambda_minus_ = (1.0 + mn) / 2.0;
  lambda_plus_ = 2.0 * mx;

  b_ = std::abs(Ae.determinant());
  if (n == 1) b_ = std::abs(Ae(0, 0));

  if (lambda <= 0.0) lambda = lambda_minus_;
  if (!(lambda > 1.0 && lambda < mn)) throw NotExpansive();

  Eigen::Matrix2d Ainv = Ae.inverse();
  Ainv_ = from_eigen(n, Ainv);

  // M0 = sum_j lambda^{2j} (A^-j)' A^-j; geometric convergence since
  // lambda < min|eig(A)|.
  const int kJmax = 200;
  const double kEps = 1e-14;
  Eigen::Matrix2d M0 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d Aj = Eigen::Matrix2d::Identity();
  double lam2j = 1.0;
  bool converged = false;
  double scale0 = 1.0;
  for (int j = 0; j <= kJmax; ++j) {
    Eigen::Matrix2d term = lam2j * Aj.transpose() * Aj;
    M0 += term;
    double tn = term.norm();
    if (j == 0) scale0 = tn;
    if (j > 0 && tn < kEps * scale0) {
      converged = true;
      break;
    }
    Aj = Ainv * Aj;
    lam2j *= lambda * lambda;
  }
  if (!converged) throw SeriesDiverged();

  // Scale so det M = v_n^2 on the active block, making |Delta| = 1.
  double vn = unit_ball_volume(n);
  double det0 = (n == 1) ? M0(0, 0) : M0.determinant();
  double c = (n == 1) ? (vn * vn) / det0 : std::sqrt(vn * vn / det0);
  Eigen::Matrix2d M = c * M0;
  if (n == 1) {
    M(0, 1) = M(1, 0) = 0.0;
    M(1, 1) = 1.0;
  }
  M_ = from_eigen(n, M);

  r0_ = 1.0 / std::sqrt(contraction_eig(M, Ainv, 1));

  // Smallest omega with 2 B_0 inside B_omega, non-strict up to 1e-12.
  for (int w = 1; w <= 256; ++w) {
    if (4.0 * contraction_eig(M, Ainv, w) <= 1.0 + 1e-12) {
      omega_ = w;
      break;
    }
  }
  if (omega_ == 0) throw SeriesDiverged();
}

Point DilationStructure::apply(const Point& x) const {
  if (n_ == 1) return {A_[0] * x[0], 0.0};
  return {A_[0] * x[0] + A_[1] * x[1], A_[2] * x[0] + A_[3] * x[1]};
}

Point DilationStructure::apply_inverse(const Point& x) const {
  if (n_ == 1) return {Ainv_[0] * x[0], 0.0};
  return {Ainv_[0] * x[0] + Ainv_[1] * x[1], Ainv_[2] * x[0] + Ainv_[3] * x[1]};
}

Point DilationStructure::apply_power(const Point& x, int k) const {
  Point y = x;
  for (int i = 0; i < k; ++i) y = apply(y);
  for (int i = 0; i > k; --i) y = apply_inverse(y);
  return y;
}

double DilationStructure::ball_form(const Point& x, int k) const {
  Point y = apply_power(x, -k);
  if (n_ == 1) return M_[0] * y[0] * y[0];
  return M_[0] * y[0] * y[0] + (M_[1] + M_[2]) * y[0] * y[1] +
         M_[3] * y[1] * y[1];
}

int DilationStructure::shell_index(const Point& x) const {
  double q = ball_form(x, 0);
  if (q == 0.0) return 0;  // caller handles the origin
  // Seed from the B_0 gauge; the gauge of B_k shrinks at least like
  // lambda_-^{-k} and at most like lambda_+^{-k}.
  int k = static_cast<int>(std::ceil(0.5 * std::log(q) / std::log(lambda_minus_)));
  const int kLimit = 4096;
  while (!ball_contains(x, k)) {
    if (++k > kLimit) break;
  }
  while (k > -kLimit && ball_contains(x, k - 1)) --k;
  return k;
}

double DilationStructure::step_quasinorm(const Point& x) const {
  if (x[0] == 0.0 && (n_ == 1 || x[1] == 0.0)) return 0.0;
  // x in B_k \ B_{k-1} means rho = b^{k-1}.
  return std::pow(b_, shell_index(x) - 1);
}

Point DilationStructure::ball_bbox_halfwidth(int k) const {
  // max |x_i| over x'Qx <= 1 with Q the form of B_k is sqrt((Q^-1)_{ii}).
  Eigen::Matrix2d M = to_eigen(n_, M_);
  Eigen::Matrix2d Ainv = to_eigen(n_, Ainv_);
  Eigen::Matrix2d Ak = Eigen::Matrix2d::Identity();
  for (int i = 0; i < k; ++i) Ak = Ainv * Ak;
  for (int i = 0; i > k; --i) Ak = to_eigen(n_, A_) * Ak;
  // Ak now holds A^-k in both cases; Q is the quadratic form of B_k.
  Eigen::Matrix2d Q = Ak.transpose() * M * Ak;
  Eigen::Matrix2d Qi = Q.inverse();
  if (n_ == 1) return {std::sqrt(Qi(0, 0)), 0.0};
  return {std::sqrt(Qi(0, 0)), std::sqrt(Qi(1, 1))};
}

double DilationStructure::estimate_quasinorm_constant(int sample_count,
                                                      unsigned seed) const {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  double best = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    Point x{u(rng), n_ == 2 ? u(rng) : 0.0};
    Point y{u(rng), n_ == 2 ? u(rng) : 0.0};
    double rx = step_quasinorm(x), ry = step_quasinorm(y);
    if (rx + ry == 0.0) continue;
    Point s{x[0] + y[0], x[1] + y[1]};
    best = std::max(best, step_quasinorm(s) / (rx + ry));
  }
  return best;
}

}  // namespace aniso
