#include "aniso/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace aniso {

namespace {
constexpr double kE = std::numbers::e;
}

ExponentFunction ExponentFunction::constant(double c) {
  ExponentFunction p;
  p.kind_ = Kind::constant;
  p.c1_ = c;
  p.recompute_bounds();
  return p;
}

ExponentFunction ExponentFunction::log_decay(double c1, double c2) {
  ExponentFunction p;
  p.kind_ = Kind::log_decay;
  p.c1_ = c1;
  p.c2_ = c2;
  p.recompute_bounds();
  return p;
}

ExponentFunction ExponentFunction::affine_clamped(double c1, double c2,
                                                  double lo, double hi) {
  ExponentFunction p;
  p.kind_ = Kind::affine_clamped;
  p.c1_ = c1;
  p.c2_ = c2;
  p.lo_ = lo;
  p.hi_ = hi;
  p.recompute_bounds();
  return p;
}

ExponentFunction ExponentFunction::piecewise(std::vector<double> breaks,
                                             std::vector<double> values) {
  if (values.size() != breaks.size() + 1)
    throw std::runtime_error("piecewise exponent: need |values| = |breaks|+1");
  ExponentFunction p;
  p.kind_ = Kind::piecewise;
  p.breaks_ = std::move(breaks);
  p.values_ = std::move(values);
  p.recompute_bounds();
  return p;
}

double ExponentFunction::base_eval(double t) const {
  switch (kind_) {
    case Kind::constant:
      return c1_;
    case Kind::log_decay:
      return c1_ + c2_ / std::log(kE + t);
    case Kind::affine_clamped:
      return std::clamp(c1_ + c2_ * t, lo_, hi_);
    case Kind::piecewise: {
      std::size_t i = 0;
      while (i < breaks_.size() && t > breaks_[i]) ++i;
      return values_[i];
    }
  }
  return c1_;
}

double ExponentFunction::operator()(double t) const {
  double v = base_eval(t);
  if (conjugated_) v = v / (v - 1.0);
  return scale_factor_ * v;
}

bool ExponentFunction::is_constant() const {
  return kind_ == Kind::constant ||
         (p_plus_ - p_minus_) < 1e-15 * std::abs(p_plus_);
}

void ExponentFunction::recompute_bounds() {
  auto ev = [&](double t) { return (*this)(t); };
  switch (kind_) {
    case Kind::constant:
      p_zero_ = p_inf_ = p_minus_ = p_plus_ = ev(1.0);
      return;
    case Kind::log_decay: {
      double v0 = c1_ + c2_;  // 1/ln(e) = 1
      double vinf = c1_;
      auto post = [&](double v) {
        if (conjugated_) v = v / (v - 1.0);
        return scale_factor_ * v;
      };
      p_zero_ = post(v0);
      p_inf_ = post(vinf);
      p_minus_ = std::min(p_zero_, p_inf_);
      p_plus_ = std::max(p_zero_, p_inf_);
      return;
    }
    case Kind::affine_clamped: {
      p_zero_ = ev(1e-300);
      p_inf_ = ev(1e300);
      p_minus_ = std::min(p_zero_, p_inf_);
      p_plus_ = std::max(p_zero_, p_inf_);
      return;
    }
    case Kind::piecewise: {
      p_zero_ = ev(breaks_.empty() ? 1.0 : breaks_.front() / 2.0);
      p_inf_ = ev(breaks_.empty() ? 1.0 : breaks_.back() * 2.0);
      p_minus_ = 1e300;
      p_plus_ = -1e300;
      for (double v : values_) {
        double w = conjugated_ ? v / (v - 1.0) : v;
        w *= scale_factor_;
        p_minus_ = std::min(p_minus_, w);
        p_plus_ = std::max(p_plus_, w);
      }
      return;
    }
  }
}

ExponentFunction ExponentFunction::conjugate() const {
  if (!(p_minus_ > 1.0)) throw NotConjugable();
  ExponentFunction q = *this;
  if (q.scale_factor_ != 1.0)
    throw std::runtime_error("conjugate of scaled exponent unsupported");
  q.conjugated_ = !q.conjugated_;
  q.recompute_bounds();
  return q;
}

ExponentFunction ExponentFunction::scale(double r) const {
  ExponentFunction q = *this;
  q.scale_factor_ *= r;
  q.recompute_bounds();
  return q;
}

std::string ExponentFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant:
      os << "const " << c1_;
      break;
    case Kind::log_decay:
      os << c1_ << " + " << c2_ << "/ln(e+t)";
      break;
    case Kind::affine_clamped:
      os << "clamp(" << c1_ << " + " << c2_ << " t, " << lo_ << ", " << hi_ << ")";
      break;
    case Kind::piecewise:
      os << "piecewise[" << values_.size() << "]";
      break;
  }
  if (conjugated_) os << " conjugated";
  if (scale_factor_ != 1.0) os << " x" << scale_factor_;
  return os.str();
}

ClassReport check_class(const ExponentFunction& p, double a) {
  ClassReport rep;
  rep.in_frak_P_a = a < p.p_minus() && p.p_plus() < 1e300 && p.p_minus() > 0.0;

  // Battery: 10^3 log-spaced points over (1e-8, 1e8).
  const int kPoints = 1000;
  double C = 0.0, worst = 1.0;
  for (int i = 0; i < kPoints; ++i) {
    double t = std::pow(10.0, -8.0 + 16.0 * i / (kPoints - 1));
    if (t <= 0.5) {
      double c = std::abs(p(t) - p.p_zero()) * std::abs(std::log(t));
      if (c > C) {
        C = c;
        worst = t;
      }
    }
    double c2 = std::abs(p(t) - p.p_inf()) * std::log(kE + t);
    if (c2 > C) {
      C = c2;
      worst = t;
    }
  }
  rep.log_holder_C = C;
  rep.worst_t = worst;

  // Interior-jump detector: the local continuity modulus
  // sup_t |p(t(1+eps)) - p(t)| ln(e + 1/(t eps)) must stay bounded as
  // eps -> 0; across a jump it grows like ln(1/eps).
  auto modulus = [&](double eps) {
    double m = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      double t = std::pow(10.0, -8.0 + 16.0 * i / (kPoints - 1));
      double d = std::abs(p(t * (1.0 + eps)) - p(t));
      m = std::max(m, d * std::log(kE + 1.0 / (t * eps)));
    }
    return m;
  };
  double m_coarse = modulus(1e-2);
  double m_fine = modulus(1e-8);
  rep.modulus_growth = m_coarse > 1e-12 ? m_fine / m_coarse : 0.0;
  bool continuous_enough = m_fine <= 2.0 * m_coarse + 1e-9;

  rep.in_P = p.p_plus() < 1e300 && std::isfinite(C) && continuous_enough;
  rep.in_P_a = rep.in_P && rep.in_frak_P_a;
  return rep;
}

std::optional<double> choose_r(const ExponentFunction& p,
                               const ExponentFunction& q) {
  for (double r : {1.1, 1.25, 1.5, 2.0, 4.0, 8.0}) {
    if (check_class(p.scale(r), 1.0).in_P_a &&
        check_class(q.scale(r), 1.0).in_P_a)
      return r;
  }
  return std::nullopt;
}

}  // namespace aniso
