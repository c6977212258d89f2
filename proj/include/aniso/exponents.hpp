#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aniso {

struct NotConjugable : std::runtime_error {
  NotConjugable() : std::runtime_error("conjugate requires p_minus > 1") {}
};

// Variable exponent p(.) on (0,inf): a small closed-form family so limits
// and bounds are exact.
//   constant        p(t) = c
//   log_decay       p(t) = c1 + c2 / ln(e + t)
//   affine_clamped  p(t) = clamp(c1 + c2 t, lo, hi)
//   piecewise       constant on intervals between breakpoints
class ExponentFunction {
 public:
  static ExponentFunction constant(double c);
  static ExponentFunction log_decay(double c1, double c2);
  static ExponentFunction affine_clamped(double c1, double c2, double lo,
                                         double hi);
  static ExponentFunction piecewise(std::vector<double> breaks,
                                    std::vector<double> values);

  double operator()(double t) const;
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  double p_zero() const { return p_zero_; }   // limit at 0+
  double p_inf() const { return p_inf_; }     // limit at +inf
  bool is_constant() const;

  ExponentFunction conjugate() const;       // p/(p-1), requires p_minus > 1
  ExponentFunction scale(double r) const;   // r * p

  std::string describe() const;

 private:
  enum class Kind { constant, log_decay, affine_clamped, piecewise };
  Kind kind_ = Kind::constant;
  double c1_ = 2.0, c2_ = 0.0, lo_ = 0.0, hi_ = 0.0;
  std::vector<double> breaks_, values_;
  double p_minus_ = 0, p_plus_ = 0, p_zero_ = 0, p_inf_ = 0;
  // scale_ * base and conj_ of base, applied pointwise.
  double scale_factor_ = 1.0;
  bool conjugated_ = false;

  void recompute_bounds();
  double base_eval(double t) const;
};

struct ClassReport {
  bool in_frak_P_a = false;      // a < p_minus <= p_plus < inf
  bool in_P = false;             // limits + log-Holder certificate
  bool in_P_a = false;           // both
  double log_holder_C = 0.0;     // measured sup over the battery
  double worst_t = 0.0;          // battery point attaining the sup
  double modulus_growth = 0.0;   // continuity-modulus growth ratio (jump detector)
};

// Sample-battery certificate: 10^3 log-spaced points in (1e-8, 1e8).
ClassReport check_class(const ExponentFunction& p, double a);

// Smallest r in {1.1,1.25,1.5,2,4,8} with scale(p,r), scale(q,r) in P_1.
std::optional<double> choose_r(const ExponentFunction& p,
                               const ExponentFunction& q);

}  // namespace aniso
