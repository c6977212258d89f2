#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/exponents.hpp"
#include "aniso/fields.hpp"

namespace aniso {

struct NormInfinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidWeight : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Right-continuous step function on [0, inf): value v[i] on [t[i], t[i+1]),
// zero beyond the last breakpoint. t[0] == 0.
struct StepFunction {
  std::vector<double> t;
  std::vector<double> v;

  double operator()(double x) const;
  double total_mass() const { return t.empty() ? 0.0 : t.back(); }
  double integral() const;
};

double distribution_function(const SampledField& f, double s);

// Decreasing rearrangement of |f|; plateaus are multiples of the cell measure.
StepFunction rearrangement(const SampledField& f);

// f**(t) = (1/t) * integral of f* over (0, t)
struct AverageRearrangement {
  StepFunction fstar;
  std::vector<double> cum;  // integral of f* up to fstar.t[i]

  static AverageRearrangement make(const StepFunction& fstar);
  double operator()(double t) const;
  double total() const { return cum.empty() ? 0.0 : cum.back(); }
};

// A function on (0, inf) given by an evaluator plus quadrature hints:
// panel boundaries where behaviour changes, and an optional algebraic tail.
struct TFunction {
  std::vector<double> panels;            // increasing, panels.front() == 0
  std::function<double(double)> eval;    // |value| is what gets integrated
  bool has_tail = false;                 // integrand continues past panels.back()
};

// rho(g/lambda) = integral of (|g(t)|/lambda)^{q(t)} dt; +inf when divergent.
double modular(const TFunction& g, const ExponentFunction& q, double lambda = 1.0);

// Modular of a field through its rearrangement.
double modular(const SampledField& f, const ExponentFunction& p, double lambda = 1.0);

struct NormResult {
  double value = 0.0;
  double modular_at_value = 0.0;
  int iterations = 0;
};

// Luxemburg norm: inf {lambda > 0 : rho(g/lambda) <= 1}, found by bisection.
NormResult variable_lebesgue_norm(const TFunction& g, const ExponentFunction& q);
NormResult variable_lebesgue_norm(const SampledField& f, const ExponentFunction& p);

enum class LorentzVariant { star, star_star };

NormResult lorentz_norm(const SampledField& f, const ExponentFunction& p,
                        const ExponentFunction& q,
                        LorentzVariant variant = LorentzVariant::star);

// Lorentz norm of the indicator of a dilated ball x0 + B_k; independent of x0.
NormResult indicator_lorentz_norm(const DilationStructure& D,
                                  const ExponentFunction& p,
                                  const ExponentFunction& q, int k,
                                  LorentzVariant variant = LorentzVariant::star);

// ---- weights ----

struct WeightCharacteristic {
  double a_r = 0.0;        // Muckenhoupt characteristic over the sampled ball family
  double rh_r = 0.0;       // reverse Holder characteristic at the same exponent
  int worst_k = 0;
};

// A_r characteristic of a positive field over balls y + B_k, k in [k_min, k_max],
// y ranging over cells whose ball footprint stays inside the grid. r == 1 uses
// the sup(1/nu) form. Throws InvalidWeight on nonpositive values.
WeightCharacteristic weight_characteristic(const DilationStructure& D,
                                           const SampledField& nu, double r,
                                           int k_min, int k_max);

// integral of |f|^p0 * nu
double weighted_lp_modular(const SampledField& f, const SampledField& nu, double p0);

// nu-measure of x0 + B_k (cell-counted)
double weight_ball_measure(const DilationStructure& D, const SampledField& nu,
                           Point x0, int k);

}  // namespace aniso
