#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "aniso/atoms.hpp"
#include "aniso/dilation.hpp"
#include "aniso/exponents.hpp"
#include "aniso/fields.hpp"
#include "aniso/maximal.hpp"

namespace aniso {

struct ClassViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CZKernel {
  std::function<double(const Point&)> K;  // evaluable off the origin
  int n = 1;
  double c_k = 1.0;    // declared size / Holder constant
  double gamma = 1.0;  // declared Holder exponent
  int m = 0;           // regularity order
  bool odd = true;     // principal values need no cancellation correction

  double delta(const DilationStructure& D) const;  // m ln(lambda_-)/ln b

  static CZKernel hilbert();   // 1D, 1/(pi x)
  static CZKernel riesz2d();   // 2D, x1/|x|^3
  static CZKernel zero(int n);
};

struct KernelReport {
  double c_size = 0.0;    // sup |K(x)| rho(x)
  double c_holder = 0.0;  // sup of the Holder ratio over admissible pairs
  double c_order = 0.0;   // sup of the order-m finite-difference ratio
  bool pass = false;
};

KernelReport verify_kernel(const DilationStructure& D, const CZKernel& K,
                           int n_radii = 40, int n_dirs = 16,
                           unsigned seed = 7);

// T f by direct quadrature with symmetric exclusion of the singular cell;
// output grid extends the support of f by halo_factor * its diameter.
SampledField apply_czo(const DilationStructure& D, const CZKernel& K,
                       const SampledField& f, double halo_factor = 4.0);

struct SmoothedReport {
  std::vector<int> ells;
  std::vector<double> size_constants;  // sup_x rho(x) |(K * phi_ell)(x)| per ell
  double variation = 0.0;              // max / min over ell
};

// (K * phi_ell)(x) by quadrature on phi's natural grid.
double smoothed_kernel_value(const DilationStructure& D, const CZKernel& K,
                             const TestFunction& phi, int ell, const Point& x,
                             double h_fine = 1.0 / 64.0);

SmoothedReport smoothed_operator(const DilationStructure& D, const CZKernel& K,
                                 const TestFunction& phi,
                                 const std::vector<int>& ells,
                                 double h_fine = 1.0 / 64.0);

struct KolmogorovResult {
  double lhs = 0.0;  // integral over x0+B_ell of |Tf|^r nu
  double rhs = 0.0;  // nu(ball)^(1-r) * (integral |f| nu)^r
};

KolmogorovResult kolmogorov_check(const DilationStructure& D, const CZKernel& K,
                                  const SampledField& f, const SampledField& nu,
                                  double r, const Point& x0, int ell);

struct AtomImageReport {
  double weighted_norm_ratio = 0.0;  // ||Ta||_{p0,nu} ||chi|| / nu(ball)^{1/p0}
  double decay_slope = 0.0;          // log-log fit outside the inflated ball
  int fit_points = 0;
};

AtomImageReport atom_image_check(const DilationStructure& D, const CZKernel& K,
                                 const Atom& a,
                                 const std::function<double(const Point&)>& nu,
                                 double p0, const ExponentFunction& p,
                                 const ExponentFunction& q);

struct HardyReport {
  double max_direct_ratio = 0.0;  // ||Tf||_{p,q} / ||grand f||_{p,q}
  double max_grand_ratio = 0.0;   // ||grand Tf||_{p,q} / ||grand f||_{p,q}
};

// Throws ClassViolation unless p, q are admissible with p(0) < q(0).
HardyReport hardy_boundedness_suite(const DilationStructure& D,
                                    const CZKernel& K,
                                    const ExponentFunction& p,
                                    const ExponentFunction& q,
                                    const std::vector<SampledField>& battery,
                                    const MaximalConfig& cfg,
                                    double halo_factor = 1.0);

}  // namespace aniso
