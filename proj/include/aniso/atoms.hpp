#pragma once

#include <stdexcept>
#include <vector>

#include "aniso/czd.hpp"
#include "aniso/dilation.hpp"
#include "aniso/exponents.hpp"
#include "aniso/fields.hpp"
#include "aniso/norms.hpp"

namespace aniso {

struct LevelRangeTooNarrow : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoDecompositionFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AtomReport {
  bool support_ok = true;
  bool size_ok = true;
  bool moments_ok = true;
  double size_slack = 0.0;    // allowed size bound minus measured norm
  double worst_moment = 0.0;  // largest |integral a x^alpha|, |alpha| <= s
  bool valid() const { return support_ok && size_ok && moments_ok; }
};

struct Atom {
  SampledField a;
  Point x0{0.0, 0.0};
  int k = 0;       // supporting ball x0 + B_k
  double r = 0.0;  // size exponent; infinity() for the sup bound
  int s = 0;       // vanishing moment degree
  AtomReport checked;
};

// Checks support in x0+B_k (cell-exact), the size bound
// ||a||_r <= b^(k/r) * indicator_lorentz_norm(k)^-1, and vanishing moments.
AtomReport validate_atom(const DilationStructure& D, const SampledField& a,
                         const Point& x0, int k, double r, int s,
                         const ExponentFunction& p, const ExponentFunction& q,
                         double tol);

struct AtomicDecomposition {
  std::vector<Atom> atoms;
  std::vector<double> lambdas;
  std::vector<int> levels;
  SampledField coefficient_field;  // sum lambda * ||chi||^-1 * chi_ball
  double c0 = 0.0;                 // measured normalization sup ||h|| 2^-j
  double residual_linf = 0.0;      // || f - sum lambda a ||_inf
};

// Two-level construction over dyadic heights 2^j, j in [j_min, j_max]:
// h_{i,j} combines the level-j bad part with cross-projections against the
// level-(j+1) partition, then is scaled into a sup-normalized atom.
AtomicDecomposition atomic_decompose(const DilationStructure& D,
                                     const SampledField& f,
                                     const ExponentFunction& p,
                                     const ExponentFunction& q, int s,
                                     int j_min, int j_max,
                                     const MaximalConfig& cfg);

double coefficient_quasinorm(const DilationStructure& D,
                             const AtomicDecomposition& decomp,
                             const ExponentFunction& p,
                             const ExponentFunction& q);

// Upper bound for the finite atomic quasinorm: min coefficient quasinorm
// over the built-in strategies (one-atom when f validates, plus truncated
// two-level decompositions at three level windows).
double finite_atomic_norm_upper(const DilationStructure& D,
                                const SampledField& f,
                                const ExponentFunction& p,
                                const ExponentFunction& q, double r, int s,
                                const MaximalConfig& cfg);

// Ratio-based estimate of the maximal operator norm used by the iteration.
double measure_mhl_opnorm(const DilationStructure& D, const SampledField& h,
                          const MaximalConfig& cfg);

// R(h) = sum_i M_HL^i(h) / (2 ||M_HL||)^i, truncated; an A_1 majorant of h.
SampledField rubio_de_francia(const DilationStructure& D,
                              const SampledField& h, const MaximalConfig& cfg,
                              int iterations = 8, double mhl_norm = 0.0);

}  // namespace aniso
