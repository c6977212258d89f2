#pragma once

#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/fields.hpp"
#include "aniso/norms.hpp"

namespace aniso {

struct MaximalConfig {
  int k_min = -6;
  int k_max = 6;
  int N = 4;   // decay order for grand / tangential variants
  int K = 4;   // truncation scale
  int L = 1;   // truncation damping order
  double h_fine = 1.0 / 64.0;  // grid used when normalizing test functions
};

// phi_k = b^-k phi(A^-k .) sampled on a centered grid of width h.
SampledField sample_dilated(const DilationStructure& D, const TestFunction& phi,
                            int k, double h);

// Resample src onto the given grid by cell lookup (grids share the lattice).
SampledField sample_onto(const SampledField& src, const GridSpec& g);

// Hardy-Littlewood: sup over k and over balls y+B_k containing x of the
// ball average of |f| (cell-counted); never below |f| itself.
SampledField maximal_hl(const DilationStructure& D, const SampledField& f,
                        const MaximalConfig& cfg);

// sup_k |f * phi_k|(x)
SampledField maximal_radial(const DilationStructure& D, const SampledField& f,
                            const TestFunction& phi, const MaximalConfig& cfg);

// sup_k sup_{y in x+B_k} |f * phi_k|(y)
SampledField maximal_nontangential(const DilationStructure& D,
                                   const SampledField& f,
                                   const TestFunction& phi,
                                   const MaximalConfig& cfg);

// The fixed eight-member family behind the grand maximal function.
std::vector<TestFunction> standard_family();

// Grand maximal function: nontangential sup over the standard family,
// each member normalized into S_N first.
SampledField maximal_grand(const DilationStructure& D, const SampledField& f,
                           const MaximalConfig& cfg);

enum class Truncation { radial, nontangential, tangential };

// Truncated variants with damping
//   max(1, rho(A^-K y))^-L * (1 + b^(-k-K))^-L,   k <= K,
// and for the tangential one an extra factor max(1, rho(A^-k(x-y)))^-N.
SampledField maximal_truncated(const DilationStructure& D,
                               const SampledField& f, const TestFunction& phi,
                               const MaximalConfig& cfg, Truncation variant);

struct VectorCheckResult {
  double lhs = 0.0;  // || ( sum_j (M_HL f_j)^r )^(1/r) ||_{p,q}
  double rhs = 0.0;  // || ( sum_j |f_j|^r )^(1/r) ||_{p,q}
};

VectorCheckResult vector_maximal_check(const DilationStructure& D,
                                       const std::vector<SampledField>& fs,
                                       double r, const ExponentFunction& p,
                                       const ExponentFunction& q,
                                       const MaximalConfig& cfg);

}  // namespace aniso
