#pragma once

#include <stdexcept>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/fields.hpp"
#include "aniso/maximal.hpp"

namespace aniso {

struct PropertyViolated : std::runtime_error {
  int index;  // which of the five cover properties failed
  explicit PropertyViolated(int i)
      : std::runtime_error("whitney cover property (3." + std::to_string(i) +
                           ") violated"),
        index(i) {}
};
struct EmptyDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Open set as a cell mask over a grid; cells outside the grid are complement.
struct Mask {
  GridSpec grid;
  std::vector<unsigned char> in;

  std::size_t count() const;
  bool at(int ix, int iy = 0) const {
    return in[static_cast<std::size_t>(iy) * grid.ext[0] + ix] != 0;
  }
};

Mask superlevel_mask(const SampledField& f, double lambda);

struct WhitneyBall {
  std::array<int, 2> cell{0, 0};  // center cell index
  int ell = 0;
};

struct WhitneyCover {
  std::vector<WhitneyBall> balls;
  int L_measured = 0;  // max overlap of the balls over the mask
};

Point ball_center(const Mask& m, const WhitneyBall& wb);

// Greedy cover by descending scale with disjoint cores; the verifier runs
// before returning and throws PropertyViolated on failure.
WhitneyCover whitney_cover(const DilationStructure& D, const Mask& mask);

// Cell-exact check of the five cover properties; fills L_measured.
void verify_whitney(const DilationStructure& D, const Mask& mask,
                    WhitneyCover& cover);

// Smooth partition subordinate to the cover: zeta_i = theta_i / sum_j theta_j
// on the mask, 0 elsewhere; supp zeta_i inside x_i + B_{ell_i + omega}.
std::vector<SampledField> partition_of_unity(const DilationStructure& D,
                                             const Mask& mask,
                                             const WhitneyCover& cover);

// Multi-index list for polynomials of total degree <= s in n variables.
std::vector<std::array<int, 2>> monomial_exponents(int n, int s);

// Weighted L2(zeta) projection onto degree-s polynomials in the scaled
// variable w = A^-ell (x - center). Returns coefficients in the
// monomial_exponents order.
std::vector<double> project_polynomial(const DilationStructure& D,
                                       const SampledField& f,
                                       const SampledField& zeta, int s,
                                       const Point& center, int ell);

double eval_polynomial(const DilationStructure& D,
                       const std::vector<double>& coeffs, int s,
                       const Point& center, int ell, const Point& x);

struct CZDecomposition {
  WhitneyCover cover;
  std::vector<SampledField> zetas;
  std::vector<std::vector<double>> polys;
  std::vector<SampledField> bad_parts;
  SampledField good_part;
  double lambda = 0.0;
  int degree = 0;
  Mask mask;
  int dropped = 0;  // degenerate partition members removed
};

// Full pipeline at height lambda: mask = {grand maximal > lambda},
// whitney -> partition -> projection; b_i = (f - P_i) zeta_i, g = f - sum b_i.
CZDecomposition cz_decompose(const DilationStructure& D, const SampledField& f,
                             double lambda, int s, const MaximalConfig& cfg);

// Same, with the grand maximal field precomputed by the caller.
CZDecomposition cz_decompose(const DilationStructure& D, const SampledField& f,
                             const SampledField& grand, double lambda, int s);

}  // namespace aniso
