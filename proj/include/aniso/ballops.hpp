#pragma once

#include <array>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/fields.hpp"

namespace aniso {

// Cell-offset footprint of the ball B_k on a grid of width h: the offsets d
// with d*h inside B_k, stored as x-spans per row so window sums and maxima
// run on contiguous ranges.
struct BallOffsets {
  int k = 0;
  std::vector<std::array<int, 3>> rows;  // {dy, xlo, xhi} inclusive
  std::size_t cell_count = 0;

  static BallOffsets make(const DilationStructure& D, int k, double h);
};

// For each cell y: sum of |window| values of src over y+offsets, cells
// outside the grid contributing 0. Output on the same grid.
SampledField window_sum(const SampledField& src, const BallOffsets& off);

// For each cell y: max of src over y+offsets (missing cells contribute 0).
SampledField window_max(const SampledField& src, const BallOffsets& off);

// True iff every cell of center+offsets lies inside the grid and satisfies
// the mask predicate.
bool footprint_inside(const GridSpec& g, const std::vector<unsigned char>& mask,
                      std::array<int, 2> center, const BallOffsets& off);

}  // namespace aniso
