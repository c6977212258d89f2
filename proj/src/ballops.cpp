#include "aniso/ballops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace aniso {

BallOffsets BallOffsets::make(const DilationStructure& D, int k, double h) {
  BallOffsets off;
  off.k = k;
  const Point half = D.ball_bbox_halfwidth(k);
  const int rx = static_cast<int>(std::floor(half[0] / h)) + 1;
  const int ry = D.dim() == 2 ? static_cast<int>(std::floor(half[1] / h)) + 1 : 0;
  for (int dy = -ry; dy <= ry; ++dy) {
    int xlo = 1, xhi = 0;
    for (int dx = -rx; dx <= rx; ++dx) {
      Point p{dx * h, dy * h};
      if (D.ball_contains(p, k)) {
        if (xlo > xhi) xlo = dx;
        xhi = dx;
      }
    }
    if (xlo <= xhi) {
      off.rows.push_back({dy, xlo, xhi});
      off.cell_count += static_cast<std::size_t>(xhi - xlo + 1);
    }
  }
  if (off.rows.empty()) {
    off.rows.push_back({0, 0, 0});  // 0 is always in the open ball
    off.cell_count = 1;
  }
  return off;
}

SampledField window_sum(const SampledField& src, const BallOffsets& off) {
  const GridSpec& g = src.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  // prefix sums per row: P[iy][ix] = sum of src(0..ix-1, iy)
  std::vector<double> pref(static_cast<std::size_t>(ny) * (nx + 1), 0.0);
  for (int iy = 0; iy < ny; ++iy) {
    double acc = 0.0;
    std::size_t base = static_cast<std::size_t>(iy) * (nx + 1);
    for (int ix = 0; ix < nx; ++ix) {
      acc += src.values[static_cast<std::size_t>(iy) * nx + ix];
      pref[base + ix + 1] = acc;
    }
  }
  SampledField out;
  out.grid = g;
  out.values.assign(src.values.size(), 0.0);
  for (const auto& row : off.rows) {
    for (int iy = 0; iy < ny; ++iy) {
      const int sy = iy + row[0];
      if (sy < 0 || sy >= ny) continue;
      std::size_t base = static_cast<std::size_t>(sy) * (nx + 1);
      std::size_t ob = static_cast<std::size_t>(iy) * nx;
      for (int ix = 0; ix < nx; ++ix) {
        int a = std::max(0, ix + row[1]);
        int b = std::min(nx - 1, ix + row[2]);
        if (a <= b) out.values[ob + ix] += pref[base + b + 1] - pref[base + a];
      }
    }
  }
  return out;
}

namespace {

// sliding max of v over windows [i+lo, i+hi], out-of-range treated as 0
void sliding_max_row(const double* v, int n, int lo, int hi, double* out) {
  std::deque<int> dq;  // indices, values decreasing
  int next = lo;       // next index to admit
  for (int i = 0; i < n; ++i) {
    int want = i + hi;
    for (; next <= want; ++next) {
      if (next < 0 || next >= n) continue;
      while (!dq.empty() && v[dq.back()] <= v[next]) dq.pop_back();
      dq.push_back(next);
    }
    while (!dq.empty() && dq.front() < i + lo) dq.pop_front();
    double m = dq.empty() ? 0.0 : v[dq.front()];
    out[i] = std::max(out[i], std::max(m, 0.0));
  }
}

}  // namespace

SampledField window_max(const SampledField& src, const BallOffsets& off) {
  const GridSpec& g = src.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  SampledField out;
  out.grid = g;
  out.values.assign(src.values.size(), 0.0);
  std::vector<double> rowmax(nx);
  for (const auto& row : off.rows) {
    for (int iy = 0; iy < ny; ++iy) {
      const int sy = iy + row[0];
      if (sy < 0 || sy >= ny) continue;
      std::fill(rowmax.begin(), rowmax.end(), 0.0);
      sliding_max_row(src.values.data() + static_cast<std::size_t>(sy) * nx, nx,
                      row[1], row[2], rowmax.data());
      double* o = out.values.data() + static_cast<std::size_t>(iy) * nx;
      for (int ix = 0; ix < nx; ++ix) o[ix] = std::max(o[ix], rowmax[ix]);
    }
  }
  return out;
}

bool footprint_inside(const GridSpec& g, const std::vector<unsigned char>& mask,
                      std::array<int, 2> center, const BallOffsets& off) {
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  for (const auto& row : off.rows) {
    const int sy = center[1] + row[0];
    if (sy < 0 || sy >= ny) return false;
    for (int dx = row[1]; dx <= row[2]; ++dx) {
      const int sx = center[0] + dx;
      if (sx < 0 || sx >= nx) return false;
      if (!mask.empty() && !mask[static_cast<std::size_t>(sy) * nx + sx]) return false;
    }
  }
  return true;
}

}  // namespace aniso
