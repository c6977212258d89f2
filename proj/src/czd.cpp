#include "aniso/czd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "aniso/ballops.hpp"

namespace aniso {

std::size_t Mask::count() const {
  std::size_t c = 0;
  for (unsigned char v : in) c += v != 0;
  return c;
}

Mask superlevel_mask(const SampledField& f, double lambda) {
  Mask m;
  m.grid = f.grid;
  m.in.resize(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i)
    m.in[i] = f.values[i] > lambda ? 1 : 0;
  return m;
}

Point ball_center(const Mask& m, const WhitneyBall& wb) {
  return m.grid.center(wb.cell[0], wb.cell[1]);
}

namespace {

struct OffsetCache {
  const DilationStructure& D;
  double h;
  std::map<int, BallOffsets> cache;
  const BallOffsets& get(int k) {
    auto it = cache.find(k);
    if (it == cache.end())
      it = cache.emplace(k, BallOffsets::make(D, k, h)).first;
    return it->second;
  }
};

}  // namespace

WhitneyCover whitney_cover(const DilationStructure& D, const Mask& mask) {
  WhitneyCover cover;
  const std::size_t total = mask.count();
  if (total == 0) return cover;

  const GridSpec& g = mask.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  const int w = D.omega();
  OffsetCache off{D, g.h, {}};

  // scale range: down to single-cell inflated balls, up to grid-sized ones
  int ell_min = 0;
  while (off.get(ell_min + 4 * w).cell_count > 1) --ell_min;
  int ell_hi = 0;
  {
    double diam = std::max(nx, ny) * g.h;
    while (ell_hi < 64) {
      Point hw = D.ball_bbox_halfwidth(ell_hi + 1 + 4 * w);
      if (std::max(hw[0], hw[1]) > diam) break;
      ++ell_hi;
    }
  }

  // ell(x) = max{k : x + B_{k+4w} inside the mask}
  constexpr int kUnset = std::numeric_limits<int>::min();
  std::vector<int> ell(g.cells(), kUnset);
  for (int k = ell_hi; k >= ell_min; --k) {
    const BallOffsets& o = off.get(k + 4 * w);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        std::size_t idx = static_cast<std::size_t>(iy) * nx + ix;
        if (!mask.in[idx] || ell[idx] != kUnset) continue;
        if (footprint_inside(g, mask.in, {ix, iy}, o)) ell[idx] = k;
      }
  }

  std::vector<std::size_t> order;
  order.reserve(total);
  for (std::size_t i = 0; i < g.cells(); ++i)
    if (mask.in[i] && ell[i] != kUnset) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ell[a] > ell[b]; });

  std::vector<unsigned char> claimed(g.cells(), 0), covered(g.cells(), 0);
  std::size_t covered_count = 0;
  auto cells_of = [&](std::array<int, 2> c, const BallOffsets& o, auto&& fn) {
    for (const auto& row : o.rows) {
      int sy = c[1] + row[0];
      if (sy < 0 || sy >= ny) continue;
      for (int dx = row[1]; dx <= row[2]; ++dx) {
        int sx = c[0] + dx;
        if (sx < 0 || sx >= nx) continue;
        fn(static_cast<std::size_t>(sy) * nx + sx);
      }
    }
  };

  for (std::size_t idx : order) {
    if (covered_count == total) break;
    std::array<int, 2> c{static_cast<int>(idx % nx), static_cast<int>(idx / nx)};
    int l = ell[idx];
    const BallOffsets& core = off.get(l - w);
    bool free = true;
    cells_of(c, core, [&](std::size_t i) { free = free && !claimed[i]; });
    if (!free) continue;
    cells_of(c, core, [&](std::size_t i) { claimed[i] = 1; });
    cells_of(c, off.get(l), [&](std::size_t i) {
      if (mask.in[i] && !covered[i]) {
        covered[i] = 1;
        ++covered_count;
      }
    });
    cover.balls.push_back({c, l});
  }

  verify_whitney(D, mask, cover);
  return cover;
}

void verify_whitney(const DilationStructure& D, const Mask& mask,
                    WhitneyCover& cover) {
  const GridSpec& g = mask.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  const int w = D.omega();
  OffsetCache off{D, g.h, {}};
  const std::size_t total = mask.count();
  if (total == 0) {
    if (!cover.balls.empty()) throw PropertyViolated(1);
    cover.L_measured = 0;
    return;
  }

  std::vector<int> count(g.cells(), 0);
  std::vector<unsigned char> claim(g.cells(), 0);
  for (const auto& b : cover.balls) {
    const BallOffsets& o = off.get(b.ell);
    for (const auto& row : o.rows) {
      int sy = b.cell[1] + row[0];
      if (sy < 0 || sy >= ny) continue;
      for (int dx = row[1]; dx <= row[2]; ++dx) {
        int sx = b.cell[0] + dx;
        if (sx < 0 || sx >= nx) continue;
        ++count[static_cast<std::size_t>(sy) * nx + sx];
      }
    }
    // (3.2) disjoint cores
    const BallOffsets& core = off.get(b.ell - w);
    for (const auto& row : core.rows) {
      int sy = b.cell[1] + row[0];
      for (int dx = row[1]; dx <= row[2]; ++dx) {
        int sx = b.cell[0] + dx;
        if (sy < 0 || sy >= ny || sx < 0 || sx >= nx) continue;
        std::size_t i = static_cast<std::size_t>(sy) * nx + sx;
        if (claim[i]) throw PropertyViolated(2);
        claim[i] = 1;
      }
    }
    // (3.3) maximal inflated ball inside the mask
    if (!footprint_inside(g, mask.in, b.cell, off.get(b.ell + 4 * w)))
      throw PropertyViolated(3);
    if (footprint_inside(g, mask.in, b.cell, off.get(b.ell + 4 * w + 1)))
      throw PropertyViolated(3);
  }
  // (3.1) coverage
  for (std::size_t i = 0; i < g.cells(); ++i)
    if (mask.in[i] && count[i] == 0) throw PropertyViolated(1);
  // (3.5)
  cover.L_measured = 0;
  for (std::size_t i = 0; i < g.cells(); ++i)
    if (mask.in[i]) cover.L_measured = std::max(cover.L_measured, count[i]);

  // (3.4) scales of intersecting 2w-dilates differ by at most w; track the
  // dilates on a padded index range so out-of-grid intersections count too
  int pad = 0;
  for (const auto& b : cover.balls) {
    Point hw = D.ball_bbox_halfwidth(b.ell + 2 * w);
    pad = std::max(pad, static_cast<int>(std::floor(std::max(hw[0], hw[1]) / g.h)) + 2);
  }
  const int pnx = nx + 2 * pad, pny = ny + 2 * pad;
  std::vector<std::vector<int>> owners(static_cast<std::size_t>(pnx) * pny);
  for (std::size_t bi = 0; bi < cover.balls.size(); ++bi) {
    const auto& b = cover.balls[bi];
    const BallOffsets& o = off.get(b.ell + 2 * w);
    for (const auto& row : o.rows) {
      int sy = b.cell[1] + row[0] + pad;
      if (sy < 0 || sy >= pny) continue;
      for (int dx = row[1]; dx <= row[2]; ++dx) {
        int sx = b.cell[0] + dx + pad;
        if (sx < 0 || sx >= pnx) continue;
        owners[static_cast<std::size_t>(sy) * pnx + sx].push_back(
            static_cast<int>(bi));
      }
    }
  }
  for (const auto& ids : owners)
    for (std::size_t a = 0; a + 1 < ids.size(); ++a)
      for (std::size_t c = a + 1; c < ids.size(); ++c)
        if (std::abs(cover.balls[ids[a]].ell - cover.balls[ids[c]].ell) > w)
          throw PropertyViolated(4);
}

namespace {

// C-infinity profile: 1 on B_0, 0 off B_omega, exp-bump across the gap
double theta_profile(const DilationStructure& D, const Point& y) {
  const Mat2& M = D.ellipsoid_form();
  auto gauge = [&](const Point& z) {
    double q = M[0] * z[0] * z[0] + (M[1] + M[2]) * z[0] * z[1] +
               M[3] * z[1] * z[1];
    return std::sqrt(std::max(q, 0.0));
  };
  double s0 = gauge(y);
  if (s0 <= 1.0) return 1.0;
  Point yw = D.apply_power(y, -D.omega());
  double sw = gauge(yw);
  if (sw >= 1.0) return 0.0;
  double u = (s0 - 1.0) / ((s0 - 1.0) + (1.0 - sw));
  return std::exp(1.0) * std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace

std::vector<SampledField> partition_of_unity(const DilationStructure& D,
                                             const Mask& mask,
                                             const WhitneyCover& cover) {
  const GridSpec& g = mask.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  std::vector<SampledField> thetas;
  thetas.reserve(cover.balls.size());
  SampledField denom{g};
  for (const auto& b : cover.balls) {
    SampledField th(g);
    Point c = ball_center(mask, b);
    Point hw = D.ball_bbox_halfwidth(b.ell + D.omega());
    int rx = static_cast<int>(std::floor(hw[0] / g.h)) + 1;
    int ry = g.n == 2 ? static_cast<int>(std::floor(hw[1] / g.h)) + 1 : 0;
    for (int iy = std::max(0, b.cell[1] - ry);
         iy <= std::min(ny - 1, b.cell[1] + ry); ++iy)
      for (int ix = std::max(0, b.cell[0] - rx);
           ix <= std::min(nx - 1, b.cell[0] + rx); ++ix) {
        Point x = g.center(ix, iy);
        Point d{x[0] - c[0], x[1] - c[1]};
        double v = theta_profile(D, D.apply_power(d, -b.ell));
        if (v != 0.0) th.at(ix, iy) = v;
      }
    denom += th;
    thetas.push_back(std::move(th));
  }
  for (std::size_t i = 0; i < g.cells(); ++i) {
    if (mask.in[i] && !(denom.values[i] > 0.0))
      throw EmptyDenominator("covered cell with vanishing theta sum");
  }
  for (auto& th : thetas)
    for (std::size_t i = 0; i < g.cells(); ++i)
      th.values[i] = mask.in[i] ? th.values[i] / denom.values[i] : 0.0;
  return thetas;
}

std::vector<std::array<int, 2>> monomial_exponents(int n, int s) {
  std::vector<std::array<int, 2>> out;
  if (n == 1) {
    for (int a = 0; a <= s; ++a) out.push_back({a, 0});
  } else {
    for (int d = 0; d <= s; ++d)
      for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  }
  return out;
}

std::vector<double> project_polynomial(const DilationStructure& D,
                                       const SampledField& f,
                                       const SampledField& zeta, int s,
                                       const Point& center, int ell) {
  const GridSpec& g = zeta.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  auto exps = monomial_exponents(g.n, s);
  const int m = static_cast<int>(exps.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  std::vector<double> mono(m);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      double z = zeta.at(ix, iy);
      if (z == 0.0) continue;
      Point x = g.center(ix, iy);
      Point d{x[0] - center[0], x[1] - center[1]};
      Point wv = D.apply_power(d, -ell);
      for (int a = 0; a < m; ++a)
        mono[a] = std::pow(wv[0], exps[a][0]) *
                  (exps[a][1] ? std::pow(wv[1], exps[a][1]) : 1.0);
      double fv = f.at(ix, iy);
      for (int a = 0; a < m; ++a) {
        rhs(a) += fv * mono[a] * z;
        for (int bi = a; bi < m; ++bi) G(a, bi) += mono[a] * mono[bi] * z;
      }
    }
  for (int a = 0; a < m; ++a)
    for (int bi = 0; bi < a; ++bi) G(a, bi) = G(bi, a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(m - 1);
  if (!(smin > 0.0) || smax / smin > 1e10)
    throw IllConditioned("projection Gram system condition number too large");
  Eigen::VectorXd c = svd.solve(rhs);
  return std::vector<double>(c.data(), c.data() + m);
}

double eval_polynomial(const DilationStructure& D,
                       const std::vector<double>& coeffs, int s,
                       const Point& center, int ell, const Point& x) {
  auto exps = monomial_exponents(D.dim(), s);
  Point d{x[0] - center[0], x[1] - center[1]};
  Point wv = D.apply_power(d, -ell);
  double acc = 0.0;
  for (std::size_t a = 0; a < exps.size() && a < coeffs.size(); ++a)
    acc += coeffs[a] * std::pow(wv[0], exps[a][0]) *
           (exps[a][1] ? std::pow(wv[1], exps[a][1]) : 1.0);
  return acc;
}

CZDecomposition cz_decompose(const DilationStructure& D, const SampledField& f,
                             double lambda, int s, const MaximalConfig& cfg) {
  return cz_decompose(D, f, maximal_grand(D, f, cfg), lambda, s);
}

CZDecomposition cz_decompose(const DilationStructure& D, const SampledField& f,
                             const SampledField& grand, double lambda, int s) {
  CZDecomposition out;
  out.lambda = lambda;
  out.degree = s;
  out.mask = superlevel_mask(grand, lambda);
  out.good_part = f;
  if (out.mask.count() == 0) return out;

  WhitneyCover cover = whitney_cover(D, out.mask);
  std::vector<SampledField> zetas = partition_of_unity(D, out.mask, cover);

  const double tiny = 1e-12 * f.grid.cell_measure();
  for (std::size_t i = 0; i < zetas.size(); ++i) {
    if (zetas[i].integral() < tiny) {
      ++out.dropped;
      continue;
    }
    out.cover.balls.push_back(cover.balls[i]);
    out.zetas.push_back(std::move(zetas[i]));
  }
  out.cover.L_measured = cover.L_measured;

  for (std::size_t i = 0; i < out.zetas.size(); ++i) {
    const auto& b = out.cover.balls[i];
    Point c = ball_center(out.mask, b);
    auto coeffs = project_polynomial(D, f, out.zetas[i], s, c, b.ell);
    out.polys.push_back(coeffs);
    SampledField bi(f.grid);
    const int nx = f.grid.ext[0];
    const int ny = f.grid.n == 2 ? f.grid.ext[1] : 1;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        double z = out.zetas[i].at(ix, iy);
        if (z == 0.0) continue;
        Point x = f.grid.center(ix, iy);
        bi.at(ix, iy) =
            (f.at(ix, iy) - eval_polynomial(D, coeffs, s, c, b.ell, x)) * z;
      }
    for (std::size_t j = 0; j < out.good_part.values.size(); ++j)
      out.good_part.values[j] -= bi.values[j];
    out.bad_parts.push_back(std::move(bi));
  }
  return out;
}

}  // namespace aniso
