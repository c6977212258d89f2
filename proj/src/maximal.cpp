#include "aniso/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "aniso/ballops.hpp"

namespace aniso {

SampledField sample_dilated(const DilationStructure& D, const TestFunction& phi,
                            int k, double h) {
  const int n = D.dim();
  const double R = phi.support_radius();
  // bounding box of A^k [-R, R]^n
  double hw[2] = {0.0, 0.0};
  const int ncorner = n == 2 ? 4 : 2;
  for (int c = 0; c < ncorner; ++c) {
    Point corner{(c & 1) ? R : -R, n == 2 ? ((c & 2) ? R : -R) : 0.0};
    Point img = D.apply_power(corner, k);
    hw[0] = std::max(hw[0], std::fabs(img[0]));
    hw[1] = std::max(hw[1], std::fabs(img[1]));
  }
  const int mx = static_cast<int>(std::floor(hw[0] / h)) + 1;
  const int my = n == 2 ? static_cast<int>(std::floor(hw[1] / h)) + 1 : 0;
  GridSpec g;
  g.n = n;
  g.h = h;
  g.ext = {2 * mx + 1, n == 2 ? 2 * my + 1 : 1};
  g.origin = {-(mx + 0.5) * h, n == 2 ? -(my + 0.5) * h : 0.0};
  SampledField out(g);
  const double scale = 1.0 / std::pow(D.det_abs(), k);
  const int ny = n == 2 ? g.ext[1] : 1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < g.ext[0]; ++ix) {
      Point x = g.center(ix, iy);
      out.at(ix, iy) = scale * phi(D.apply_power(x, -k), n);
    }
  return out;
}

SampledField sample_onto(const SampledField& src, const GridSpec& g) {
  SampledField out(g);
  const int ny = g.n == 2 ? g.ext[1] : 1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < g.ext[0]; ++ix)
      out.at(ix, iy) = src.evaluate(g.center(ix, iy));
  return out;
}

namespace {

SampledField abs_field(const SampledField& f) {
  SampledField g = f;
  for (double& v : g.values) v = std::fabs(v);
  return g;
}

// f embedded in a grid padded by `pad` cells on every side, zeros outside.
SampledField pad_field(const SampledField& f, int pad) {
  GridSpec g = f.grid;
  g.origin[0] -= pad * g.h;
  g.ext[0] += 2 * pad;
  if (g.n == 2) {
    g.origin[1] -= pad * g.h;
    g.ext[1] += 2 * pad;
  }
  SampledField out(g);
  const int ny = f.grid.n == 2 ? f.grid.ext[1] : 1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < f.grid.ext[0]; ++ix)
      out.at(ix + pad, f.grid.n == 2 ? iy + pad : 0) = f.at(ix, iy);
  return out;
}

void max_into(SampledField& acc, const SampledField& contrib) {
  for (std::size_t i = 0; i < acc.values.size(); ++i)
    acc.values[i] = std::max(acc.values[i], contrib.values[i]);
}

}  // namespace

SampledField maximal_hl(const DilationStructure& D, const SampledField& f,
                        const MaximalConfig& cfg) {
  const double h = f.grid.h;
  Point hwmax = D.ball_bbox_halfwidth(cfg.k_max);
  int pad = static_cast<int>(std::floor(std::max(hwmax[0], hwmax[1]) / h)) + 2;
  SampledField ext = pad_field(abs_field(f), pad);
  SampledField best = ext;  // degenerate single-cell ball: avg == |f|
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    BallOffsets off = BallOffsets::make(D, k, h);
    if (off.cell_count <= 1 && k > cfg.k_min) continue;
    SampledField avg = window_sum(ext, off);
    double inv = 1.0 / static_cast<double>(off.cell_count);
    for (double& v : avg.values) v *= inv;
    // x in y+B_k iff y in x+B_k (balls are symmetric)
    max_into(best, window_max(avg, off));
  }
  return sample_onto(best, f.grid);
}

SampledField maximal_radial(const DilationStructure& D, const SampledField& f,
                            const TestFunction& phi, const MaximalConfig& cfg) {
  SampledField out(f.grid);
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    SampledField phik = sample_dilated(D, phi, k, f.grid.h);
    SampledField conv = abs_field(convolve(f, phik));
    max_into(out, sample_onto(conv, f.grid));
  }
  return out;
}

SampledField maximal_nontangential(const DilationStructure& D,
                                   const SampledField& f,
                                   const TestFunction& phi,
                                   const MaximalConfig& cfg) {
  SampledField out(f.grid);
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    SampledField phik = sample_dilated(D, phi, k, f.grid.h);
    SampledField conv = abs_field(convolve(f, phik));
    BallOffsets off = BallOffsets::make(D, k, f.grid.h);
    max_into(out, sample_onto(window_max(conv, off), f.grid));
  }
  return out;
}

std::vector<TestFunction> standard_family() {
  std::vector<TestFunction> fam;
  for (double w : {1.0, 0.5}) {
    fam.push_back({TestFunctionKind::gaussian, w, 1.0});
    fam.push_back({TestFunctionKind::smooth_bump, w, 1.0});
    fam.push_back({TestFunctionKind::oscillating_bump, w, 1.0});
  }
  fam.push_back({TestFunctionKind::gaussian, 0.75, 1.0});
  fam.push_back({TestFunctionKind::smooth_bump, 0.75, 1.0});
  return fam;
}

SampledField maximal_grand(const DilationStructure& D, const SampledField& f,
                           const MaximalConfig& cfg) {
  SampledField out(f.grid);
  for (TestFunction phi : standard_family()) {
    phi.normalize_sn(D, cfg.N, cfg.h_fine);
    max_into(out, maximal_nontangential(D, f, phi, cfg));
  }
  return out;
}

SampledField maximal_truncated(const DilationStructure& D,
                               const SampledField& f, const TestFunction& phi,
                               const MaximalConfig& cfg, Truncation variant) {
  SampledField out(f.grid);
  const int k_hi = std::min(cfg.k_max, cfg.K);
  const double b = D.det_abs();
  for (int k = cfg.k_min; k <= k_hi; ++k) {
    SampledField phik = sample_dilated(D, phi, k, f.grid.h);
    SampledField conv = abs_field(convolve(f, phik));
    const double scale_kK = std::pow(1.0 + std::pow(b, -k - cfg.K), -cfg.L);
    // damp in the evaluation point y
    const GridSpec& cg = conv.grid;
    const int ny = cg.n == 2 ? cg.ext[1] : 1;
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < cg.ext[0]; ++ix) {
        Point y = cg.center(ix, iy);
        double rho = D.step_quasinorm(D.apply_power(y, -cfg.K));
        conv.at(ix, iy) *= std::pow(std::max(1.0, rho), -cfg.L) * scale_kK;
      }
    if (variant == Truncation::radial) {
      max_into(out, sample_onto(conv, f.grid));
    } else if (variant == Truncation::nontangential) {
      BallOffsets off = BallOffsets::make(D, k, f.grid.h);
      max_into(out, sample_onto(window_max(conv, off), f.grid));
    } else {
      const int ony = f.grid.n == 2 ? f.grid.ext[1] : 1;
      for (int oy = 0; oy < ony; ++oy)
        for (int ox = 0; ox < f.grid.ext[0]; ++ox) {
          Point x = f.grid.center(ox, oy);
          double best = out.at(ox, oy);
          for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < cg.ext[0]; ++ix) {
              double v = conv.at(ix, iy);
              if (v <= best) continue;  // the extra factor is <= 1
              Point y = cg.center(ix, iy);
              Point d{x[0] - y[0], x[1] - y[1]};
              double rho = D.step_quasinorm(D.apply_power(d, -k));
              v *= std::pow(std::max(1.0, rho), -cfg.N);
              best = std::max(best, v);
            }
          out.at(ox, oy) = best;
        }
    }
  }
  return out;
}

VectorCheckResult vector_maximal_check(const DilationStructure& D,
                                       const std::vector<SampledField>& fs,
                                       double r, const ExponentFunction& p,
                                       const ExponentFunction& q,
                                       const MaximalConfig& cfg) {
  VectorCheckResult res;
  if (fs.empty()) return res;
  SampledField lhs(fs.front().grid), rhs(fs.front().grid);
  for (const SampledField& f : fs) {
    SampledField m = maximal_hl(D, f, cfg);
    for (std::size_t i = 0; i < lhs.values.size(); ++i) {
      lhs.values[i] += std::pow(m.values[i], r);
      rhs.values[i] += std::pow(std::fabs(f.values[i]), r);
    }
  }
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    lhs.values[i] = std::pow(lhs.values[i], 1.0 / r);
    rhs.values[i] = std::pow(rhs.values[i], 1.0 / r);
  }
  res.lhs = lorentz_norm(lhs, p, q).value;
  res.rhs = lorentz_norm(rhs, p, q).value;
  return res;
}

}  // namespace aniso
