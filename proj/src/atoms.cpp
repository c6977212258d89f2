#include "aniso/atoms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "aniso/ballops.hpp"
#include "aniso/maximal.hpp"

namespace aniso {

AtomReport validate_atom(const DilationStructure& D, const SampledField& a,
                         const Point& x0, int k, double r, int s,
                         const ExponentFunction& p, const ExponentFunction& q,
                         double tol) {
  AtomReport rep;
  const GridSpec& g = a.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  for (int iy = 0; iy < ny && rep.support_ok; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (a.at(ix, iy) == 0.0) continue;
      Point c = g.center(ix, iy);
      if (!D.ball_contains({c[0] - x0[0], c[1] - x0[1]}, k)) {
        rep.support_ok = false;
        break;
      }
    }
  const double chi = indicator_lorentz_norm(D, p, q, k).value;
  const bool sup_case = std::isinf(r);
  const double bound =
      (sup_case ? 1.0 : std::pow(D.det_abs(), static_cast<double>(k) / r)) / chi;
  const double measured = sup_case ? a.max_abs() : a.lr_norm(r);
  rep.size_ok = measured <= bound * (1.0 + 1e-12);
  rep.size_slack = bound - measured;
  for (const auto& al : monomial_exponents(g.n, s)) {
    double m = std::fabs(integrate(a, {al[0], al[1]}));
    rep.worst_moment = std::max(rep.worst_moment, m);
  }
  rep.moments_ok = rep.worst_moment <= tol;
  return rep;
}

namespace {

bool supports_overlap(const SampledField& a, const SampledField& b) {
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (a.values[i] != 0.0 && b.values[i] != 0.0) return true;
  return false;
}

}  // namespace

AtomicDecomposition atomic_decompose(const DilationStructure& D,
                                     const SampledField& f,
                                     const ExponentFunction& p,
                                     const ExponentFunction& q, int s,
                                     int j_min, int j_max,
                                     const MaximalConfig& cfg) {
  AtomicDecomposition out;
  out.coefficient_field = SampledField(f.grid);
  SampledField grand = maximal_grand(D, f, cfg);

  std::vector<CZDecomposition> decs;
  decs.reserve(j_max - j_min + 2);
  for (int j = j_min; j <= j_max + 1; ++j)
    decs.push_back(cz_decompose(D, f, grand, std::ldexp(1.0, j), s));

  struct RawAtom {
    SampledField h;
    std::array<int, 2> cell;
    int ell;
    int j;
  };
  std::vector<RawAtom> raw;
  const int w4 = 4 * D.omega();
  for (int j = j_min; j <= j_max; ++j) {
    const CZDecomposition& lo = decs[j - j_min];
    const CZDecomposition& hi = decs[j - j_min + 1];
    for (std::size_t i = 0; i < lo.zetas.size(); ++i) {
      SampledField h = lo.bad_parts[i];
      for (std::size_t k2 = 0; k2 < hi.zetas.size(); ++k2) {
        if (!supports_overlap(lo.zetas[i], hi.zetas[k2])) continue;
        const auto& bk = hi.cover.balls[k2];
        Point ck = ball_center(hi.mask, bk);
        // u = (f - P_k^{j+1}) zeta_i^j
        SampledField u(f.grid);
        const int nx = f.grid.ext[0];
        const int ny = f.grid.n == 2 ? f.grid.ext[1] : 1;
        for (int iy = 0; iy < ny; ++iy)
          for (int ix = 0; ix < nx; ++ix) {
            double zi = lo.zetas[i].at(ix, iy);
            if (zi == 0.0) continue;
            Point x = f.grid.center(ix, iy);
            u.at(ix, iy) =
                (f.at(ix, iy) -
                 eval_polynomial(D, hi.polys[k2], s, ck, bk.ell, x)) *
                zi;
          }
        auto pik = project_polynomial(D, u, hi.zetas[k2], s, ck, bk.ell);
        for (int iy = 0; iy < ny; ++iy)
          for (int ix = 0; ix < nx; ++ix) {
            double zk = hi.zetas[k2].at(ix, iy);
            if (zk == 0.0) continue;
            Point x = f.grid.center(ix, iy);
            h.at(ix, iy) -=
                (u.at(ix, iy) - eval_polynomial(D, pik, s, ck, bk.ell, x)) * zk;
          }
      }
      out.c0 = std::max(out.c0, h.max_abs() * std::ldexp(1.0, -j));
      raw.push_back({std::move(h), lo.cover.balls[i].cell, lo.cover.balls[i].ell, j});
    }
  }

  SampledField recon(f.grid);
  for (const auto& ra : raw) recon += ra.h;
  double resid = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    resid = std::max(resid, std::fabs(f.values[i] - recon.values[i]));
  out.residual_linf = resid;
  if (resid > std::ldexp(1.0, j_min + 1) * out.c0)
    throw LevelRangeTooNarrow("reconstruction residual exceeds the height floor");

  std::map<int, double> chi_cache;
  auto chi_norm = [&](int k) {
    auto it = chi_cache.find(k);
    if (it == chi_cache.end())
      it = chi_cache.emplace(k, indicator_lorentz_norm(D, p, q, k).value).first;
    return it->second;
  };
  const double inf = std::numeric_limits<double>::infinity();
  for (auto& ra : raw) {
    if (ra.h.max_abs() == 0.0) continue;
    const int kb = ra.ell + w4;
    const double chi = chi_norm(kb);
    const double lam = std::ldexp(1.0, ra.j) * out.c0 * chi;
    Atom at;
    at.a = std::move(ra.h);
    at.a *= 1.0 / lam;
    at.x0 = f.grid.center(ra.cell[0], ra.cell[1]);
    at.k = kb;
    at.r = inf;
    at.s = s;
    at.checked = validate_atom(D, at.a, at.x0, kb, inf, s, p, q, 1e-6);
    // coefficient field: lambda * ||chi||^-1 on the supporting ball
    BallOffsets off = BallOffsets::make(D, kb, f.grid.h);
    const int nx = f.grid.ext[0];
    const int ny = f.grid.n == 2 ? f.grid.ext[1] : 1;
    for (const auto& row : off.rows) {
      int sy = ra.cell[1] + row[0];
      if (sy < 0 || sy >= ny) continue;
      for (int dx = row[1]; dx <= row[2]; ++dx) {
        int sx = ra.cell[0] + dx;
        if (sx < 0 || sx >= nx) continue;
        out.coefficient_field.at(sx, sy) += lam / chi;
      }
    }
    out.lambdas.push_back(lam);
    out.levels.push_back(ra.j);
    out.atoms.push_back(std::move(at));
  }
  return out;
}

double coefficient_quasinorm(const DilationStructure& D,
                             const AtomicDecomposition& decomp,
                             const ExponentFunction& p,
                             const ExponentFunction& q) {
  (void)D;
  if (decomp.atoms.empty()) return 0.0;
  return lorentz_norm(decomp.coefficient_field, p, q).value;
}

double finite_atomic_norm_upper(const DilationStructure& D,
                                const SampledField& f,
                                const ExponentFunction& p,
                                const ExponentFunction& q, double r, int s,
                                const MaximalConfig& cfg) {
  if (f.max_abs() == 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();

  // one-atom strategy: smallest centered ball containing the support
  auto box = f.support_box();
  if (box) {
    int cx = ((*box)[0] + (*box)[1]) / 2;
    int cy = ((*box)[2] + (*box)[3]) / 2;
    Point x0 = f.grid.center(cx, cy);
    const int nx = f.grid.ext[0];
    const int ny = f.grid.n == 2 ? f.grid.ext[1] : 1;
    int k = -8;
    bool found = false;
    for (; k <= 64 && !found; ++k) {
      found = true;
      for (int iy = 0; iy < ny && found; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          if (f.at(ix, iy) == 0.0) continue;
          Point c = f.grid.center(ix, iy);
          if (!D.ball_contains({c[0] - x0[0], c[1] - x0[1]}, k)) {
            found = false;
            break;
          }
        }
      if (found) break;
    }
    if (found) {
      double chi = indicator_lorentz_norm(D, p, q, k).value;
      bool sup_case = std::isinf(r);
      double lam = sup_case
                       ? f.max_abs() * chi
                       : f.lr_norm(r) * chi /
                             std::pow(D.det_abs(), static_cast<double>(k) / r);
      if (lam > 0.0) {
        SampledField a = f;
        a *= 1.0 / lam;
        if (validate_atom(D, a, x0, k, r, s, p, q, 1e-6).valid())
          best = std::min(best, lam);
      }
    }
  }

  // truncated two-level decompositions over three level windows
  MaximalConfig mc = cfg;
  SampledField grand = maximal_grand(D, f, mc);
  double top = grand.max_abs();
  if (top > 0.0) {
    int j_top = static_cast<int>(std::floor(std::log2(top)));
    for (int width : {4, 8, 12}) {
      try {
        auto dec = atomic_decompose(D, f, p, q, s, j_top - width, j_top, cfg);
        double c = coefficient_quasinorm(D, dec, p, q);
        if (c > 0.0) best = std::min(best, c);
      } catch (const std::exception&) {
        // strategy unavailable on this field; keep the others
      }
    }
  }
  if (!std::isfinite(best))
    throw NoDecompositionFound("no built-in strategy decomposes this field");
  return best;
}

double measure_mhl_opnorm(const DilationStructure& D, const SampledField& h,
                          const MaximalConfig& cfg) {
  SampledField g = h;
  for (double& v : g.values) v = std::fabs(v);
  if (g.max_abs() == 0.0) {
    g = SampledField(h.grid);
    g.values[g.values.size() / 2] = 1.0;
  }
  double worst = 1.0;
  for (int i = 0; i < 3; ++i) {
    double before = g.l2();
    SampledField m = maximal_hl(D, g, cfg);
    double after = m.l2();
    if (before > 0.0) worst = std::max(worst, after / before);
    double ma = m.max_abs();
    if (ma > 0.0) m *= 1.0 / ma;
    g = std::move(m);
  }
  return worst;
}

SampledField rubio_de_francia(const DilationStructure& D,
                              const SampledField& h, const MaximalConfig& cfg,
                              int iterations, double mhl_norm) {
  if (mhl_norm <= 0.0) mhl_norm = measure_mhl_opnorm(D, h, cfg);
  SampledField term = h;
  for (double& v : term.values) v = std::fabs(v);
  SampledField acc = term;
  double denom = 1.0;
  for (int i = 1; i <= iterations; ++i) {
    term = maximal_hl(D, term, cfg);
    denom *= 2.0 * mhl_norm;
    SampledField scaled = term;
    scaled *= 1.0 / denom;
    acc += scaled;
  }
  return acc;
}

}  // namespace aniso
