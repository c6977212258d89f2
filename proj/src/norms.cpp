#include "aniso/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aniso/ballops.hpp"

namespace aniso {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double StepFunction::operator()(double x) const {
  if (t.empty() || x < 0.0 || x >= t.back()) return 0.0;
  auto it = std::upper_bound(t.begin(), t.end(), x);
  std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (i == 0) return v.front();
  return v[i - 1];
}

double StepFunction::integral() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * (t[i + 1] - t[i]);
  return acc;
}

double distribution_function(const SampledField& f, double s) {
  std::size_t count = 0;
  for (double x : f.values)
    if (std::fabs(x) > s) ++count;
  return static_cast<double>(count) * f.grid.cell_measure();
}

StepFunction rearrangement(const SampledField& f) {
  std::vector<double> mags;
  mags.reserve(f.values.size());
  for (double x : f.values)
    if (x != 0.0) mags.push_back(std::fabs(x));
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  StepFunction out;
  out.t.push_back(0.0);
  const double m = f.grid.cell_measure();
  std::size_t i = 0;
  while (i < mags.size()) {
    std::size_t j = i;
    while (j < mags.size() && mags[j] == mags[i]) ++j;
    out.v.push_back(mags[i]);
    out.t.push_back(out.t.back() + static_cast<double>(j - i) * m);
    i = j;
  }
  return out;
}

AverageRearrangement AverageRearrangement::make(const StepFunction& fstar) {
  AverageRearrangement a;
  a.fstar = fstar;
  a.cum.assign(fstar.t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < fstar.t.size(); ++i)
    a.cum[i + 1] = a.cum[i] + fstar.v[i] * (fstar.t[i + 1] - fstar.t[i]);
  return a;
}

double AverageRearrangement::operator()(double t) const {
  if (t <= 0.0 || fstar.t.size() < 2) return 0.0;
  if (t >= fstar.t.back()) return cum.back() / t;
  auto it = std::upper_bound(fstar.t.begin(), fstar.t.end(), t);
  std::size_t i = static_cast<std::size_t>(it - fstar.t.begin()) - 1;
  return (cum[i] + fstar.v[i] * (t - fstar.t[i])) / t;
}

namespace {

// adaptive Simpson on [a, b]
double simpson3(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double fm, double whole, double tol,
             int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson3(f, a, fa, m, fm, flm);
  double right = simpson3(f, m, fm, b, fb, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double integrate_panel(const std::function<double(double)>& f, double a,
                       double b, double tol) {
  if (!(b > a)) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson3(f, a, fa, b, fb, fm);
  return adapt(f, a, fa, b, fb, fm, whole, tol, 28);
}

}  // namespace

double modular(const TFunction& g, const ExponentFunction& q, double lambda) {
  if (!(lambda > 0.0)) return kInf;
  auto phi = [&](double t) -> double {
    double w = std::fabs(g.eval(t)) / lambda;
    if (w == 0.0) return 0.0;
    return std::pow(w, q(t));
  };
  double acc = 0.0;
  const auto& P = g.panels;
  for (std::size_t i = 0; i + 1 < P.size(); ++i) {
    double a = P[i], b = P[i + 1];
    if (!(b > a)) continue;
    if (a == 0.0) {
      // log-subdivide toward 0; the integrand may have a power singularity
      double prev = -1.0, deep = 0.0;
      double hi = b;
      for (int j = 0; j < 52 && hi > 0.0; ++j) {
        double lo = 0.5 * hi;
        double s = integrate_panel(phi, lo, hi, 1e-12);
        acc += s;
        prev = deep;
        deep = s;
        hi = lo;
        if (deep < 1e-16 * (acc + 1e-300) && j > 8) {
          hi = 0.0;
          break;
        }
      }
      if (hi > 0.0 && deep > 0.0) {
        double r = prev > 0.0 ? deep / prev : 0.0;
        if (r >= 1.0) return kInf;  // nonintegrable singularity
        acc += deep * r / (1.0 - r);
      }
    } else {
      acc += integrate_panel(phi, a, b, 1e-12);
    }
  }
  if (g.has_tail && !P.empty()) {
    double lo = std::max(P.back(), 1e-300);
    double prev = -1.0;
    bool closed = false;
    for (int j = 0; j < 80; ++j) {
      double hi = 2.0 * lo;
      double s = integrate_panel(phi, lo, hi, 1e-12);
      acc += s;
      if (s < 1e-14 * (acc + 1e-300)) {
        closed = true;
        break;
      }
      if (prev >= 0.0 && j == 79) {
        double r = prev > 0.0 ? s / prev : 0.0;
        if (r >= 1.0) return kInf;
        acc += s * r / (1.0 - r);
        closed = true;
      }
      prev = s;
      lo = hi;
    }
    if (!closed) {
      // ratios never decayed enough to extrapolate safely
      return kInf;
    }
  }
  return acc;
}

namespace {

TFunction step_tfunction(const StepFunction& s) {
  TFunction g;
  g.panels = s.t;
  if (g.panels.empty()) g.panels = {0.0, 1.0};
  g.eval = [s](double t) { return s(t); };
  return g;
}

NormResult luxemburg(const std::function<double(double)>& rho) {
  NormResult res;
  double hi = 1.0;
  int it = 0;
  while (rho(hi) > 1.0) {
    hi *= 2.0;
    if (++it > 120) throw NormInfinite("modular stays above 1 for all lambda");
  }
  double lo = 0.5 * hi;
  while (rho(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) {
      res.value = 0.0;
      res.modular_at_value = rho(hi);
      return res;
    }
    ++it;
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    if (rho(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
    ++it;
  }
  res.value = hi;
  res.modular_at_value = rho(hi);
  res.iterations = it;
  return res;
}

}  // namespace

double modular(const SampledField& f, const ExponentFunction& p, double lambda) {
  StepFunction fs = rearrangement(f);
  if (fs.v.empty()) return 0.0;
  return modular(step_tfunction(fs), p, lambda);
}

NormResult variable_lebesgue_norm(const TFunction& g, const ExponentFunction& q) {
  return luxemburg([&](double lam) { return modular(g, q, lam); });
}

NormResult variable_lebesgue_norm(const SampledField& f, const ExponentFunction& p) {
  StepFunction fs = rearrangement(f);
  if (fs.v.empty()) return {};
  TFunction g = step_tfunction(fs);
  return variable_lebesgue_norm(g, p);
}

namespace {

NormResult lorentz_from_fstar(const StepFunction& fstar,
                              const ExponentFunction& p,
                              const ExponentFunction& q,
                              LorentzVariant variant) {
  if (fstar.v.empty()) return {};
  TFunction w;
  w.panels = fstar.t;
  if (variant == LorentzVariant::star) {
    w.eval = [fstar, &p, &q](double t) {
      double f = fstar(t);
      if (f == 0.0 || t <= 0.0) return 0.0;
      return std::pow(t, 1.0 / p(t) - 1.0 / q(t)) * f;
    };
  } else {
    AverageRearrangement avg = AverageRearrangement::make(fstar);
    w.eval = [avg, &p, &q](double t) {
      if (t <= 0.0) return 0.0;
      double f = avg(t);
      if (f == 0.0) return 0.0;
      return std::pow(t, 1.0 / p(t) - 1.0 / q(t)) * f;
    };
    w.has_tail = true;
  }
  return variable_lebesgue_norm(w, q);
}

}  // namespace

NormResult lorentz_norm(const SampledField& f, const ExponentFunction& p,
                        const ExponentFunction& q, LorentzVariant variant) {
  return lorentz_from_fstar(rearrangement(f), p, q, variant);
}

NormResult indicator_lorentz_norm(const DilationStructure& D,
                                  const ExponentFunction& p,
                                  const ExponentFunction& q, int k,
                                  LorentzVariant variant) {
  StepFunction chi;
  chi.t = {0.0, std::pow(D.det_abs(), k)};
  chi.v = {1.0};
  return lorentz_from_fstar(chi, p, q, variant);
}

WeightCharacteristic weight_characteristic(const DilationStructure& D,
                                           const SampledField& nu, double r,
                                           int k_min, int k_max) {
  if (!(r >= 1.0)) throw InvalidWeight("exponent r must be >= 1");
  for (double x : nu.values)
    if (!(x > 0.0)) throw InvalidWeight("weight must be strictly positive");

  SampledField ones, inv, sig, pow_r;
  ones.grid = inv.grid = sig.grid = pow_r.grid = nu.grid;
  std::size_t nc = nu.values.size();
  ones.values.assign(nc, 1.0);
  inv.values.resize(nc);
  pow_r.values.resize(nc);
  bool a1 = (r == 1.0);
  if (!a1) sig.values.resize(nc);
  double rr = std::max(r, 2.0);  // reverse Holder exponent when r == 1
  double rh_exp = (r > 1.0) ? r : rr;
  for (std::size_t i = 0; i < nc; ++i) {
    inv.values[i] = 1.0 / nu.values[i];
    if (!a1) sig.values[i] = std::pow(nu.values[i], -1.0 / (r - 1.0));
    pow_r.values[i] = std::pow(nu.values[i], rh_exp);
  }

  WeightCharacteristic out;
  for (int k = k_min; k <= k_max; ++k) {
    BallOffsets off = BallOffsets::make(D, k, nu.grid.h);
    SampledField cnt = window_sum(ones, off);
    SampledField snu = window_sum(nu, off);
    SampledField sr = window_sum(pow_r, off);
    SampledField second = a1 ? window_max(inv, off) : window_sum(sig, off);
    const double full = static_cast<double>(off.cell_count);
    for (std::size_t i = 0; i < nc; ++i) {
      if (cnt.values[i] != full) continue;  // ball sticks out of the grid
      double avg = snu.values[i] / full;
      double ar;
      if (a1)
        ar = avg * second.values[i];
      else
        ar = avg * std::pow(second.values[i] / full, r - 1.0);
      double rh = std::pow(sr.values[i] / full, 1.0 / rh_exp) / avg;
      if (ar > out.a_r) {
        out.a_r = ar;
        out.worst_k = k;
      }
      out.rh_r = std::max(out.rh_r, rh);
    }
  }
  return out;
}

double weighted_lp_modular(const SampledField& f, const SampledField& nu,
                           double p0) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    acc += std::pow(std::fabs(f.values[i]), p0) * nu.values[i];
  return acc * f.grid.cell_measure();
}

double weight_ball_measure(const DilationStructure& D, const SampledField& nu,
                           Point x0, int k) {
  const GridSpec& g = nu.grid;
  const int nx = g.ext[0];
  const int ny = g.n == 2 ? g.ext[1] : 1;
  int cx = static_cast<int>(std::lround((x0[0] - g.origin[0]) / g.h - 0.5));
  int cy = g.n == 2 ? static_cast<int>(std::lround((x0[1] - g.origin[1]) / g.h - 0.5)) : 0;
  BallOffsets off = BallOffsets::make(D, k, g.h);
  double acc = 0.0;
  for (const auto& row : off.rows) {
    int sy = cy + row[0];
    if (sy < 0 || sy >= ny) continue;
    for (int dx = row[1]; dx <= row[2]; ++dx) {
      int sx = cx + dx;
      if (sx < 0 || sx >= nx) continue;
      acc += nu.values[static_cast<std::size_t>(sy) * nx + sx];
    }
  }
  return acc * g.cell_measure();
}

}  // namespace aniso
