#include "aniso/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "aniso/kernels.hpp"
#include "nlohmann/json.hpp"

namespace aniso {

namespace {
constexpr std::size_t kCellGuard = std::size_t{1} << 24;
}

SampledField::SampledField(const GridSpec& g) : grid(g) {
  if (g.cells() > kCellGuard) throw GridOverflow();
  values.assign(g.cells(), 0.0);
}

double SampledField::evaluate(const Point& x) const {
  int ix = static_cast<int>(std::floor((x[0] - grid.origin[0]) / grid.h));
  if (ix < 0 || ix >= grid.ext[0]) return 0.0;
  int iy = 0;
  if (grid.n == 2) {
    iy = static_cast<int>(std::floor((x[1] - grid.origin[1]) / grid.h));
    if (iy < 0 || iy >= grid.ext[1]) return 0.0;
  }
  return at(ix, iy);
}

double SampledField::max_abs() const {
  return kernels::max_abs(values.data(), values.size());
}

double SampledField::l2() const { return lr_norm(2.0); }

double SampledField::lr_norm(double r) const {
  double acc = 0.0;
  for (double v : values) acc += std::pow(std::abs(v), r);
  return std::pow(acc * grid.cell_measure(), 1.0 / r);
}

double SampledField::integral() const {
  return grid.cell_measure() * kernels::sum(values.data(), values.size());
}

std::size_t SampledField::support_cells() const {
  std::size_t c = 0;
  for (double v : values)
    if (v != 0.0) ++c;
  return c;
}

std::optional<std::array<int, 4>> SampledField::support_box() const {
  int x0 = grid.ext[0], x1 = -1, y0 = grid.ext[1], y1 = -1;
  for (int iy = 0; iy < (grid.n == 2 ? grid.ext[1] : 1); ++iy) {
    for (int ix = 0; ix < grid.ext[0]; ++ix) {
      if (at(ix, iy) != 0.0) {
        x0 = std::min(x0, ix);
        x1 = std::max(x1, ix);
        y0 = std::min(y0, iy);
        y1 = std::max(y1, iy);
      }
    }
  }
  if (x1 < 0) return std::nullopt;
  return std::array<int, 4>{x0, x1, y0, y1};
}

SampledField& SampledField::operator+=(const SampledField& other) {
  if (!(grid == other.grid)) throw std::runtime_error("grid mismatch");
  kernels::axpy(values.data(), 1.0, other.values.data(), values.size());
  return *this;
}

SampledField& SampledField::operator*=(double c) {
  for (double& v : values) v *= c;
  return *this;
}

namespace {

bool is_axis_diagonal_power(const DilationStructure& D, int k, Point& scale) {
  // A^k e_i axis-aligned for both axes.
  Point ex = D.apply_power({1.0, 0.0}, k);
  if (D.dim() == 1) {
    scale = {std::abs(ex[0]), 1.0};
    return true;
  }
  Point ey = D.apply_power({0.0, 1.0}, k);
  if (std::abs(ex[1]) < 1e-14 * std::abs(ex[0]) &&
      std::abs(ey[0]) < 1e-14 * std::abs(ey[1])) {
    scale = {std::abs(ex[0]), std::abs(ey[1])};
    return true;
  }
  return false;
}

}  // namespace

SampledField dilate_kernel(const DilationStructure& D, const SampledField& phi,
                           int k) {
  int n = phi.grid.n;
  double bk = std::pow(D.det_abs(), static_cast<double>(k));
  Point scale;
  if (is_axis_diagonal_power(D, k, scale)) {
    // Exact path: map the grid itself; A^-k takes new cell centers onto the
    // old ones, so the integral is preserved bit-for-bit up to the b^-k
    // Jacobian factor. Anisotropic per-axis cell widths are folded into a
    // single h only when they agree; otherwise fall through to resampling.
    if (n == 1 || std::abs(scale[0] - scale[1]) < 1e-14 * scale[0]) {
      GridSpec g;
      g.n = n;
      g.h = phi.grid.h * scale[0];
      g.origin = {phi.grid.origin[0] * scale[0], phi.grid.origin[1] * scale[1]};
      g.ext = phi.grid.ext;
      SampledField out(g);
      for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = phi.values[i] / bk;
      return out;
    }
  }
  // Generic path: natural grid from the transformed support corners,
  // 4^n-fold supersampled cell averages.
  auto box = phi.support_box();
  if (!box) return SampledField(phi.grid);
  Point lo{phi.grid.origin[0] + box->at(0) * phi.grid.h,
           phi.grid.origin[1] + box->at(2) * phi.grid.h};
  Point hi{phi.grid.origin[0] + (box->at(1) + 1) * phi.grid.h,
           phi.grid.origin[1] + (box->at(3) + 1) * phi.grid.h};
  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  for (int cx = 0; cx < 2; ++cx) {
    for (int cy = 0; cy < 2; ++cy) {
      Point c{cx ? hi[0] : lo[0], cy ? hi[1] : lo[1]};
      Point t = D.apply_power(c, k);
      minx = std::min(minx, t[0]);
      maxx = std::max(maxx, t[0]);
      miny = std::min(miny, t[1]);
      maxy = std::max(maxy, t[1]);
    }
  }
  GridSpec g;
  g.n = n;
  g.h = phi.grid.h * std::pow(bk, 1.0 / n);
  g.origin = {minx, miny};
  g.ext = {std::max(1, static_cast<int>(std::ceil((maxx - minx) / g.h))),
           n == 2 ? std::max(1, static_cast<int>(std::ceil((maxy - miny) / g.h)))
                  : 1};
  if (g.cells() > kCellGuard) throw GridOverflow();
  SampledField out(g);
  const int ss = 4;
  for (int iy = 0; iy < (n == 2 ? g.ext[1] : 1); ++iy) {
    for (int ix = 0; ix < g.ext[0]; ++ix) {
      double acc = 0.0;
      int nss = n == 2 ? ss * ss : ss;
      for (int sy = 0; sy < (n == 2 ? ss : 1); ++sy) {
        for (int sx = 0; sx < ss; ++sx) {
          Point x{g.origin[0] + (ix + (sx + 0.5) / ss) * g.h,
                  n == 2 ? g.origin[1] + (iy + (sy + 0.5) / ss) * g.h : 0.0};
          acc += phi.evaluate(D.apply_power(x, -k));
        }
      }
      out.at(ix, iy) = acc / nss / bk;
    }
  }
  return out;
}

namespace {

// Deterministic canonical ordering so convolve(f,g) == convolve(g,f)
// bit-exactly: both calls run the identical loop on identically ordered
// operands.
bool canonical_before(const SampledField& a, const SampledField& b) {
  if (a.values.size() != b.values.size()) return a.values.size() < b.values.size();
  if (a.grid.origin != b.grid.origin) return a.grid.origin < b.grid.origin;
  return std::memcmp(a.values.data(), b.values.data(),
                     a.values.size() * sizeof(double)) <= 0;
}

}  // namespace

SampledField convolve(const SampledField& f, const SampledField& g) {
  const SampledField& a = canonical_before(f, g) ? f : g;
  const SampledField& b = canonical_before(f, g) ? g : f;
  if (a.grid.n != b.grid.n || std::abs(a.grid.h - b.grid.h) > 1e-15 * a.grid.h)
    throw std::runtime_error("convolve: incompatible grids");
  int n = a.grid.n;
  double h = a.grid.h;
  GridSpec og;
  og.n = n;
  og.h = h;
  og.origin = {a.grid.origin[0] + b.grid.origin[0] + 0.5 * h,
               n == 2 ? a.grid.origin[1] + b.grid.origin[1] + 0.5 * h : 0.0};
  og.ext = {a.grid.ext[0] + b.grid.ext[0] - 1,
            n == 2 ? a.grid.ext[1] + b.grid.ext[1] - 1 : 1};
  if (og.cells() > kCellGuard) throw GridOverflow();
  SampledField out(og);
  double hn = og.cell_measure();
  if (n == 1) {
    // out[k] = h * sum_j a[j] b[k-j]; reverse b once and slide a dot product.
    std::vector<double> brev(b.values.rbegin(), b.values.rend());
    int ea = a.grid.ext[0], eb = b.grid.ext[0];
    for (int k = 0; k < og.ext[0]; ++k) {
      // j ranges over max(0,k-eb+1) .. min(ea-1,k)
      int jlo = std::max(0, k - eb + 1);
      int jhi = std::min(ea - 1, k);
      if (jlo > jhi) continue;
      // b[k-j] for j=jlo..jhi is brev[eb-1-k+j] contiguous in j.
      out.values[k] =
          hn * kernels::dot(a.values.data() + jlo,
                            brev.data() + (eb - 1 - k + jlo), jhi - jlo + 1);
    }
  } else {
    std::vector<double> brev(b.values.size());
    int ebx = b.grid.ext[0], eby = b.grid.ext[1];
    for (int iy = 0; iy < eby; ++iy)
      for (int ix = 0; ix < ebx; ++ix)
        brev[static_cast<std::size_t>(iy) * ebx + ix] =
            b.at(ebx - 1 - ix, eby - 1 - iy);
    int eax = a.grid.ext[0], eay = a.grid.ext[1];
    for (int ky = 0; ky < og.ext[1]; ++ky) {
      for (int kx = 0; kx < og.ext[0]; ++kx) {
        int jylo = std::max(0, ky - eby + 1), jyhi = std::min(eay - 1, ky);
        int jxlo = std::max(0, kx - ebx + 1), jxhi = std::min(eax - 1, kx);
        double acc = 0.0;
        for (int jy = jylo; jy <= jyhi; ++jy) {
          const double* arow = a.values.data() +
                               static_cast<std::size_t>(jy) * eax + jxlo;
          const double* brow = brev.data() +
                               static_cast<std::size_t>(eby - 1 - ky + jy) * ebx +
                               (ebx - 1 - kx + jxlo);
          acc += kernels::dot(arow, brow, jxhi - jxlo + 1);
        }
        out.at(kx, ky) = hn * acc;
      }
    }
  }
  return out;
}

double integrate(const SampledField& f, std::array<int, 2> alpha) {
  if (alpha[0] == 0 && alpha[1] == 0) return f.integral();
  double acc = 0.0;
  for (int iy = 0; iy < (f.grid.n == 2 ? f.grid.ext[1] : 1); ++iy) {
    for (int ix = 0; ix < f.grid.ext[0]; ++ix) {
      double v = f.at(ix, iy);
      if (v == 0.0) continue;
      Point c = f.grid.center(ix, iy);
      double w = 1.0;
      for (int a = 0; a < alpha[0]; ++a) w *= c[0];
      for (int a = 0; a < alpha[1]; ++a) w *= c[1];
      acc += v * w;
    }
  }
  return acc * f.grid.cell_measure();
}

SampledField restrict_to_ball(const DilationStructure& D, const SampledField& f,
                              const Point& x0, int k) {
  SampledField out(f.grid);
  for (int iy = 0; iy < (f.grid.n == 2 ? f.grid.ext[1] : 1); ++iy) {
    for (int ix = 0; ix < f.grid.ext[0]; ++ix) {
      Point c = f.grid.center(ix, iy);
      Point d{c[0] - x0[0], c[1] - x0[1]};
      if (D.ball_contains(d, k)) out.at(ix, iy) = f.at(ix, iy);
    }
  }
  return out;
}

double TestFunction::raw(const Point& x, int n) const {
  double r2 = x[0] * x[0] + (n == 2 ? x[1] * x[1] : 0.0);
  double u2 = r2 / (width * width);
  switch (kind) {
    case TestFunctionKind::gaussian: {
      double R = support_radius();
      if (r2 >= R * R) return 0.0;
      return std::exp(-u2);
    }
    case TestFunctionKind::smooth_bump:
      if (u2 >= 1.0) return 0.0;
      return std::exp(-1.0 / (1.0 - u2));
    case TestFunctionKind::oscillating_bump:
      if (u2 >= 1.0) return 0.0;
      return (x[0] / width) * std::exp(-1.0 / (1.0 - u2));
  }
  return 0.0;
}

double TestFunction::support_radius() const {
  if (kind == TestFunctionKind::gaussian) {
    // exp(-R^2/w^2) below 1e-14 mass cutoff.
    return width * std::sqrt(std::log(1e14));
  }
  return width;
}

SampledField TestFunction::sample(const GridSpec& g) const {
  SampledField out(g);
  for (int iy = 0; iy < (g.n == 2 ? g.ext[1] : 1); ++iy)
    for (int ix = 0; ix < g.ext[0]; ++ix)
      out.at(ix, iy) = (*this)(g.center(ix, iy), g.n);
  return out;
}

SampledField TestFunction::sample_natural(double h, int n) const {
  double R = support_radius();
  int half = static_cast<int>(std::ceil(R / h)) + 1;
  GridSpec g;
  g.n = n;
  g.h = h;
  g.origin = {-half * h, n == 2 ? -half * h : 0.0};
  g.ext = {2 * half, n == 2 ? 2 * half : 1};
  return sample(g);
}

double sn_seminorm(const DilationStructure& D, const TestFunction& phi, int N,
                   double h_fine) {
  int n = D.dim();
  double R = phi.support_radius() + (N + 2) * h_fine;
  int half = static_cast<int>(std::ceil(R / h_fine));
  GridSpec g;
  g.n = n;
  g.h = h_fine;
  g.origin = {-half * h_fine, n == 2 ? -half * h_fine : 0.0};
  g.ext = {2 * half, n == 2 ? 2 * half : 1};
  SampledField base(g);
  for (int iy = 0; iy < (n == 2 ? g.ext[1] : 1); ++iy)
    for (int ix = 0; ix < g.ext[0]; ++ix)
      base.at(ix, iy) = phi.raw(g.center(ix, iy), n);

  auto diff_axis = [&](const SampledField& src, int axis) {
    SampledField d(src.grid);
    int ex = g.ext[0], ey = n == 2 ? g.ext[1] : 1;
    for (int iy = 0; iy < ey; ++iy) {
      for (int ix = 0; ix < ex; ++ix) {
        double lo, hi;
        if (axis == 0) {
          lo = ix > 0 ? src.at(ix - 1, iy) : 0.0;
          hi = ix < ex - 1 ? src.at(ix + 1, iy) : 0.0;
        } else {
          lo = iy > 0 ? src.at(ix, iy - 1) : 0.0;
          hi = iy < ey - 1 ? src.at(ix, iy + 1) : 0.0;
        }
        d.at(ix, iy) = (hi - lo) / (2.0 * h_fine);
      }
    }
    return d;
  };

  double sup = 0.0;
  auto weigh = [&](const SampledField& der) {
    double m = 0.0;
    for (int iy = 0; iy < (n == 2 ? g.ext[1] : 1); ++iy) {
      for (int ix = 0; ix < g.ext[0]; ++ix) {
        double v = std::abs(der.at(ix, iy));
        if (v == 0.0) continue;
        double w = std::pow(1.0 + D.step_quasinorm(g.center(ix, iy)),
                            static_cast<double>(N));
        m = std::max(m, w * v);
      }
    }
    return m;
  };

  // Walk all multi-indices |alpha| <= N by repeated axis differencing.
  std::vector<SampledField> row{base};
  std::vector<std::array<int, 2>> idx{{0, 0}};
  sup = std::max(sup, weigh(base));
  for (int order = 1; order <= N; ++order) {
    std::vector<SampledField> next;
    std::vector<std::array<int, 2>> nidx;
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (int axis = 0; axis < n; ++axis) {
        // Canonical: only extend along axis >= last-incremented axis to
        // avoid duplicates.
        if (axis == 0 && idx[i][1] > 0) continue;
        auto a = idx[i];
        a[axis] += 1;
        next.push_back(diff_axis(row[i], axis));
        nidx.push_back(a);
        sup = std::max(sup, weigh(next.back()));
      }
    }
    row = std::move(next);
    idx = std::move(nidx);
  }
  return sup;
}

void TestFunction::normalize_sn(const DilationStructure& D, int N,
                                double h_fine) {
  double s = sn_seminorm(D, *this, N, h_fine);
  sn_scale = s > 0.0 ? 1.0 / s : 1.0;
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

void write_field(const SampledField& f, const std::string& path_base) {
  nlohmann::json j;
  j["n"] = f.grid.n;
  j["origin"] = {f.grid.origin[0], f.grid.origin[1]};
  j["h"] = f.grid.h;
  j["extents"] = {f.grid.ext[0], f.grid.ext[1]};
  j["checksum"] =
      fnv1a(f.values.data(), f.values.size() * sizeof(double));
  std::ofstream hdr(path_base + ".json");
  hdr << j.dump(2) << "\n";
  std::ofstream pay(path_base + ".f64", std::ios::binary);
  pay.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

SampledField read_field(const std::string& path_base) {
  std::ifstream hdr(path_base + ".json");
  if (!hdr) throw std::runtime_error("cannot open " + path_base + ".json");
  nlohmann::json j;
  hdr >> j;
  GridSpec g;
  g.n = j.at("n").get<int>();
  g.origin = {j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>()};
  g.h = j.at("h").get<double>();
  g.ext = {j.at("extents")[0].get<int>(), j.at("extents")[1].get<int>()};
  SampledField f(g);
  std::ifstream pay(path_base + ".f64", std::ios::binary);
  if (!pay) throw std::runtime_error("cannot open " + path_base + ".f64");
  pay.read(reinterpret_cast<char*>(f.values.data()),
           static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (static_cast<std::size_t>(pay.gcount()) != f.values.size() * sizeof(double))
    throw std::runtime_error("payload truncated: " + path_base);
  auto sum = fnv1a(f.values.data(), f.values.size() * sizeof(double));
  if (sum != j.at("checksum").get<std::uint64_t>())
    throw std::runtime_error("checksum mismatch: " + path_base);
  return f;
}

void write_field_csv(const SampledField& f, const std::string& csv_path) {
  std::ofstream out(csv_path);
  out.precision(17);
  if (f.grid.n == 1) {
    out << "x,value\n";
    for (int ix = 0; ix < f.grid.ext[0]; ++ix)
      out << f.grid.center(ix)[0] << "," << f.at(ix) << "\n";
  } else {
    out << "x,y,value\n";
    for (int iy = 0; iy < f.grid.ext[1]; ++iy)
      for (int ix = 0; ix < f.grid.ext[0]; ++ix) {
        Point c = f.grid.center(ix, iy);
        out << c[0] << "," << c[1] << "," << f.at(ix, iy) << "\n";
      }
  }
}

}  // namespace aniso
