#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aniso/dilation.hpp"

namespace aniso {

struct GridOverflow : std::runtime_error {
  GridOverflow() : std::runtime_error("grid exceeds the desk-scale cell guard") {}
};

struct GridSpec {
  int n = 1;
  Point origin{0.0, 0.0};
  double h = 1.0;
  std::array<int, 2> ext{1, 1};  // ext[1] == 1 when n == 1

  std::size_t cells() const {
    return static_cast<std::size_t>(ext[0]) * (n == 2 ? ext[1] : 1);
  }
  Point center(int ix, int iy = 0) const {
    return {origin[0] + (ix + 0.5) * h,
            n == 2 ? origin[1] + (iy + 0.5) * h : 0.0};
  }
  double cell_measure() const { return n == 2 ? h * h : h; }
  bool operator==(const GridSpec&) const = default;
};

// Compactly supported cell-constant function on a regular grid.
struct SampledField {
  GridSpec grid;
  std::vector<double> values;

  SampledField() = default;
  explicit SampledField(const GridSpec& g);

  double& at(int ix, int iy = 0) {
    return values[static_cast<std::size_t>(iy) * grid.ext[0] + ix];
  }
  double at(int ix, int iy = 0) const {
    return values[static_cast<std::size_t>(iy) * grid.ext[0] + ix];
  }
  // Cell lookup; 0 outside the grid.
  double evaluate(const Point& x) const;

  double max_abs() const;
  double l2() const;                 // continuum L2 norm (cell model)
  double lr_norm(double r) const;    // continuum L^r, r < inf
  double integral() const;
  std::size_t support_cells() const;
  // Tight index bounding box of the nonzero cells; nullopt when f == 0.
  std::optional<std::array<int, 4>> support_box() const;  // {x0,x1,y0,y1} inclusive

  SampledField& operator+=(const SampledField& other);  // same grid required
  SampledField& operator*=(double c);
};

// phi_k(x) = b^-k phi(A^-k x) resampled on its natural grid.
SampledField dilate_kernel(const DilationStructure& D, const SampledField& phi,
                           int k);

// Cell-midpoint-rule convolution; operands are canonically ordered first so
// convolve(f,g) and convolve(g,f) run the identical summation.
SampledField convolve(const SampledField& f, const SampledField& g);

// Midpoint-rule integral of f(x) x^alpha.
double integrate(const SampledField& f, std::array<int, 2> alpha = {0, 0});

// Restriction of f to a translated ball, zero elsewhere.
SampledField restrict_to_ball(const DilationStructure& D, const SampledField& f,
                              const Point& x0, int k);

enum class TestFunctionKind { gaussian, smooth_bump, oscillating_bump };

// Closed-form test function; sample() produces the cell model and
// normalize_sn() scales it into the S_N class.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::gaussian;
  double width = 1.0;
  double sn_scale = 1.0;  // multiplies the raw profile after normalization

  double raw(const Point& x, int n) const;  // before S_N scaling
  double operator()(const Point& x, int n) const { return sn_scale * raw(x, n); }

  // Support radius (per axis) after the 1e-14 Gaussian truncation.
  double support_radius() const;

  // Computes sn_scale so sup (1+rho_A)^N |D^alpha phi| <= 1 for |alpha| <= N,
  // measured with centered differences on a grid refined by `refine`.
  void normalize_sn(const DilationStructure& D, int N, double h_fine);

  SampledField sample(const GridSpec& g) const;
  // Natural centered grid with cell width h covering the support.
  SampledField sample_natural(double h, int n) const;
};

// Measured sup of (1+rho_A)^N |D^alpha phi| over |alpha| <= N.
double sn_seminorm(const DilationStructure& D, const TestFunction& phi, int N,
                   double h_fine);

// Persistence: header `<path>.json` + little-endian doubles `<path>.f64`.
void write_field(const SampledField& f, const std::string& path_base);
SampledField read_field(const std::string& path_base);
void write_field_csv(const SampledField& f, const std::string& csv_path);

}  // namespace aniso
