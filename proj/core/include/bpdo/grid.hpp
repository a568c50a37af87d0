#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpdo {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised for violated preconditions (bad grids, shape mismatches, aliasing).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A uniformly sampled coordinate axis with points -halfwidth + i * step.
struct Axis {
  double halfwidth = 0.0;
  double step = 0.0;

  std::size_t count() const;
  double point(std::size_t i) const { return -halfwidth + static_cast<double>(i) * step; }
  std::vector<double> points() const;

  bool operator==(const Axis&) const = default;
};

/**
 * Discretization of R^n on [-X, X)^n with a matching frequency box [-Xi, Xi)^n.
 *
 * Both steps are reciprocals of integers and both half-widths are integers, so
 * unit cubes nu + Q and integer frequency translates land exactly on samples.
 * Use make_grid() to construct a validated instance.
 */
struct GridSpec {
  int dim = 1;
  double x_halfwidth = 16.0;
  double x_step = 0.125;
  double xi_halfwidth = 8.0;
  double xi_step = 0.125;

  Axis space_axis() const { return {x_halfwidth, x_step}; }
  Axis frequency_axis() const { return {xi_halfwidth, xi_step}; }

  std::size_t space_points_per_axis() const { return space_axis().count(); }
  std::size_t frequency_points_per_axis() const { return frequency_axis().count(); }
  std::size_t space_count() const;
  std::size_t frequency_count() const;

  /// Samples per unit length in space (1 / x_step).
  int space_samples_per_unit() const;
  int frequency_samples_per_unit() const;

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, double x_halfwidth, double x_step, double xi_halfwidth,
                   double xi_step);

/// n = 1, X = 16, h_x = 1/8, Xi = 8, h_xi = 1/8.
GridSpec default_grid();

enum class Domain { space, frequency };

const char* to_string(Domain d);

/// Complex samples of a function on the space or frequency lattice of a grid.
/// Multi-dimensional data is row-major with the first coordinate slowest.
struct SampledField {
  GridSpec grid;
  Domain domain = Domain::space;
  std::vector<cplx> values;
  /// Declared radius of the Fourier support, when known.
  std::optional<double> fsupp_radius;

  std::size_t size() const { return values.size(); }
};

/// Samples of a frequency-side profile m(xi) on grid.frequency_axis()^n.
struct FrequencyProfile {
  std::vector<cplx> values;
  /// Radius of a ball containing supp m, when m is compactly supported.
  std::optional<double> support_radius;
};

/**
 * Samples of sigma(x, xi1, xi2) for n = 1, laid out as [x][xi1][xi2] with x on
 * grid.space_axis() and both frequency variables on grid.frequency_axis().
 */
struct SampledSymbol {
  GridSpec grid;
  std::vector<cplx> values;
  /// Declared Fourier-support radii (R0, R1, R2) in (x, xi1, xi2).
  std::optional<std::array<double, 3>> fsupp_radii;

  std::size_t nx() const { return grid.space_points_per_axis(); }
  std::size_t nxi() const { return grid.frequency_points_per_axis(); }
  std::array<std::size_t, 3> shape() const { return {nx(), nxi(), nxi()}; }
  std::size_t index(std::size_t ix, std::size_t i1, std::size_t i2) const {
    return (ix * nxi() + i1) * nxi() + i2;
  }
  const cplx& at(std::size_t ix, std::size_t i1, std::size_t i2) const {
    return values[index(ix, i1, i2)];
  }
};

/// Linear symbol sigma(x, xi), laid out as [x][xi], n = 1.
struct SampledLinearSymbol {
  GridSpec grid;
  std::vector<cplx> values;
};

// ---------------------------------------------------------------------------
// Sampling helpers.

using ScalarFn = std::function<cplx(double)>;
using PointFn = std::function<cplx(std::span<const double>)>;

/// Coordinates of flat sample index i on axis^dim.
void unflatten(const Axis& axis, int dim, std::size_t i, std::span<double> out);

SampledField sample_space(const GridSpec& grid, const ScalarFn& f);
SampledField sample_space(const GridSpec& grid, const PointFn& f);
SampledField sample_frequency(const GridSpec& grid, const ScalarFn& f);
FrequencyProfile sample_profile(const GridSpec& grid, const ScalarFn& m,
                                std::optional<double> support_radius = std::nullopt);
FrequencyProfile sample_profile(const GridSpec& grid, const PointFn& m,
                                std::optional<double> support_radius = std::nullopt);

SampledSymbol sample_symbol(const GridSpec& grid,
                            const std::function<cplx(double, double, double)>& sigma,
                            std::optional<std::array<double, 3>> radii = std::nullopt);

SampledLinearSymbol sample_linear_symbol(const GridSpec& grid,
                                         const std::function<cplx(double, double)>& sigma);

// ---------------------------------------------------------------------------
// Dense quadrature transforms.

/// Row-major dense complex matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  cplx& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
};

/**
 * Quadrature matrix M(j, m) = w * exp(sign * i * to_j * from_m) with
 * w = from.step for sign < 0 and w = from.step / (2 pi) for sign > 0.
 * Matrices are cached per (from, to, sign); the returned reference is stable.
 */
const DenseMatrix& fourier_matrix(const Axis& from, const Axis& to, int sign);

/// Applies `m` along `axis` of a row-major tensor; shape[axis] becomes m.rows.
std::vector<cplx> apply_along_axis(std::span<const cplx> data, std::vector<std::size_t>& shape,
                                   std::size_t axis, const DenseMatrix& m);

/// F f(xi) = h_x^n sum_m exp(-i xi . x_m) f(x_m).
SampledField fourier_forward(const SampledField& f);

/// F^{-1} F(x) = (2 pi)^{-n} h_xi^n sum_j exp(i x . xi_j) F(xi_j).
SampledField fourier_inverse(const SampledField& F);

/// m(D) f = F^{-1}[m F f]. Frequency-domain input is multiplied directly and
/// returned in the frequency domain.
SampledField multiplier_apply(const FrequencyProfile& m, const SampledField& f);

/// L2 energy (sum |v|^2 times cell volume) of a field in its own domain.
double energy(const SampledField& f);

/// Builds a field of the same grid and domain with values a*f + b*g.
SampledField combine(cplx a, const SampledField& f, cplx b, const SampledField& g);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

}  // namespace bpdo
