#include "bpdo/grid.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace bpdo {

namespace {

// Returns r if 1/step is (numerically) the positive integer r, 0 otherwise.
long reciprocal_integer(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) return 0;
  const double inv = 1.0 / step;
  const double r = std::round(inv);
  if (r < 1.0 || std::abs(inv - r) > 1e-9 * r) return 0;
  return static_cast<long>(r);
}

bool is_positive_integer(double v) {
  return v >= 1.0 && std::abs(v - std::round(v)) < 1e-12;
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::size_t Axis::count() const {
  return static_cast<std::size_t>(std::llround(2.0 * halfwidth / step));
}

std::vector<double> Axis::points() const {
  std::vector<double> p(count());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = point(i);
  return p;
}

std::size_t GridSpec::space_count() const { return ipow(space_points_per_axis(), dim); }
std::size_t GridSpec::frequency_count() const { return ipow(frequency_points_per_axis(), dim); }
int GridSpec::space_samples_per_unit() const { return static_cast<int>(reciprocal_integer(x_step)); }
int GridSpec::frequency_samples_per_unit() const {
  return static_cast<int>(reciprocal_integer(xi_step));
}

GridSpec make_grid(int dim, double x_halfwidth, double x_step, double xi_halfwidth,
                   double xi_step) {
  std::ostringstream why;
  if (dim < 1 || dim > 2) why << "dimension must be 1 or 2 (got " << dim << "); ";
  const long rx = reciprocal_integer(x_step);
  const long rxi = reciprocal_integer(xi_step);
  if (rx == 0) why << "1/x_step = " << 1.0 / x_step << " is not a positive integer; ";
  if (rxi == 0) why << "1/xi_step = " << 1.0 / xi_step << " is not a positive integer; ";
  if (!is_positive_integer(x_halfwidth)) why << "x_halfwidth must be a positive integer; ";
  if (!is_positive_integer(xi_halfwidth)) why << "xi_halfwidth must be a positive integer; ";
  const std::string msg = why.str();
  if (!msg.empty()) throw Error("make_grid: " + msg.substr(0, msg.size() - 2));

  // Counts are 2 * X * (1/h): integers by construction, and even.
  const long nx = 2 * std::lround(x_halfwidth) * rx;
  const long nxi = 2 * std::lround(xi_halfwidth) * rxi;
  if (nx % 2 != 0 || nxi % 2 != 0) throw Error("make_grid: axis sample counts must be even");

  GridSpec g;
  g.dim = dim;
  g.x_halfwidth = std::round(x_halfwidth);
  g.x_step = 1.0 / static_cast<double>(rx);
  g.xi_halfwidth = std::round(xi_halfwidth);
  g.xi_step = 1.0 / static_cast<double>(rxi);
  return g;
}

GridSpec default_grid() { return make_grid(1, 16, 0.125, 8, 0.125); }

const char* to_string(Domain d) { return d == Domain::space ? "space" : "frequency"; }

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw Error(std::string(what) + ": grid mismatch");
}

void unflatten(const Axis& axis, int dim, std::size_t i, std::span<double> out) {
  const std::size_t n = axis.count();
  for (int d = dim - 1; d >= 0; --d) {
    out[static_cast<std::size_t>(d)] = axis.point(i % n);
    i /= n;
  }
}

namespace {

std::vector<cplx> sample_nd(const Axis& axis, int dim, const PointFn& f) {
  const std::size_t total = ipow(axis.count(), dim);
  std::vector<cplx> v(total);
  std::array<double, 2> pt{};
  std::span<double> s(pt.data(), static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < total; ++i) {
    unflatten(axis, dim, i, s);
    v[i] = f(s);
  }
  return v;
}

std::vector<cplx> sample_1d(const Axis& axis, const ScalarFn& f) {
  std::vector<cplx> v(axis.count());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(axis.point(i));
  return v;
}

void require_dim1(const GridSpec& g, const char* what) {
  if (g.dim != 1) throw Error(std::string(what) + ": requires a 1-D grid");
}

}  // namespace

SampledField sample_space(const GridSpec& grid, const ScalarFn& f) {
  require_dim1(grid, "sample_space");
  return {grid, Domain::space, sample_1d(grid.space_axis(), f), std::nullopt};
}

SampledField sample_space(const GridSpec& grid, const PointFn& f) {
  return {grid, Domain::space, sample_nd(grid.space_axis(), grid.dim, f), std::nullopt};
}

SampledField sample_frequency(const GridSpec& grid, const ScalarFn& f) {
  require_dim1(grid, "sample_frequency");
  return {grid, Domain::frequency, sample_1d(grid.frequency_axis(), f), std::nullopt};
}

FrequencyProfile sample_profile(const GridSpec& grid, const ScalarFn& m,
                                std::optional<double> support_radius) {
  if (grid.dim == 1) return {sample_1d(grid.frequency_axis(), m), support_radius};
  // Radial-free tensor extension is not implied; callers in n = 2 use PointFn.
  throw Error("sample_profile: scalar profile requires a 1-D grid");
}

FrequencyProfile sample_profile(const GridSpec& grid, const PointFn& m,
                                std::optional<double> support_radius) {
  return {sample_nd(grid.frequency_axis(), grid.dim, m), support_radius};
}

SampledSymbol sample_symbol(const GridSpec& grid,
                            const std::function<cplx(double, double, double)>& sigma,
                            std::optional<std::array<double, 3>> radii) {
  require_dim1(grid, "sample_symbol");
  if (radii) {
    for (double r : *radii)
      if (!(r >= 1.0)) throw Error("sample_symbol: declared radii must satisfy R >= 1");
  }
  SampledSymbol s{grid, {}, radii};
  const Axis ax = grid.space_axis();
  const Axis af = grid.frequency_axis();
  s.values.resize(s.nx() * s.nxi() * s.nxi());
  for (std::size_t ix = 0; ix < s.nx(); ++ix)
    for (std::size_t i1 = 0; i1 < s.nxi(); ++i1)
      for (std::size_t i2 = 0; i2 < s.nxi(); ++i2)
        s.values[s.index(ix, i1, i2)] = sigma(ax.point(ix), af.point(i1), af.point(i2));
  return s;
}

SampledLinearSymbol sample_linear_symbol(const GridSpec& grid,
                                         const std::function<cplx(double, double)>& sigma) {
  require_dim1(grid, "sample_linear_symbol");
  SampledLinearSymbol s{grid, {}};
  const Axis ax = grid.space_axis();
  const Axis af = grid.frequency_axis();
  const std::size_t nx = ax.count(), nf = af.count();
  s.values.resize(nx * nf);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t j = 0; j < nf; ++j) s.values[ix * nf + j] = sigma(ax.point(ix), af.point(j));
  return s;
}

const DenseMatrix& fourier_matrix(const Axis& from, const Axis& to, int sign) {
  using Key = std::tuple<double, double, double, double, int>;
  static std::mutex mu;
  static std::map<Key, std::unique_ptr<DenseMatrix>> cache;

  const Key key{from.halfwidth, from.step, to.halfwidth, to.step, sign < 0 ? -1 : 1};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto m = std::make_unique<DenseMatrix>();
  m->rows = to.count();
  m->cols = from.count();
  m->data.resize(m->rows * m->cols);
  const double w = sign < 0 ? from.step : from.step / kTwoPi;
  const double s = sign < 0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < m->rows; ++j) {
    const double t = to.point(j);
    for (std::size_t k = 0; k < m->cols; ++k) {
      const double phase = s * t * from.point(k);
      (*m)(j, k) = w * cplx(std::cos(phase), std::sin(phase));
    }
  }
  return *cache.emplace(key, std::move(m)).first->second;
}

std::vector<cplx> apply_along_axis(std::span<const cplx> data, std::vector<std::size_t>& shape,
                                   std::size_t axis, const DenseMatrix& m) {
  if (shape[axis] != m.cols) throw Error("apply_along_axis: shape mismatch");
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= shape[d];
  for (std::size_t d = axis + 1; d < shape.size(); ++d) inner *= shape[d];
  const std::size_t nin = m.cols, nout = m.rows;
  std::vector<cplx> out(outer * nout * inner);
  std::vector<cplx> line(nin);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t k = 0; k < nin; ++k) line[k] = data[(o * nin + k) * inner + i];
      for (std::size_t j = 0; j < nout; ++j) {
        const cplx* row = &m.data[j * nin];
        cplx acc = 0.0;
        for (std::size_t k = 0; k < nin; ++k) acc += row[k] * line[k];
        out[(o * nout + j) * inner + i] = acc;
      }
    }
  }
  shape[axis] = nout;
  return out;
}

namespace {

std::vector<cplx> transform_all_axes(std::span<const cplx> data, int dim, const Axis& from,
                                     const Axis& to, int sign) {
  std::vector<std::size_t> shape(static_cast<std::size_t>(dim), from.count());
  const DenseMatrix& m = fourier_matrix(from, to, sign);
  std::vector<cplx> cur(data.begin(), data.end());
  for (std::size_t a = 0; a < static_cast<std::size_t>(dim); ++a)
    cur = apply_along_axis(cur, shape, a, m);
  return cur;
}

}  // namespace

SampledField fourier_forward(const SampledField& f) {
  if (f.domain != Domain::space) throw Error("fourier_forward: input must be in the space domain");
  if (f.values.size() != f.grid.space_count()) throw Error("fourier_forward: shape mismatch");
  SampledField out{f.grid, Domain::frequency, {}, f.fsupp_radius};
  out.values = transform_all_axes(f.values, f.grid.dim, f.grid.space_axis(),
                                  f.grid.frequency_axis(), -1);
  return out;
}

SampledField fourier_inverse(const SampledField& F) {
  if (F.domain != Domain::frequency)
    throw Error("fourier_inverse: input must be in the frequency domain");
  if (F.values.size() != F.grid.frequency_count()) throw Error("fourier_inverse: shape mismatch");
  SampledField out{F.grid, Domain::space, {}, F.fsupp_radius};
  out.values = transform_all_axes(F.values, F.grid.dim, F.grid.frequency_axis(),
                                  F.grid.space_axis(), +1);
  return out;
}

SampledField multiplier_apply(const FrequencyProfile& m, const SampledField& f) {
  if (m.values.size() != f.grid.frequency_count())
    throw Error("multiplier_apply: profile does not match the frequency grid");
  SampledField spec = f.domain == Domain::space ? fourier_forward(f) : f;
  for (std::size_t j = 0; j < spec.values.size(); ++j) spec.values[j] *= m.values[j];
  if (m.support_radius && f.fsupp_radius)
    spec.fsupp_radius = std::min(*m.support_radius, *f.fsupp_radius);
  else if (m.support_radius)
    spec.fsupp_radius = m.support_radius;
  if (f.domain == Domain::frequency) return spec;
  return fourier_inverse(spec);
}

double energy(const SampledField& f) {
  const double h = f.domain == Domain::space ? f.grid.x_step : f.grid.xi_step;
  const double cell = std::pow(h, f.grid.dim);
  double e = 0.0;
  for (const cplx& v : f.values) e += std::norm(v);
  return e * cell;
}

SampledField combine(cplx a, const SampledField& f, cplx b, const SampledField& g) {
  require_same_grid(f.grid, g.grid, "combine");
  if (f.domain != g.domain || f.values.size() != g.values.size())
    throw Error("combine: domain or shape mismatch");
  SampledField out{f.grid, f.domain, std::vector<cplx>(f.values.size()), std::nullopt};
  for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = a * f.values[i] + b * g.values[i];
  if (f.fsupp_radius && g.fsupp_radius)
    out.fsupp_radius = std::max(*f.fsupp_radius, *g.fsupp_radius);
  return out;
}

}  // namespace bpdo
