#include "bpdo/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bpdo {

// ---------------------------------------------------------------------------
// Windows.

PartitionWindow::PartitionWindow(int dim, double sharpness) : dim_(dim), a_(sharpness) {
  if (dim < 1) throw Error("build_partition: dim must be >= 1");
  if (!(sharpness > 0.0)) throw Error("build_partition: sharpness must be positive");
}

double PartitionWindow::bump(double t) const {
  const double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(-a_ * t2 / (1.0 - t2));
}

double PartitionWindow::operator()(double t) const {
  const double g = bump(t);
  if (g == 0.0) return 0.0;
  const double base = std::floor(t);
  double total = 0.0;
  for (int j = -1; j <= 2; ++j) total += bump(t - (base + j));
  return g / total;
}

double PartitionWindow::operator()(std::span<const double> t) const {
  double r = 1.0;
  for (double ti : t) r *= (*this)(ti);
  return r;
}

SugimotoPair::SugimotoPair(int dim, const WindowConfig& cfg)
    : dim_(dim), phi_(dim, cfg.partition_sharpness), b_(cfg.mollifier_sharpness) {
  if (dim < 1) throw Error("build_sugimoto_pair: dim must be >= 1");
  if (cfg.mollifier_nodes < 17) throw Error("build_sugimoto_pair: too few quadrature nodes");
  const int half = cfg.mollifier_nodes / 2;
  const double h = 0.5 / half;
  double mass = psi(0.0) * h;
  for (int i = 1; i < half; ++i) mass += 2.0 * h * psi(i * h);
  norm_ = mass;
  // chi(t) = (2 pi)^{-1} int cos(t y) psi(y) dy / mass, folded over y >= 0.
  nodes_.push_back(0.0);
  weights_.push_back(h * psi(0.0) / (mass * kTwoPi));
  for (int i = 1; i < half; ++i) {
    nodes_.push_back(i * h);
    weights_.push_back(2.0 * h * psi(i * h) / (mass * kTwoPi));
  }
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) m = std::min(m, std::abs(chi(-1.0 + i * 1e-3)));
  measured_min_ = std::pow(m, dim_);
  if (measured_min_ < 1e-6)
    throw Error("build_sugimoto_pair: |chi| on [-1,1]^n fell below 1e-6");
}

double SugimotoPair::psi(double y) const {
  const double u2 = 4.0 * y * y;
  if (u2 >= 1.0) return 0.0;
  return std::exp(-b_ * u2 / (1.0 - u2));
}

double SugimotoPair::chi(double t) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * std::cos(t * nodes_[i]);
  return acc;
}

double SugimotoPair::chi(std::span<const double> t) const {
  double r = 1.0;
  for (double ti : t) r *= chi(ti);
  return r;
}

double SugimotoPair::kappa(double t) const {
  const double p = phi_(t);
  return p == 0.0 ? 0.0 : p / chi(t);
}

double SugimotoPair::kappa(std::span<const double> t) const {
  double r = 1.0;
  for (double ti : t) {
    r *= kappa(ti);
    if (r == 0.0) break;
  }
  return r;
}

double SugimotoPair::certified_lower_bound() const {
  return std::pow(std::cos(0.5) / kTwoPi, dim_);
}

PartitionWindow build_partition(int dim, const WindowConfig& cfg) {
  return PartitionWindow(dim, cfg.partition_sharpness);
}

SugimotoPair build_sugimoto_pair(int dim, const WindowConfig& cfg) { return SugimotoPair(dim, cfg); }

DecompPair DecompPair::build(int dim, const WindowConfig& cfg) {
  DecompPair p;
  p.cfg_ = cfg;
  p.partition_ = std::make_shared<PartitionWindow>(dim, cfg.partition_sharpness);
  p.sugimoto_ = std::make_shared<SugimotoPair>(dim, cfg);
  return p;
}

namespace {

template <typename Fn>
FrequencyProfile shifted_profile(const GridSpec& grid, std::span<const int> shift, Fn&& fn,
                                 std::optional<double> radius) {
  if (shift.size() != static_cast<std::size_t>(grid.dim))
    throw Error("profile: lattice point dimension does not match the grid");
  const Axis ax = grid.frequency_axis();
  const std::size_t n = ax.count();
  // Per-axis factors, then the tensor product.
  std::vector<std::vector<double>> f(grid.dim, std::vector<double>(n));
  for (int d = 0; d < grid.dim; ++d)
    for (std::size_t j = 0; j < n; ++j) f[d][j] = fn(ax.point(j) - shift[d]);
  FrequencyProfile p;
  p.support_radius = radius;
  if (grid.dim == 1) {
    p.values.assign(f[0].begin(), f[0].end());
  } else {
    p.values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) p.values[i * n + j] = f[0][i] * f[1][j];
  }
  return p;
}

double lattice_norm(std::span<const int> nu) {
  double s = 0.0;
  for (int v : nu) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

}  // namespace

FrequencyProfile DecompPair::phi_profile(const GridSpec& grid, std::span<const int> k) const {
  return shifted_profile(grid, k, [this](double t) { return phi(t); },
                         lattice_norm(k) + std::sqrt(static_cast<double>(grid.dim)));
}

FrequencyProfile DecompPair::kappa_profile(const GridSpec& grid, std::span<const int> nu) const {
  return shifted_profile(grid, nu, [this](double t) { return kappa(t); },
                         lattice_norm(nu) + std::sqrt(static_cast<double>(grid.dim)));
}

FrequencyProfile DecompPair::chi_profile(const GridSpec& grid, std::span<const int> nu) const {
  return shifted_profile(grid, nu, [this](double t) { return chi(t); }, std::nullopt);
}

std::vector<int> active_lattice(const Axis& axis) {
  const double lo = axis.point(0);
  const double hi = axis.point(axis.count() - 1);
  std::vector<int> out;
  for (int v = static_cast<int>(std::floor(lo)) - 1; v <= static_cast<int>(std::ceil(hi)) + 1; ++v) {
    // Open window (v - 1, v + 1) must contain a sample.
    if (v + 1.0 > lo && v - 1.0 < hi) out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Band limits.

BandLimitResult band_limit_check(const SampledField& f, double radius) {
  const SampledField spec = f.domain == Domain::space ? fourier_forward(f) : f;
  const Axis ax = f.grid.frequency_axis();
  std::array<double, 2> pt{};
  std::span<double> s(pt.data(), static_cast<std::size_t>(f.grid.dim));
  double total = 0.0, outside = 0.0;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    unflatten(ax, f.grid.dim, i, s);
    double r2 = 0.0;
    for (double v : s) r2 += v * v;
    const double e = std::norm(spec.values[i]);
    total += e;
    if (r2 > radius * radius) outside += e;
  }
  BandLimitResult r;
  r.leakage = total > 0.0 ? outside / total : 0.0;
  r.ok = r.leakage < kBandLimitTolerance;
  return r;
}

SampledField declare_band_limit(SampledField f, double radius) {
  const BandLimitResult r = band_limit_check(f, radius);
  if (!r.ok)
    throw Error("declare_band_limit: Fourier energy outside B_" + std::to_string(radius) +
                " is " + std::to_string(r.leakage) + " of the total");
  f.fsupp_radius = radius;
  return f;
}

namespace {

const DenseMatrix& forward_matrix_for_symbol_axis(const GridSpec& g, std::size_t axis) {
  return axis == 0 ? fourier_matrix(g.space_axis(), g.frequency_axis(), -1)
                   : fourier_matrix(g.frequency_axis(), g.frequency_axis(), -1);
}

const DenseMatrix& inverse_matrix_for_symbol_axis(const GridSpec& g, std::size_t axis) {
  return axis == 0 ? fourier_matrix(g.frequency_axis(), g.space_axis(), +1)
                   : fourier_matrix(g.frequency_axis(), g.frequency_axis(), +1);
}

DenseMatrix column_slice(const DenseMatrix& m, std::size_t c0, std::size_t c1) {
  DenseMatrix out;
  out.rows = m.rows;
  out.cols = c1 - c0;
  out.data.resize(out.rows * out.cols);
  for (std::size_t r = 0; r < m.rows; ++r)
    for (std::size_t c = c0; c < c1; ++c) out(r, c - c0) = m(r, c);
  return out;
}

// Sample index range [lo, hi) of the frequency axis where phi(. - k) can be nonzero.
std::pair<std::size_t, std::size_t> window_range(const Axis& ax, int k) {
  const std::size_t n = ax.count();
  std::size_t lo = n, hi = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = ax.point(j) - k;
    if (t > -1.0 && t < 1.0) {
      lo = std::min(lo, j);
      hi = std::max(hi, j + 1);
    }
  }
  if (lo >= hi) return {0, 0};
  return {lo, hi};
}

}  // namespace

BandLimitResult band_limit_check(const SampledSymbol& sigma,
                                 const std::array<std::optional<double>, 3>& radii) {
  std::vector<std::size_t> shape{sigma.nx(), sigma.nxi(), sigma.nxi()};
  std::vector<cplx> cur = sigma.values;
  std::array<bool, 3> transformed{};
  for (std::size_t a = 0; a < 3; ++a) {
    if (!radii[a]) continue;
    cur = apply_along_axis(cur, shape, a, forward_matrix_for_symbol_axis(sigma.grid, a));
    transformed[a] = true;
  }
  const Axis sx = sigma.grid.space_axis();
  const Axis fa = sigma.grid.frequency_axis();
  auto coord = [&](std::size_t a, std::size_t i) {
    if (transformed[a] || a > 0) return fa.point(i);
    return sx.point(i);
  };
  double total = 0.0, outside = 0.0;
  for (std::size_t i0 = 0; i0 < shape[0]; ++i0)
    for (std::size_t i1 = 0; i1 < shape[1]; ++i1)
      for (std::size_t i2 = 0; i2 < shape[2]; ++i2) {
        const double e = std::norm(cur[(i0 * shape[1] + i1) * shape[2] + i2]);
        total += e;
        const std::array<std::size_t, 3> idx{i0, i1, i2};
        bool out = false;
        for (std::size_t a = 0; a < 3 && !out; ++a)
          if (transformed[a] && std::abs(coord(a, idx[a])) > *radii[a]) out = true;
        if (out) outside += e;
      }
  BandLimitResult r;
  r.leakage = total > 0.0 ? outside / total : 0.0;
  r.ok = r.leakage < kBandLimitTolerance;
  return r;
}

// ---------------------------------------------------------------------------
// Uniform decomposition.

SampledField box_op(std::span<const int> nu, const SampledField& f, const DecompPair& pair) {
  return multiplier_apply(pair.kappa_profile(f.grid, nu), f);
}

SampledField box_op(int nu, const SampledField& f, const DecompPair& pair) {
  return box_op(std::span<const int>(&nu, 1), f, pair);
}

SymbolFamily::SymbolFamily(std::shared_ptr<const SampledSymbol> sigma, DecompPair pair)
    : sigma_(std::move(sigma)), pair_(std::move(pair)) {
  const std::vector<int> nus = active_lattice(sigma_->grid.frequency_axis());
  for (int a : nus)
    for (int b : nus) indices_.push_back({a, b});
}

SampledSymbol SymbolFamily::piece(std::array<int, 2> nu) const {
  const Axis fa = sigma_->grid.frequency_axis();
  const std::size_t nf = fa.count();
  std::vector<double> c1(nf), c2(nf);
  for (std::size_t j = 0; j < nf; ++j) {
    c1[j] = pair_.chi(fa.point(j) - nu[0]);
    c2[j] = pair_.chi(fa.point(j) - nu[1]);
  }
  SampledSymbol out{sigma_->grid, sigma_->values, std::nullopt};
  for (std::size_t ix = 0; ix < out.nx(); ++ix)
    for (std::size_t i1 = 0; i1 < nf; ++i1)
      for (std::size_t i2 = 0; i2 < nf; ++i2) out.values[out.index(ix, i1, i2)] *= c1[i1] * c2[i2];
  if (sigma_->fsupp_radii) {
    auto r = *sigma_->fsupp_radii;
    out.fsupp_radii = std::array<double, 3>{r[0], 2.0 * r[1], 2.0 * r[2]};
  }
  return out;
}

SampledSymbol SymbolFamily::reconstruct() const {
  const Axis fa = sigma_->grid.frequency_axis();
  const std::size_t nf = fa.count();
  const std::size_t nx = sigma_->nx();
  SampledSymbol out{sigma_->grid, std::vector<cplx>(sigma_->values.size()), sigma_->fsupp_radii};
  std::vector<double> w1(nf), w2(nf);
  for (const auto& nu : indices_) {
    for (std::size_t j = 0; j < nf; ++j) {
      w1[j] = pair_.chi(fa.point(j) - nu[0]) * pair_.kappa(fa.point(j) - nu[0]);
      w2[j] = pair_.chi(fa.point(j) - nu[1]) * pair_.kappa(fa.point(j) - nu[1]);
    }
    for (std::size_t i1 = 0; i1 < nf; ++i1) {
      if (w1[i1] == 0.0) continue;
      for (std::size_t i2 = 0; i2 < nf; ++i2) {
        if (w2[i2] == 0.0) continue;
        const double w = w1[i1] * w2[i2];
        for (std::size_t ix = 0; ix < nx; ++ix) {
          const std::size_t k = out.index(ix, i1, i2);
          out.values[k] += sigma_->values[k] * w;
        }
      }
    }
  }
  return out;
}

SymbolFamily decompose_symbol(const SampledSymbol& sigma, const DecompPair& pair) {
  return SymbolFamily(std::make_shared<SampledSymbol>(sigma), pair);
}

SymbolSpectrum symbol_spectrum(const SampledSymbol& sigma) {
  std::vector<std::size_t> shape{sigma.nx(), sigma.nxi(), sigma.nxi()};
  std::vector<cplx> cur = sigma.values;
  for (std::size_t a = 0; a < 3; ++a)
    cur = apply_along_axis(cur, shape, a, forward_matrix_for_symbol_axis(sigma.grid, a));
  return {sigma.grid, std::move(cur), sigma.nxi()};
}

SampledSymbol symbol_inverse(const SymbolSpectrum& spec) {
  std::vector<std::size_t> shape{spec.n, spec.n, spec.n};
  std::vector<cplx> cur = spec.values;
  for (std::size_t a = 3; a-- > 0;)
    cur = apply_along_axis(cur, shape, a, inverse_matrix_for_symbol_axis(spec.grid, a));
  return {spec.grid, std::move(cur), std::nullopt};
}

SampledSymbol symbol_box(std::array<int, 3> k, const SymbolSpectrum& spec, const DecompPair& pair) {
  const Axis fa = spec.grid.frequency_axis();
  std::array<std::pair<std::size_t, std::size_t>, 3> rg;
  for (std::size_t a = 0; a < 3; ++a) rg[a] = window_range(fa, k[a]);
  const std::size_t n = spec.n;
  std::vector<std::size_t> shape{rg[0].second - rg[0].first, rg[1].second - rg[1].first,
                                 rg[2].second - rg[2].first};
  if (shape[0] == 0 || shape[1] == 0 || shape[2] == 0) {
    SampledSymbol zero{spec.grid, {}, std::nullopt};
    zero.values.assign(zero.nx() * zero.nxi() * zero.nxi(), 0.0);
    return zero;
  }
  std::array<std::vector<double>, 3> w;
  for (std::size_t a = 0; a < 3; ++a) {
    w[a].resize(shape[a]);
    for (std::size_t j = 0; j < shape[a]; ++j) w[a][j] = pair.phi(fa.point(rg[a].first + j) - k[a]);
  }
  std::vector<cplx> block(shape[0] * shape[1] * shape[2]);
  for (std::size_t i0 = 0; i0 < shape[0]; ++i0)
    for (std::size_t i1 = 0; i1 < shape[1]; ++i1)
      for (std::size_t i2 = 0; i2 < shape[2]; ++i2) {
        const std::size_t src =
            ((rg[0].first + i0) * n + (rg[1].first + i1)) * n + (rg[2].first + i2);
        block[(i0 * shape[1] + i1) * shape[2] + i2] = spec.values[src] * (w[0][i0] * w[1][i1] * w[2][i2]);
      }
  for (std::size_t a = 3; a-- > 0;) {
    const DenseMatrix m =
        column_slice(inverse_matrix_for_symbol_axis(spec.grid, a), rg[a].first, rg[a].second);
    block = apply_along_axis(block, shape, a, m);
  }
  // The spectrum of the piece lies in k + [-1, 1]^3 by construction.
  return {spec.grid, std::move(block),
          std::array<double, 3>{std::abs(k[0]) + 1.0, std::abs(k[1]) + 1.0, std::abs(k[2]) + 1.0}};
}

SampledSymbol symbol_box(std::array<int, 3> k, const SampledSymbol& sigma, const DecompPair& pair) {
  return symbol_box(k, symbol_spectrum(sigma), pair);
}

SymbolBoxFamily::SymbolBoxFamily(SymbolSpectrum spectrum, DecompPair pair, double drop_ratio)
    : spectrum_(std::move(spectrum)), pair_(std::move(pair)) {
  const Axis fa = spectrum_.grid.frequency_axis();
  const std::vector<int> ks = active_lattice(fa);
  const std::size_t n = spectrum_.n;
  double total = 0.0;
  for (const cplx& v : spectrum_.values) total += std::norm(v);

  for (int k0 : ks)
    for (int k1 : ks)
      for (int k2 : ks) {
        const std::array<int, 3> k{k0, k1, k2};
        std::array<std::pair<std::size_t, std::size_t>, 3> rg;
        for (std::size_t a = 0; a < 3; ++a) rg[a] = window_range(fa, k[a]);
        double e = 0.0;
        for (std::size_t i0 = rg[0].first; i0 < rg[0].second; ++i0) {
          const double p0 = pair_.phi(fa.point(i0) - k0);
          for (std::size_t i1 = rg[1].first; i1 < rg[1].second; ++i1) {
            const double p1 = p0 * pair_.phi(fa.point(i1) - k1);
            for (std::size_t i2 = rg[2].first; i2 < rg[2].second; ++i2) {
              const double p = p1 * pair_.phi(fa.point(i2) - k2);
              e += std::norm(spectrum_.values[(i0 * n + i1) * n + i2]) * p * p;
            }
          }
        }
        if (total == 0.0 || e < drop_ratio * total) {
          ++dropped_;
          if (total > 0.0) dropped_energy_ += e / total;
          continue;
        }
        indices_.push_back(k);
      }
}

SymbolBoxFamily symbol_box_family(const SampledSymbol& sigma, const DecompPair& pair, double drop_ratio) {
  return SymbolBoxFamily(symbol_spectrum(sigma), pair, drop_ratio);
}

SampledSymbol modulate_symbol(const SampledSymbol& sigma, std::array<int, 3> k) {
  const Axis sx = sigma.grid.space_axis();
  const Axis fa = sigma.grid.frequency_axis();
  SampledSymbol out = sigma;
  out.fsupp_radii.reset();
  for (std::size_t ix = 0; ix < sigma.nx(); ++ix)
    for (std::size_t i1 = 0; i1 < sigma.nxi(); ++i1)
      for (std::size_t i2 = 0; i2 < sigma.nxi(); ++i2) {
        const double ph = -(k[0] * sx.point(ix) + k[1] * fa.point(i1) + k[2] * fa.point(i2));
        out.values[out.index(ix, i1, i2)] *= cplx(std::cos(ph), std::sin(ph));
      }
  return out;
}

}  // namespace bpdo
