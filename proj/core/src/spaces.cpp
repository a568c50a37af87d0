#include "bpdo/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <ostream>

#include "bpdo/format.hpp"

namespace bpdo {

void to_json(nlohmann::json& j, const NormResult& r) {
  j = nlohmann::json{{"space_id", r.space_id},
                     {"params", r.params},
                     {"value", r.value},
                     {"quad_error_hint", r.quad_error_hint}};
}

void write_norm_table(std::ostream& os, std::span<const NormResult> rows) {
  os << "space_id,params,value\n";
  for (const auto& r : rows) {
    os << '"' << r.space_id << "\",";
    for (std::size_t i = 0; i < r.params.size(); ++i) os << (i ? ";" : "") << format_real(r.params[i]);
    os << ',' << format_real(r.value) << '\n';
  }
}

namespace {

void require_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw Error(std::string(what) + ": exponent must lie in [1, inf], got " + format_real(p));
}

double finish(double v) {
  if (!std::isfinite(v)) throw Error("norm evaluated to a non-finite value");
  return v;
}

std::vector<double> moduli(std::span<const cplx> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i]);
  return out;
}

double cell_volume(const SampledField& f) {
  const double h = f.domain == Domain::space ? f.grid.x_step : f.grid.xi_step;
  return std::pow(h, f.grid.dim);
}

}  // namespace

double weighted_lp(std::span<const double> a, double p, double weight) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the maximum so large exponents do not overflow.
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(weight * s, 1.0 / p);
}

NormResult lp_norm(const SampledField& f, double p, const std::optional<Box>& region) {
  require_exponent(p, "lp_norm");
  if (f.domain != Domain::space) throw Error("lp_norm: field must be in the space domain");
  std::vector<double> a;
  a.reserve(f.values.size());
  if (region) {
    if (region->ranges.size() != static_cast<std::size_t>(f.grid.dim))
      throw Error("lp_norm: region dimension does not match the grid");
    std::array<double, 2> pt{};
    std::span<double> s(pt.data(), static_cast<std::size_t>(f.grid.dim));
    const Axis ax = f.grid.space_axis();
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      unflatten(ax, f.grid.dim, i, s);
      bool in = true;
      for (int d = 0; d < f.grid.dim; ++d)
        in = in && s[d] >= region->ranges[d].first - 1e-12 && s[d] < region->ranges[d].second - 1e-12;
      if (in) a.push_back(std::abs(f.values[i]));
    }
  } else {
    a = moduli(f.values);
  }
  NormResult r;
  r.space_id = "L^p";
  r.params = {p};
  r.value = finish(weighted_lp(a, p, cell_volume(f)));
  return r;
}

NormResult seq_norm(std::span<const double> a, double q) {
  require_exponent(q, "seq_norm");
  NormResult r;
  r.space_id = "l^q";
  r.params = {q};
  r.value = finish(weighted_lp(a, q, 1.0));
  return r;
}

NormResult weak_seq_norm(std::span<const double> a, double q) {
  require_exponent(q, "weak_seq_norm");
  if (std::isinf(q)) throw Error("weak_seq_norm: q = inf is not a weak space");
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = std::abs(a[i]);
  std::sort(s.begin(), s.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t m = 0; m < s.size(); ++m)
    best = std::max(best, std::pow(static_cast<double>(m + 1), 1.0 / q) * s[m]);
  NormResult r;
  r.space_id = "l^{q,inf}";
  r.params = {q};
  r.value = finish(best);
  return r;
}

NormResult sobolev_norm(const SampledField& f, double s) {
  const SampledField F = f.domain == Domain::space ? fourier_forward(f) : f;
  const Axis ax = f.grid.frequency_axis();
  std::array<double, 2> pt{};
  std::span<double> xi(pt.data(), static_cast<std::size_t>(f.grid.dim));
  double acc = 0.0;
  for (std::size_t i = 0; i < F.values.size(); ++i) {
    unflatten(ax, f.grid.dim, i, xi);
    double r2 = 1.0;
    for (double v : xi) r2 += v * v;
    acc += std::pow(r2, s) * std::norm(F.values[i]);
  }
  const double vol = std::pow(f.grid.xi_step / kTwoPi, f.grid.dim);
  NormResult r;
  r.space_id = "H^s";
  r.params = {s};
  r.value = finish(std::sqrt(acc * vol));
  return r;
}

CubeNorms cube_lp_norms(const SampledField& f, double p) {
  require_exponent(p, "cube_lp_norms");
  if (f.domain != Domain::space) throw Error("cube norms need a space-domain field");
  const Axis ax = f.grid.space_axis();
  const std::size_t n = ax.count();
  CubeNorms out;
  const int lo = cube_index(ax.point(0));
  const int hi = cube_index(ax.point(n - 1));
  for (int v = lo; v <= hi; ++v) out.lattice.push_back(v);
  const std::size_t m = out.lattice.size();
  std::vector<int> cube_of(n);
  for (std::size_t i = 0; i < n; ++i) cube_of[i] = cube_index(ax.point(i)) - lo;

  const std::size_t cubes = f.grid.dim == 1 ? m : m * m;
  std::vector<double> acc(cubes, 0.0);
  const bool sup = std::isinf(p);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    std::size_t c;
    if (f.grid.dim == 1) {
      c = cube_of[i];
    } else {
      c = cube_of[i / n] * m + cube_of[i % n];
    }
    const double a = std::abs(f.values[i]);
    if (sup)
      acc[c] = std::max(acc[c], a);
    else
      acc[c] += std::pow(a, p);
  }
  const double vol = cell_volume(f);
  out.values.resize(cubes);
  for (std::size_t c = 0; c < cubes; ++c) out.values[c] = sup ? acc[c] : std::pow(vol * acc[c], 1.0 / p);
  return out;
}

NormResult amalgam_norm(const SampledField& f, double p, double q) {
  require_exponent(q, "amalgam_norm");
  const CubeNorms c = cube_lp_norms(f, p);
  NormResult r;
  r.space_id = "(L^p,l^q)";
  r.params = {p, q};
  r.value = finish(weighted_lp(c.values, q, 1.0));
  return r;
}

NormResult uniform_local_l2(const SampledField& f) {
  NormResult r = amalgam_norm(f, 2.0, kInf);
  r.space_id = "L^2_ul";
  r.params = {};
  return r;
}

NormResult uniform_local_l2(const SampledSymbol& sigma) {
  const Axis sx = sigma.grid.space_axis();
  const Axis fa = sigma.grid.frequency_axis();
  const std::size_t nx = sigma.nx(), nf = sigma.nxi();
  const int xlo = cube_index(sx.point(0));
  const int flo = cube_index(fa.point(0));
  const std::size_t mx = cube_index(sx.point(nx - 1)) - xlo + 1;
  const std::size_t mf = cube_index(fa.point(nf - 1)) - flo + 1;
  std::vector<int> cx(nx), cf(nf);
  for (std::size_t i = 0; i < nx; ++i) cx[i] = cube_index(sx.point(i)) - xlo;
  for (std::size_t i = 0; i < nf; ++i) cf[i] = cube_index(fa.point(i)) - flo;
  std::vector<double> acc(mx * mf * mf, 0.0);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t i1 = 0; i1 < nf; ++i1)
      for (std::size_t i2 = 0; i2 < nf; ++i2)
        acc[(cx[ix] * mf + cf[i1]) * mf + cf[i2]] += std::norm(sigma.at(ix, i1, i2));
  const double vol = sigma.grid.x_step * sigma.grid.xi_step * sigma.grid.xi_step;
  double best = 0.0;
  for (double a : acc) best = std::max(best, a);
  NormResult r;
  r.space_id = "L^2_ul";
  r.value = finish(std::sqrt(vol * best));
  return r;
}

namespace {

void require_modulation_band(const SampledField& f) {
  const double limit = f.grid.xi_halfwidth - 2.0;
  if (f.fsupp_radius) {
    if (*f.fsupp_radius > limit)
      throw Error("modulation_norm: declared Fourier radius " + format_real(*f.fsupp_radius) +
                  " exceeds Xi - 2 = " + format_real(limit));
    return;
  }
  const BandLimitResult b = band_limit_check(f, limit);
  if (!b.ok)
    throw Error("modulation_norm: field is not band-limited to Xi - 2 (leakage " +
                format_real(b.leakage) + ")");
}

}  // namespace

NormResult modulation_norm(const SampledField& f, double p, double q, const DecompPair& window) {
  require_exponent(p, "modulation_norm");
  require_exponent(q, "modulation_norm");
  require_modulation_band(f);
  const SampledField F = f.domain == Domain::space ? fourier_forward(f) : f;
  const std::vector<int> lat = active_lattice(f.grid.frequency_axis());
  std::vector<double> pieces;
  std::vector<int> k(f.grid.dim);
  const std::size_t m = lat.size();
  const std::size_t total = f.grid.dim == 1 ? m : m * m;
  for (std::size_t c = 0; c < total; ++c) {
    if (f.grid.dim == 1) {
      k[0] = lat[c];
    } else {
      k[0] = lat[c / m];
      k[1] = lat[c % m];
    }
    const SampledField piece = fourier_inverse(multiplier_apply(window.phi_profile(f.grid, k), F));
    pieces.push_back(weighted_lp(moduli(piece.values), p, std::pow(f.grid.x_step, f.grid.dim)));
  }
  NormResult r;
  r.space_id = "M^{p,q}";
  r.params = {p, q};
  r.value = finish(weighted_lp(pieces, q, 1.0));
  return r;
}

NormResult modulation_norm(const SymbolBoxFamily& family, double p, double q) {
  require_exponent(p, "modulation_norm");
  require_exponent(q, "modulation_norm");
  std::vector<double> pieces;
  pieces.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const SampledSymbol piece = family.piece(i);
    const double vol = piece.grid.x_step * piece.grid.xi_step * piece.grid.xi_step;
    pieces.push_back(weighted_lp(moduli(piece.values), p, vol));
  }
  NormResult r;
  r.space_id = "M^{p,q}";
  r.params = {p, q};
  r.value = finish(weighted_lp(pieces, q, 1.0));
  return r;
}

NormResult modulation_norm(const SampledSymbol& sigma, double p, double q, const DecompPair& window) {
  return modulation_norm(symbol_box_family(sigma, window), p, q);
}

std::vector<double> default_hardy_scales() {
  std::vector<double> s;
  for (int j = 0; j <= 8; ++j) s.push_back(std::ldexp(1.0, -j));
  return s;
}

NormResult local_hardy_norm(const SampledField& f, const std::vector<double>& scales) {
  if (scales.empty()) throw Error("local_hardy_norm: empty scale list");
  for (double t : scales)
    if (!(t > 0.0 && t <= 1.0)) throw Error("local_hardy_norm: scales must lie in (0, 1]");
  if (f.domain != Domain::space) throw Error("local_hardy_norm: field must be in the space domain");
  const SampledField F = fourier_forward(f);
  std::vector<double> sup(f.values.size(), 0.0);
  for (double t : scales) {
    const double a = 0.5 * t * t;
    const FrequencyProfile m = sample_profile(
        f.grid, PointFn([a](std::span<const double> xi) {
          double r2 = 0.0;
          for (double v : xi) r2 += v * v;
          return cplx(std::exp(-a * r2), 0.0);
        }));
    const SampledField g = fourier_inverse(multiplier_apply(m, F));
    for (std::size_t i = 0; i < sup.size(); ++i) sup[i] = std::max(sup[i], std::abs(g.values[i]));
  }
  NormResult r;
  r.space_id = "h^1";
  r.params = scales;
  r.value = finish(weighted_lp(sup, 1.0, std::pow(f.grid.x_step, f.grid.dim)));
  return r;
}

NormResult mixed_norm(std::span<const cplx> data, const std::vector<std::size_t>& shape,
                      const std::vector<AxisNorm>& spec) {
  const std::size_t rank = shape.size();
  if (spec.size() != rank) throw Error("mixed_norm: spec must list every index exactly once");
  std::vector<bool> seen(rank, false);
  for (const auto& s : spec) {
    if (s.index >= rank) throw Error("mixed_norm: index out of range");
    if (seen[s.index]) throw Error("mixed_norm: duplicate index " + std::to_string(s.index));
    seen[s.index] = true;
    require_exponent(s.exponent, "mixed_norm");
  }
  std::size_t count = 1;
  for (auto n : shape) count *= n;
  if (count != data.size()) throw Error("mixed_norm: data size does not match shape");

  std::vector<double> cur = moduli(data);
  std::vector<std::size_t> cur_shape = shape;
  std::vector<std::size_t> axis_of(rank);  // original index -> current position
  for (std::size_t i = 0; i < rank; ++i) axis_of[i] = i;
  for (const auto& s : spec) {
    const std::size_t ax = axis_of[s.index];
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < ax; ++i) outer *= cur_shape[i];
    for (std::size_t i = ax + 1; i < cur_shape.size(); ++i) inner *= cur_shape[i];
    const std::size_t len = cur_shape[ax];
    std::vector<double> next(outer * inner);
    std::vector<double> line(len);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t in = 0; in < inner; ++in) {
        for (std::size_t l = 0; l < len; ++l) line[l] = cur[(o * len + l) * inner + in];
        next[o * inner + in] = weighted_lp(line, s.exponent, s.step);
      }
    cur.swap(next);
    cur_shape.erase(cur_shape.begin() + static_cast<std::ptrdiff_t>(ax));
    for (auto& a : axis_of)
      if (a > ax) --a;
  }
  NormResult r;
  r.space_id = "mixed";
  for (const auto& s : spec) {
    r.params.push_back(static_cast<double>(s.index));
    r.params.push_back(s.exponent);
  }
  r.value = finish(cur.empty() ? 0.0 : cur[0]);
  return r;
}

}  // namespace bpdo
