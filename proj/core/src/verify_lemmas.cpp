#include <algorithm>
#include <cmath>

#include "bpdo/op.hpp"
#include "bpdo/spaces.hpp"
#include "bpdo/verify.hpp"

namespace bpdo {

CheckResult upper_check(std::string id, std::string statement, double measured, double bound) {
  CheckResult c{std::move(id), std::move(statement), measured, bound, false, false};
  c.pass = std::isfinite(measured) && measured <= bound;
  return c;
}

CheckResult lower_check(std::string id, std::string statement, double measured, double bound) {
  CheckResult c{std::move(id), std::move(statement), measured, bound, true, false};
  c.pass = std::isfinite(measured) && measured >= bound;
  return c;
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

nlohmann::json to_json(const CheckResult& c) {
  return {{"id", c.id},
          {"statement", c.statement},
          {"measured", c.measured},
          {"bound", c.bound},
          {"kind", c.lower_bound ? "lower" : "upper"},
          {"pass", c.pass}};
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}, {"details", r.details}};
}

// ---------------------------------------------------------------------------

ProductWeakResult check_product_lweak(std::span<const double> f1, std::span<const double> f2,
                                      std::span<const double> A0, std::span<const double> A1,
                                      std::span<const double> A2, double p1, double p2) {
  const std::size_t len = f1.size();
  if (len % 2 != 1 || f2.size() != len || A1.size() != len || A2.size() != len || A0.size() != 2 * len - 1)
    throw Error("check_product_lweak: expected lengths 2N+1 for f_j, A_j and 4N+1 for A0");
  ProductWeakResult r;
  double lhs = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double a = std::abs(f1[i] * A1[i]);
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < len; ++j) lhs += a * std::abs(f2[j] * A2[j] * A0[i + j]);
  }
  r.lhs = lhs;
  r.rhs = weak_seq_norm(f1, p1).value * weak_seq_norm(f2, p2).value * seq_norm(A0, 2.0).value *
          seq_norm(A1, 2.0).value * seq_norm(A2, 2.0).value;
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

namespace {

// Sparse sequence with Pareto(1.5) magnitudes; the density varies per draw.
std::vector<double> heavy_sparse(Rng& rng, std::size_t len) {
  const double density = uniform(rng, 0.02, 0.6);
  std::vector<double> a(len, 0.0);
  for (auto& v : a)
    if (uniform(rng, 0.0, 1.0) < density) v = std::pow(1.0 - uniform(rng, 0.0, 1.0), -1.0 / 1.5);
  a[static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(len)))] += 1.0;
  return a;
}

}  // namespace

ProductWeakEnsemble product_lweak_ensemble(std::uint64_t seed, int trials, int N, double p1, double p2) {
  const std::size_t len = static_cast<std::size_t>(2 * N + 1);
  std::vector<double> f1(len), f2(len);
  for (int v = -N; v <= N; ++v) {
    const double br = std::sqrt(1.0 + static_cast<double>(v) * v);
    f1[static_cast<std::size_t>(v + N)] = std::pow(br, -1.0 / p1);
    f2[static_cast<std::size_t>(v + N)] = std::pow(br, -1.0 / p2);
  }
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng = trial_rng(seed, 0x1e3a, static_cast<std::uint64_t>(t));
    const auto A0 = heavy_sparse(rng, 2 * len - 1);
    const auto A1 = heavy_sparse(rng, len);
    const auto A2 = heavy_sparse(rng, len);
    ratios.push_back(check_product_lweak(f1, f2, A0, A1, A2, p1, p2).ratio);
  }
  ProductWeakEnsemble e;
  e.trials = trials;
  if (ratios.empty()) return e;
  e.max_ratio = *std::max_element(ratios.begin(), ratios.end());
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
  e.median_ratio = ratios[ratios.size() / 2];
  return e;
}

// ---------------------------------------------------------------------------

AmalgamEquivResult check_amalgam_equiv(const SampledField& f, const Window& g, double p, double q, double L) {
  if (f.grid.dim != 1 || f.domain != Domain::space)
    throw Error("check_amalgam_equiv: expects an n = 1 field in the space domain");
  const Axis ax = f.grid.space_axis();
  const std::size_t n = ax.count();
  const int X = static_cast<int>(f.grid.x_halfwidth);
  const int margin = 8;  // translates beyond the box still see the tails of f

  // L^p in x for each translate, then l^q over the translates.
  std::vector<double> per_nu, row(n);
  for (int nu = -X - margin; nu <= X + margin; ++nu) {
    for (std::size_t i = 0; i < n; ++i) row[i] = std::abs(g(ax.point(i) - nu)) * std::abs(f.values[i]);
    per_nu.push_back(weighted_lp(row, p, f.grid.x_step));
  }
  AmalgamEquivResult r;
  r.windowed = weighted_lp(per_nu, q);
  r.amalgam = amalgam_norm(f, p, q).value;
  r.ratio = r.windowed > 0.0 ? r.amalgam / r.windowed : 0.0;

  double c_low = kInf, c_high = kInf;
  for (int i = -4000; i <= 4000; ++i) {
    const double t = i * 0.0125;
    const double gv = std::abs(g(t));
    if (t >= -0.5 && t < 0.5) c_low = std::min(c_low, gv);
    if (gv > 0.0) c_high = std::min(c_high, std::pow(1.0 + t * t, -L / 2.0) / gv);
  }
  r.hypothesis_c = std::min(c_low, c_high);
  return r;
}

// ---------------------------------------------------------------------------

namespace {

SampledField gaussian(const GridSpec& grid, double center, double width) {
  return sample_space(grid, ScalarFn([=](double x) {
                        const double d = (x - center) / width;
                        return cplx(std::exp(-0.5 * d * d), 0.0);
                      }));
}

std::vector<double> moduli_of(const SampledField& f) {
  std::vector<double> a(f.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(f.values[i]);
  return a;
}

}  // namespace

SPropertiesReport check_s_properties(const GridSpec& grid, const SPropertiesConfig& cfg) {
  if (grid.dim != 1) throw Error("check_s_properties: only n = 1 is supported");
  const Axis ax = grid.space_axis();
  const std::size_t n = ax.count();
  const int per_unit = grid.space_samples_per_unit();
  const DecompPair pair = DecompPair::build(1);
  SPropertiesReport rep;
  rep.members = cfg.members;
  for (auto& b : rep.lattice_brackets) b = {kInf, 0.0};

  // Lattice samples nu in [-X, X).
  std::vector<std::size_t> lattice_idx;
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(ax.point(i) - std::round(ax.point(i))) < 1e-12) lattice_idx.push_back(i);

  for (int m = 0; m < cfg.members; ++m) {
    Rng rng = trial_rng(cfg.seed, 0x5a11, static_cast<std::uint64_t>(m));

    // Convolution identities. Narrow nonnegative Gaussians keep every
    // convolution inside the box for |x| <= X / 2.
    const SampledField f = gaussian(grid, uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 0.8));
    const SampledField g = gaussian(grid, uniform(rng, -1.0, 1.0), uniform(rng, 0.5, 0.8));
    const SampledField a = s_transform(convolve(f, g));
    const SampledField b = convolve(s_transform(f), g);
    const SampledField c = convolve(f, s_transform(g));
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(ax.point(i)) > grid.x_halfwidth / 2.0) continue;
      scale = std::max(scale, std::abs(a.values[i]));
      diff = std::max({diff, std::abs(a.values[i] - b.values[i]), std::abs(a.values[i] - c.values[i])});
    }
    rep.convolution_residual = std::max(rep.convolution_residual, diff / scale);

    // Quasi-invariance, lattice sampling and the L^1 bound on a packet field.
    const SampledField h = random_packet_field(grid, rng);
    const std::vector<double> habs = moduli_of(h);
    const std::vector<double> sh = s_transform_values(grid, habs);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i > static_cast<std::size_t>(per_unit) ? i - per_unit : 0;
           j < std::min(n, i + per_unit + 1); ++j)
        rep.quasi_invariance = std::max(rep.quasi_invariance, sh[i] / sh[j]);

    std::vector<double> at_lattice;
    for (std::size_t i : lattice_idx) at_lattice.push_back(sh[i]);
    const std::array<double, 3> ps{1.0, 2.0, kInf};
    for (std::size_t k = 0; k < 3; ++k) {
      const double ratio = weighted_lp(at_lattice, ps[k]) / weighted_lp(sh, ps[k], grid.x_step);
      rep.lattice_brackets[k][0] = std::min(rep.lattice_brackets[k][0], ratio);
      rep.lattice_brackets[k][1] = std::max(rep.lattice_brackets[k][1], ratio);
    }
    rep.l1_bound = std::max(rep.l1_bound, weighted_lp(sh, 1.0, grid.x_step) / weighted_lp(habs, 1.0, grid.x_step));

    // Pointwise domination on frequency-localized pieces.
    const double total = energy(h);
    const SampledField H = fourier_forward(h);
    for (int nu : active_lattice(grid.frequency_axis())) {
      const std::array<int, 1> k{nu};
      const SampledField piece = fourier_inverse(multiplier_apply(pair.phi_profile(grid, k), H));
      if (energy(piece) < 1e-24 * total) continue;
      std::vector<double> sq(n);
      for (std::size_t i = 0; i < n; ++i) sq[i] = std::norm(piece.values[i]);
      const std::vector<double> s = s_transform_values(grid, sq);
      for (std::size_t i = 0; i < n; ++i)
        if (s[i] > 0.0) rep.pointwise_domination = std::max(rep.pointwise_domination, sq[i] / s[i]);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

GridSpec symbol_test_grid() { return make_grid(1, 8.0, 0.25, 8.0, 0.25); }

double check_l2ul_linfty(const SampledSymbol& piece, double band_radius) {
  // A declared radius is trusted; re-transforming a truncated piece would
  // report the leakage of its slowly decaying tails instead.
  bool ok = false;
  if (piece.fsupp_radii)
    ok = std::all_of(piece.fsupp_radii->begin(), piece.fsupp_radii->end(),
                     [&](double r) { return r <= band_radius; });
  else
    ok = band_limit_check(piece, {band_radius, band_radius, band_radius}).ok;
  if (!ok) throw Error("check_l2ul_linfty: piece is not band-limited to the requested box");
  double sup = 0.0;
  for (const cplx& v : piece.values) sup = std::max(sup, std::abs(v));
  const double ul = uniform_local_l2(piece).value;
  return ul > 0.0 ? sup / ul : 0.0;
}

double check_l2ul_linfty(const SampledField& piece) {
  if (!piece.fsupp_radius) throw Error("check_l2ul_linfty: field must declare its Fourier radius");
  double sup = 0.0;
  for (const cplx& v : piece.values) sup = std::max(sup, std::abs(v));
  const double ul = uniform_local_l2(piece).value;
  return ul > 0.0 ? sup / ul : 0.0;
}

LinftyReport l2ul_linfty_ensemble(std::uint64_t seed, int symbols) {
  const GridSpec grid = symbol_test_grid();
  const DecompPair pair = DecompPair::build(1);
  LinftyReport rep;
  rep.min_ratio = kInf;
  for (int s = 0; s < symbols; ++s) {
    Rng rng = trial_rng(seed, 0x4e42, static_cast<std::uint64_t>(s));
    const SampledSymbol sigma = random_enveloped_symbol(grid, rng);
    const SymbolSpectrum spec = symbol_spectrum(sigma);
    for (int k0 = -1; k0 <= 1; ++k0)
      for (int k1 = -1; k1 <= 1; ++k1)
        for (int k2 = -1; k2 <= 1; ++k2) {
          const SampledSymbol piece = symbol_box({k0, k1, k2}, spec, pair);
          const double r = check_l2ul_linfty(piece, 2.0);
          rep.min_ratio = std::min(rep.min_ratio, r);
          rep.max_ratio = std::max(rep.max_ratio, r);
          ++rep.pieces;
          // Modulation leaves |piece| unchanged, so the ratio must not move.
          const std::array<int, 3> shift{static_cast<int>(uniform(rng, -2.0, 3.0)),
                                         static_cast<int>(uniform(rng, -2.0, 3.0)),
                                         static_cast<int>(uniform(rng, -2.0, 3.0))};
          const SampledSymbol moved = modulate_symbol(piece, shift);
          double sup = 0.0;
          for (const cplx& v : moved.values) sup = std::max(sup, std::abs(v));
          const double rm = sup / uniform_local_l2(moved).value;
          rep.modulation_deviation = std::max(rep.modulation_deviation, std::abs(rm - r));
        }
  }
  return rep;
}

// ---------------------------------------------------------------------------

DualityResult check_duality(const SampledField& h, const DecompPair& pair, Rng& rng, int samples) {
  if (h.grid.dim != 1 || h.domain != Domain::space) throw Error("check_duality: expects an n = 1 space field");
  const GridSpec& grid = h.grid;
  const Axis ax = grid.space_axis();
  const std::size_t n = ax.count();
  const int X = static_cast<int>(grid.x_halfwidth);
  const double hx = grid.x_step;

  std::vector<std::vector<cplx>> windowed;  // theta(x - mu) h(x)
  DualityResult r;
  for (int mu = -X; mu <= X; ++mu) {
    std::vector<cplx> w(n);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = pair.theta(ax.point(i) - mu) * h.values[i];
      e += std::norm(w[i]);
    }
    r.windowed += std::sqrt(hx * e);
    windowed.push_back(std::move(w));
  }
  r.amalgam = amalgam_norm(h, 2.0, 1.0).value;

  std::vector<double> best(windowed.size(), 0.0);
  PacketParams params;
  params.center_range = grid.x_halfwidth / 2.0;
  params.omega_max = grid.xi_halfwidth / 4.0;
  params.radius = grid.xi_halfwidth - 2.0;
  for (int s = 0; s < samples; ++s) {
    const SampledField g = random_packet_field(grid, rng, params);
    const double gn = std::sqrt(energy(g));
    for (std::size_t m = 0; m < windowed.size(); ++m) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += windowed[m][i] * g.values[i];
      best[m] = std::max(best[m], hx * std::abs(acc) / gn);
    }
  }
  for (double b : best) r.sampled += b;
  return r;
}

}  // namespace bpdo
