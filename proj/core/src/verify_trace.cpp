#include <algorithm>
#include <cmath>

#include "bpdo/op.hpp"
#include "bpdo/spaces.hpp"
#include "bpdo/suites.hpp"
#include "bpdo/verify.hpp"

namespace bpdo {

double transfer_cutoff(double t) {
  const double a = std::abs(t);
  if (a <= 4.0) return 1.0;
  if (a >= 5.0) return 0.0;
  // Smooth step from 1 at |t| = 4 to 0 at |t| = 5.
  const double u = 5.0 - a;
  const double p = std::exp(-1.0 / u), q = std::exp(-1.0 / (1.0 - u));
  return p / (p + q);
}

namespace {

double bracket(double t) { return std::sqrt(1.0 + t * t); }

// Sample indices i with |xi_i - nu| < 1, where kappa(xi - nu) can be nonzero.
IndexRange window_range(const Axis& fs, int nu) {
  const std::size_t n = fs.count();
  IndexRange r{n, 0};
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(fs.point(i) - nu) < 1.0) {
      r.lo = std::min(r.lo, i);
      r.hi = i + 1;
    }
  if (r.hi == 0) r.lo = 0;
  return r;
}

double l2(std::span<const double> a) { return weighted_lp(a, 2.0); }

}  // namespace

ProofTrace proof_trace(const SampledSymbol& sigma, const SampledField& f1, const SampledField& f2,
                       const SampledField& g, int mu, const DecompPair& pair, double s1, double s2) {
  const GridSpec& grid = sigma.grid;
  if (grid.dim != 1) throw Error("proof_trace: only n = 1 is supported");
  if (!sigma.fsupp_radii) throw Error("proof_trace: the symbol must declare its Fourier radii");
  require_same_grid(grid, f1.grid, "proof_trace");
  require_same_grid(grid, f2.grid, "proof_trace");
  require_same_grid(grid, g.grid, "proof_trace");
  if (g.domain != Domain::space) throw Error("proof_trace: g must be in the space domain");

  const Axis xs = grid.space_axis(), fs = grid.frequency_axis();
  const std::size_t nx = xs.count(), nf = fs.count();
  const double hx = grid.x_step, hxi = grid.xi_step;
  const auto R = *sigma.fsupp_radii;
  const int L = kTraceWeightExponent;

  ProofTrace t;
  t.mu = mu;
  t.radii = R;
  t.s1 = s1;
  t.s2 = s2;

  const std::vector<cplx> F1 = (f1.domain == Domain::space ? fourier_forward(f1) : f1).values;
  const std::vector<cplx> F2 = (f2.domain == Domain::space ? fourier_forward(f2) : f2).values;
  const SampledField G = fourier_forward(g);
  const double g_norm = std::sqrt(energy(g));

  std::vector<double> theta(nx);
  for (std::size_t i = 0; i < nx; ++i) theta[i] = pair.theta(xs.point(i) - mu);

  // The pairing I computed directly.
  const std::vector<cplx> T = bilinear_kernel(sigma, F1, F2, {0, nf}, {0, nf});
  double thetaT = 0.0;
  t.I_value = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    t.I_value += hx * theta[i] * T[i] * g.values[i];
    thetaT += hx * std::norm(theta[i] * T[i]);
  }
  const double I_abs = std::abs(t.I_value);
  const double pairing_scale = std::sqrt(thetaT) * g_norm;

  // Lattices: nu over the active frequency windows, nu0 over the cubes
  // meeting the space box, tau over every shift where the cutoff meets the band.
  t.nu = active_lattice(fs);
  for (int c = cube_index(xs.point(0)); c <= cube_index(xs.point(nx - 1)); ++c) t.nu0.push_back(c);
  const int nu_max = std::max(std::abs(t.nu.front()), std::abs(t.nu.back()));
  const int tau_max = std::max(2 * nu_max, static_cast<int>(std::ceil(grid.xi_halfwidth + 5.0 * R[0])));
  for (int k = -tau_max; k <= tau_max; ++k) t.tau.push_back(k);
  const std::size_t Nn = t.nu.size(), N0 = t.nu0.size(), Nt = t.tau.size();
  auto cube_slot = [&](std::size_t i) { return static_cast<std::size_t>(cube_index(xs.point(i)) - t.nu0.front()); };

  // Window tables on the frequency axis.
  std::vector<IndexRange> ranges(Nn);
  std::vector<std::vector<double>> chi(Nn, std::vector<double>(nf)), kappa(Nn, std::vector<double>(nf));
  for (std::size_t a = 0; a < Nn; ++a) {
    ranges[a] = window_range(fs, t.nu[a]);
    for (std::size_t i = 0; i < nf; ++i) {
      chi[a][i] = pair.chi(fs.point(i) - t.nu[a]);
      kappa[a][i] = pair.kappa(fs.point(i) - t.nu[a]);
    }
  }

  // g_tau = phi_cut((D + tau) / R0) g.
  std::vector<std::vector<cplx>> g_tau(Nt);
  for (std::size_t k = 0; k < Nt; ++k) {
    const double tau = t.tau[k];
    const FrequencyProfile m = sample_profile(grid, ScalarFn([&](double xi) {
                                                return cplx(transfer_cutoff((xi + tau) / R[0]), 0.0);
                                              }));
    g_tau[k] = fourier_inverse(multiplier_apply(m, G)).values;
  }
  auto tau_slot = [&](int tau) { return static_cast<std::size_t>(tau + tau_max); };

  // A0(tau, nu0) = ||g_tau||_{L^2(nu0 + Q)}.
  t.A0.assign(Nt * N0, 0.0);
  for (std::size_t k = 0; k < Nt; ++k) {
    for (std::size_t i = 0; i < nx; ++i) t.A0[k * N0 + cube_slot(i)] += hx * std::norm(g_tau[k][i]);
    for (std::size_t c = 0; c < N0; ++c) t.A0[k * N0 + c] = std::sqrt(t.A0[k * N0 + c]);
  }

  // Box pieces, 1_{B_{2R_j}} * |box f_j|^2 and A_j(nu, nu0) = S(.)(nu0)^{1/2}.
  std::vector<double> nu0_points(t.nu0.begin(), t.nu0.end());
  std::vector<std::vector<cplx>> W1(Nn), W2(Nn);  // chi kappa F_j, the spectra entering T_{sigma_nu}
  std::vector<std::vector<double>> B1(Nn), B2(Nn);
  t.A1.assign(Nn * N0, 0.0);
  t.A2.assign(Nn * N0, 0.0);
  for (std::size_t a = 0; a < Nn; ++a) {
    for (int j = 1; j <= 2; ++j) {
      const std::vector<cplx>& F = j == 1 ? F1 : F2;
      SampledField box{grid, Domain::frequency, std::vector<cplx>(nf), std::nullopt};
      std::vector<cplx> W(nf, 0.0);
      for (std::size_t i = 0; i < nf; ++i) {
        box.values[i] = kappa[a][i] * F[i];
        W[i] = chi[a][i] * box.values[i];
      }
      const SampledField boxf = fourier_inverse(box);
      std::vector<double> u(nx);
      for (std::size_t i = 0; i < nx; ++i) u[i] = std::norm(boxf.values[i]);
      std::vector<double> B = ball_convolve(grid, u, 2.0 * R[j]);
      SampledField Bf{grid, Domain::space, std::vector<cplx>(B.begin(), B.end()), std::nullopt};
      const std::vector<double> S = s_transform_at(Bf, nu0_points);
      auto& A = j == 1 ? t.A1 : t.A2;
      for (std::size_t c = 0; c < N0; ++c) A[a * N0 + c] = std::sqrt(S[c]);
      (j == 1 ? W1 : W2)[a] = std::move(W);
      (j == 1 ? B1 : B2)[a] = std::move(B);
    }
  }

  // Nsq[x][nu1][nu2] = ||sigma(x, .) chi(. - nu1) chi(. - nu2)||^2_{L^2_xi}.
  std::vector<double> Nsq(nx * Nn * Nn);
  {
    std::vector<double> P(nf * nf), Q(nf * Nn);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t i1 = 0; i1 < nf; ++i1)
        for (std::size_t i2 = 0; i2 < nf; ++i2) P[i1 * nf + i2] = std::norm(sigma.at(ix, i1, i2));
      for (std::size_t i1 = 0; i1 < nf; ++i1)
        for (std::size_t b = 0; b < Nn; ++b) {
          double acc = 0.0;
          for (std::size_t i2 = 0; i2 < nf; ++i2) acc += P[i1 * nf + i2] * chi[b][i2] * chi[b][i2];
          Q[i1 * Nn + b] = acc;
        }
      for (std::size_t a = 0; a < Nn; ++a)
        for (std::size_t b = 0; b < Nn; ++b) {
          double acc = 0.0;
          for (std::size_t i1 = 0; i1 < nf; ++i1) acc += chi[a][i1] * chi[a][i1] * Q[i1 * Nn + b];
          Nsq[(ix * Nn + a) * Nn + b] = hxi * hxi * acc;
        }
    }
  }

  // Per-nu pieces: decomposed and transferred pairings, kernel bound, the
  // integral before discretization and the discretized sum.
  t.I_decomposed = 0.0;
  t.I_transferred = 0.0;
  double kernel_ratio = 0.0, pre_disc = 0.0, disc = 0.0, ul_piece = 0.0;
  double rhs_peak = 0.0;
  std::vector<std::vector<double>> kernel_rhs(Nn * Nn);
  for (std::size_t a = 0; a < Nn; ++a)
    for (std::size_t b = 0; b < Nn; ++b) {
      auto& kr = kernel_rhs[a * Nn + b];
      kr.resize(nx);
      for (std::size_t i = 0; i < nx; ++i) {
        kr[i] = std::sqrt(Nsq[(i * Nn + a) * Nn + b] * B1[a][i] * B2[b][i]) / kTwoPi;
        rhs_peak = std::max(rhs_peak, kr[i]);
      }
    }
  const double weights_floor = 1e-10 * rhs_peak;
  std::vector<double> cube_sq(N0);
  for (std::size_t a = 0; a < Nn; ++a) {
    if (ranges[a].hi <= ranges[a].lo) continue;
    for (std::size_t b = 0; b < Nn; ++b) {
      if (ranges[b].hi <= ranges[b].lo) continue;
      const std::vector<cplx> Tn = bilinear_kernel(sigma, W1[a], W2[b], ranges[a], ranges[b], 1);
      const std::vector<cplx>& gt = g_tau[tau_slot(t.nu[a] + t.nu[b])];
      const auto& kr = kernel_rhs[a * Nn + b];
      std::fill(cube_sq.begin(), cube_sq.end(), 0.0);
      for (std::size_t i = 0; i < nx; ++i) {
        t.I_decomposed += hx * theta[i] * Tn[i] * g.values[i];
        t.I_transferred += hx * theta[i] * Tn[i] * gt[i];
        if (kr[i] > weights_floor) kernel_ratio = std::max(kernel_ratio, std::abs(Tn[i]) / kr[i]);
        pre_disc += hx * std::abs(theta[i]) * kr[i] * std::abs(gt[i]);
        cube_sq[cube_slot(i)] += hx * Nsq[(i * Nn + a) * Nn + b];
      }
      const std::size_t k = tau_slot(t.nu[a] + t.nu[b]);
      for (std::size_t c = 0; c < N0; ++c) {
        const double nq = std::sqrt(cube_sq[c]);
        ul_piece = std::max(ul_piece, nq);
        disc += std::pow(bracket(t.nu0[c] - mu), -L) * nq * t.A0[k * N0 + c] * t.A1[a * N0 + c] *
                t.A2[b * N0 + c];
      }
    }
  }

  // II and the sequence-space steps.
  double II = 0.0, weak_rhs = 0.0;
  std::vector<double> col0(Nn * Nn), c1(Nn), c2(Nn), a0col(Nt);
  std::vector<double> b1(N0), b2(N0), a0n(N0);
  for (std::size_t c = 0; c < N0; ++c) {
    const double w = std::pow(bracket(t.nu0[c] - mu), -L);
    double inner = 0.0;
    for (std::size_t a = 0; a < Nn; ++a)
      for (std::size_t b = 0; b < Nn; ++b)
        inner += t.A0[tau_slot(t.nu[a] + t.nu[b]) * N0 + c] * t.A1[a * N0 + c] * t.A2[b * N0 + c];
    II += w * inner;
    for (std::size_t k = 0; k < Nt; ++k) a0col[k] = t.A0[k * N0 + c];
    for (std::size_t a = 0; a < Nn; ++a) {
      c1[a] = std::pow(bracket(t.nu[a]), s1) * t.A1[a * N0 + c];
      c2[a] = std::pow(bracket(t.nu[a]), s2) * t.A2[a * N0 + c];
    }
    a0n[c] = l2(a0col);
    b1[c] = std::pow(bracket(t.nu0[c] - mu), -L / 2.0) * l2(c1);
    b2[c] = std::pow(bracket(t.nu0[c] - mu), -L / 2.0) * l2(c2);
    weak_rhs += w * a0n[c] * l2(c1) * l2(c2);
  }
  t.II_value = II;
  const double A0_norm = l2(a0n);
  const double holder_rhs = A0_norm * weighted_lp(b1, 4.0) * weighted_lp(b2, 4.0);
  const double sigma_ul = uniform_local_l2(sigma).value;

  // ||<nu0 - mu>^{-L/2} <nu>^{s_j} A_j||_{l^2_nu l^4_nu0 l^2_mu} with mu beyond the box.
  auto aj_mixed = [&](const std::vector<double>& A, double s) {
    std::vector<double> per_nu0(N0);
    for (std::size_t c = 0; c < N0; ++c) {
      double acc = 0.0;
      for (std::size_t a = 0; a < Nn; ++a) acc += std::pow(bracket(t.nu[a]), 2.0 * s) * A[a * N0 + c] * A[a * N0 + c];
      per_nu0[c] = std::sqrt(acc);
    }
    const int margin = 32;
    std::vector<double> per_mu, weighted(N0);
    for (int m = t.nu0.front() - margin; m <= t.nu0.back() + margin; ++m) {
      for (std::size_t c = 0; c < N0; ++c) weighted[c] = std::pow(bracket(t.nu0[c] - m), -L / 2.0) * per_nu0[c];
      per_mu.push_back(weighted_lp(weighted, 4.0));
    }
    return l2(per_mu);
  };
  const double h1 = sobolev_norm(f1, s1).value, h2 = sobolev_norm(f2, s2).value;

  auto add = [&](std::string label, double lhs, double rhs, bool eq = false) {
    t.steps.push_back({std::move(label), lhs, rhs, eq});
  };
  add("duality_pairing", I_abs, pairing_scale);
  add("decomposed_pairing", std::abs(t.I_decomposed - t.I_value), pairing_scale, true);
  add("fourier_transferred_pairing", std::abs(t.I_transferred - t.I_value), pairing_scale, true);
  add("kernel_bound", kernel_ratio, 1.0);
  add("pre_discretization_bound", I_abs, pre_disc);
  add("discretized_bound", pre_disc, disc);
  add("ul_equivalence", ul_piece, sigma_ul);
  add("bound_via_II", I_abs, sigma_ul * II);
  add("weak_lp_product", II, weak_rhs);
  add("holder_nu0", weak_rhs, holder_rhs);
  add("a0_plancherel", A0_norm, std::sqrt(R[0]) * g_norm);
  add("a0_plancherel_lower", std::sqrt(R[0]) * g_norm, A0_norm);
  add("aj_estimate", aj_mixed(t.A1, s1), std::sqrt(R[1]) * h1);
  add("aj_estimate", aj_mixed(t.A2, s2), std::sqrt(R[2]) * h2);
  add("final_I", I_abs, std::sqrt(R[0]) * sigma_ul * g_norm * weighted_lp(b1, 4.0) * weighted_lp(b2, 4.0));
  return t;
}

TraceInstance make_trace_instance(const GridSpec& grid, std::uint64_t seed, int index) {
  static const std::array<std::array<double, 3>, 9> radii{{{1, 1, 1},
                                                           {2, 1, 1},
                                                           {1, 2, 1},
                                                           {1, 1, 2},
                                                           {2, 2, 2},
                                                           {4, 1, 1},
                                                           {1, 4, 2},
                                                           {2, 2, 1},
                                                           {1, 2, 4}}};
  Rng rng = trial_rng(seed, 0x7ace, static_cast<std::uint64_t>(index));
  TraceInstance inst;
  if (index == 0) {
    inst.sigma = PlaneWaveSymbol({{cplx(1.0, 0.0), {0.0, 0.0, 0.0}}}, {1.0, 1.0, 1.0}).sample(grid);
  } else {
    const auto R = radii[static_cast<std::size_t>(index) % radii.size()];
    inst.sigma = random_plane_wave_symbol(rng, R, default_plane_wave_terms(R)).sample(grid);
  }
  inst.f1 = random_packet_field(grid, rng);
  inst.f2 = random_packet_field(grid, rng);
  SampledField g = random_packet_field(grid, rng);
  const double gn = std::sqrt(energy(g));
  for (auto& v : g.values) v /= gn;
  inst.g = std::move(g);
  inst.mu = static_cast<int>(std::floor(uniform(rng, -2.0, 3.0)));
  return inst;
}

std::vector<CheckResult> check_trace(const ProofTrace& t, const ConstantsTable& constants) {
  std::vector<CheckResult> out;
  for (const auto& s : t.steps) {
    if (s.equality) {
      out.push_back(upper_check("fixed.trace_equality." + s.label, "traced equality: " + s.label,
                                s.rhs > 0.0 ? s.lhs / s.rhs : s.lhs, kTraceEqualityTol));
      continue;
    }
    const double ratio = s.rhs > 0.0 ? s.lhs / s.rhs : (s.lhs > 0.0 ? kInf : 0.0);
    out.push_back(upper_check("trace." + s.label, "traced inequality: " + s.label, ratio,
                              frozen_bound(constants, "trace." + s.label)));
  }
  return out;
}

nlohmann::json to_json(const ProofTrace& t) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"label", s.label}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"equality", s.equality}});
  return {{"mu", t.mu},
          {"radii", t.radii},
          {"s", {t.s1, t.s2}},
          {"I", {t.I_value.real(), t.I_value.imag()}},
          {"I_decomposed", {t.I_decomposed.real(), t.I_decomposed.imag()}},
          {"I_transferred", {t.I_transferred.real(), t.I_transferred.imag()}},
          {"II", t.II_value},
          {"tau", t.tau},
          {"nu", t.nu},
          {"nu0", t.nu0},
          {"A0", t.A0},
          {"A1", t.A1},
          {"A2", t.A2},
          {"steps", steps}};
}

}  // namespace bpdo
