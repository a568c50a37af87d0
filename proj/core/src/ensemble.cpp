#include "bpdo/ensemble.hpp"

#include <cmath>

#include "bpdo/decomp.hpp"

namespace bpdo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t s = splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
  return Rng(s);
}

double uniform(Rng& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double normal(Rng& rng) {
  double u1 = uniform(rng, 0.0, 1.0);
  while (u1 <= 0.0) u1 = uniform(rng, 0.0, 1.0);
  const double u2 = uniform(rng, 0.0, 1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

cplx complex_normal(Rng& rng) {
  const double re = normal(rng);
  const double im = normal(rng);
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

cplx GaussianPacket::operator()(double x) const {
  const double d = x - center;
  return amplitude * std::exp(-d * d / (2.0 * width * width)) * cplx(std::cos(omega * x), std::sin(omega * x));
}

cplx GaussianPacket::spectrum(double xi) const {
  const double d = xi - omega;
  const double ph = -d * center;
  return amplitude * width * std::sqrt(kTwoPi) * std::exp(-0.5 * width * width * d * d) *
         cplx(std::cos(ph), std::sin(ph));
}

SampledField packet_field(const GridSpec& grid, const std::vector<GaussianPacket>& packets) {
  if (grid.dim != 1) throw Error("packet_field: only n = 1 packets are supported");
  return sample_space(grid, ScalarFn([&packets](double x) {
                        cplx acc = 0.0;
                        for (const auto& p : packets) acc += p(x);
                        return acc;
                      }));
}

SampledField random_packet_field(const GridSpec& grid, Rng& rng, const PacketParams& params) {
  SampledField f;
  if (grid.dim == 1) {
    std::vector<GaussianPacket> ps;
    for (int i = 0; i < params.count; ++i) {
      GaussianPacket p;
      p.center = uniform(rng, -params.center_range, params.center_range);
      p.omega = uniform(rng, -params.omega_max, params.omega_max);
      p.width = params.width;
      p.amplitude = complex_normal(rng);
      ps.push_back(p);
    }
    f = packet_field(grid, ps);
  } else {
    struct P2 {
      double c0, c1, w0, w1;
      cplx a;
    };
    std::vector<P2> ps;
    for (int i = 0; i < params.count; ++i) {
      P2 p;
      p.c0 = uniform(rng, -params.center_range, params.center_range);
      p.c1 = uniform(rng, -params.center_range, params.center_range);
      // Frequency drawn uniformly from the disc of radius omega_max.
      const double r = params.omega_max * std::sqrt(uniform(rng, 0.0, 1.0));
      const double t = uniform(rng, 0.0, kTwoPi);
      p.w0 = r * std::cos(t);
      p.w1 = r * std::sin(t);
      p.a = complex_normal(rng);
      ps.push_back(p);
    }
    const double w2 = 2.0 * params.width * params.width;
    f = sample_space(grid, PointFn([&](std::span<const double> x) {
                       cplx acc = 0.0;
                       for (const auto& p : ps) {
                         const double d0 = x[0] - p.c0, d1 = x[1] - p.c1;
                         const double ph = p.w0 * x[0] + p.w1 * x[1];
                         acc += p.a * std::exp(-(d0 * d0 + d1 * d1) / w2) * cplx(std::cos(ph), std::sin(ph));
                       }
                       return acc;
                     }));
  }
  return declare_band_limit(std::move(f), params.radius);
}

SampledSymbol random_enveloped_symbol(const GridSpec& grid, Rng& rng, const EnvelopedSymbolParams& params) {
  struct Term {
    cplx c;
    std::array<double, 3> eta, center;
  };
  std::vector<Term> terms;
  for (int i = 0; i < params.terms; ++i) {
    Term t;
    t.c = complex_normal(rng);
    for (std::size_t a = 0; a < 3; ++a) {
      t.eta[a] = uniform(rng, -params.eta_max, params.eta_max);
      t.center[a] = uniform(rng, -params.center_range[a], params.center_range[a]);
    }
    terms.push_back(t);
  }
  const auto w = params.width;
  return sample_symbol(
      grid,
      [terms, w](double x, double xi1, double xi2) {
        const std::array<double, 3> z{x, xi1, xi2};
        cplx acc = 0.0;
        for (const auto& t : terms) {
          double e = 0.0, ph = 0.0;
          for (std::size_t a = 0; a < 3; ++a) {
            const double d = z[a] - t.center[a];
            e += d * d / (2.0 * w[a] * w[a]);
            ph += t.eta[a] * z[a];
          }
          acc += t.c * std::exp(-e) * cplx(std::cos(ph), std::sin(ph));
        }
        return acc;
      },
      params.radii);
}

int default_plane_wave_terms(std::array<double, 3> radii) {
  return 16 * static_cast<int>(std::ceil(std::sqrt(radii[0] * radii[1] * radii[2]) - 1e-12));
}

PlaneWaveSymbol random_plane_wave_symbol(Rng& rng, std::array<double, 3> radii, int terms) {
  std::vector<PlaneWaveTerm> ts;
  ts.reserve(static_cast<std::size_t>(terms));
  for (int m = 0; m < terms; ++m) {
    PlaneWaveTerm t;
    t.coeff = complex_normal(rng);
    for (std::size_t a = 0; a < 3; ++a) t.eta[a] = uniform(rng, -radii[a], radii[a]);
    ts.push_back(t);
  }
  return PlaneWaveSymbol(std::move(ts), radii);
}

AtomDictionary build_atom_dictionary(const GridSpec& grid, double center_range, double center_step,
                                     std::vector<double> omegas, double width) {
  if (grid.dim != 1) throw Error("build_atom_dictionary: only n = 1 is supported");
  AtomDictionary d;
  d.grid = grid;
  const int steps = static_cast<int>(std::floor(2.0 * center_range / center_step + 1e-9));
  for (int i = 0; i <= steps; ++i)
    for (double w : omegas) {
      GaussianPacket p;
      p.center = -center_range + i * center_step;
      p.omega = w;
      p.width = width;
      d.atoms.push_back(p);
    }
  for (const auto& p : d.atoms) {
    const SampledField f = fourier_forward(packet_field(grid, {p}));
    d.spectra.push_back(f.values);
  }
  return d;
}

std::vector<cplx> sobolev_gram(const AtomDictionary& dict, double s) {
  const Axis fs = dict.grid.frequency_axis();
  const std::size_t K = dict.atoms.size(), nf = fs.count();
  std::vector<double> w(nf);
  for (std::size_t i = 0; i < nf; ++i)
    w[i] = std::pow(1.0 + fs.point(i) * fs.point(i), s) * dict.grid.xi_step / kTwoPi;
  std::vector<cplx> g(K * K);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t l = 0; l < K; ++l) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < nf; ++i) acc += w[i] * std::conj(dict.spectra[k][i]) * dict.spectra[l][i];
      g[k * K + l] = acc;
    }
  return g;
}

double gram_norm(const std::vector<cplx>& gram, const std::vector<cplx>& a) {
  const std::size_t K = a.size();
  cplx acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    cplx row = 0.0;
    for (std::size_t l = 0; l < K; ++l) row += gram[k * K + l] * a[l];
    acc += std::conj(a[k]) * row;
  }
  return std::sqrt(std::max(acc.real(), 0.0));
}

}  // namespace bpdo
