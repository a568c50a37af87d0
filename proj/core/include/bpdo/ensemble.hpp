#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "bpdo/grid.hpp"
#include "bpdo/plane_wave.hpp"

namespace bpdo {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
/// Independent generator for (seed, stream, index); stable across platforms.
Rng trial_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform in [lo, hi) from raw 64-bit draws (library distributions are not portable).
double uniform(Rng& rng, double lo, double hi);
/// Standard normal via Box-Muller on uniform().
double normal(Rng& rng);
cplx complex_normal(Rng& rng);

/// a e^{i omega x} exp(-|x - p|^2 / (2 w^2)) and its exact Fourier transform.
struct GaussianPacket {
  double center = 0.0;
  double omega = 0.0;
  double width = 1.5;
  cplx amplitude = 1.0;

  cplx operator()(double x) const;
  cplx spectrum(double xi) const;
};

struct PacketParams {
  int count = 3;
  double center_range = 4.0;
  double omega_max = 1.0;
  double width = 1.5;
  /// Declared Fourier radius; checked against the grid.
  double radius = 4.0;
};

/// Sum of random packets on an n = 1 or n = 2 grid, band-limit declared and checked.
SampledField random_packet_field(const GridSpec& grid, Rng& rng, const PacketParams& params = {});
SampledField packet_field(const GridSpec& grid, const std::vector<GaussianPacket>& packets);

/// sigma = sum_m c_m e^{i eta_m . z} exp(-sum_a (z_a - p_{m,a})^2 / (2 W_a^2)).
struct EnvelopedSymbolParams {
  int terms = 3;
  std::array<double, 3> width{1.0, 1.0, 1.0};
  std::array<double, 3> center_range{1.0, 1.0, 1.0};
  double eta_max = 0.5;
  std::array<double, 3> radii{4.0, 4.0, 4.0};
};
SampledSymbol random_enveloped_symbol(const GridSpec& grid, Rng& rng,
                                      const EnvelopedSymbolParams& params = {});

/// M random plane waves with eta uniform in B_R0 x B_R1 x B_R2 and complex normal c.
PlaneWaveSymbol random_plane_wave_symbol(Rng& rng, std::array<double, 3> radii, int terms);
/// 16 ceil(sqrt(R0 R1 R2)).
int default_plane_wave_terms(std::array<double, 3> radii);

/**
 * A fixed dictionary of Gaussian packets used as the search space for the
 * operator-norm lower bound: centers on a lattice, a few modulations.
 */
struct AtomDictionary {
  GridSpec grid;
  std::vector<GaussianPacket> atoms;
  /// Numeric spectra on grid.frequency_axis(), one row per atom.
  std::vector<std::vector<cplx>> spectra;
};
AtomDictionary build_atom_dictionary(const GridSpec& grid, double center_range = 6.0,
                                     double center_step = 1.5,
                                     std::vector<double> omegas = {-1.0, 0.0, 1.0},
                                     double width = 1.5);

/// Gram matrix G(k, l) = (2 pi)^{-1} h_xi sum <xi>^{2s} conj(F_k) F_l (row-major).
std::vector<cplx> sobolev_gram(const AtomDictionary& dict, double s);
/// sqrt(a^* G a).
double gram_norm(const std::vector<cplx>& gram, const std::vector<cplx>& a);

}  // namespace bpdo
