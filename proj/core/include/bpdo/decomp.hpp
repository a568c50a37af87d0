#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "bpdo/grid.hpp"

namespace bpdo {

/// Construction parameters for the decomposition windows.
struct WindowConfig {
  /// g(t) = exp(-a t^2 / (1 - t^2)) on (-1, 1); larger a gives a narrower bump.
  double partition_sharpness = 3.0;
  /// psi(y) ~ exp(-b (2y)^2 / (1 - (2y)^2)) on (-1/2, 1/2).
  double mollifier_sharpness = 1.0;
  /// Trapezoid nodes used for chi = F^{-1} psi.
  int mollifier_nodes = 257;
};

/**
 * Smooth partition of unity: phi >= 0, supp phi in [-1, 1]^n and
 * sum_k phi(xi - k) = 1. Built as phi = g / sum_k g(. - k) per coordinate and
 * extended to n dimensions by tensor products.
 */
class PartitionWindow {
 public:
  explicit PartitionWindow(int dim = 1, double sharpness = 3.0);

  int dim() const { return dim_; }
  double operator()(double t) const;
  double operator()(std::span<const double> t) const;
  /// The un-normalized bump g.
  double bump(double t) const;

 private:
  int dim_;
  double a_;
};

/**
 * The (kappa, chi) pair: chi = F^{-1} psi for a nonnegative even bump psi
 * supported in B_{1/2} with unit mass, so F chi is supported in B_1 and
 * chi >= cos(1/2) / (2 pi) on [-1, 1]; kappa = phi / chi on supp phi, which
 * makes sum_nu kappa chi(. - nu) = 1.
 */
class SugimotoPair {
 public:
  SugimotoPair(int dim, const WindowConfig& cfg);

  int dim() const { return dim_; }
  double chi(double t) const;
  double chi(std::span<const double> t) const;
  double kappa(double t) const;
  double kappa(std::span<const double> t) const;
  double psi(double y) const;

  /// Certified lower bound for chi on [-1, 1]^n: (cos(1/2) / (2 pi))^n.
  double certified_lower_bound() const;
  /// min chi over a fine sampling of [-1, 1]^n.
  double measured_lower_bound() const { return measured_min_; }

 private:
  int dim_;
  PartitionWindow phi_;
  double b_;
  double norm_;
  std::vector<double> nodes_;    // y_i in [0, 1/2)
  std::vector<double> weights_;  // trapezoid weights times psi(y_i) / (2 pi mass), folded
  double measured_min_ = 0.0;
};

/**
 * Everything the decomposition arguments need: the partition phi, the pair
 * (kappa, chi), the duality window theta and the lower bound c of |chi|.
 * theta is chi itself.
 */
class DecompPair {
 public:
  static DecompPair build(int dim, const WindowConfig& cfg = {});

  int dim() const { return sugimoto_->dim(); }
  const PartitionWindow& partition() const { return *partition_; }
  const SugimotoPair& sugimoto() const { return *sugimoto_; }
  const WindowConfig& config() const { return cfg_; }

  double phi(double t) const { return (*partition_)(t); }
  double kappa(double t) const { return sugimoto_->kappa(t); }
  double chi(double t) const { return sugimoto_->chi(t); }
  double theta(double t) const { return sugimoto_->chi(t); }
  double lower_bound_c() const { return sugimoto_->measured_lower_bound(); }

  /// phi(xi - k) sampled on the frequency grid.
  FrequencyProfile phi_profile(const GridSpec& grid, std::span<const int> k) const;
  /// kappa(xi - nu) sampled on the frequency grid; support radius |nu| + sqrt(n).
  FrequencyProfile kappa_profile(const GridSpec& grid, std::span<const int> nu) const;
  FrequencyProfile chi_profile(const GridSpec& grid, std::span<const int> nu) const;

 private:
  DecompPair() = default;
  WindowConfig cfg_;
  std::shared_ptr<const PartitionWindow> partition_;
  std::shared_ptr<const SugimotoPair> sugimoto_;
};

/// Builds phi for dimension dim.
PartitionWindow build_partition(int dim, const WindowConfig& cfg = {});
/// Builds (kappa, chi); throws if the measured min of chi on [-1,1]^n is < 1e-6.
SugimotoPair build_sugimoto_pair(int dim, const WindowConfig& cfg = {});

/// Integer lattice points nu (per axis) whose window nu + (-1, 1) meets the axis samples.
std::vector<int> active_lattice(const Axis& axis);

// ---------------------------------------------------------------------------
// Band limits.

struct BandLimitResult {
  bool ok = false;
  /// Fourier energy outside the declared ball or box divided by total energy.
  double leakage = 0.0;
};

inline constexpr double kBandLimitTolerance = 1e-8;

/// Checks that the Fourier energy of f outside B_R is below 1e-8 of the total.
BandLimitResult band_limit_check(const SampledField& f, double radius);

/**
 * Checks the symbol's Fourier energy outside the box prod_i B_{R_i}. Axes with
 * an empty radius are not transformed (no restriction along that variable).
 * The frequency variables are transformed onto grid.frequency_axis().
 */
BandLimitResult band_limit_check(const SampledSymbol& sigma,
                                 const std::array<std::optional<double>, 3>& radii);

/// Returns f with fsupp_radius = R after checking band_limit_check(f, R).
SampledField declare_band_limit(SampledField f, double radius);

// ---------------------------------------------------------------------------
// Uniform decomposition operators.

/// box_nu f = kappa(D - nu) f.
SampledField box_op(std::span<const int> nu, const SampledField& f, const DecompPair& pair);
SampledField box_op(int nu, const SampledField& f, const DecompPair& pair);

/**
 * The family sigma_nu = sigma(x, xi1, xi2) chi(xi1 - nu1) chi(xi2 - nu2).
 * Pieces are produced on demand to keep memory bounded.
 */
class SymbolFamily {
 public:
  SymbolFamily(std::shared_ptr<const SampledSymbol> sigma, DecompPair pair);

  const std::vector<std::array<int, 2>>& indices() const { return indices_; }
  SampledSymbol piece(std::array<int, 2> nu) const;
  /// sum_nu sigma_nu kappa(xi1 - nu1) kappa(xi2 - nu2).
  SampledSymbol reconstruct() const;

 private:
  std::shared_ptr<const SampledSymbol> sigma_;
  DecompPair pair_;
  std::vector<std::array<int, 2>> indices_;
};

SymbolFamily decompose_symbol(const SampledSymbol& sigma, const DecompPair& pair);

/// Full (x, xi1, xi2) Fourier transform of a symbol, reused across boxes.
struct SymbolSpectrum {
  GridSpec grid;
  std::vector<cplx> values;  // [zeta0][y1][y2], all on grid.frequency_axis()
  std::size_t n = 0;         // points per axis
};

SymbolSpectrum symbol_spectrum(const SampledSymbol& sigma);
SampledSymbol symbol_inverse(const SymbolSpectrum& spec);

/// box_k sigma = phi(D_x - k0) phi(D_xi1 - k1) phi(D_xi2 - k2) sigma.
SampledSymbol symbol_box(std::array<int, 3> k, const SampledSymbol& sigma, const DecompPair& pair);
SampledSymbol symbol_box(std::array<int, 3> k, const SymbolSpectrum& spec, const DecompPair& pair);

/**
 * The nonnegligible pieces box_k sigma, produced on demand from a shared
 * spectrum so that memory stays at one symbol plus one piece.
 */
class SymbolBoxFamily {
 public:
  SymbolBoxFamily(SymbolSpectrum spectrum, DecompPair pair, double drop_ratio);

  const std::vector<std::array<int, 3>>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  SampledSymbol piece(std::size_t i) const { return symbol_box(indices_[i], spectrum_, pair_); }
  /// Number of pieces whose spectral energy fell below drop_ratio of the total.
  std::size_t dropped() const { return dropped_; }
  /// Their combined energy divided by the total spectral energy.
  double dropped_energy_ratio() const { return dropped_energy_; }

 private:
  SymbolSpectrum spectrum_;
  DecompPair pair_;
  std::vector<std::array<int, 3>> indices_;
  std::size_t dropped_ = 0;
  double dropped_energy_ = 0.0;
};

/// All box_k sigma with spectral energy at least drop_ratio times the total.
SymbolBoxFamily symbol_box_family(const SampledSymbol& sigma, const DecompPair& pair,
                                  double drop_ratio = 1e-24);

/// (M_k0 x M_k1 x M_k2) sigma with M_k f(z) = exp(-i k z) f(z).
SampledSymbol modulate_symbol(const SampledSymbol& sigma, std::array<int, 3> k);

}  // namespace bpdo
