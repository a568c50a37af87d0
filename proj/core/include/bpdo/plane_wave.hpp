#pragma once

#include <array>
#include <span>
#include <vector>

#include "bpdo/decomp.hpp"
#include "bpdo/grid.hpp"

namespace bpdo {

/// One term c exp(i (x eta0 + xi1 eta1 + xi2 eta2)).
struct PlaneWaveTerm {
  cplx coeff;
  std::array<double, 3> eta;
};

/**
 * A finite sum of plane waves in (x, xi1, xi2). Its full Fourier transform is
 * a sum of point masses at the eta's, so it is band-limited with radii R_i
 * exactly when every |eta_i| <= R_i.
 *
 * The operator has the closed form
 *   T(f1, f2)(x) = sum_m c_m e^{i x eta0_m} f1(x + eta1_m) f2(x + eta2_m),
 * where f_j(y) is the band-limited interpolant of the grid spectrum.
 */
class PlaneWaveSymbol {
 public:
  PlaneWaveSymbol() = default;
  PlaneWaveSymbol(std::vector<PlaneWaveTerm> terms, std::array<double, 3> radii);

  const std::vector<PlaneWaveTerm>& terms() const { return terms_; }
  const std::array<double, 3>& radii() const { return radii_; }

  cplx operator()(double x, double xi1, double xi2) const;
  SampledSymbol sample(const GridSpec& grid) const;

  /// Multiplies every coefficient by e^{i phase}.
  PlaneWaveSymbol rotated(double phase) const;
  /// e^{i (x k0 + xi1 k1 + xi2 k2)} sigma; radii grow by |k_i|.
  PlaneWaveSymbol modulated(std::array<double, 3> k) const;
  /// sigma(x, xi2, xi1).
  PlaneWaveSymbol swapped() const;

  /// T_sigma on spectra F1, F2 sampled on grid.frequency_axis().
  std::vector<cplx> apply(const GridSpec& grid, std::span<const cplx> F1, std::span<const cplx> F2) const;

  /// L^2_ul over the unit cubes meeting the grid box, by exact per-axis Gram sums.
  double uniform_local_l2(const GridSpec& grid) const;

  /**
   * ||sigma||_{M^{inf,1}} = sum_k sup |box_k sigma|. Each box_k sigma is the
   * plane-wave sum with coefficients c_m Phi(eta_m - k); for distinct
   * frequencies the sup over R^3 of such a sum is the sum of the moduli.
   */
  double modulation_norm_inf1(const DecompPair& pair) const;
  /// Same sum with each sup taken over the grid samples only (a lower bound).
  double modulation_norm_inf1_on_grid(const GridSpec& grid, const DecompPair& pair) const;
  /// Coefficients of box_k sigma.
  PlaneWaveSymbol box(std::array<int, 3> k, const DecompPair& pair) const;

 private:
  std::vector<PlaneWaveTerm> terms_;
  std::array<double, 3> radii_{1.0, 1.0, 1.0};
};

/// f(y_j) = (h_xi / 2 pi) sum_i e^{i y_j xi_i} F(xi_i) at arbitrary points y_j.
std::vector<cplx> spectral_evaluate(const GridSpec& grid, std::span<const cplx> F,
                                    std::span<const double> points);

}  // namespace bpdo
