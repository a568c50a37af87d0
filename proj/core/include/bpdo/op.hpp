#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bpdo/grid.hpp"

namespace bpdo {

struct ApplyOptions {
  /// Skip the band-limit guard on the inputs (deliberate stress tests only).
  bool allow_alias = false;
  /// Worker threads for the dense kernels; 0 picks a default.
  unsigned threads = 0;
};

struct OperatorReport {
  SampledField output;
  std::int64_t flops_estimate = 0;
  double quad_error_hint = 0.0;
};

/// Half-open sample index range on the frequency axis.
struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/**
 * Dense bilinear kernel on spectra: for every x sample,
 * (h_xi / 2 pi)^2 sum_{i1 in r1, i2 in r2} e^{i x (xi1 + xi2)} sigma(x, xi1, xi2) F1(xi1) F2(xi2).
 * Restricting the ranges lets callers skip samples where a window vanishes.
 */
std::vector<cplx> bilinear_kernel(const SampledSymbol& sigma, std::span<const cplx> F1,
                                  std::span<const cplx> F2, IndexRange r1, IndexRange r2,
                                  unsigned threads = 0);

/**
 * T_sigma(f1, f2) by quadrature of the double frequency integral. Inputs may be
 * in either domain. Unless allow_alias is set, both inputs must declare a
 * Fourier radius <= Xi / 2.
 */
SampledField bilinear_apply(const SampledSymbol& sigma, const SampledField& f1, const SampledField& f2,
                            const ApplyOptions& opts = {});
OperatorReport bilinear_apply_report(const SampledSymbol& sigma, const SampledField& f1,
                                     const SampledField& f2, const ApplyOptions& opts = {});

/// Fast path for sigma = m1(xi1) m2(xi2): (m1(D) f1) (m2(D) f2).
SampledField bilinear_apply_separable(const FrequencyProfile& m1, const FrequencyProfile& m2,
                                      const SampledField& f1, const SampledField& f2);

/// sigma(X, D) f = (2 pi)^{-1} int e^{i x xi} sigma(x, xi) F f(xi) dxi.
SampledField linear_apply(const SampledLinearSymbol& sigma, const SampledField& f);

/// S(f)(x) = int |f(y)| <x - y>^{-(n+1)} dy over the grid box.
SampledField s_transform(const SampledField& f);
OperatorReport s_transform_report(const SampledField& f);
/// S(f) at arbitrary points (n = 1: one coordinate per point; n = 2: pairs).
std::vector<double> s_transform_at(const SampledField& f, std::span<const double> points);
/// S applied to nonnegative samples given on the space grid of `grid`.
std::vector<double> s_transform_values(const GridSpec& grid, std::span<const double> u);

/// (f * g)(x_i) = h^n sum_j f(x_j) g(x_i - x_j); g samples outside the box count as 0.
SampledField convolve(const SampledField& f, const SampledField& g);

/// (1_{B_r} * u)(x_i) for nonnegative samples u on the space grid.
std::vector<double> ball_convolve(const GridSpec& grid, std::span<const double> u, double radius);

/// Truncation error bound of the S kernel on [-X, X)^n, 2 <X>^{-1}.
double s_truncation_hint(const GridSpec& grid);

}  // namespace bpdo
