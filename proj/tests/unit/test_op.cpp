#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bpdo/decomp.hpp"
#include "bpdo/ensemble.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/op.hpp"
#include "bpdo/plane_wave.hpp"
#include "bpdo/spaces.hpp"
#include "bpdo/verify.hpp"

using namespace bpdo;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SampledField packet(const GridSpec& g, double c, double w) {
  return declare_band_limit(sample_space(g, [=](double x) {
                              return std::exp(-(x - c) * (x - c) / 4.0) * std::exp(cplx(0.0, w * x));
                            }),
                            g.xi_halfwidth / 2.0);
}

double japanese_sq_inv(double x) { return 1.0 / (1.0 + x * x); }

}  // namespace

TEST(Op, ConstantSymbolGivesPointwiseProduct) {
  const GridSpec g = symbol_test_grid();
  const SampledField f1 = packet(g, -0.5, 0.5), f2 = packet(g, 1.0, -0.25);
  const SampledSymbol one = sample_symbol(g, [](double, double, double) { return cplx(1.0); });
  const SampledField r = bilinear_apply(one, f1, f2);
  std::vector<cplx> expect(f1.size());
  for (std::size_t i = 0; i < expect.size(); ++i) expect[i] = f1.values[i] * f2.values[i];
  EXPECT_LT(max_abs_diff(r.values, expect), 1e-6);
}

TEST(Op, SeparableFastPathAgreesWithQuadrature) {
  const GridSpec g = symbol_test_grid();
  const SampledField f1 = packet(g, 0.0, 0.5), f2 = packet(g, 0.5, -0.5);
  auto m1 = [](double a) { return cplx(1.0 / (1.0 + a * a)); };
  auto m2 = [](double b) { return std::exp(cplx(0.0, 0.3 * b)); };
  const SampledSymbol s = sample_symbol(g, [&](double, double a, double b) { return m1(a) * m2(b); });
  const SampledField dense = bilinear_apply(s, f1, f2);
  const SampledField fast = bilinear_apply_separable(sample_profile(g, m1), sample_profile(g, m2), f1, f2);
  EXPECT_LT(max_abs_diff(dense.values, fast.values), 1e-10);
}

TEST(Op, PlaneWaveClosedFormAgreesWithQuadrature) {
  const GridSpec g = symbol_test_grid();
  Rng rng = trial_rng(3, 0, 0);
  const PlaneWaveSymbol pw = random_plane_wave_symbol(rng, {1.0, 2.0, 1.0}, 8);
  const SampledField f1 = packet(g, 0.0, 0.5), f2 = packet(g, -1.0, 0.0);
  const SampledField dense = bilinear_apply(pw.sample(g), f1, f2);
  const auto closed = pw.apply(g, fourier_forward(f1).values, fourier_forward(f2).values);
  EXPECT_LT(max_abs_diff(dense.values, closed), 1e-9);
}

TEST(Op, AliasGuardRequiresDeclaredBandLimit) {
  const GridSpec g = symbol_test_grid();
  const SampledField f = sample_space(g, [](double x) { return cplx(std::exp(-x * x)); });
  const SampledSymbol one = sample_symbol(g, [](double, double, double) { return cplx(1.0); });
  EXPECT_THROW(bilinear_apply(one, f, f), Error);
  ApplyOptions opts;
  opts.allow_alias = true;
  EXPECT_NO_THROW(bilinear_apply(one, f, f, opts));
}

TEST(Op, LinearSymbolDerivative) {
  const GridSpec g = default_grid();
  const SampledField f = sample_space(g, [](double x) { return cplx(std::exp(-x * x / 2.0)); });
  const SampledLinearSymbol d = sample_linear_symbol(g, [](double, double xi) { return cplx(0.0, xi); });
  const SampledField r = linear_apply(d, f);
  const SampledField expect = sample_space(g, [](double x) { return cplx(-x * std::exp(-x * x / 2.0)); });
  EXPECT_LT(max_abs_diff(r.values, expect.values), 1e-9);
}

TEST(Op, SOfPointMassIsKernel) {
  const GridSpec g = default_grid();
  const double h = g.x_step;
  const SampledField delta = sample_space(g, [&](double x) { return cplx(std::abs(x) < h / 2 ? 1.0 / h : 0.0); });
  const SampledField s = s_transform(delta);
  const Axis ax = g.space_axis();
  for (std::size_t i = 0; i < s.size(); i += 7)
    EXPECT_NEAR(s.values[i].real(), japanese_sq_inv(ax.point(i)), 1e-13) << ax.point(i);
}

TEST(Op, SIsBoundedOnL1ByPi) {
  const GridSpec g = default_grid();
  const SampledField f = sample_space(g, [](double x) { return cplx(std::exp(-x * x)); });
  const double ratio = lp_norm(s_transform(f), 1.0).value / lp_norm(f, 1.0).value;
  EXPECT_LE(ratio, std::numbers::pi);
  EXPECT_GT(ratio, 2.5);
}

TEST(Op, SQuasiInvariance) {
  // <x>^{-2} / <x + t>^{-2} <= 2 (1 + t^2) gives S f(x) <= 4 S f(y) for |x - y| <= 1.
  const GridSpec g = default_grid();
  const SampledField f = sample_space(g, [](double x) { return cplx(x > 2.0 && x < 3.0 ? 1.0 : 0.0); });
  const auto s = s_transform(f).values;
  const std::size_t k = static_cast<std::size_t>(1.0 / g.x_step);
  for (std::size_t i = 0; i + k < s.size(); ++i) {
    EXPECT_LE(s[i].real(), 4.0 * s[i + k].real());
    EXPECT_LE(s[i + k].real(), 4.0 * s[i].real());
  }
}

TEST(Op, BallConvolveOfConstant) {
  const GridSpec g = default_grid();
  const std::vector<double> one(g.space_points_per_axis(), 1.0);
  const auto r = ball_convolve(g, one, 1.0);
  EXPECT_DOUBLE_EQ(r[128], g.x_step * 17.0);
  EXPECT_DOUBLE_EQ(r[0], g.x_step * 9.0);
}
