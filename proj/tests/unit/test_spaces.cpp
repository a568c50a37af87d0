#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bpdo/decomp.hpp"
#include "bpdo/ensemble.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/spaces.hpp"

using namespace bpdo;

namespace {

SampledField gaussian_field(const GridSpec& g, double shift = 0.0, double omega = 0.0, double w = 1.0) {
  return sample_space(g, [=](double x) {
    return std::exp(-(x - shift) * (x - shift) / (2.0 * w * w)) * std::exp(cplx(0.0, omega * x));
  });
}

SampledField unit_cube_indicator(const GridSpec& g) {
  return sample_space(g, [](double x) { return cplx(x >= -0.5 && x < 0.5 ? 1.0 : 0.0); });
}

}  // namespace

TEST(Spaces, GaussianL2IsQuarterPowerOfPi) {
  const auto r = lp_norm(gaussian_field(default_grid()), 2.0);
  EXPECT_NEAR(r.value, std::pow(std::numbers::pi, 0.25), 1e-12);
  EXPECT_EQ(r.space_id, "L^p");
}

TEST(Spaces, GaussianL1AndSup) {
  const GridSpec g = default_grid();
  EXPECT_NEAR(lp_norm(gaussian_field(g), 1.0).value, std::sqrt(2.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(lp_norm(gaussian_field(g), kInf).value, 1.0, 1e-15);
}

TEST(Spaces, SobolevZeroMatchesL2) {
  const SampledField f = gaussian_field(default_grid(), 0.5, 1.0);
  EXPECT_NEAR(sobolev_norm(f, 0.0).value, lp_norm(f, 2.0).value, 1e-10);
}

TEST(Spaces, SobolevGrowsWithExponent) {
  const SampledField f = gaussian_field(default_grid(), 0.0, 2.0);
  EXPECT_LT(sobolev_norm(f, 0.125).value, sobolev_norm(f, 0.25).value);
}

TEST(Spaces, WeakSequenceNormOfFlatSequence) {
  const std::vector<double> a{1.0, 1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(weak_seq_norm(a, 2.0).value, 2.0);
  EXPECT_DOUBLE_EQ(seq_norm(a, 2.0).value, 2.0);
  EXPECT_DOUBLE_EQ(seq_norm(a, 1.0).value, 4.0);
}

TEST(Spaces, WeakNormIsBelowStrongNorm) {
  const std::vector<double> a{3.0, 0.5, 2.0, 0.0, 1.0};
  for (double q : {1.0, 2.0, 4.0}) EXPECT_LE(weak_seq_norm(a, q).value, seq_norm(a, q).value + 1e-15);
}

TEST(Spaces, IndicatorOfUnitCubeHasUnitAmalgamNorm) {
  const SampledField f = unit_cube_indicator(default_grid());
  for (double p : {1.0, 2.0, kInf})
    for (double q : {1.0, 2.0, kInf}) EXPECT_NEAR(amalgam_norm(f, p, q).value, 1.0, 1e-14) << p << "," << q;
}

TEST(Spaces, AmalgamEmbeddingChain) {
  const SampledField f = gaussian_field(default_grid(), 0.3, 0.7, 2.0);
  const double l1 = amalgam_norm(f, 2.0, 1.0).value;
  const double l2 = amalgam_norm(f, 2.0, 2.0).value;
  EXPECT_NEAR(l2, lp_norm(f, 2.0).value, 1e-12);
  EXPECT_LE(l2, l1);
  EXPECT_LE(amalgam_norm(f, 2.0, kInf).value, l2);
}

TEST(Spaces, ConstantSymbolHasUnitL2ul) {
  const GridSpec g = make_grid(1, 4, 0.25, 4, 0.25);
  const SampledSymbol s = sample_symbol(g, [](double, double, double) { return cplx(1.0); });
  EXPECT_NEAR(uniform_local_l2(s).value, 1.0, 1e-14);
}

TEST(Spaces, ConstantFieldHasUnitL2ul) {
  const SampledField f = sample_space(default_grid(), [](double) { return cplx(1.0); });
  EXPECT_NEAR(uniform_local_l2(f).value, 1.0, 1e-14);
}

TEST(Spaces, ModulationNormIsInvariantUnderIntegerModulation) {
  const GridSpec g = default_grid();
  const DecompPair pair = DecompPair::build(1);
  const double a = modulation_norm(gaussian_field(g, 0.0, 0.0, 2.0), 2.0, 1.0, pair).value;
  const double b = modulation_norm(gaussian_field(g, 0.0, 1.0, 2.0), 2.0, 1.0, pair).value;
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(a, b, 1e-8 * a);
}

TEST(Spaces, LocalHardyDominatesL1) {
  const SampledField f = gaussian_field(default_grid());
  const double h1 = local_hardy_norm(f).value;
  const double l1 = lp_norm(f, 1.0).value;
  EXPECT_GE(h1, l1 * (1.0 - 1e-6));
  EXPECT_LT(h1, 3.0 * l1);
}

TEST(Spaces, MixedNormReductionOrder) {
  // |data| = [[1, 4], [3, 2]] (row-major, axis 0 slowest).
  const std::vector<cplx> d{1.0, 4.0, 3.0, 2.0};
  const std::vector<std::size_t> shape{2, 2};
  const double sup_then_sum = mixed_norm(d, shape, {{1, kInf, 1.0}, {0, 1.0, 1.0}}).value;
  const double sum_then_sup = mixed_norm(d, shape, {{0, 1.0, 1.0}, {1, kInf, 1.0}}).value;
  EXPECT_DOUBLE_EQ(sup_then_sum, 4.0 + 3.0);
  EXPECT_DOUBLE_EQ(sum_then_sup, 4.0 + 2.0);
}

namespace {

std::vector<SampledField> random_fields(int count, std::uint64_t seed) {
  std::vector<SampledField> out;
  for (int i = 0; i < count; ++i) {
    Rng rng = trial_rng(seed, 0x5a, static_cast<std::uint64_t>(i));
    out.push_back(random_packet_field(default_grid(), rng));
  }
  return out;
}

}  // namespace

TEST(Spaces, AllNormsAreAbsolutelyHomogeneous) {
  const SampledField f = random_fields(1, 3)[0];
  SampledField g = f;
  const cplx lambda = std::polar(2.5, 0.9);
  for (auto& v : g.values) v *= lambda;
  const DecompPair pair = DecompPair::build(1);
  const auto check = [&](double a, double b) { EXPECT_NEAR(b, std::abs(lambda) * a, 1e-12 * b); };
  check(lp_norm(f, 1.0).value, lp_norm(g, 1.0).value);
  check(sobolev_norm(f, 0.25).value, sobolev_norm(g, 0.25).value);
  check(amalgam_norm(f, 2.0, 1.0).value, amalgam_norm(g, 2.0, 1.0).value);
  check(uniform_local_l2(f).value, uniform_local_l2(g).value);
  check(modulation_norm(f, 2.0, 1.0, pair).value, modulation_norm(g, 2.0, 1.0, pair).value);
  check(local_hardy_norm(f).value, local_hardy_norm(g).value);
}

TEST(Spaces, AmalgamWithEqualExponentsIsLp) {
  for (const auto& f : random_fields(5, 4))
    for (double p : {1.0, 2.0, 3.0, kInf}) EXPECT_NEAR(amalgam_norm(f, p, p).value, lp_norm(f, p).value, 1e-12);
}

TEST(Spaces, EmbeddingChainOnRandomFields) {
  for (const auto& f : random_fields(10, 5)) {
    const double l1 = amalgam_norm(f, 2.0, 1.0).value;
    for (double r : {1.0, 1.5, 2.0}) {
      const double lr = amalgam_norm(f, 2.0, r).value;
      EXPECT_LE(lp_norm(f, r).value, lr * (1.0 + 1e-12));
      EXPECT_LE(lr, l1 * (1.0 + 1e-12));
    }
  }
}

TEST(Spaces, ModulationL2MatchesL2UpToWindowConstant) {
  // Regression bracket for ||f||_{M^{2,2}} / ||f||_{L^2} with the default phi, 50 fields.
  const DecompPair pair = DecompPair::build(1);
  double lo = 1e300, hi = 0.0;
  for (const auto& f : random_fields(50, 6)) {
    const double r = modulation_norm(f, 2.0, 2.0, pair).value / lp_norm(f, 2.0).value;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  // Pointwise sum_k phi(xi - k)^2 lies in [1/2, 1], so the ratio does too.
  EXPECT_GE(lo, std::sqrt(0.5) - 1e-9);
  EXPECT_LE(hi, 1.0 + 1e-9);
}

TEST(Spaces, ModulationMonotoneInQ) {
  const DecompPair pair = DecompPair::build(1);
  for (const auto& f : random_fields(5, 7))
    EXPECT_LE(modulation_norm(f, 2.0, kInf, pair).value, modulation_norm(f, 2.0, 1.0, pair).value * (1 + 1e-12));
}

TEST(Spaces, NarrowSpectrumMeetsOnlyThreeWindows) {
  const GridSpec g = default_grid();
  const DecompPair pair = DecompPair::build(1);
  const SampledField F = sample_frequency(g, [](double xi) { return cplx(xi >= -0.5 && xi < 0.5 ? 1.0 : 0.0); });
  for (int k = -4; k <= 4; ++k) {
    const double e = energy(multiplier_apply(sample_profile(g, [&](double xi) { return cplx(pair.phi(xi - k)); }), F));
    if (std::abs(k) <= 1)
      EXPECT_GT(e, 0.0) << k;
    else
      EXPECT_EQ(e, 0.0) << k;
  }
}

TEST(Spaces, LocalHardyOfZeroAndEmbeddingIntoL1) {
  const GridSpec g = default_grid();
  EXPECT_EQ(local_hardy_norm(sample_space(g, [](double) { return cplx(0.0); })).value, 0.0);
  EXPECT_THROW(local_hardy_norm(sample_space(g, [](double) { return cplx(1.0); }), {}), Error);
  double worst = 0.0;
  for (const auto& f : random_fields(50, 8))
    worst = std::max(worst, lp_norm(f, 1.0).value / local_hardy_norm(f).value);
  // Measured 1.0 up to quadrature: the smallest scale already reproduces |f|.
  EXPECT_LE(worst, 1.0 + 1e-3);
  EXPECT_GT(worst, 0.5);
}

TEST(Spaces, LocalHardyScaleRefinementConverges) {
  std::vector<double> fine;
  for (int j = 0; j <= 32; ++j) fine.push_back(std::pow(2.0, -j / 4.0));
  for (const auto& f : random_fields(5, 9)) {
    const double coarse = local_hardy_norm(f).value;
    const double refined = local_hardy_norm(f, fine).value;
    EXPECT_GE(refined, coarse * (1.0 - 1e-12));
    EXPECT_LE(refined, coarse * 1.02);
  }
}

TEST(Spaces, MixedNormFubiniAndSeparability) {
  const std::vector<double> a{1.0, 2.0}, b{0.5, 3.0, 1.0}, c{2.0, 1.0};
  std::vector<cplx> d;
  for (double x : a)
    for (double y : b)
      for (double z : c) d.emplace_back(x * y * z, 0.0);
  const std::vector<std::size_t> shape{2, 3, 2};
  const double l2a = mixed_norm(d, shape, {{0, 2.0, 1.0}, {1, 2.0, 1.0}, {2, 2.0, 1.0}}).value;
  const double l2b = mixed_norm(d, shape, {{2, 2.0, 1.0}, {0, 2.0, 1.0}, {1, 2.0, 1.0}}).value;
  EXPECT_NEAR(l2a, l2b, 1e-12);
  const double sep = mixed_norm(d, shape, {{0, 1.0, 1.0}, {1, kInf, 1.0}, {2, 2.0, 1.0}}).value;
  EXPECT_NEAR(sep, 3.0 * 3.0 * std::sqrt(5.0), 1e-12);
  EXPECT_THROW(mixed_norm(d, shape, {{0, 2.0, 1.0}, {0, 2.0, 1.0}, {2, 2.0, 1.0}}), Error);
}

TEST(Spaces, MixedNormOrderWitness) {
  // 2x2x2 array: entry (i, j, k) = 1 when j == i, else 0; axis 2 is constant.
  std::vector<cplx> d(8, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) d[(i * 2 + i) * 2 + k] = 1.0;
  const std::vector<std::size_t> shape{2, 2, 2};
  // l^inf over j then l^1 over i: each i has sup 1, sum 2; l^inf over k keeps 2.
  EXPECT_DOUBLE_EQ(mixed_norm(d, shape, {{1, kInf, 1.0}, {0, 1.0, 1.0}, {2, kInf, 1.0}}).value, 2.0);
  // l^1 over i then l^inf over j: each j has sum 1, sup 1.
  EXPECT_DOUBLE_EQ(mixed_norm(d, shape, {{0, 1.0, 1.0}, {1, kInf, 1.0}, {2, kInf, 1.0}}).value, 1.0);
}
