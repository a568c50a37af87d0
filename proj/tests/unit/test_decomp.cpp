#include <cmath>

#include <gtest/gtest.h>

#include "bpdo/decomp.hpp"
#include "bpdo/ensemble.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/verify.hpp"

using namespace bpdo;

namespace {

const DecompPair& pair1() {
  static const DecompPair p = DecompPair::build(1);
  return p;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SampledSymbol smooth_symbol(const GridSpec& g) {
  return sample_symbol(g, [](double x, double a, double b) {
    return std::exp(-x * x / 8.0) * std::exp(cplx(0.0, 0.5 * a - 0.25 * b)) / (1.0 + 0.1 * a * a);
  });
}

}  // namespace

TEST(Decomp, PartitionOfUnity) {
  const DecompPair& p = pair1();
  for (double t = -3.0; t <= 3.0; t += 0.0137) {
    double phi = 0.0, kc = 0.0;
    for (int k = -6; k <= 6; ++k) {
      phi += p.phi(t - k);
      kc += p.kappa(t - k) * p.chi(t - k);
    }
    EXPECT_NEAR(phi, 1.0, 1e-12) << t;
    EXPECT_NEAR(kc, 1.0, 1e-12) << t;
  }
}

TEST(Decomp, WindowSupports) {
  const DecompPair& p = pair1();
  for (double t : {-1.5, -1.0, 1.0, 1.25, 3.0}) {
    EXPECT_EQ(p.phi(t), 0.0) << t;
    EXPECT_EQ(p.kappa(t), 0.0) << t;
  }
  EXPECT_GT(p.phi(0.0), 0.0);
}

TEST(Decomp, ChiBoundedBelowOnUnitCube) {
  const DecompPair& p = pair1();
  const double c = p.lower_bound_c();
  EXPECT_GT(c, 0.0);
  EXPECT_LE(p.sugimoto().certified_lower_bound(), c);
  for (double t = -1.0; t <= 1.0; t += 0.01) EXPECT_GE(std::abs(p.chi(t)), c * (1.0 - 1e-12));
}

TEST(Decomp, BandLimitCheckSeparatesNarrowAndWideSpectra) {
  const GridSpec g = default_grid();
  const SampledField narrow = sample_space(g, [](double x) { return cplx(std::exp(-x * x / 8.0)); });
  const SampledField wide = sample_space(g, [](double x) { return cplx(std::exp(-2.0 * x * x)); });
  EXPECT_TRUE(band_limit_check(narrow, 4.0).ok);
  EXPECT_FALSE(band_limit_check(wide, 2.0).ok);
  EXPECT_THROW(declare_band_limit(wide, 2.0), Error);
}

TEST(Decomp, BoxOperatorLocalizesSpectrum) {
  const GridSpec g = default_grid();
  const SampledField f = sample_space(g, [](double x) { return cplx(std::exp(-x * x / 2.0)); });
  const SampledField F = box_op(2, fourier_forward(f), pair1());
  ASSERT_EQ(F.domain, Domain::frequency);
  const Axis xi = g.frequency_axis();
  for (std::size_t i = 0; i < F.size(); ++i)
    if (std::abs(xi.point(i) - 2.0) >= 1.0) EXPECT_LT(std::abs(F.values[i]), 1e-12) << xi.point(i);
}

TEST(Decomp, SymbolFamilyReconstructs) {
  const SampledSymbol s = smooth_symbol(symbol_test_grid());
  const SymbolFamily fam = decompose_symbol(s, pair1());
  EXPECT_LT(max_abs_diff(fam.reconstruct().values, s.values), 1e-12);
}

TEST(Decomp, SymbolBoxesSumToSymbol) {
  Rng rng = trial_rng(4, 0, 0);
  const SampledSymbol s = random_enveloped_symbol(symbol_test_grid(), rng);
  const SymbolBoxFamily fam = symbol_box_family(s, pair1(), 0.0);
  std::vector<cplx> sum(s.values.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const SampledSymbol piece = fam.piece(i);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += piece.values[j];
  }
  EXPECT_LT(max_abs_diff(sum, s.values), 1e-10);
}
