#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "bpdo/grid.hpp"
#include "bpdo/serialize.hpp"

using namespace bpdo;

namespace {

cplx gaussian(double x) { return std::exp(-x * x / 2.0); }

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(Grid, DefaultShape) {
  const GridSpec g = default_grid();
  EXPECT_EQ(g.space_points_per_axis(), 256u);
  EXPECT_EQ(g.frequency_points_per_axis(), 128u);
  EXPECT_EQ(g.space_samples_per_unit(), 8);
  EXPECT_DOUBLE_EQ(g.space_axis().point(0), -16.0);
}

TEST(Grid, RejectsNonReciprocalStep) {
  EXPECT_THROW(make_grid(1, 16, 0.3, 8, 0.125), Error);
  EXPECT_THROW(make_grid(1, 16.5, 0.125, 8, 0.125), Error);
  EXPECT_THROW(make_grid(3, 16, 0.125, 8, 0.125), Error);
}

TEST(Grid, GaussianFourierPair) {
  const GridSpec g = default_grid();
  const SampledField F = fourier_forward(sample_space(g, gaussian));
  const double c = std::sqrt(2.0 * std::numbers::pi);
  const SampledField expect = sample_frequency(g, [&](double xi) { return c * gaussian(xi); });
  EXPECT_LT(max_abs_diff(F.values, expect.values), 1e-10);
}

TEST(Grid, PlancherelAndRoundTrip) {
  const GridSpec g = default_grid();
  const SampledField f = sample_space(g, [](double x) { return gaussian(x - 1.0) * std::exp(cplx(0, 0.5 * x)); });
  const SampledField F = fourier_forward(f);
  EXPECT_NEAR(energy(F) / (2.0 * std::numbers::pi * energy(f)), 1.0, 1e-10);
  EXPECT_LT(max_abs_diff(fourier_inverse(F).values, f.values), 1e-10);
}

TEST(Grid, ConstantMultiplierIsIdentity) {
  const GridSpec g = default_grid();
  const SampledField f = sample_space(g, gaussian);
  const SampledField r = multiplier_apply(sample_profile(g, [](double) { return cplx(1.0); }), f);
  EXPECT_LT(max_abs_diff(r.values, f.values), 1e-12);
}

TEST(Serialize, JsonRoundTrip) {
  const GridSpec g = make_grid(1, 4, 0.25, 4, 0.25);
  SampledField f = sample_space(g, gaussian);
  f.fsupp_radius = 3.0;
  const SampledData back = data_from_json(to_json(SampledData{f}));
  const auto& h = std::get<SampledField>(back);
  EXPECT_EQ(h.grid, g);
  EXPECT_EQ(h.values, f.values);
  EXPECT_EQ(h.fsupp_radius, f.fsupp_radius);
}

TEST(Serialize, MalformedJsonThrows) {
  EXPECT_THROW(data_from_json(nlohmann::json{{"kind", "field"}}), Error);
}
