#include "bpdo/plane_wave.hpp"

#include <algorithm>
#include <cmath>

#include "bpdo/spaces.hpp"

namespace bpdo {

namespace {

cplx expi(double ph) { return {std::cos(ph), std::sin(ph)}; }

const Axis axis_for(const GridSpec& g, std::size_t a) {
  return a == 0 ? g.space_axis() : g.frequency_axis();
}

}  // namespace

PlaneWaveSymbol::PlaneWaveSymbol(std::vector<PlaneWaveTerm> terms, std::array<double, 3> radii)
    : terms_(std::move(terms)), radii_(radii) {
  for (double r : radii_)
    if (!(r >= 1.0)) throw Error("PlaneWaveSymbol: radii must be >= 1");
  for (const auto& t : terms_)
    for (std::size_t a = 0; a < 3; ++a)
      if (std::abs(t.eta[a]) > radii_[a] + 1e-12)
        throw Error("PlaneWaveSymbol: frequency outside the declared radius");
}

cplx PlaneWaveSymbol::operator()(double x, double xi1, double xi2) const {
  cplx acc = 0.0;
  for (const auto& t : terms_) acc += t.coeff * expi(x * t.eta[0] + xi1 * t.eta[1] + xi2 * t.eta[2]);
  return acc;
}

SampledSymbol PlaneWaveSymbol::sample(const GridSpec& grid) const {
  if (grid.dim != 1) throw Error("PlaneWaveSymbol::sample: only n = 1 is supported");
  const Axis xs = grid.space_axis(), fs = grid.frequency_axis();
  const std::size_t nx = xs.count(), nf = fs.count();
  SampledSymbol out{grid, std::vector<cplx>(nx * nf * nf, 0.0), radii_};
  std::vector<cplx> A(nx), B(nf), C(nf);
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < nx; ++i) A[i] = t.coeff * expi(xs.point(i) * t.eta[0]);
    for (std::size_t i = 0; i < nf; ++i) {
      B[i] = expi(fs.point(i) * t.eta[1]);
      C[i] = expi(fs.point(i) * t.eta[2]);
    }
    for (std::size_t i0 = 0; i0 < nx; ++i0)
      for (std::size_t i1 = 0; i1 < nf; ++i1) {
        const cplx ab = A[i0] * B[i1];
        cplx* row = &out.values[out.index(i0, i1, 0)];
        for (std::size_t i2 = 0; i2 < nf; ++i2) row[i2] += ab * C[i2];
      }
  }
  return out;
}

PlaneWaveSymbol PlaneWaveSymbol::rotated(double phase) const {
  PlaneWaveSymbol out = *this;
  const cplx r = expi(phase);
  for (auto& t : out.terms_) t.coeff *= r;
  return out;
}

PlaneWaveSymbol PlaneWaveSymbol::modulated(std::array<double, 3> k) const {
  std::vector<PlaneWaveTerm> terms = terms_;
  for (auto& t : terms)
    for (std::size_t a = 0; a < 3; ++a) t.eta[a] += k[a];
  std::array<double, 3> radii = radii_;
  for (std::size_t a = 0; a < 3; ++a) radii[a] += std::abs(k[a]);
  return PlaneWaveSymbol(std::move(terms), radii);
}

PlaneWaveSymbol PlaneWaveSymbol::swapped() const {
  std::vector<PlaneWaveTerm> terms = terms_;
  for (auto& t : terms) std::swap(t.eta[1], t.eta[2]);
  return PlaneWaveSymbol(std::move(terms), {radii_[0], radii_[2], radii_[1]});
}

std::vector<cplx> spectral_evaluate(const GridSpec& grid, std::span<const cplx> F,
                                    std::span<const double> points) {
  const Axis fs = grid.frequency_axis();
  const std::size_t nf = fs.count();
  if (F.size() != nf) throw Error("spectral_evaluate: spectrum length mismatch");
  const double w = grid.xi_step / kTwoPi;
  std::vector<cplx> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < nf; ++i) acc += expi(points[p] * fs.point(i)) * F[i];
    out[p] = w * acc;
  }
  return out;
}

std::vector<cplx> PlaneWaveSymbol::apply(const GridSpec& grid, std::span<const cplx> F1,
                                         std::span<const cplx> F2) const {
  const Axis xs = grid.space_axis(), fs = grid.frequency_axis();
  const std::size_t nx = xs.count(), nf = fs.count();
  if (F1.size() != nf || F2.size() != nf) throw Error("PlaneWaveSymbol::apply: spectrum length mismatch");
  const DenseMatrix& inv = fourier_matrix(fs, xs, +1);
  std::vector<cplx> out(nx, 0.0), G1(nf), G2(nf);
  for (const auto& t : terms_) {
    // f(x + eta) is the inverse transform of e^{i eta xi} F(xi).
    for (std::size_t i = 0; i < nf; ++i) {
      G1[i] = expi(t.eta[1] * fs.point(i)) * F1[i];
      G2[i] = expi(t.eta[2] * fs.point(i)) * F2[i];
    }
    for (std::size_t ix = 0; ix < nx; ++ix) {
      cplx a = 0.0, b = 0.0;
      const cplx* row = &inv.data[ix * nf];
      for (std::size_t i = 0; i < nf; ++i) {
        a += row[i] * G1[i];
        b += row[i] * G2[i];
      }
      out[ix] += t.coeff * expi(xs.point(ix) * t.eta[0]) * a * b;
    }
  }
  return out;
}

double PlaneWaveSymbol::uniform_local_l2(const GridSpec& grid) const {
  const std::size_t M = terms_.size();
  if (M == 0) return 0.0;
  // Gram[a][cube](m, m') = h_a sum_{z in cube} e^{i (eta_m - eta_m') z}.
  std::array<std::vector<std::vector<cplx>>, 3> gram;
  for (std::size_t a = 0; a < 3; ++a) {
    const Axis ax = axis_for(grid, a);
    const std::size_t n = ax.count();
    const int lo = cube_index(ax.point(0));
    const int hi = cube_index(ax.point(n - 1));
    gram[a].assign(static_cast<std::size_t>(hi - lo + 1), std::vector<cplx>(M * M, 0.0));
    std::vector<cplx> e(M);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = ax.point(i);
      for (std::size_t m = 0; m < M; ++m) e[m] = expi(terms_[m].eta[a] * z);
      auto& g = gram[a][static_cast<std::size_t>(cube_index(z) - lo)];
      for (std::size_t m = 0; m < M; ++m)
        for (std::size_t q = 0; q < M; ++q) g[m * M + q] += ax.step * e[m] * std::conj(e[q]);
    }
  }
  std::vector<cplx> cc(M * M), Q(M * M);
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t q = 0; q < M; ++q) cc[m * M + q] = terms_[m].coeff * std::conj(terms_[q].coeff);
  double best = 0.0;
  for (const auto& g1 : gram[1])
    for (const auto& g2 : gram[2]) {
      for (std::size_t i = 0; i < M * M; ++i) Q[i] = cc[i] * g1[i] * g2[i];
      for (const auto& g0 : gram[0]) {
        double acc = 0.0;
        for (std::size_t i = 0; i < M * M; ++i) acc += (g0[i] * Q[i]).real();
        best = std::max(best, acc);
      }
    }
  return std::sqrt(std::max(best, 0.0));
}

PlaneWaveSymbol PlaneWaveSymbol::box(std::array<int, 3> k, const DecompPair& pair) const {
  std::vector<PlaneWaveTerm> terms;
  for (const auto& t : terms_) {
    double w = 1.0;
    for (std::size_t a = 0; a < 3 && w != 0.0; ++a) w *= pair.phi(t.eta[a] - k[a]);
    if (w != 0.0) terms.push_back({t.coeff * w, t.eta});
  }
  std::array<double, 3> radii;
  for (std::size_t a = 0; a < 3; ++a) radii[a] = std::abs(k[a]) + 1.0;
  return PlaneWaveSymbol(std::move(terms), radii);
}

namespace {

// Lattice points k whose window k + (-1, 1)^3 can contain some eta.
template <typename Fn>
void for_each_box(const std::vector<PlaneWaveTerm>& terms, Fn&& fn) {
  std::vector<std::array<int, 3>> ks;
  for (const auto& t : terms) {
    std::array<int, 3> base;
    for (std::size_t a = 0; a < 3; ++a) base[a] = static_cast<int>(std::floor(t.eta[a]));
    for (int d0 = 0; d0 <= 1; ++d0)
      for (int d1 = 0; d1 <= 1; ++d1)
        for (int d2 = 0; d2 <= 1; ++d2) ks.push_back({base[0] + d0, base[1] + d1, base[2] + d2});
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  for (const auto& k : ks) fn(k);
}

}  // namespace

double PlaneWaveSymbol::modulation_norm_inf1(const DecompPair& pair) const {
  double total = 0.0;
  for_each_box(terms_, [&](const std::array<int, 3>& k) {
    const PlaneWaveSymbol b = box(k, pair);
    for (const auto& t : b.terms()) total += std::abs(t.coeff);
  });
  return total;
}

double PlaneWaveSymbol::modulation_norm_inf1_on_grid(const GridSpec& grid, const DecompPair& pair) const {
  double total = 0.0;
  for_each_box(terms_, [&](const std::array<int, 3>& k) {
    const PlaneWaveSymbol b = box(k, pair);
    if (b.terms().empty()) return;
    const SampledSymbol s = b.sample(grid);
    double sup = 0.0;
    for (const cplx& v : s.values) sup = std::max(sup, std::abs(v));
    total += sup;
  });
  return total;
}

}  // namespace bpdo
