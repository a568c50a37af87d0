#include "bpdo/op.hpp"

#include <cmath>
#include <string>

#include "bpdo/format.hpp"
#include "bpdo/parallel.hpp"

namespace bpdo {

namespace {

void require_dim1(const GridSpec& g, const char* what) {
  if (g.dim != 1) throw Error(std::string(what) + ": only n = 1 is supported");
}

std::vector<cplx> spectrum_of(const SampledField& f) {
  return f.domain == Domain::space ? fourier_forward(f).values : f.values;
}

void guard_alias(const SampledField& f, const char* which, const ApplyOptions& opts) {
  if (opts.allow_alias) return;
  const double limit = 0.5 * f.grid.xi_halfwidth;
  if (!f.fsupp_radius)
    throw Error(std::string("bilinear_apply: ") + which +
                " has no declared Fourier radius; declare one or pass allow_alias");
  if (*f.fsupp_radius > limit)
    throw Error(std::string("bilinear_apply: ") + which + " Fourier radius " +
                format_real(*f.fsupp_radius) + " exceeds Xi/2 = " + format_real(limit) +
                "; xi1 + xi2 would leave the frequency box");
}

// Phase table E[x][j] = exp(i x xi_j).
std::vector<cplx> phase_table(const Axis& xs, const Axis& fs) {
  const std::size_t nx = xs.count(), nf = fs.count();
  std::vector<cplx> e(nx * nf);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nf; ++j) {
      const double ph = xs.point(i) * fs.point(j);
      e[i * nf + j] = cplx(std::cos(ph), std::sin(ph));
    }
  return e;
}

double japanese(double t2) { return std::sqrt(1.0 + t2); }

}  // namespace

std::vector<cplx> bilinear_kernel(const SampledSymbol& sigma, std::span<const cplx> F1,
                                  std::span<const cplx> F2, IndexRange r1, IndexRange r2,
                                  unsigned threads) {
  const std::size_t nx = sigma.nx(), nf = sigma.nxi();
  if (F1.size() != nf || F2.size() != nf) throw Error("bilinear_kernel: spectrum length mismatch");
  if (r1.hi > nf || r2.hi > nf || r1.lo > r1.hi || r2.lo > r2.hi)
    throw Error("bilinear_kernel: index range outside the frequency axis");
  const std::vector<cplx> E = phase_table(sigma.grid.space_axis(), sigma.grid.frequency_axis());
  const double w = sigma.grid.xi_step / kTwoPi;
  std::vector<cplx> out(nx);
  parallel_for(
      nx,
      [&](std::size_t ix) {
        const cplx* e = &E[ix * nf];
        cplx acc = 0.0;
        for (std::size_t i1 = r1.lo; i1 < r1.hi; ++i1) {
          const cplx a = e[i1] * F1[i1];
          if (a == cplx(0.0)) continue;
          const cplx* row = &sigma.values[sigma.index(ix, i1, 0)];
          cplx inner = 0.0;
          for (std::size_t i2 = r2.lo; i2 < r2.hi; ++i2) inner += row[i2] * (e[i2] * F2[i2]);
          acc += a * inner;
        }
        out[ix] = w * w * acc;
      },
      threads);
  return out;
}

OperatorReport bilinear_apply_report(const SampledSymbol& sigma, const SampledField& f1,
                                     const SampledField& f2, const ApplyOptions& opts) {
  require_dim1(sigma.grid, "bilinear_apply");
  require_same_grid(sigma.grid, f1.grid, "bilinear_apply (f1)");
  require_same_grid(sigma.grid, f2.grid, "bilinear_apply (f2)");
  if (sigma.values.size() != sigma.nx() * sigma.nxi() * sigma.nxi())
    throw Error("bilinear_apply: symbol sample count does not match the grid");
  guard_alias(f1, "f1", opts);
  guard_alias(f2, "f2", opts);
  const std::vector<cplx> F1 = spectrum_of(f1);
  const std::vector<cplx> F2 = spectrum_of(f2);
  const std::size_t nf = sigma.nxi();
  OperatorReport rep;
  rep.output.grid = sigma.grid;
  rep.output.domain = Domain::space;
  rep.output.values = bilinear_kernel(sigma, F1, F2, {0, nf}, {0, nf}, opts.threads);
  if (sigma.fsupp_radii && f1.fsupp_radius && f2.fsupp_radius)
    rep.output.fsupp_radius = (*sigma.fsupp_radii)[0] + *f1.fsupp_radius + *f2.fsupp_radius;
  rep.flops_estimate = static_cast<std::int64_t>(8 * sigma.nx() * nf * nf);
  return rep;
}

SampledField bilinear_apply(const SampledSymbol& sigma, const SampledField& f1, const SampledField& f2,
                            const ApplyOptions& opts) {
  return bilinear_apply_report(sigma, f1, f2, opts).output;
}

SampledField bilinear_apply_separable(const FrequencyProfile& m1, const FrequencyProfile& m2,
                                      const SampledField& f1, const SampledField& f2) {
  require_same_grid(f1.grid, f2.grid, "bilinear_apply_separable");
  SampledField a = multiplier_apply(m1, f1);
  SampledField b = multiplier_apply(m2, f2);
  if (a.domain == Domain::frequency) a = fourier_inverse(a);
  if (b.domain == Domain::frequency) b = fourier_inverse(b);
  SampledField out{f1.grid, Domain::space, std::vector<cplx>(a.values.size()), std::nullopt};
  for (std::size_t i = 0; i < a.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  if (a.fsupp_radius && b.fsupp_radius) out.fsupp_radius = *a.fsupp_radius + *b.fsupp_radius;
  return out;
}

SampledField linear_apply(const SampledLinearSymbol& sigma, const SampledField& f) {
  require_dim1(sigma.grid, "linear_apply");
  require_same_grid(sigma.grid, f.grid, "linear_apply");
  const Axis xs = sigma.grid.space_axis();
  const Axis fs = sigma.grid.frequency_axis();
  const std::size_t nx = xs.count(), nf = fs.count();
  if (sigma.values.size() != nx * nf) throw Error("linear_apply: symbol sample count mismatch");
  const std::vector<cplx> F = spectrum_of(f);
  const std::vector<cplx> E = phase_table(xs, fs);
  const double w = sigma.grid.xi_step / kTwoPi;
  SampledField out{f.grid, Domain::space, std::vector<cplx>(nx), std::nullopt};
  for (std::size_t ix = 0; ix < nx; ++ix) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < nf; ++j) acc += E[ix * nf + j] * sigma.values[ix * nf + j] * F[j];
    out.values[ix] = w * acc;
  }
  return out;
}

double s_truncation_hint(const GridSpec& grid) { return 2.0 / japanese(grid.x_halfwidth * grid.x_halfwidth); }

std::vector<double> s_transform_values(const GridSpec& grid, std::span<const double> u) {
  const Axis ax = grid.space_axis();
  const std::size_t n = ax.count();
  const double h = grid.x_step;
  if (u.size() != grid.space_count()) throw Error("s_transform: sample count mismatch");
  std::vector<double> out(u.size(), 0.0);
  if (grid.dim == 1) {
    // Kernel depends on i - j only.
    std::vector<double> k(2 * n - 1);
    for (std::size_t d = 0; d < k.size(); ++d) {
      const double t = (static_cast<double>(d) - static_cast<double>(n - 1)) * h;
      k[d] = h / (1.0 + t * t);
    }
    parallel_for(n, [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += k[i + n - 1 - j] * u[j];
      out[i] = acc;
    });
  } else {
    const double vol = h * h;
    parallel_for(n * n, [&](std::size_t i) {
      const double xi0 = ax.point(i / n), xi1 = ax.point(i % n);
      double acc = 0.0;
      for (std::size_t j = 0; j < n * n; ++j) {
        if (u[j] == 0.0) continue;
        const double d0 = xi0 - ax.point(j / n), d1 = xi1 - ax.point(j % n);
        const double jb = japanese(d0 * d0 + d1 * d1);
        acc += u[j] / (jb * jb * jb);
      }
      out[i] = vol * acc;
    });
  }
  return out;
}

OperatorReport s_transform_report(const SampledField& f) {
  if (f.domain != Domain::space) throw Error("s_transform: field must be in the space domain");
  std::vector<double> u(f.values.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::abs(f.values[i]);
  const std::vector<double> s = s_transform_values(f.grid, u);
  OperatorReport rep;
  rep.output = SampledField{f.grid, Domain::space, std::vector<cplx>(s.begin(), s.end()), std::nullopt};
  rep.flops_estimate = static_cast<std::int64_t>(2 * u.size() * u.size());
  rep.quad_error_hint = s_truncation_hint(f.grid);
  return rep;
}

SampledField s_transform(const SampledField& f) { return s_transform_report(f).output; }

std::vector<double> s_transform_at(const SampledField& f, std::span<const double> points) {
  if (f.domain != Domain::space) throw Error("s_transform_at: field must be in the space domain");
  const int dim = f.grid.dim;
  if (points.size() % static_cast<std::size_t>(dim) != 0)
    throw Error("s_transform_at: point list length is not a multiple of n");
  const Axis ax = f.grid.space_axis();
  const std::size_t n = ax.count();
  const double vol = std::pow(f.grid.x_step, dim);
  const std::size_t m = points.size() / dim;
  std::vector<double> out(m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) {
      const double a = std::abs(f.values[j]);
      if (a == 0.0) continue;
      double r2;
      if (dim == 1) {
        const double d = points[p] - ax.point(j);
        r2 = d * d;
      } else {
        const double d0 = points[2 * p] - ax.point(j / n), d1 = points[2 * p + 1] - ax.point(j % n);
        r2 = d0 * d0 + d1 * d1;
      }
      acc += a / std::pow(japanese(r2), dim + 1);
    }
    out[p] = vol * acc;
  }
  return out;
}

SampledField convolve(const SampledField& f, const SampledField& g) {
  require_same_grid(f.grid, g.grid, "convolve");
  if (f.domain != Domain::space || g.domain != Domain::space)
    throw Error("convolve: fields must be in the space domain");
  const std::size_t n = f.grid.space_points_per_axis();
  const std::size_t half = n / 2;  // index of the origin
  const double vol = std::pow(f.grid.x_step, f.grid.dim);
  SampledField out{f.grid, Domain::space, std::vector<cplx>(f.values.size()), std::nullopt};
  auto shift = [&](std::size_t i, std::size_t j) -> long {
    return static_cast<long>(i) - static_cast<long>(j) + static_cast<long>(half);
  };
  if (f.grid.dim == 1) {
    parallel_for(n, [&](std::size_t i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const long k = shift(i, j);
        if (k >= 0 && k < static_cast<long>(n)) acc += f.values[j] * g.values[k];
      }
      out.values[i] = vol * acc;
    });
  } else {
    parallel_for(n * n, [&](std::size_t i) {
      const std::size_t i0 = i / n, i1 = i % n;
      cplx acc = 0.0;
      for (std::size_t j0 = 0; j0 < n; ++j0) {
        const long k0 = shift(i0, j0);
        if (k0 < 0 || k0 >= static_cast<long>(n)) continue;
        for (std::size_t j1 = 0; j1 < n; ++j1) {
          const long k1 = shift(i1, j1);
          if (k1 >= 0 && k1 < static_cast<long>(n)) acc += f.values[j0 * n + j1] * g.values[k0 * n + k1];
        }
      }
      out.values[i] = vol * acc;
    });
  }
  return out;
}

std::vector<double> ball_convolve(const GridSpec& grid, std::span<const double> u, double radius) {
  require_dim1(grid, "ball_convolve");
  const std::size_t n = grid.space_points_per_axis();
  if (u.size() != n) throw Error("ball_convolve: sample count mismatch");
  const double h = grid.x_step;
  const long reach = static_cast<long>(std::floor(radius / h + 1e-9));
  // Direct window sums keep relative accuracy in the tails.
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long lo = std::max(0L, static_cast<long>(i) - reach);
    const long hi = std::min(static_cast<long>(n) - 1, static_cast<long>(i) + reach);
    double acc = 0.0;
    for (long j = lo; j <= hi; ++j) acc += u[j];
    out[i] = h * acc;
  }
  return out;
}

}  // namespace bpdo
