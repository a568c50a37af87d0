#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bpdo/decomp.hpp"
#include "bpdo/grid.hpp"

namespace bpdo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormResult {
  double value = 0.0;
  std::string space_id;
  std::vector<double> params;
  double quad_error_hint = 0.0;
};

void to_json(nlohmann::json& j, const NormResult& r);
/// CSV with header "space_id,params,value"; params are joined with ';'.
void write_norm_table(std::ostream& os, std::span<const NormResult> rows);

/// Half-open coordinate box [lo_d, hi_d) per axis.
struct Box {
  std::vector<std::pair<double, double>> ranges;
};

/// (sum_i w_i |a_i|^p)^{1/p}, or max |a_i| for p = inf.
double weighted_lp(std::span<const double> abs_values, double p, double weight = 1.0);

NormResult lp_norm(const SampledField& f, double p, const std::optional<Box>& region = std::nullopt);
NormResult seq_norm(std::span<const double> a, double q);
/// max_m m^{1/q} a*_m over the decreasing rearrangement a*.
NormResult weak_seq_norm(std::span<const double> a, double q);

/// ((2 pi)^{-n} int <xi>^{2s} |F f(xi)|^2 dxi)^{1/2}; accepts either domain.
NormResult sobolev_norm(const SampledField& f, double s);

/// Lattice index of the unit cube nu + [-1/2, 1/2) that contains coordinate t.
inline int cube_index(double t) { return static_cast<int>(std::floor(t + 0.5 + 1e-12)); }

/// Per-cube L^p(nu + Q) norms, keyed by the flattened cube lattice (first axis slowest).
struct CubeNorms {
  std::vector<int> lattice;  // per-axis cube indices, ascending
  std::vector<double> values;
};
CubeNorms cube_lp_norms(const SampledField& f, double p);

/// l^q over nu of ||f||_{L^p(nu + Q)}; every cube meeting the grid box is included.
NormResult amalgam_norm(const SampledField& f, double p, double q);
NormResult uniform_local_l2(const SampledField& f);
/// Joint unit cubes in (x, xi1, xi2).
NormResult uniform_local_l2(const SampledSymbol& sigma);

/**
 * ||phi(D - k) f||_{L^p_x l^q_k} over the active frequency lattice. The field
 * must be band-limited with radius <= Xi - 2: a declared radius is trusted,
 * otherwise band_limit_check is run.
 */
NormResult modulation_norm(const SampledField& f, double p, double q, const DecompPair& window);
/// Tensor partition in all three variables; L^p is taken jointly in (x, xi1, xi2).
NormResult modulation_norm(const SampledSymbol& sigma, double p, double q, const DecompPair& window);
/// Same as above on a precomputed box family.
NormResult modulation_norm(const SymbolBoxFamily& family, double p, double q);

std::vector<double> default_hardy_scales();
/// ||sup_t |phi_t * f| ||_{L^1} with phi the unit-mass Gaussian, evaluated spectrally.
NormResult local_hardy_norm(const SampledField& f, const std::vector<double>& scales = default_hardy_scales());

/// One reduction step of a mixed norm: axis `index` with exponent p and
/// quadrature weight `step` (1 for sequence norms).
struct AxisNorm {
  std::size_t index = 0;
  double exponent = 2.0;
  double step = 1.0;
};

/**
 * Mixed norm of |data| with the listed reductions applied innermost first:
 * spec = {X over a, Y over b, Z over c} evaluates ||.||_{X_a Y_b Z_c}.
 */
NormResult mixed_norm(std::span<const cplx> data, const std::vector<std::size_t>& shape,
                      const std::vector<AxisNorm>& spec);

}  // namespace bpdo
