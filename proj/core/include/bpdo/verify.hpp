#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bpdo/constants.hpp"
#include "bpdo/decomp.hpp"
#include "bpdo/ensemble.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/plane_wave.hpp"

namespace bpdo {

// ---------------------------------------------------------------------------
// Reporting.

/// One verified inequality: pass iff measured <= bound (or >= for lower bounds).
struct CheckResult {
  std::string id;         // key into the constants table or a fixed tolerance name
  std::string statement;  // human-readable description of the claim
  double measured = 0.0;
  double bound = 0.0;
  bool lower_bound = false;
  bool pass = false;
};

CheckResult upper_check(std::string id, std::string statement, double measured, double bound);
CheckResult lower_check(std::string id, std::string statement, double measured, double bound);

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
};

nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const SuiteReport& r);

// ---------------------------------------------------------------------------
// Weak-l^p trilinear inequality.

struct ProductWeakResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/**
 * f1, f2, A1, A2 are indexed by nu in [-N, N] (length 2N + 1) and A0 by tau in
 * [-2N, 2N] (length 4N + 1). Returns
 *   sum f1(nu1) f2(nu2) A0(nu1 + nu2) A1(nu1) A2(nu2)
 * over ||f1||_{l^{p1,inf}} ||f2||_{l^{p2,inf}} ||A0||_2 ||A1||_2 ||A2||_2.
 */
ProductWeakResult check_product_lweak(std::span<const double> f1, std::span<const double> f2,
                                      std::span<const double> A0, std::span<const double> A1,
                                      std::span<const double> A2, double p1, double p2);

struct ProductWeakEnsemble {
  int trials = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
};

/// f_j = <nu>^{-1/p_j} on |nu| <= N, A_j random sparse heavy-tailed.
ProductWeakEnsemble product_lweak_ensemble(std::uint64_t seed, int trials = 10000, int N = 32,
                                           double p1 = 4.0, double p2 = 4.0);

// ---------------------------------------------------------------------------
// Amalgam norm equivalence with a smooth window.

using Window = std::function<double(double)>;

struct AmalgamEquivResult {
  double amalgam = 0.0;
  double windowed = 0.0;
  double ratio = 0.0;
  /// Largest c with c 1_Q <= |g| <= c^{-1} <x>^{-L}, measured on a fine sampling.
  double hypothesis_c = 0.0;
};

/// amalgam_norm(f, p, q) / ||g(x - nu) f(x)||_{L^p_x l^q_nu}, L^p taken first, for n = 1.
AmalgamEquivResult check_amalgam_equiv(const SampledField& f, const Window& g, double p, double q,
                                       double L);

// ---------------------------------------------------------------------------
// Properties of S.

struct SPropertiesConfig {
  std::uint64_t seed = 7;
  int members = 50;
};

struct SPropertiesReport {
  int members = 0;
  /// max relative residual among S(f*g), S(f)*g and f*S(g) on |x| <= X/2.
  double convolution_residual = 0.0;
  /// max S(f)(x) / S(f)(y) over grid pairs with |x - y| <= 1.
  double quasi_invariance = 0.0;
  /// For p = 1, 2, inf: [min, max] of ||S f(nu)||_{l^p} / ||S f||_{L^p}.
  std::array<std::array<double, 2>, 3> lattice_brackets{};
  /// max |phi(D - nu) f|^2 / S(|phi(D - nu) f|^2) over grid points.
  double pointwise_domination = 0.0;
  /// ||S f||_{L^1} / ||f||_{L^1}, worst case (bounded by pi for n = 1).
  double l1_bound = 0.0;
};

SPropertiesReport check_s_properties(const GridSpec& grid, const SPropertiesConfig& cfg = {});

// ---------------------------------------------------------------------------
// Sup norm versus uniformly local L^2 for frequency-localized pieces.

/// ||piece||_{L^inf} / ||piece||_{L^2_ul}; throws Error if the piece is not band-limited.
double check_l2ul_linfty(const SampledSymbol& piece, double band_radius = 2.0);
double check_l2ul_linfty(const SampledField& piece);

struct LinftyReport {
  int pieces = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max |ratio(M piece) - ratio(piece)| over modulated copies.
  double modulation_deviation = 0.0;
};

/// symbols x 27 pieces box_k sigma, k in {-1, 0, 1}^3, on a 64^3 symbol grid.
LinftyReport l2ul_linfty_ensemble(std::uint64_t seed, int symbols = 4);

/// The 64^3 grid used for full-variable symbol decompositions.
GridSpec symbol_test_grid();

// ---------------------------------------------------------------------------
// Duality for the (L^2, l^1) norm.

struct DualityResult {
  double amalgam = 0.0;   // ||h||_{(L^2, l^1)}
  double windowed = 0.0;  // ||theta(x - mu) h(x)||_{L^2_x l^1_mu}
  double sampled = 0.0;   // sum_mu max over sampled unit g of |int theta(x - mu) h g|
};

DualityResult check_duality(const SampledField& h, const DecompPair& pair, Rng& rng, int samples = 200);

// ---------------------------------------------------------------------------
// Traced proof of the key boundedness estimate.

struct StepBound {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Equalities record |difference| as lhs and the magnitude scale as rhs.
  bool equality = false;
};

struct ProofTrace {
  int mu = 0;
  std::array<double, 3> radii{};
  double s1 = 0.25, s2 = 0.25;
  std::vector<int> tau;      // A0 rows
  std::vector<int> nu;       // A1, A2 rows
  std::vector<int> nu0;      // columns
  std::vector<double> A0;    // [tau][nu0]
  std::vector<double> A1;    // [nu][nu0]
  std::vector<double> A2;    // [nu][nu0]
  cplx I_value;
  cplx I_decomposed;
  cplx I_transferred;
  double II_value = 0.0;
  std::vector<StepBound> steps;
};

/// Smooth cutoff equal to 1 on |t| <= 4 and 0 for |t| >= 5.
double transfer_cutoff(double t);

inline constexpr int kTraceWeightExponent = 3;      // L = n + 2
inline constexpr double kTraceEqualityTol = 1e-6;   // equalities, relative to their scale

/**
 * Evaluates every quantity of the proof chain on one instance: the pairing I
 * directly, through the symbol decomposition and after transferring the
 * Fourier support to g, the pointwise kernel bound, the discretized bounds,
 * A0, A1, A2, II, the weak-l^p step, the Hoelder step, the A0 Plancherel
 * identity, the A_j estimate and the final bound on |I|.
 */
ProofTrace proof_trace(const SampledSymbol& sigma, const SampledField& f1, const SampledField& f2,
                       const SampledField& g, int mu, const DecompPair& pair, double s1, double s2);

struct TraceInstance {
  SampledSymbol sigma;
  SampledField f1, f2, g;
  int mu = 0;
};

/// Seeded instance on the default grid; index 0 is the constant symbol.
TraceInstance make_trace_instance(const GridSpec& grid, std::uint64_t seed, int index);

/// Compares each step with trace.<label> from the table; equalities use kTraceEqualityTol.
std::vector<CheckResult> check_trace(const ProofTrace& t, const ConstantsTable& constants);

nlohmann::json to_json(const ProofTrace& t);

// ---------------------------------------------------------------------------
// Ensemble estimates of the operator bounds.

struct SearchConfig {
  int restarts = 10;
  int steps = 200;
};

/**
 * Random search for large ||T_sigma(f1, f2)||_{(L^2, l^1)} / (||f1||_{H^s1} ||f2||_{H^s2})
 * over f_j in the span of an atom dictionary. The result is a lower bound for
 * the operator norm. Each step perturbs one coefficient of one argument
 * (alternating) and keeps the change only if the ratio grows; accepted
 * arguments are rescaled to unit Sobolev norm.
 */
class BilinearSearch {
 public:
  BilinearSearch(const PlaneWaveSymbol& sigma, const AtomDictionary& dict, double s1, double s2);

  /// Ratio for explicit coefficient vectors.
  double objective(const std::vector<cplx>& a, const std::vector<cplx>& b) const;
  /// T_sigma(f1, f2) on the space grid for explicit coefficients.
  std::vector<cplx> output(const std::vector<cplx>& a, const std::vector<cplx>& b) const;

  struct Result {
    double ratio = 0.0;
    std::vector<cplx> a, b;
  };
  Result run(Rng& rng, const SearchConfig& cfg) const;

 private:
  const AtomDictionary* dict_;
  GridSpec grid_;
  std::size_t M_ = 0, K_ = 0, nx_ = 0;
  std::vector<cplx> coeff_phase_;  // [m][x] c_m e^{i x eta0_m}
  std::vector<cplx> psi1_, psi2_;  // [m][k][x] psi_k(x + eta_j)
  std::vector<cplx> gram1_, gram2_;

  void accumulate(const std::vector<cplx>& psi, const std::vector<cplx>& a, std::vector<cplx>& u) const;
  void combine(const std::vector<cplx>& u1, const std::vector<cplx>& u2, std::vector<cplx>& t) const;
  double amalgam_l2_l1(const std::vector<cplx>& t) const;
};

struct EnsembleConfig {
  std::uint64_t seed = 7;
  std::vector<std::array<double, 3>> r_triples;
  int trials_per_triple = 20;
  SearchConfig search;
  double s1 = 0.25;
  double s2 = 0.25;
  GridSpec grid;
};

/// All 27 triples in {1, 2, 4}^3.
std::vector<std::array<double, 3>> default_r_triples();
/// Minimums: >= 20 trials per triple and >= 10 restarts; s1 + s2 = 1/2, s_j > 0.
void validate(const EnsembleConfig& cfg, bool require_minimums = true);

struct TrialRecord {
  int trial = 0;
  std::array<double, 3> radii{};
  double ratio = 0.0;        // normalized ratio reported by the ensemble
  double raw_ratio = 0.0;    // operator lower bound / symbol norm
  double symbol_norm = 0.0;  // ||sigma||_{L^2_ul} or ||sigma||_{M^{inf,1}}
};

struct FitRow {
  std::string parameter;  // "R0", "R1", "R2"
  double r = 0.0;
  double marginal_max = 0.0;
};

struct EnsembleStats {
  int trials = 0;
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  std::map<std::string, double> fitted_exponents;
  std::vector<FitRow> fit_rows;
  std::vector<TrialRecord> records;
};

/**
 * For each trial: a random plane-wave symbol with radii (R0, R1, R2), the
 * searched lower bound N of ||T_sigma||, and the ratio
 * N / ((R0 R1 R2)^{1/2} ||sigma||_{L^2_ul}). Exponents are least-squares
 * slopes of log max_{other radii} (N / ||sigma||_{L^2_ul}) against log R_i.
 */
EnsembleStats estimate_prop_constant(const EnsembleConfig& cfg);

struct TheoremConfig {
  std::uint64_t seed = 7;
  std::vector<std::array<double, 2>> exponents{{0.25, 0.25}, {0.125, 0.375}};
  int plane_wave_trials = 12;
  int modulated_trials = 12;
  SearchConfig search{10, 200};
  GridSpec grid;
};

struct TheoremStats {
  std::map<std::string, EnsembleStats> by_exponents;  // key "s1,s2"
  double max_ratio = 0.0;
  /// Worst violation of ||.||_{L^r} <= ||.||_{(L^2,l^r)} <= ||.||_{(L^2,l^1)}, r in {1, 1.5, 2}
  /// (max of lhs / rhs - 1; <= 0 means the chain held).
  double embedding_excess = 0.0;
  /// max / min of the ratio for sigma -> e^{i x k0} sigma, k0 in {0, 1, 2}.
  double modulation_spread = 0.0;
  /// max ||T||_{h^1} / ||T||_{(L^2,l^1)} over outputs.
  double hardy_ratio = 0.0;
};

TheoremStats check_theorem(const TheoremConfig& cfg);

void write_ensemble_csv(std::ostream& os, const EnsembleStats& s);
void write_fit_csv(std::ostream& os, const EnsembleStats& s);
nlohmann::json to_json(const EnsembleStats& s);

}  // namespace bpdo
