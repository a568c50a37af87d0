#include "bpdo/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "bpdo/format.hpp"
#include "bpdo/op.hpp"
#include "bpdo/serialize.hpp"
#include "bpdo/spaces.hpp"

namespace bpdo {

// ---------------------------------------------------------------------------
// Configuration.

namespace {

const std::set<std::string> kSuites{"lemmas", "prop", "theorem", "all"};

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config: expected a JSON object");
  static const std::set<std::string> known{
      "grid", "suite", "seed", "s1", "s2", "s_members", "lweak_trials", "lweak_window", "amalgam_fields",
      "duality_fields", "duality_samples", "linfty_symbols", "trace_instances", "r_triples",
      "trials_per_triple", "search", "theorem_plane_wave_trials", "theorem_modulated_trials"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw Error("config: unknown field '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    read(j, "suite", c.suite);
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw Error("config: seed must be a nonnegative integer");
      c.seed = j.at("seed").get<std::uint64_t>();
    }
    read(j, "s1", c.s1);
    read(j, "s2", c.s2);
    read(j, "s_members", c.s_members);
    read(j, "lweak_trials", c.lweak_trials);
    read(j, "lweak_window", c.lweak_window);
    read(j, "amalgam_fields", c.amalgam_fields);
    read(j, "duality_fields", c.duality_fields);
    read(j, "duality_samples", c.duality_samples);
    read(j, "linfty_symbols", c.linfty_symbols);
    read(j, "trace_instances", c.trace_instances);
    read(j, "r_triples", c.r_triples);
    read(j, "trials_per_triple", c.trials_per_triple);
    if (j.contains("search")) {
      read(j.at("search"), "restarts", c.search.restarts);
      read(j.at("search"), "steps", c.search.steps);
    }
    read(j, "theorem_plane_wave_trials", c.theorem_plane_wave_trials);
    read(j, "theorem_modulated_trials", c.theorem_modulated_trials);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  return {{"grid", grid_to_json(c.grid)},
          {"suite", c.suite},
          {"seed", c.seed},
          {"s1", c.s1},
          {"s2", c.s2},
          {"s_members", c.s_members},
          {"lweak_trials", c.lweak_trials},
          {"lweak_window", c.lweak_window},
          {"amalgam_fields", c.amalgam_fields},
          {"duality_fields", c.duality_fields},
          {"duality_samples", c.duality_samples},
          {"linfty_symbols", c.linfty_symbols},
          {"trace_instances", c.trace_instances},
          {"r_triples", c.r_triples},
          {"trials_per_triple", c.trials_per_triple},
          {"search", {{"restarts", c.search.restarts}, {"steps", c.search.steps}}},
          {"theorem_plane_wave_trials", c.theorem_plane_wave_trials},
          {"theorem_modulated_trials", c.theorem_modulated_trials}};
}

void validate(const ExperimentConfig& c) {
  if (!kSuites.count(c.suite)) throw Error("config: unknown suite '" + c.suite + "'");
  if (c.grid.dim != 1) throw Error("config: the verification suites support n = 1 only");
  const double half_n = c.grid.dim / 2.0;
  const bool uses_s = c.suite != "lemmas";
  if (uses_s && (!(c.s1 > 0.0) || !(c.s2 > 0.0) || std::abs(c.s1 + c.s2 - half_n) > 1e-12))
    throw Error("config: s1 and s2 must be positive with s1 + s2 = n/2 (got s1 = " + format_real(c.s1) +
                ", s2 = " + format_real(c.s2) + ")");
  for (int v : {c.s_members, c.lweak_trials, c.lweak_window, c.amalgam_fields, c.duality_fields,
                c.duality_samples, c.linfty_symbols, c.trace_instances, c.trials_per_triple, c.search.restarts,
                c.theorem_plane_wave_trials, c.theorem_modulated_trials})
    if (v < 1) throw Error("config: ensemble sizes must be positive");
  if (c.search.steps < 0) throw Error("config: search steps must be nonnegative");
  if (c.r_triples.empty()) throw Error("config: r_triples must not be empty");
  for (const auto& r : c.r_triples)
    for (double v : r)
      if (!(v >= 1.0)) throw Error("config: radii in r_triples must be >= 1");
}

double frozen_bound(const ConstantsTable& constants, const std::string& id) {
  return constants.has(id) ? constants.get(id) : std::numeric_limits<double>::quiet_NaN();
}

namespace {

CheckResult frozen(const ConstantsTable& k, std::string id, std::string statement, double measured) {
  const double b = frozen_bound(k, id);
  return upper_check(std::move(id), std::move(statement), measured, b);
}

// Keeps one entry per id: the worst measured value, failing if any instance failed.
void merge_worst(std::vector<CheckResult>& acc, const CheckResult& c) {
  for (auto& a : acc)
    if (a.id == c.id) {
      const bool worse = c.lower_bound ? c.measured < a.measured : c.measured > a.measured;
      const bool pass = a.pass && c.pass;
      if (worse) a = c;
      a.pass = pass;
      return;
    }
  acc.push_back(c);
}

double max_rel_diff(std::span<const cplx> a, std::span<const cplx> b) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return s > 0.0 ? d / s : d;
}

// Larger of r and 1 / r: a two-sided bracket as one number.
double two_sided(double lo, double hi) { return std::max(hi, lo > 0.0 ? 1.0 / lo : kInf); }

}  // namespace

// ---------------------------------------------------------------------------
// Suites.

SuiteReport identities_suite(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "identities";
  const GridSpec& grid = c.grid;
  Rng rng = trial_rng(c.seed, 0x1d, 0);
  const SampledField f1 = random_packet_field(grid, rng);
  const SampledField f2 = random_packet_field(grid, rng);

  const SampledSymbol one =
      sample_symbol(grid, [](double, double, double) { return cplx(1.0, 0.0); }, std::array<double, 3>{1, 1, 1});
  const SampledField T = bilinear_apply(one, f1, f2);
  std::vector<cplx> prod(f1.values.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = f1.values[i] * f2.values[i];
  rep.add(upper_check("fixed.identity.constant_symbol", "constant symbol gives the pointwise product",
                      max_rel_diff(T.values, prod), kIdentityTol));

  const SampledField g = sample_space(grid, ScalarFn([](double x) { return cplx(std::exp(-0.5 * x * x), 0.0); }));
  const SampledField G = fourier_forward(g);
  const SampledField exact =
      sample_frequency(grid, ScalarFn([](double xi) { return cplx(std::sqrt(kTwoPi) * std::exp(-0.5 * xi * xi), 0.0); }));
  rep.add(upper_check("fixed.identity.gaussian_pair", "Gaussian Fourier pair", max_rel_diff(G.values, exact.values),
                      kIdentityTol));

  const SampledField F1 = fourier_forward(f1);
  rep.add(upper_check("fixed.identity.plancherel", "Plancherel ratio",
                      std::abs(energy(F1) / (kTwoPi * energy(f1)) - 1.0), kIdentityTol));
  rep.add(upper_check("fixed.identity.round_trip", "inversion round trip",
                      max_rel_diff(fourier_inverse(F1).values, f1.values), kIdentityTol));

  const DecompPair pair = DecompPair::build(1);
  double phi_res = 0.0, kc_res = 0.0;
  const double step = grid.xi_step / 4.0;
  for (double xi = -grid.xi_halfwidth; xi < grid.xi_halfwidth; xi += step) {
    double sp = 0.0, skc = 0.0;
    for (int k = static_cast<int>(std::floor(xi)) - 1; k <= static_cast<int>(std::floor(xi)) + 2; ++k) {
      sp += pair.phi(xi - k);
      skc += pair.kappa(xi - k) * pair.chi(xi - k);
    }
    phi_res = std::max(phi_res, std::abs(sp - 1.0));
    kc_res = std::max(kc_res, std::abs(skc - 1.0));
  }
  rep.add(upper_check("fixed.partition.phi", "translates of phi sum to one", phi_res, kPartitionTol));
  rep.add(upper_check("fixed.partition.kappa_chi", "kappa chi translates sum to one", kc_res, kPartitionTol));
  return rep;
}

SuiteReport s_operator_suite(const ExperimentConfig& c, const ConstantsTable& k) {
  SuiteReport rep;
  rep.suite = "s_operator";
  const SPropertiesReport s = check_s_properties(c.grid, {c.seed, c.s_members});
  rep.add(upper_check("fixed.s.convolution", "S commutes with convolution", s.convolution_residual, kIdentityTol));
  rep.add(upper_check("fixed.s.quasi_invariance", "S is quasi-invariant on unit distances", s.quasi_invariance, 4.0));
  static const char* names[3] = {"s.lattice_l1", "s.lattice_l2", "s.lattice_linf"};
  for (std::size_t i = 0; i < 3; ++i)
    rep.add(frozen(k, names[i], "lattice samples of S f are equivalent to S f",
                   two_sided(s.lattice_brackets[i][0], s.lattice_brackets[i][1])));
  rep.add(frozen(k, "s.pointwise_domination", "frequency-localized |f|^2 is dominated by S(|f|^2)",
                 s.pointwise_domination));
  rep.add(upper_check("fixed.s.l1_bound", "S is bounded on L^1 with norm pi", s.l1_bound, kPi));
  rep.details = {{"members", s.members},
                 {"convolution_residual", s.convolution_residual},
                 {"quasi_invariance", s.quasi_invariance},
                 {"lattice_brackets", s.lattice_brackets},
                 {"pointwise_domination", s.pointwise_domination},
                 {"l1_bound", s.l1_bound}};
  return rep;
}

SuiteReport product_weak_suite(const ExperimentConfig& c, const ConstantsTable& k) {
  SuiteReport rep;
  rep.suite = "product_weak";
  const auto e = product_lweak_ensemble(c.seed, c.lweak_trials, c.lweak_window, 4.0, 4.0);
  rep.add(frozen(k, "lweak.ratio", "trilinear sum with weak-l^p weights", e.max_ratio));
  rep.details = {{"trials", e.trials}, {"window", c.lweak_window}, {"max_ratio", e.max_ratio},
                 {"median_ratio", e.median_ratio}};
  return rep;
}

SuiteReport amalgam_suite(const ExperimentConfig& c, const ConstantsTable& k) {
  SuiteReport rep;
  rep.suite = "amalgam";
  const DecompPair pair = DecompPair::build(1);
  const Window indicator = [](double x) { return x >= -0.5 && x < 0.5 ? 1.0 : 0.0; };
  const Window gaussian = [](double x) { return std::exp(-0.5 * x * x); };
  const Window theta = [&pair](double x) { return pair.theta(x); };
  const double L = kTraceWeightExponent;
  const std::array<double, 3> ps{1.0, 2.0, kInf};

  double ind = 0.0, gau = 0.0, th = 0.0;
  double c_gau = kInf, c_th = kInf;
  for (int f = 0; f < c.amalgam_fields; ++f) {
    Rng rng = trial_rng(c.seed, 0xa3a1, static_cast<std::uint64_t>(f));
    const SampledField h = random_packet_field(c.grid, rng);
    for (double p : ps)
      for (double q : ps) {
        ind = std::max(ind, std::abs(check_amalgam_equiv(h, indicator, p, q, L).ratio - 1.0));
        const auto rg = check_amalgam_equiv(h, gaussian, p, q, L);
        const auto rt = check_amalgam_equiv(h, theta, p, q, L);
        gau = std::max(gau, two_sided(rg.ratio, rg.ratio));
        th = std::max(th, two_sided(rt.ratio, rt.ratio));
        c_gau = std::min(c_gau, rg.hypothesis_c);
        c_th = std::min(c_th, rt.hypothesis_c);
      }
  }
  rep.add(upper_check("fixed.amalgam.indicator", "indicator window reproduces the amalgam norm", ind, 1e-12));
  rep.add(frozen(k, "amalgam.gaussian_window", "amalgam norm via a Gaussian window", gau));
  rep.add(frozen(k, "amalgam.theta_window", "amalgam norm via the duality window", th));

  double cs = 0.0, sampled_over_direct = 0.0, bracket = 0.0;
  for (int f = 0; f < c.duality_fields; ++f) {
    Rng rng = trial_rng(c.seed, 0xd0a1, static_cast<std::uint64_t>(f));
    const SampledField h = random_packet_field(c.grid, rng);
    const DualityResult d = check_duality(h, pair, rng, c.duality_samples);
    cs = std::max(cs, d.sampled / d.windowed);
    sampled_over_direct = std::max(sampled_over_direct, d.sampled / d.amalgam);
    bracket = std::max(bracket, two_sided(d.amalgam / d.windowed, d.amalgam / d.windowed));
  }
  rep.add(upper_check("fixed.duality.cauchy_schwarz", "sampled pairings never exceed the windowed norm", cs,
                      1.0 + 1e-12));
  rep.add(frozen(k, "duality.sampled_over_direct", "direct (L^2,l^1) norm dominates sampled duality",
                 sampled_over_direct));
  rep.add(frozen(k, "duality.window_bracket", "(L^2,l^1) norm equals the theta-windowed norm", bracket));
  rep.details = {{"hypothesis_c_gaussian", c_gau}, {"hypothesis_c_theta", c_th}, {"L", L}};
  return rep;
}

SuiteReport linfty_suite(const ExperimentConfig& c, const ConstantsTable& k) {
  SuiteReport rep;
  rep.suite = "linfty";
  const LinftyReport r = l2ul_linfty_ensemble(c.seed, c.linfty_symbols);
  rep.add(lower_check("fixed.linfty.pieces", "at least 100 band-limited pieces", r.pieces, 100));
  rep.add(upper_check("fixed.linfty.lower", "sup norm is at least the L^2_ul norm", 1.0 - r.min_ratio, 1e-8));
  rep.add(frozen(k, "remark.C_eq", "sup norm is bounded by the L^2_ul norm on band-limited pieces", r.max_ratio));
  rep.add(upper_check("fixed.linfty.modulation", "ratio is modulation invariant", r.modulation_deviation, 1e-12));
  rep.details = {{"pieces", r.pieces}, {"min_ratio", r.min_ratio}, {"max_ratio", r.max_ratio}};
  return rep;
}

SuiteReport trace_suite(const ExperimentConfig& c, const ConstantsTable& k, std::vector<ProofTrace>* traces) {
  SuiteReport rep;
  rep.suite = "trace";
  const DecompPair pair = DecompPair::build(1);
  nlohmann::json inst = nlohmann::json::array();
  for (int i = 0; i < c.trace_instances; ++i) {
    const TraceInstance in = make_trace_instance(c.grid, c.seed, i);
    ProofTrace t = proof_trace(in.sigma, in.f1, in.f2, in.g, in.mu, pair, c.s1, c.s2);
    for (const auto& chk : check_trace(t, k)) merge_worst(rep.checks, chk);
    inst.push_back({{"index", i}, {"mu", t.mu}, {"radii", t.radii}, {"I_abs", std::abs(t.I_value)}});
    if (traces) traces->push_back(std::move(t));
  }
  rep.details = {{"instances", inst}, {"L", kTraceWeightExponent}};
  return rep;
}

SuiteReport prop_suite(const ExperimentConfig& c, const ConstantsTable& k, EnsembleStats* stats) {
  SuiteReport rep;
  rep.suite = "prop";
  EnsembleConfig e;
  e.seed = c.seed;
  e.r_triples = c.r_triples;
  e.trials_per_triple = c.trials_per_triple;
  e.search = c.search;
  e.s1 = c.s1;
  e.s2 = c.s2;
  e.grid = c.grid;
  EnsembleStats st = estimate_prop_constant(e);
  rep.add(frozen(k, "prop.C_prop", "operator bound scales as (R0 R1 R2)^{1/2} times the L^2_ul norm", st.max_ratio));
  for (const auto& [name, slope] : st.fitted_exponents)
    rep.add(upper_check("fixed.prop.exponent." + name, "growth exponent in " + name, slope, kExponentLimit));
  rep.details = to_json(st);
  if (stats) *stats = std::move(st);
  return rep;
}

SuiteReport theorem_suite(const ExperimentConfig& c, const ConstantsTable& k, TheoremStats* stats) {
  SuiteReport rep;
  rep.suite = "theorem";
  TheoremConfig t;
  t.seed = c.seed;
  t.grid = c.grid;
  t.search = c.search;
  t.plane_wave_trials = c.theorem_plane_wave_trials;
  t.modulated_trials = c.theorem_modulated_trials;
  const std::array<double, 2> own{c.s1, c.s2};
  if (std::find(t.exponents.begin(), t.exponents.end(), own) == t.exponents.end()) t.exponents.push_back(own);
  TheoremStats st = check_theorem(t);
  rep.add(frozen(k, "theorem.C_thm", "(L^2,l^1) bound by the M^{inf,1} norm and Sobolev norms", st.max_ratio));
  rep.add(upper_check("fixed.theorem.embedding", "L^r <= (L^2,l^r) <= (L^2,l^1) with constant 1",
                      st.embedding_excess, 1e-12));
  rep.add(frozen(k, "theorem.modulation_spread", "bound is stable under modulation of the symbol",
                 st.modulation_spread));
  rep.add(frozen(k, "theorem.hardy_ratio", "local Hardy norm of the output is controlled", st.hardy_ratio));
  nlohmann::json by = nlohmann::json::object();
  for (const auto& [key, s] : st.by_exponents) by[key] = to_json(s);
  rep.details = {{"by_exponents", by},
                 {"embedding_excess", st.embedding_excess},
                 {"modulation_spread", st.modulation_spread},
                 {"hardy_ratio", st.hardy_ratio}};
  if (stats) *stats = std::move(st);
  return rep;
}

// ---------------------------------------------------------------------------
// Orchestration.

bool RunOutput::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteReport& s) { return s.passed(); });
}

namespace {

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string file_key(double v) {
  std::string s = format_real(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& c, const ConstantsTable& constants) {
  validate(c);
  RunOutput out;
  const bool all = c.suite == "all";
  if (all || c.suite == "lemmas") {
    out.suites.push_back(identities_suite(c));
    out.suites.push_back(s_operator_suite(c, constants));
    out.suites.push_back(product_weak_suite(c, constants));
    out.suites.push_back(amalgam_suite(c, constants));
    out.suites.push_back(linfty_suite(c, constants));
  }
  if (all || c.suite == "prop") {
    std::vector<ProofTrace> traces;
    out.suites.push_back(trace_suite(c, constants, &traces));
    for (std::size_t i = 0; i < traces.size(); ++i)
      out.files["trace/instance_" + std::to_string(i) + ".json"] = to_json(traces[i]).dump(1) + "\n";
    EnsembleStats st;
    out.suites.push_back(prop_suite(c, constants, &st));
    std::ostringstream trials, fit;
    write_ensemble_csv(trials, st);
    write_fit_csv(fit, st);
    out.files["prop_trials.csv"] = trials.str();
    out.files["prop_fit.csv"] = fit.str();
  }
  if (all || c.suite == "theorem") {
    TheoremStats st;
    out.suites.push_back(theorem_suite(c, constants, &st));
    for (const auto& [key, s] : st.by_exponents) {
      const auto comma = key.find(',');
      const std::string name = "theorem_trials_s" + file_key(std::stod(key.substr(0, comma))) + "_" +
                               file_key(std::stod(key.substr(comma + 1))) + ".csv";
      std::ostringstream os;
      write_ensemble_csv(os, s);
      out.files[name] = os.str();
    }
  }

  std::ostringstream checks;
  checks << "suite,id,statement,measured,bound,pass\n";
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : out.suites) {
    suites.push_back(to_json(s));
    for (const auto& ch : s.checks)
      checks << s.suite << ',' << ch.id << ',' << csv_field(ch.statement) << ',' << format_real(ch.measured) << ','
             << format_real(ch.bound) << ',' << (ch.pass ? "PASS" : "FAIL") << '\n';
  }
  out.files["checks.csv"] = checks.str();
  const nlohmann::json summary = {{"config", to_json(c)},
                                  {"constants_version", constants.version},
                                  {"passed", out.passed()},
                                  {"suites", suites}};
  out.files["summary.json"] = summary.dump(2) + "\n";
  return out;
}

ConstantsTable calibrate(const std::vector<SuiteReport>& suites, double headroom) {
  ConstantsTable t;
  t.version = 1;
  t.source = "measured on the seeded default configuration; value = " + format_real(headroom) + " x measured";
  for (const auto& s : suites)
    for (const auto& ch : s.checks) {
      if (ch.id.rfind("fixed.", 0) == 0) continue;
      auto it = t.entries.find(ch.id);
      if (it == t.entries.end() || ch.measured > it->second.measured)
        t.entries[ch.id] = {headroom * ch.measured, ch.measured, s.suite + ": " + ch.statement};
    }
  return t;
}

}  // namespace bpdo
