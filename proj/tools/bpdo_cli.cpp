#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bpdo/constants.hpp"
#include "bpdo/decomp.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/op.hpp"
#include "bpdo/serialize.hpp"
#include "bpdo/spaces.hpp"
#include "bpdo/suites.hpp"
#include "bpdo/verify.hpp"

namespace fs = std::filesystem;
using namespace bpdo;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw Error("not a number: '" + tok + "'");
    }
    if (used != tok.size()) throw Error("not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

/// "X,hx,Xi,hxi" for a one-dimensional grid.
GridSpec parse_grid(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() != 4) throw Error("--grid expects X,hx,Xi,hxi, got '" + s + "'");
  return make_grid(1, v[0], v[1], v[2], v[3]);
}

std::array<double, 3> parse_triple(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() != 3) throw Error("R-triple expects R0,R1,R2, got '" + s + "'");
  return {v[0], v[1], v[2]};
}

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "Inf" || s == "infty") return kInf;
  const auto v = split_numbers(s, ',');
  if (v.size() != 1) throw Error("bad exponent '" + s + "'");
  return v[0];
}

struct RunFlags {
  std::string config_path;
  std::optional<std::string> suite;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
  std::vector<std::string> r_triples;
  std::optional<double> s1, s2;
  std::string out = "bpdo_out";
  std::optional<std::string> constants;
  std::optional<std::string> calibrate;
};

ExperimentConfig resolve_config(const RunFlags& f) {
  nlohmann::json j = nlohmann::json::object();
  if (!f.config_path.empty()) {
    std::ifstream is(f.config_path);
    if (!is) throw Error("cannot open config '" + f.config_path + "'");
    try {
      j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed config '" + f.config_path + "': " + e.what());
    }
  }
  ExperimentConfig c = config_from_json(j);
  if (f.suite) c.suite = *f.suite;
  if (f.seed) c.seed = *f.seed;
  if (f.grid) c.grid = parse_grid(*f.grid);
  if (!f.r_triples.empty()) {
    c.r_triples.clear();
    for (const auto& t : f.r_triples) c.r_triples.push_back(parse_triple(t));
  }
  if (f.s1) c.s1 = *f.s1;
  if (f.s2) c.s2 = *f.s2;
  validate(c);
  return c;
}

void write_files(const fs::path& dir, const std::map<std::string, std::string>& files) {
  for (const auto& [name, body] : files) {
    const fs::path p = dir / name;
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw Error("cannot write '" + p.string() + "'");
    os << body;
  }
}

int cmd_run(const RunFlags& f) {
  const ExperimentConfig c = resolve_config(f);
  ConstantsTable constants;
  if (f.calibrate) {
    constants.version = 0;
    constants.source = "calibration";
  } else {
    constants = load_constants(f.constants ? std::optional<fs::path>(*f.constants) : std::nullopt);
  }
  std::cout << "config " << to_json(c).dump() << "\n";
  std::cout << "constants " << (f.calibrate ? std::string("(calibrating)") : constants.source) << "\n";

  const RunOutput out = run_experiment(c, constants);
  write_files(f.out, out.files);

  bool fixed_ok = true;
  for (const auto& s : out.suites)
    for (const auto& ch : s.checks) {
      std::cout << (ch.pass ? "PASS " : "FAIL ") << s.suite << ' ' << ch.id << "  " << ch.statement
                << "  measured=" << ch.measured << " bound=" << ch.bound << "\n";
      if (!ch.pass && ch.id.rfind("fixed.", 0) == 0) fixed_ok = false;
    }

  if (f.calibrate) {
    save_constants(*f.calibrate, calibrate(out.suites));
    std::cout << "wrote constants table " << *f.calibrate << "\n";
    return fixed_ok ? kExitPass : kExitCheckFailure;
  }
  std::cout << (out.passed() ? "overall PASS" : "overall FAIL") << "\n";
  return out.passed() ? kExitPass : kExitCheckFailure;
}

NormResult field_norm(const SampledField& f, const std::string& space) {
  static const std::regex lp(R"(L(\d+(?:\.\d+)?|inf))");
  static const std::regex sob(R"(H\^(-?\d+(?:\.\d+)?))");
  static const std::regex amal(R"(\(L(\d+(?:\.\d+)?|inf),l(\d+(?:\.\d+)?|inf)\))");
  static const std::regex mod(R"(M\^\{?(\d+(?:\.\d+)?|inf),(\d+(?:\.\d+)?|inf)\}?)");
  std::smatch m;
  if (space == "L2ul") return uniform_local_l2(f);
  if (space == "h1") return local_hardy_norm(f);
  if (std::regex_match(space, m, lp)) return lp_norm(f, parse_exponent(m[1]));
  if (std::regex_match(space, m, sob)) return sobolev_norm(f, std::stod(m[1]));
  if (std::regex_match(space, m, amal)) return amalgam_norm(f, parse_exponent(m[1]), parse_exponent(m[2]));
  if (std::regex_match(space, m, mod))
    return modulation_norm(f, parse_exponent(m[1]), parse_exponent(m[2]), DecompPair::build(f.grid.dim));
  throw Error("unknown space '" + space + "' for a field");
}

NormResult symbol_norm(const SampledSymbol& s, const std::string& space) {
  static const std::regex mod(R"(M\^\{?(\d+(?:\.\d+)?|inf),(\d+(?:\.\d+)?|inf)\}?)");
  std::smatch m;
  if (space == "L2ul") return uniform_local_l2(s);
  if (std::regex_match(space, m, mod))
    return modulation_norm(s, parse_exponent(m[1]), parse_exponent(m[2]), DecompPair::build(s.grid.dim));
  throw Error("unknown space '" + space + "' for a symbol");
}

int cmd_norms(const std::string& input, const std::vector<std::string>& spaces, const std::string& out) {
  const SampledData d = read_data(input);
  std::vector<NormResult> rows;
  for (const auto& sp : spaces) {
    if (const auto* f = std::get_if<SampledField>(&d))
      rows.push_back(field_norm(*f, sp));
    else
      rows.push_back(symbol_norm(std::get<SampledSymbol>(d), sp));
  }
  write_norm_table(std::cout, rows);
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw Error("cannot write '" + out + "'");
    write_norm_table(os, rows);
  }
  return kExitPass;
}

int cmd_apply(const std::string& sym, const std::string& f1p, const std::string& f2p, const std::string& out,
              bool allow_alias) {
  const SampledData s = read_data(sym);
  const SampledData a = read_data(f1p);
  const SampledData b = read_data(f2p);
  if (!std::holds_alternative<SampledSymbol>(s)) throw Error("'" + sym + "' is not a symbol");
  if (!std::holds_alternative<SampledField>(a) || !std::holds_alternative<SampledField>(b))
    throw Error("apply expects two field inputs");
  ApplyOptions opts;
  opts.allow_alias = allow_alias;
  const SampledField r =
      bilinear_apply(std::get<SampledSymbol>(s), std::get<SampledField>(a), std::get<SampledField>(b), opts);
  if (fs::path(out).extension() == ".json")
    write_json(out, r);
  else
    write_binary(out, r);
  std::cout << "wrote " << out << "\n";
  return kExitPass;
}

int cmd_trace(const RunFlags& f, int index) {
  const ExperimentConfig c = resolve_config(f);
  const ConstantsTable constants =
      load_constants(f.constants ? std::optional<fs::path>(*f.constants) : std::nullopt);
  const TraceInstance in = make_trace_instance(c.grid, c.seed, index);
  const ProofTrace t = proof_trace(in.sigma, in.f1, in.f2, in.g, in.mu, DecompPair::build(1), c.s1, c.s2);
  nlohmann::json j = to_json(t);
  bool ok = true;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& ch : check_trace(t, constants)) {
    checks.push_back(to_json(ch));
    ok = ok && ch.pass;
  }
  j["checks"] = checks;
  j["config"] = to_json(c);
  j["index"] = index;
  const std::string body = j.dump(1) + "\n";
  if (f.out.empty() || f.out == "-") {
    std::cout << body;
  } else {
    std::ofstream os(f.out);
    if (!os) throw Error("cannot write '" + f.out + "'");
    os << body;
  }
  return ok ? kExitPass : kExitCheckFailure;
}

void add_common(CLI::App* app, RunFlags& f) {
  app->add_option("--config", f.config_path, "JSON experiment configuration");
  app->add_option("--seed", f.seed, "master seed (default 7)");
  app->add_option("--grid", f.grid, "X,hx,Xi,hxi (default 16,0.125,8,0.125)");
  app->add_option("--s1", f.s1, "Sobolev exponent of the first argument (default 0.25)");
  app->add_option("--s2", f.s2, "Sobolev exponent of the second argument (default 0.25)");
  app->add_option("--constants", f.constants, "frozen constants table (default: BPDO_CONSTANTS_PATH or built-in)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear pseudo-differential operator verification harness"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run verification suites and write reports");
  add_common(run, run_flags);
  run->add_option("--suite", run_flags.suite, "lemmas | prop | theorem | all (default all)");
  run->add_option("--r-triples", run_flags.r_triples, "R0,R1,R2 triples (default {1,2,4}^3)");
  run->add_option("--out", run_flags.out, "report directory (default bpdo_out)");
  run->add_option("--calibrate", run_flags.calibrate, "write a constants table from this run instead of checking");

  std::string norms_input, norms_out;
  std::vector<std::string> norms_spaces;
  auto* norms = app.add_subcommand("norms", "evaluate norms of a stored field or symbol");
  norms->add_option("input", norms_input, "field or symbol file")->required();
  norms->add_option("spaces", norms_spaces, "space ids: Lp, H^s, (Lp,lq), L2ul, M^{p,q}, h1")->required();
  norms->add_option("--out", norms_out, "also write the table to this CSV file");

  std::string sym_path, f1_path, f2_path, apply_out;
  bool allow_alias = false;
  auto* apply = app.add_subcommand("apply", "evaluate T_sigma(f1, f2) on stored inputs");
  apply->add_option("symbol", sym_path)->required();
  apply->add_option("f1", f1_path)->required();
  apply->add_option("f2", f2_path)->required();
  apply->add_option("--out", apply_out, "output file (.json or binary)")->required();
  apply->add_flag("--allow-alias", allow_alias, "skip the band-limit guard on the inputs");

  RunFlags trace_flags;
  trace_flags.out = "-";
  int trace_index = 1;
  auto* trace = app.add_subcommand("trace", "dump one proof trace as JSON");
  add_common(trace, trace_flags);
  trace->add_option("--index", trace_index, "instance index (default 1; 0 is the constant symbol)");
  trace->add_option("--out", trace_flags.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*norms) return cmd_norms(norms_input, norms_spaces, norms_out);
    if (*apply) return cmd_apply(sym_path, f1_path, f2_path, apply_out, allow_alias);
    if (*trace) return cmd_trace(trace_flags, trace_index);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
