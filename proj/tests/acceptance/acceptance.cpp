// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "bpdo/constants.hpp"
#include "bpdo/suites.hpp"

using namespace bpdo;

namespace {

constexpr double kIdentitiesBudgetSeconds = 10.0;
constexpr double kProductWeakBudgetSeconds = 60.0;
constexpr double kPropBudgetSeconds = 15.0 * 60.0;

struct Timed {
  SuiteReport report;
  double seconds = 0.0;
};

Timed timed(const std::function<SuiteReport()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Timed t{fn(), 0.0};
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

bool checks_pass(const SuiteReport& r, const std::string& prefix) {
  bool any = false;
  for (const auto& c : r.checks)
    if (c.id.rfind(prefix, 0) == 0) {
      any = true;
      if (!c.pass) return false;
    }
  return any;
}

void print_failures(const SuiteReport& r) {
  for (const auto& c : r.checks)
    if (!c.pass)
      std::cout << "    failing: " << c.id << " (" << c.statement << ") measured " << c.measured << " bound "
                << c.bound << "\n";
}

int failures = 0;

void verdict(int n, bool ok, const std::string& what, const std::string& extra = "") {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << "  " << what;
  if (!extra.empty()) std::cout << "  [" << extra << "]";
  std::cout << "\n" << std::flush;
  if (!ok) ++failures;
}

std::string secs(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

}  // namespace

int main() {
  const ConstantsTable k = load_constants();
  const ExperimentConfig c;  // seed 7, default grid, {1,2,4}^3 with 20 trials each
  std::cout << "constants: " << k.source << " (version " << k.version << ")\n";

  const Timed ident = timed([&] { return identities_suite(c); });
  verdict(1, checks_pass(ident.report, "fixed.identity.") && ident.seconds < kIdentitiesBudgetSeconds,
          "analytic identities within 1e-6", secs(ident.seconds));
  verdict(2, checks_pass(ident.report, "fixed.partition."), "partition residuals below 1e-10");
  if (!ident.report.passed()) print_failures(ident.report);

  const Timed s = timed([&] { return s_operator_suite(c, k); });
  verdict(3, s.report.passed(), "properties of S on " + std::to_string(c.s_members) + "-member ensembles");
  print_failures(s.report);

  const Timed lw = timed([&] { return product_weak_suite(c, k); });
  verdict(4, lw.report.passed() && lw.seconds < kProductWeakBudgetSeconds,
          "weak-l^p product bound over " + std::to_string(c.lweak_trials) + " trials", secs(lw.seconds));
  print_failures(lw.report);

  const Timed prop = timed([&] { return prop_suite(c, k); });
  verdict(5, prop.report.passed() && prop.seconds < kPropBudgetSeconds,
          "operator-norm scaling over " + std::to_string(c.r_triples.size()) + " R-triples", secs(prop.seconds));
  print_failures(prop.report);

  const Timed trace = timed([&] { return trace_suite(c, k); });
  verdict(6, trace.report.passed(), "proof trace on " + std::to_string(c.trace_instances) + " instances",
          secs(trace.seconds));
  print_failures(trace.report);

  const Timed thm = timed([&] { return theorem_suite(c, k); });
  verdict(7, checks_pass(thm.report, "theorem.C_thm") && checks_pass(thm.report, "fixed.theorem.embedding"),
          "boundedness ratios and embedding chain", secs(thm.seconds));
  print_failures(thm.report);

  const Timed lin = timed([&] { return linfty_suite(c, k); });
  verdict(8, lin.report.passed(), "sup norm against L^2_ul on band-limited pieces", secs(lin.seconds));
  print_failures(lin.report);

  const RunOutput a = run_experiment(c, k);
  const RunOutput b = run_experiment(c, k);
  verdict(9, !a.files.empty() && a.files == b.files,
          "two seeded runs give byte-identical reports (" + std::to_string(a.files.size()) + " files)");

  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << "\n";
  return failures == 0 ? 0 : 1;
}
