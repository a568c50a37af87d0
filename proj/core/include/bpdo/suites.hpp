#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bpdo/constants.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/verify.hpp"

namespace bpdo {

/**
 * Everything a run needs. Loaded from one JSON document; unspecified fields
 * keep the defaults below, and the resolved values are echoed in every report.
 */
struct ExperimentConfig {
  GridSpec grid = default_grid();
  std::string suite = "all";  // lemmas | prop | theorem | all
  std::uint64_t seed = 7;
  double s1 = 0.25;
  double s2 = 0.25;

  int s_members = 50;
  int lweak_trials = 10000;
  int lweak_window = 32;
  int amalgam_fields = 5;
  int duality_fields = 5;
  int duality_samples = 200;
  int linfty_symbols = 4;

  int trace_instances = 10;
  std::vector<std::array<double, 3>> r_triples = default_r_triples();
  int trials_per_triple = 20;
  SearchConfig search;

  int theorem_plane_wave_trials = 12;
  int theorem_modulated_trials = 12;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
/// Throws Error on an invalid configuration (unknown suite, s1 + s2 != n / 2, bad counts).
void validate(const ExperimentConfig& c);

/// Bound for a frozen check id; NaN (so the check fails) if the table lacks it.
double frozen_bound(const ConstantsTable& constants, const std::string& id);

/// Transform identities and partition-of-unity residuals (fixed tolerances).
SuiteReport identities_suite(const ExperimentConfig& c);
inline constexpr double kIdentityTol = 1e-6;
inline constexpr double kPartitionTol = 1e-10;

SuiteReport s_operator_suite(const ExperimentConfig& c, const ConstantsTable& k);
SuiteReport product_weak_suite(const ExperimentConfig& c, const ConstantsTable& k);
SuiteReport amalgam_suite(const ExperimentConfig& c, const ConstantsTable& k);
SuiteReport linfty_suite(const ExperimentConfig& c, const ConstantsTable& k);
SuiteReport trace_suite(const ExperimentConfig& c, const ConstantsTable& k,
                        std::vector<ProofTrace>* traces = nullptr);
SuiteReport prop_suite(const ExperimentConfig& c, const ConstantsTable& k, EnsembleStats* stats = nullptr);
SuiteReport theorem_suite(const ExperimentConfig& c, const ConstantsTable& k, TheoremStats* stats = nullptr);

inline constexpr double kExponentLimit = 0.65;  // 1/2 plus slack 0.15

/// Report files keyed by relative path, plus the outcome.
struct RunOutput {
  std::vector<SuiteReport> suites;
  std::map<std::string, std::string> files;
  bool passed() const;
};

/// Runs the suites selected by c.suite and renders every report deterministically.
RunOutput run_experiment(const ExperimentConfig& c, const ConstantsTable& constants);

/// Table whose values are headroom times the worst measured value of each frozen check.
ConstantsTable calibrate(const std::vector<SuiteReport>& suites, double headroom = 1.25);

}  // namespace bpdo
