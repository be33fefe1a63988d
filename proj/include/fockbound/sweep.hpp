#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fockbound/config.hpp"
#include "fockbound/forward_model.hpp"

namespace fockbound::cli {

inline constexpr double kBracketEps = 1e-7;  // solver agreement tolerance

struct SweepRow {
  double sweep_value = 0.0;
  double theory = std::numeric_limits<double>::quiet_NaN();
  double classical = std::numeric_limits<double>::quiet_NaN();
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  double leftover_max = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<SweepRow> rows;
  nlohmann::json metadata;

  int violations() const;  // bracket failures among rows with ok status
  int failures() const;    // rows whose pipeline or solver failed
};

/// Delay sweep of the generalized two-photon dip: one table per configured
/// target, all bounds of one sweep point coming from a single program build.
std::vector<SweepTable> run_hom_dip(const ExperimentConfig& cfg, int threads);

/// Tritter three-coincidence sweeps: scenario "delay" sweeps the relative
/// arrival time with equal polarizations; scenario "phase" sweeps the triad
/// phase at a fixed overlap using explicitly constructed polarization
/// vectors (recorded in the table metadata).
std::vector<SweepTable> run_tritter(const ExperimentConfig& cfg, int threads);

/// Single-point pipeline: synthesize (or load) a dataset, build the program,
/// bound every configured target.
nlohmann::json run_bound(const ExperimentConfig& cfg);

/// Reference probabilities for the configured targets.
std::string run_oracle(const ExperimentConfig& cfg);

/// Full decoy-setting cartesian grid for the configured experiment.
std::vector<PulseConfiguration> build_setting_grid(const ExperimentConfig& cfg,
                                                   const InternalStateSet& internal);

void write_csv(const SweepTable& table, std::ostream& os);
void write_csv_file(const SweepTable& table, const std::string& path);
SweepTable read_csv_file(const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace fockbound::cli
