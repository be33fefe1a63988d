#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fockbound/estimator.hpp"
#include "fockbound/internal_states.hpp"
#include "fockbound/photon_vector.hpp"
#include "fockbound/unitary.hpp"

namespace fockbound::cli {

/// Raised for any malformed or physically invalid configuration; the CLI
/// maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed experiment description. Grids are symmetric per port; every value
/// can be supplied in the JSON document, and anything omitted falls back to
/// the experiment's defaults.
struct ExperimentConfig {
  std::string network_kind = "beamsplitter";
  double eta = 0.5;
  int ports = 2;
  Eigen::MatrixXcd matrix;  // kind == "matrix"

  std::vector<double> intensity_grid;
  std::vector<double> delays;
  double fwhm = 1.0;
  std::vector<Eigen::VectorXcd> polarizations;  // empty: identical states

  double eta_d = 0.8;
  double p_dark = 1e-6;
  std::vector<double> omega_grid;

  int m_cut = 10;
  std::vector<std::pair<PhotonVector, PhotonVector>> targets;

  double sweep_start = -3.0;
  double sweep_stop = 3.0;
  double sweep_step = 0.25;

  std::string tritter_scenario = "delay";
  double tritter_overlap = 0.5;
  int phase_steps = 25;

  std::string dataset_path;
  std::string output_path;

  ModeUnitary build_network() const;
  std::vector<double> kappa_grid() const;
  InternalStateSet internal_states(const std::vector<double>& delays_override) const;
};

/// Parses and validates a config document. Unknown keys anywhere in the
/// document are rejected.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

}  // namespace fockbound::cli
