#include "fockbound/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace fockbound::cli {

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
  }
}

double get_number(const nlohmann::json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return obj[key].get<double>();
}

int get_int(const nlohmann::json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ConfigError("config: '" + key + "' must be an integer");
  }
  return obj[key].get<int>();
}

std::vector<double> get_number_array(const nlohmann::json& obj, const std::string& key) {
  if (!obj.contains(key)) return {};
  if (!obj[key].is_array()) throw ConfigError("config: '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) throw ConfigError("config: '" + key + "' entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::complex<double> parse_complex(const nlohmann::json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError("config: " + where + " entries must be [re, im] pairs");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ModeUnitary ExperimentConfig::build_network() const {
  try {
    if (network_kind == "beamsplitter") return ModeUnitary::beamsplitter(eta);
    if (network_kind == "tritter") return ModeUnitary::tritter();
    if (network_kind == "identity") return ModeUnitary::identity(ports);
    if (network_kind == "fourier") return ModeUnitary::fourier(ports);
    if (network_kind == "matrix") return ModeUnitary(matrix);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: network rejected: ") + e.what());
  }
  throw ConfigError("config: unknown network kind '" + network_kind + "'");
}

std::vector<double> ExperimentConfig::kappa_grid() const {
  std::vector<double> kappas;
  for (double w : omega_grid) kappas.push_back(w * eta_d);
  return kappas;
}

InternalStateSet ExperimentConfig::internal_states(
    const std::vector<double>& delays_override) const {
  if (polarizations.empty()) {
    return InternalStateSet::delays_only(delays_override, fwhm);
  }
  return InternalStateSet(polarizations, delays_override, fwhm);
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  reject_unknown_keys(doc, "top level",
                      {"network", "source", "detectors", "estimator", "sweep", "tritter",
                       "dataset", "output"});
  ExperimentConfig cfg;

  if (doc.contains("network")) {
    const auto& net = doc["network"];
    if (!net.is_object()) throw ConfigError("config: 'network' must be an object");
    reject_unknown_keys(net, "network", {"kind", "eta", "ports", "entries"});
    if (!net.contains("kind") || !net["kind"].is_string()) {
      throw ConfigError("config: network.kind is required");
    }
    cfg.network_kind = net["kind"].get<std::string>();
    cfg.eta = get_number(net, "eta", 0.5);
    cfg.ports = get_int(net, "ports", 2);
    if (cfg.network_kind == "matrix") {
      if (!net.contains("entries") || !net["entries"].is_array() || net["entries"].empty()) {
        throw ConfigError("config: network.entries required for kind 'matrix'");
      }
      const auto& rows = net["entries"];
      const auto n = static_cast<Eigen::Index>(rows.size());
      cfg.matrix.resize(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        if (!rows[static_cast<std::size_t>(r)].is_array() ||
            static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != n) {
          throw ConfigError("config: network.entries must be a square matrix");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
          cfg.matrix(r, c) =
              parse_complex(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                            "network.entries");
        }
      }
      cfg.ports = static_cast<int>(n);
    }
  }
  if (cfg.network_kind == "beamsplitter") cfg.ports = 2;
  if (cfg.network_kind == "tritter") cfg.ports = 3;
  if (cfg.ports <= 0) throw ConfigError("config: network.ports must be positive");

  const auto defaults = estimator::default_settings(
      cfg.ports >= 3 ? estimator::ExperimentKind::Tritter
                     : estimator::ExperimentKind::Beamsplitter);
  cfg.m_cut = defaults.m_cut;
  cfg.p_dark = defaults.p_dark;

  if (doc.contains("source")) {
    const auto& src = doc["source"];
    if (!src.is_object()) throw ConfigError("config: 'source' must be an object");
    reject_unknown_keys(src, "source", {"intensity_grid", "delays", "fwhm", "polarizations"});
    cfg.intensity_grid = get_number_array(src, "intensity_grid");
    cfg.delays = get_number_array(src, "delays");
    cfg.fwhm = get_number(src, "fwhm", 1.0);
    if (src.contains("polarizations")) {
      if (!src["polarizations"].is_array()) {
        throw ConfigError("config: source.polarizations must be an array");
      }
      for (const auto& vec : src["polarizations"]) {
        if (!vec.is_array() || vec.empty()) {
          throw ConfigError("config: each polarization must be a non-empty array");
        }
        Eigen::VectorXcd v(static_cast<Eigen::Index>(vec.size()));
        for (std::size_t i = 0; i < vec.size(); ++i) {
          v(static_cast<Eigen::Index>(i)) = parse_complex(vec[i], "source.polarizations");
        }
        cfg.polarizations.push_back(std::move(v));
      }
    }
  }
  if (cfg.intensity_grid.empty()) cfg.intensity_grid = defaults.intensities;
  if (cfg.delays.empty()) cfg.delays.assign(static_cast<std::size_t>(cfg.ports), 0.0);

  if (doc.contains("detectors")) {
    const auto& det = doc["detectors"];
    if (!det.is_object()) throw ConfigError("config: 'detectors' must be an object");
    reject_unknown_keys(det, "detectors", {"eta_d", "p_dark", "omega_grid"});
    cfg.eta_d = get_number(det, "eta_d", 0.8);
    cfg.p_dark = get_number(det, "p_dark", cfg.p_dark);
    cfg.omega_grid = get_number_array(det, "omega_grid");
  }
  if (cfg.omega_grid.empty()) {
    for (double k : defaults.efficiencies) cfg.omega_grid.push_back(k / cfg.eta_d);
  }

  if (doc.contains("estimator")) {
    const auto& est = doc["estimator"];
    if (!est.is_object()) throw ConfigError("config: 'estimator' must be an object");
    reject_unknown_keys(est, "estimator", {"m_cut", "targets"});
    cfg.m_cut = get_int(est, "m_cut", cfg.m_cut);
    if (est.contains("targets")) {
      if (!est["targets"].is_array()) throw ConfigError("config: estimator.targets must be an array");
      for (const auto& t : est["targets"]) {
        if (!t.is_object()) throw ConfigError("config: each target must be an object");
        reject_unknown_keys(t, "target", {"n", "x"});
        if (!t.contains("n") || !t.contains("x")) {
          throw ConfigError("config: targets need both 'n' and 'x'");
        }
        std::vector<int> n, x;
        for (const auto& v : t["n"]) {
          if (!v.is_number_integer() || v.get<int>() < 0) {
            throw ConfigError("config: target occupation numbers must be non-negative integers");
          }
          n.push_back(v.get<int>());
        }
        for (const auto& v : t["x"]) {
          if (!v.is_number_integer() || v.get<int>() < 0) {
            throw ConfigError("config: target occupation numbers must be non-negative integers");
          }
          x.push_back(v.get<int>());
        }
        cfg.targets.emplace_back(PhotonVector(std::move(n)), PhotonVector(std::move(x)));
      }
    }
  }
  if (cfg.targets.empty()) {
    if (cfg.ports == 2) {
      cfg.targets.emplace_back(PhotonVector{3, 3}, PhotonVector{3, 3});
    } else if (cfg.ports == 3) {
      cfg.targets.emplace_back(PhotonVector{1, 1, 1}, PhotonVector{1, 1, 1});
    }
  }

  if (doc.contains("sweep")) {
    const auto& sw = doc["sweep"];
    if (!sw.is_object()) throw ConfigError("config: 'sweep' must be an object");
    reject_unknown_keys(sw, "sweep", {"start", "stop", "step"});
    cfg.sweep_start = get_number(sw, "start", cfg.sweep_start);
    cfg.sweep_stop = get_number(sw, "stop", cfg.sweep_stop);
    cfg.sweep_step = get_number(sw, "step", cfg.sweep_step);
  }

  if (doc.contains("tritter")) {
    const auto& tr = doc["tritter"];
    if (!tr.is_object()) throw ConfigError("config: 'tritter' must be an object");
    reject_unknown_keys(tr, "tritter", {"scenario", "overlap", "phase_steps"});
    if (tr.contains("scenario")) {
      if (!tr["scenario"].is_string()) throw ConfigError("config: tritter.scenario must be a string");
      cfg.tritter_scenario = tr["scenario"].get<std::string>();
    }
    cfg.tritter_overlap = get_number(tr, "overlap", cfg.tritter_overlap);
    cfg.phase_steps = get_int(tr, "phase_steps", cfg.phase_steps);
  }

  if (doc.contains("dataset")) {
    if (!doc["dataset"].is_string()) throw ConfigError("config: 'dataset' must be a path string");
    cfg.dataset_path = doc["dataset"].get<std::string>();
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("config: 'output' must be a path string");
    cfg.output_path = doc["output"].get<std::string>();
  }

  // Cross-field validation.
  if (cfg.network_kind == "beamsplitter" && (cfg.eta < 0.0 || cfg.eta > 1.0)) {
    throw ConfigError("config: beamsplitter eta outside [0,1]");
  }
  if (cfg.eta_d < 0.0 || cfg.eta_d > 1.0) throw ConfigError("config: eta_d outside [0,1]");
  if (cfg.p_dark < 0.0 || cfg.p_dark > 1.0) throw ConfigError("config: p_dark outside [0,1]");
  if (!(cfg.fwhm > 0.0)) throw ConfigError("config: fwhm must be positive");
  for (double m : cfg.intensity_grid) {
    if (m < 0.0) throw ConfigError("config: negative intensity in grid");
  }
  for (double k : cfg.kappa_grid()) {
    if (k < 0.0 || k > 1.0) {
      throw ConfigError("config: omega_grid * eta_d leaves [0,1]");
    }
  }
  if (static_cast<int>(cfg.delays.size()) != cfg.ports) {
    throw ConfigError("config: delays length differs from port count");
  }
  if (!cfg.polarizations.empty()) {
    if (static_cast<int>(cfg.polarizations.size()) != cfg.ports) {
      throw ConfigError("config: polarizations length differs from port count");
    }
    for (const auto& p : cfg.polarizations) {
      if (std::abs(p.norm() - 1.0) > 1e-9) {
        throw ConfigError("config: polarization vectors must have unit norm");
      }
    }
  }
  if (cfg.m_cut < 0) throw ConfigError("config: m_cut must be non-negative");
  for (const auto& [n, x] : cfg.targets) {
    if (n.size() != cfg.ports || x.size() != cfg.ports) {
      throw ConfigError("config: target length differs from port count");
    }
    if (n.total() > cfg.m_cut) {
      throw ConfigError("config: target " + n.str() + " exceeds m_cut " +
                        std::to_string(cfg.m_cut));
    }
    if (x.total() > n.total()) {
      throw ConfigError("config: target output total exceeds input total");
    }
  }
  if (!(cfg.sweep_step > 0.0) || cfg.sweep_stop < cfg.sweep_start) {
    throw ConfigError("config: sweep requires step > 0 and stop >= start");
  }
  if (cfg.tritter_scenario != "delay" && cfg.tritter_scenario != "phase") {
    throw ConfigError("config: tritter.scenario must be 'delay' or 'phase'");
  }
  if (cfg.tritter_overlap < 0.0 || cfg.tritter_overlap > 1.0) {
    throw ConfigError("config: tritter.overlap outside [0,1]");
  }
  if (cfg.phase_steps < 2) throw ConfigError("config: tritter.phase_steps must be >= 2");

  cfg.build_network();  // unitarity enforced before any computation
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace fockbound::cli
