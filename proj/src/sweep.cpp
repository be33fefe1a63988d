#include "fockbound/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "fockbound/combinatorics.hpp"
#include "fockbound/fock.hpp"

namespace fockbound::cli {

namespace {

constexpr const char* kArtifactVersion = "fockbound 0.1.0";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      int i;
      while ((i = next.fetch_add(1)) < count) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

int sweep_point_count(const ExperimentConfig& cfg) {
  return static_cast<int>(
             std::floor((cfg.sweep_stop - cfg.sweep_start) / cfg.sweep_step + 1e-9)) + 1;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

nlohmann::json complex_vector_json(const Eigen::VectorXcd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back({v(i).real(), v(i).imag()});
  }
  return arr;
}

}  // namespace

int SweepTable::violations() const {
  int count = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    if (r.theory < r.lower - kBracketEps || r.theory > r.upper + kBracketEps) ++count;
  }
  return count;
}

int SweepTable::failures() const {
  int count = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") ++count;
  }
  return count;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json net{{"kind", cfg.network_kind}, {"ports", cfg.ports}};
  if (cfg.network_kind == "beamsplitter") net["eta"] = cfg.eta;
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& [n, x] : cfg.targets) {
    targets.push_back({{"n", n.counts()}, {"x", x.counts()}});
  }
  nlohmann::json pols = nlohmann::json::array();
  for (const auto& p : cfg.polarizations) pols.push_back(complex_vector_json(p));
  return nlohmann::json{
      {"network", std::move(net)},
      {"source",
       {{"intensity_grid", cfg.intensity_grid},
        {"delays", cfg.delays},
        {"fwhm", cfg.fwhm},
        {"polarizations", std::move(pols)}}},
      {"detectors",
       {{"eta_d", cfg.eta_d}, {"p_dark", cfg.p_dark}, {"omega_grid", cfg.omega_grid}}},
      {"estimator", {{"m_cut", cfg.m_cut}, {"targets", std::move(targets)}}},
      {"sweep", {{"start", cfg.sweep_start}, {"stop", cfg.sweep_stop}, {"step", cfg.sweep_step}}},
      {"tritter",
       {{"scenario", cfg.tritter_scenario},
        {"overlap", cfg.tritter_overlap},
        {"phase_steps", cfg.phase_steps}}},
  };
}

std::vector<PulseConfiguration> build_setting_grid(const ExperimentConfig& cfg,
                                                   const InternalStateSet& internal) {
  const ModeUnitary network = cfg.build_network();
  const int ports = cfg.ports;
  const auto kappas = cfg.kappa_grid();

  std::vector<std::vector<double>> mu_combos{{}};
  for (int p = 0; p < ports; ++p) {
    std::vector<std::vector<double>> next;
    for (const auto& combo : mu_combos) {
      for (double mu : cfg.intensity_grid) {
        auto grown = combo;
        grown.push_back(mu);
        next.push_back(std::move(grown));
      }
    }
    mu_combos = std::move(next);
  }
  std::vector<std::vector<double>> kappa_combos{{}};
  for (int p = 0; p < ports; ++p) {
    std::vector<std::vector<double>> next;
    for (const auto& combo : kappa_combos) {
      for (double k : kappas) {
        auto grown = combo;
        grown.push_back(k);
        next.push_back(std::move(grown));
      }
    }
    kappa_combos = std::move(next);
  }

  std::vector<PulseConfiguration> grid;
  grid.reserve(mu_combos.size() * kappa_combos.size());
  for (const auto& mu : mu_combos) {
    for (const auto& kappa : kappa_combos) {
      grid.emplace_back(network, SourceIntensities(mu), internal,
                        DetectorBank(kappa, cfg.p_dark));
    }
  }
  return grid;
}

namespace {

// Shared sweep machinery: per point, synthesize + build once, then bound all
// targets. writes one row per (point, target).
struct PointOutcome {
  std::vector<SweepRow> per_target;
};

std::vector<SweepTable> run_delay_like_sweep(
    const ExperimentConfig& cfg, int threads,
    const std::function<InternalStateSet(double)>& internal_for,
    const std::function<double(double, const PhotonVector&, const PhotonVector&)>& theory_for,
    bool with_classical, const std::string& sweep_column) {
  const int points = sweep_point_count(cfg);
  const int n_targets = static_cast<int>(cfg.targets.size());
  const ModeUnitary network = cfg.build_network();

  std::vector<PointOutcome> outcomes(static_cast<std::size_t>(points));
  parallel_for(points, threads, [&](int i) {
    const double value = cfg.sweep_start + i * cfg.sweep_step;
    auto& rows = outcomes[static_cast<std::size_t>(i)].per_target;
    rows.assign(static_cast<std::size_t>(n_targets), SweepRow{});
    for (auto& r : rows) r.sweep_value = value;
    try {
      const InternalStateSet internal = internal_for(value);
      const auto dataset = synthesize_dataset(build_setting_grid(cfg, internal));
      const auto built = estimator::build_program(dataset, cfg.m_cut);
      for (int t = 0; t < n_targets; ++t) {
        auto& row = rows[static_cast<std::size_t>(t)];
        const auto& [n, x] = cfg.targets[static_cast<std::size_t>(t)];
        row.theory = theory_for(value, n, x);
        if (with_classical) {
          row.classical = distinguishable_transition_probability(network, n, x);
        }
        const auto result = estimator::bound(n, x, built);
        row.lower = result.lower;
        row.upper = result.upper;
        row.leftover_max = result.leftover_max;
        if (!result.ok()) {
          row.status = result.lower_status == lp::Status::Infeasible ||
                               result.upper_status == lp::Status::Infeasible
                           ? "infeasible"
                           : "iteration-limit";
        }
      }
    } catch (const std::exception& e) {
      for (auto& r : rows) r.status = sanitize(e.what());
    }
  });

  std::vector<SweepTable> tables(static_cast<std::size_t>(n_targets));
  for (int t = 0; t < n_targets; ++t) {
    auto& table = tables[static_cast<std::size_t>(t)];
    table.columns = with_classical
                        ? std::vector<std::string>{sweep_column, "theory", "classical",
                                                   "lower", "upper", "leftover_max", "status"}
                        : std::vector<std::string>{sweep_column, "theory", "lower", "upper",
                                                   "leftover_max", "status"};
    table.metadata = nlohmann::json{
        {"artifact", kArtifactVersion},
        {"config", config_to_json(cfg)},
        {"target",
         {{"n", cfg.targets[static_cast<std::size_t>(t)].first.counts()},
          {"x", cfg.targets[static_cast<std::size_t>(t)].second.counts()}}},
        {"bracket_tolerance", kBracketEps},
    };
    for (int i = 0; i < points; ++i) {
      table.rows.push_back(outcomes[static_cast<std::size_t>(i)].per_target[static_cast<std::size_t>(t)]);
    }
  }
  return tables;
}

}  // namespace

std::vector<SweepTable> run_hom_dip(const ExperimentConfig& cfg, int threads) {
  if (cfg.ports != 2) throw ConfigError("hom-dip requires a two-port network");
  const ModeUnitary network = cfg.build_network();
  auto internal_for = [&cfg](double value) {
    return cfg.internal_states({0.0, value * cfg.fwhm});
  };
  auto theory_for = [&, network](double value, const PhotonVector& n, const PhotonVector& x) {
    return partial_transition_probability(network, internal_for(value), n, x);
  };
  return run_delay_like_sweep(cfg, threads, internal_for, theory_for, true, "dt_over_DT");
}

std::vector<SweepTable> run_tritter(const ExperimentConfig& cfg, int threads) {
  if (cfg.ports != 3) throw ConfigError("tritter requires a three-port network");
  const ModeUnitary network = cfg.build_network();

  if (cfg.tritter_scenario == "delay") {
    auto internal_for = [&cfg](double value) {
      return cfg.internal_states({-value * cfg.fwhm, 0.0, value * cfg.fwhm});
    };
    auto theory_for = [&, network](double value, const PhotonVector& n, const PhotonVector& x) {
      return partial_transition_probability(network, internal_for(value), n, x);
    };
    return run_delay_like_sweep(cfg, threads, internal_for, theory_for, false, "dt_over_DT");
  }

  // Triad-phase sweep: fixed pairwise overlap r, phase swept on the (1,2)
  // inner product. Polarization vectors realizing each Gram matrix come out
  // of its factorization and are recorded in the metadata.
  const double r = cfg.tritter_overlap;
  const int points = cfg.phase_steps;
  const int n_targets = static_cast<int>(cfg.targets.size());
  std::vector<PointOutcome> outcomes(static_cast<std::size_t>(points));
  nlohmann::json construction = nlohmann::json::array();
  std::vector<nlohmann::json> constructions(static_cast<std::size_t>(points));

  parallel_for(points, threads, [&](int i) {
    const double phi = 2.0 * std::numbers::pi * i / (points - 1);
    auto& rows = outcomes[static_cast<std::size_t>(i)].per_target;
    rows.assign(static_cast<std::size_t>(n_targets), SweepRow{});
    for (auto& row : rows) row.sweep_value = phi;
    try {
      Eigen::MatrixXcd gram(3, 3);
      const std::complex<double> g12 = std::polar(r, phi);
      gram << 1.0, g12, r, std::conj(g12), 1.0, r, r, r, 1.0;
      const Eigen::MatrixXcd factor = gram_factor(gram);  // throws when not PSD

      std::vector<Eigen::VectorXcd> pols;
      nlohmann::json vecs = nlohmann::json::array();
      for (int j = 0; j < 3; ++j) {
        Eigen::VectorXcd v = factor.row(j).transpose();
        vecs.push_back(complex_vector_json(v));
        pols.push_back(std::move(v));
      }
      constructions[static_cast<std::size_t>(i)] =
          nlohmann::json{{"phi", phi}, {"polarizations", std::move(vecs)}};

      const InternalStateSet internal(pols, {0.0, 0.0, 0.0}, cfg.fwhm);
      const auto dataset = synthesize_dataset(build_setting_grid(cfg, internal));
      const auto built = estimator::build_program(dataset, cfg.m_cut);
      for (int t = 0; t < n_targets; ++t) {
        auto& row = rows[static_cast<std::size_t>(t)];
        const auto& [n, x] = cfg.targets[static_cast<std::size_t>(t)];
        row.theory = n.counts() == std::vector<int>{1, 1, 1} &&
                             x.counts() == std::vector<int>{1, 1, 1}
                         ? tritter_coincidence_theory(r, r, r, phi)
                         : partial_transition_probability(network, internal, n, x);
        const auto result = estimator::bound(n, x, built);
        row.lower = result.lower;
        row.upper = result.upper;
        row.leftover_max = result.leftover_max;
        if (!result.ok()) row.status = "solver-failure";
      }
    } catch (const std::exception& e) {
      for (auto& row : rows) row.status = sanitize(e.what());
    }
  });

  for (auto& c : constructions) {
    if (!c.is_null()) construction.push_back(std::move(c));
  }
  std::vector<SweepTable> tables(static_cast<std::size_t>(n_targets));
  for (int t = 0; t < n_targets; ++t) {
    auto& table = tables[static_cast<std::size_t>(t)];
    table.columns = {"phi", "theory", "lower", "upper", "leftover_max", "status"};
    table.metadata = nlohmann::json{
        {"artifact", kArtifactVersion},
        {"config", config_to_json(cfg)},
        {"target",
         {{"n", cfg.targets[static_cast<std::size_t>(t)].first.counts()},
          {"x", cfg.targets[static_cast<std::size_t>(t)].second.counts()}}},
        {"bracket_tolerance", kBracketEps},
        {"polarization_construction", construction},
    };
    for (int i = 0; i < points; ++i) {
      table.rows.push_back(outcomes[static_cast<std::size_t>(i)].per_target[static_cast<std::size_t>(t)]);
    }
  }
  return tables;
}

nlohmann::json run_bound(const ExperimentConfig& cfg) {
  const InternalStateSet internal = cfg.internal_states(cfg.delays);
  std::vector<ObservedStatistics> dataset;
  if (!cfg.dataset_path.empty()) {
    std::ifstream in(cfg.dataset_path);
    if (!in) throw ConfigError("bound: cannot open dataset '" + cfg.dataset_path + "'");
    nlohmann::json doc;
    in >> doc;
    dataset = estimator::dataset_from_json(doc);
  } else {
    dataset = synthesize_dataset(build_setting_grid(cfg, internal));
  }
  const auto built = estimator::build_program(dataset, cfg.m_cut);
  nlohmann::json results = nlohmann::json::array();
  for (const auto& [n, x] : cfg.targets) {
    results.push_back(estimator::bound_result_to_json(estimator::bound(n, x, built)));
  }
  return nlohmann::json{{"artifact", kArtifactVersion},
                        {"config", config_to_json(cfg)},
                        {"warnings", built.warnings},
                        {"results", std::move(results)}};
}

std::string run_oracle(const ExperimentConfig& cfg) {
  const ModeUnitary network = cfg.build_network();
  const InternalStateSet internal = cfg.internal_states(cfg.delays);
  std::ostringstream os;
  os << "n,x,indistinguishable,partial,classical\n";
  std::vector<PhotonVector> seen;
  for (const auto& [n, x] : cfg.targets) {
    os << n.str() << ',' << x.str() << ',';
    try {
      os << fmt(transition_probability(network, n, x)) << ','
         << fmt(partial_transition_probability(network, internal, n, x)) << ',';
    } catch (const std::exception& e) {
      os << "error: " << sanitize(e.what()) << ",-,";
    }
    os << fmt(distinguishable_transition_probability(network, n, x)) << "\n";
    if (std::find(seen.begin(), seen.end(), n) == seen.end()) seen.push_back(n);
  }
  for (const auto& n : seen) {
    double sum = 0.0;
    for (const auto& x : compositions_exact(n.total(), cfg.ports)) {
      sum += transition_probability(network, n, x);
    }
    os << "# sum over x of P(x|" << n.str() << ") = " << fmt(sum) << "\n";
  }
  return os.str();
}

void write_csv(const SweepTable& table, std::ostream& os) {
  os << "# " << table.metadata.dump() << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << table.columns[c];
  }
  os << "\n";
  const bool with_classical =
      std::find(table.columns.begin(), table.columns.end(), "classical") != table.columns.end();
  for (const auto& r : table.rows) {
    os << fmt(r.sweep_value) << ',' << fmt(r.theory) << ',';
    if (with_classical) os << fmt(r.classical) << ',';
    os << fmt(r.lower) << ',' << fmt(r.upper) << ',' << fmt(r.leftover_max) << ','
       << r.status << "\n";
  }
  os << "# " << nlohmann::json{{"violations", table.violations()},
                               {"failures", table.failures()}}
                    .dump()
     << "\n";
}

void write_csv_file(const SweepTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  write_csv(table, out);
}

SweepTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  SweepTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto j = nlohmann::json::parse(line.substr(1), nullptr, false);
      if (!j.is_discarded() && table.metadata.is_null() && j.contains("config")) {
        table.metadata = j;
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!header_seen) {
      table.columns = fields;
      header_seen = true;
      continue;
    }
    const bool with_classical =
        std::find(table.columns.begin(), table.columns.end(), "classical") !=
        table.columns.end();
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("malformed CSV row in '" + path + "'");
    }
    SweepRow r;
    std::size_t f = 0;
    r.sweep_value = std::stod(fields[f++]);
    r.theory = std::stod(fields[f++]);
    if (with_classical) r.classical = std::stod(fields[f++]);
    r.lower = std::stod(fields[f++]);
    r.upper = std::stod(fields[f++]);
    r.leftover_max = std::stod(fields[f++]);
    r.status = fields[f++];
    table.rows.push_back(std::move(r));
  }
  return table;
}

}  // namespace fockbound::cli
