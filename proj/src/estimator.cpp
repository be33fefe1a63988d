#include "fockbound/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fockbound/combinatorics.hpp"

namespace fockbound::estimator {

TruncationSet::TruncationSet(int ports_in, int ports_out, int m_cut)
    : ports_in_(ports_in), ports_out_(ports_out), m_cut_(m_cut) {
  if (ports_in <= 0 || ports_out <= 0) {
    throw std::invalid_argument("TruncationSet: port counts must be positive");
  }
  if (m_cut < 0) throw std::invalid_argument("TruncationSet: negative m_cut");
  inputs_ = compositions_up_to(m_cut, ports_in);
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    const int begin = static_cast<int>(pairs_.size());
    for (const auto& x : compositions_up_to(inputs_[i].total(), ports_out)) {
      index_[{inputs_[i], x}] = static_cast<int>(pairs_.size());
      pairs_.emplace_back(inputs_[i], x);
    }
    blocks_.emplace_back(begin, static_cast<int>(pairs_.size()));
  }
}

int TruncationSet::find(const PhotonVector& n, const PhotonVector& x) const {
  auto it = index_.find({n, x});
  return it == index_.end() ? -1 : it->second;
}

BuiltProgram build_program(const std::vector<ObservedStatistics>& dataset, int m_cut) {
  if (dataset.empty()) throw std::invalid_argument("build_program: empty dataset");
  const int ports_in = dataset.front().mu.size();
  const int ports_out = dataset.front().bank.size();
  for (const auto& s : dataset) {
    if (s.mu.size() != ports_in || s.bank.size() != ports_out ||
        s.probs.size() != ClickPattern::count(ports_out)) {
      throw std::invalid_argument("build_program: inconsistent port counts in dataset");
    }
  }

  TruncationSet trunc(ports_in, ports_out, m_cut);
  const int vars = trunc.variable_count();
  const auto outputs = compositions_up_to(m_cut, ports_out);
  std::map<PhotonVector, int> output_index;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    output_index[outputs[i]] = static_cast<int>(i);
  }

  lp::LinearProgram prog;
  prog.num_vars = vars;
  prog.objective.assign(static_cast<std::size_t>(vars), 0.0);
  prog.lower.assign(static_cast<std::size_t>(vars), 0.0);
  prog.upper.assign(static_cast<std::size_t>(vars), 1.0);

  std::vector<double> leftover;
  std::vector<std::string> warnings;
  const std::uint32_t n_patterns = ClickPattern::count(ports_out);

  for (std::size_t s = 0; s < dataset.size(); ++s) {
    const auto& setting = dataset[s];
    const double lam = leftover_term(setting.mu, m_cut);
    leftover.push_back(lam);
    if (lam > 0.5) {
      warnings.push_back("setting " + std::to_string(s) + ": leftover term " +
                         std::to_string(lam) + " exceeds 0.5; bounds will be loose");
    }

    std::vector<double> pn(trunc.inputs().size());
    for (std::size_t i = 0; i < trunc.inputs().size(); ++i) {
      pn[i] = poisson_input_probability(setting.mu, trunc.inputs()[i]);
    }
    std::vector<std::vector<double>> povm(n_patterns,
                                          std::vector<double>(outputs.size()));
    for (std::uint32_t bits = 0; bits < n_patterns; ++bits) {
      const ClickPattern theta(ports_out, bits);
      for (std::size_t xi = 0; xi < outputs.size(); ++xi) {
        povm[bits][xi] = pattern_given_fock(outputs[xi], setting.bank, theta);
      }
    }

    std::vector<double> coeffs(static_cast<std::size_t>(vars));
    for (std::uint32_t bits = 0; bits < n_patterns; ++bits) {
      for (std::size_t i = 0; i < trunc.inputs().size(); ++i) {
        const auto [begin, end] = trunc.block(static_cast<int>(i));
        for (int v = begin; v < end; ++v) {
          const int xi = output_index.at(trunc.pair(v).second);
          coeffs[static_cast<std::size_t>(v)] = pn[i] * povm[bits][static_cast<std::size_t>(xi)];
        }
      }
      const double observed = setting.probs[bits];
      prog.inequalities.push_back({coeffs, lp::Sense::LessEq, observed});
      prog.inequalities.push_back({coeffs, lp::Sense::GreaterEq, observed - lam});
    }
  }

  for (std::size_t i = 0; i < trunc.inputs().size(); ++i) {
    std::vector<double> coeffs(static_cast<std::size_t>(vars), 0.0);
    const auto [begin, end] = trunc.block(static_cast<int>(i));
    for (int v = begin; v < end; ++v) coeffs[static_cast<std::size_t>(v)] = 1.0;
    prog.equalities.push_back({std::move(coeffs), 1.0});
  }

  lp::ScaledProgram scaled = lp::scale(prog);
  BuiltProgram out{std::move(scaled.program), std::move(scaled.record), std::move(trunc),
                   std::move(leftover), 0.0, std::move(warnings)};
  for (double l : out.leftover) out.leftover_max = std::max(out.leftover_max, l);
  return out;
}

BoundResult bound(const PhotonVector& target_n, const PhotonVector& target_x,
                  const BuiltProgram& built) {
  const int var = built.trunc.find(target_n, target_x);
  if (var < 0) {
    throw std::invalid_argument("bound: target " + target_n.str() + "->" +
                                target_x.str() + " lies outside the truncation set");
  }
  lp::LinearProgram prog = built.program;
  prog.objective.assign(static_cast<std::size_t>(prog.num_vars), 0.0);
  prog.objective[static_cast<std::size_t>(var)] = 1.0;

  BoundResult r;
  r.target_n = target_n;
  r.target_x = target_x;
  r.leftover_max = built.leftover_max;
  r.variables = prog.num_vars;
  r.inequality_rows = static_cast<int>(prog.inequalities.size());
  r.equality_rows = static_cast<int>(prog.equalities.size());

  const lp::Solution lo = lp::solve(prog, lp::Direction::Minimize);
  const lp::Solution hi = lp::solve(prog, lp::Direction::Maximize);
  r.lower_status = lo.status;
  r.upper_status = hi.status;
  if (lo.status == lp::Status::Optimal) r.lower = std::clamp(lo.objective, 0.0, 1.0);
  if (hi.status == lp::Status::Optimal) r.upper = std::clamp(hi.objective, 0.0, 1.0);
  return r;
}

DecoyGrids default_settings(ExperimentKind kind) {
  DecoyGrids g;
  switch (kind) {
    case ExperimentKind::Beamsplitter:
      g.intensities = {0.05, 0.1, 0.2, 0.4, 0.8, 1.4};
      g.efficiencies = {0.8, 0.6, 0.4, 0.2, 0.05};
      g.m_cut = 10;
      break;
    case ExperimentKind::Tritter:
      g.intensities = {0.1, 0.3, 0.8};
      g.efficiencies = {0.8, 0.24};  // omega in {1, 0.3} at eta_D = 0.8
      g.m_cut = 6;
      break;
  }
  g.p_dark = 1e-6;
  return g;
}

namespace {

const char* status_name(lp::Status s) {
  switch (s) {
    case lp::Status::Optimal: return "optimal";
    case lp::Status::Infeasible: return "infeasible";
    case lp::Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

}  // namespace

nlohmann::json bound_result_to_json(const BoundResult& r) {
  return nlohmann::json{
      {"target", {{"n", r.target_n.counts()}, {"x", r.target_x.counts()}}},
      {"lower", r.lower},
      {"upper", r.upper},
      {"leftover_max", r.leftover_max},
      {"variables", r.variables},
      {"inequality_rows", r.inequality_rows},
      {"equality_rows", r.equality_rows},
      {"statuses", {status_name(r.lower_status), status_name(r.upper_status)}},
  };
}

nlohmann::json dataset_to_json(const std::vector<ObservedStatistics>& dataset) {
  nlohmann::json settings = nlohmann::json::array();
  for (const auto& s : dataset) {
    settings.push_back({{"mu", s.mu.values()},
                        {"kappa", s.bank.kappa},
                        {"p_dark", s.bank.p_dark},
                        {"patterns", s.probs}});
  }
  nlohmann::json j;
  j["ports_in"] = dataset.empty() ? 0 : dataset.front().mu.size();
  j["ports_out"] = dataset.empty() ? 0 : dataset.front().bank.size();
  j["settings"] = std::move(settings);
  return j;
}

std::vector<ObservedStatistics> dataset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("settings") || !j["settings"].is_array()) {
    throw std::invalid_argument("dataset_from_json: missing settings array");
  }
  const int ports_in = j.value("ports_in", 0);
  const int ports_out = j.value("ports_out", 0);
  std::vector<ObservedStatistics> out;
  for (const auto& s : j["settings"]) {
    SourceIntensities mu(s.at("mu").get<std::vector<double>>());
    DetectorBank bank(s.at("kappa").get<std::vector<double>>(),
                      s.at("p_dark").get<double>());
    std::vector<double> probs = s.at("patterns").get<std::vector<double>>();
    if (mu.size() != ports_in || bank.size() != ports_out ||
        probs.size() != ClickPattern::count(ports_out)) {
      throw std::invalid_argument("dataset_from_json: inconsistent setting shapes");
    }
    for (double p : probs) {
      if (p < 0.0 || p > 1.0) {
        throw std::invalid_argument("dataset_from_json: pattern probability outside [0,1]");
      }
    }
    out.push_back({std::move(mu), std::move(bank), std::move(probs)});
  }
  return out;
}

}  // namespace fockbound::estimator
