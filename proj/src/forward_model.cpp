#include "fockbound/forward_model.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fockbound/fock.hpp"

namespace fockbound {

PulseConfiguration::PulseConfiguration(ModeUnitary network_in, SourceIntensities mu_in,
                                       InternalStateSet internal_in, DetectorBank bank_in)
    : network(std::move(network_in)),
      mu(std::move(mu_in)),
      internal(std::move(internal_in)),
      bank(std::move(bank_in)) {
  const int n = network.ports();
  if (mu.size() != n || internal.ports() != n || bank.size() != n) {
    throw std::invalid_argument("PulseConfiguration: inconsistent port counts");
  }
}

namespace {

// Phase-independent pieces of nbar_k: the diagonal intensity term and one
// complex coefficient per ordered pair j < s, so that
//   nbar_k(phi) = base_k + sum_{j<s} 2 Re[cross_k(j,s) e^{i(phi_j - phi_s)}].
struct InterferencePlan {
  int ports;
  std::vector<double> base;                          // [k]
  std::vector<std::pair<int, int>> pairs;            // (j, s), j < s
  std::vector<std::vector<std::complex<double>>> cross;  // [k][pair]

  explicit InterferencePlan(const PulseConfiguration& c) : ports(c.ports()) {
    const int n = ports;
    base.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        base[static_cast<std::size_t>(k)] += c.mu[j] * std::norm(c.network(j, k));
      }
    }
    for (int j = 0; j < n; ++j) {
      for (int s = j + 1; s < n; ++s) pairs.emplace_back(j, s);
    }
    cross.assign(static_cast<std::size_t>(n), {});
    for (int k = 0; k < n; ++k) {
      auto& row = cross[static_cast<std::size_t>(k)];
      row.reserve(pairs.size());
      for (const auto& [j, s] : pairs) {
        const double overlap =
            gaussian_overlap(c.internal.delay(j) - c.internal.delay(s), c.internal.fwhm());
        const std::complex<double> pol =
            c.internal.polarization(s).dot(c.internal.polarization(j));
        row.push_back(std::sqrt(c.mu[j] * c.mu[s]) * c.network(j, k) *
                      std::conj(c.network(s, k)) * overlap * pol);
      }
    }
  }

  void nbar(const std::vector<double>& phases, std::vector<double>& out) const {
    std::vector<std::complex<double>> rot(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      rot[p] = std::polar(1.0, phases[static_cast<std::size_t>(pairs[p].first)] -
                                   phases[static_cast<std::size_t>(pairs[p].second)]);
    }
    out.resize(static_cast<std::size_t>(ports));
    for (int k = 0; k < ports; ++k) {
      double v = base[static_cast<std::size_t>(k)];
      const auto& row = cross[static_cast<std::size_t>(k)];
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        v += 2.0 * (row[p] * rot[p]).real();
      }
      out[static_cast<std::size_t>(k)] = std::max(0.0, v);
    }
  }
};

// All 2^M pattern probabilities for given per-port no-click probabilities.
void patterns_from_no_click(const std::vector<double>& no_click,
                            std::vector<double>& out) {
  const int m = static_cast<int>(no_click.size());
  out.assign(ClickPattern::count(m), 0.0);
  out[0] = 1.0;
  std::uint32_t filled = 1;
  for (int j = 0; j < m; ++j) {
    const double q = no_click[static_cast<std::size_t>(j)];
    for (std::uint32_t b = 0; b < filled; ++b) {
      const double p = out[b];
      out[b] = p * q;
      out[b | (1u << j)] = p * (1.0 - q);
    }
    filled <<= 1;
  }
}

void fixed_phase_patterns(const InterferencePlan& plan, const DetectorBank& bank,
                          const std::vector<double>& phases,
                          std::vector<double>& nbar_scratch,
                          std::vector<double>& no_click_scratch,
                          std::vector<double>& out) {
  plan.nbar(phases, nbar_scratch);
  no_click_scratch.resize(nbar_scratch.size());
  for (std::size_t k = 0; k < nbar_scratch.size(); ++k) {
    no_click_scratch[k] =
        (1.0 - bank.p_dark) * std::exp(-bank.kappa[k] * nbar_scratch[k]);
  }
  patterns_from_no_click(no_click_scratch, out);
}

constexpr int kGridStart = 32;
constexpr int kGridCap = 512;
constexpr double kQuadTol = 1e-10;

// Average of all pattern probabilities over the phase torus. Phase 0 is fixed
// to zero: the integrand depends on phase differences only.
std::vector<double> phase_average(const PulseConfiguration& config) {
  const InterferencePlan plan(config);
  const int n = config.ports();
  const int dims = n - 1;
  std::vector<double> nbar_scratch, no_click_scratch, point;
  std::vector<double> phases(static_cast<std::size_t>(n), 0.0);

  if (dims == 0) {
    std::vector<double> out;
    fixed_phase_patterns(plan, config.bank, phases, nbar_scratch, no_click_scratch, out);
    return out;
  }

  std::vector<double> prev;
  for (int grid = kGridStart; grid <= kGridCap; grid *= 2) {
    std::vector<double> acc(ClickPattern::count(n), 0.0);
    const double step = 2.0 * std::numbers::pi / grid;
    std::vector<int> idx(static_cast<std::size_t>(dims), 0);
    while (true) {
      for (int d = 0; d < dims; ++d) {
        phases[static_cast<std::size_t>(d + 1)] = idx[static_cast<std::size_t>(d)] * step;
      }
      fixed_phase_patterns(plan, config.bank, phases, nbar_scratch, no_click_scratch, point);
      for (std::size_t b = 0; b < acc.size(); ++b) acc[b] += point[b];

      int d = 0;
      while (d < dims) {
        if (++idx[static_cast<std::size_t>(d)] < grid) break;
        idx[static_cast<std::size_t>(d)] = 0;
        ++d;
      }
      if (d == dims) break;
    }
    double cells = std::pow(static_cast<double>(grid), dims);
    for (auto& v : acc) v /= cells;

    if (!prev.empty()) {
      double diff = 0.0;
      for (std::size_t b = 0; b < acc.size(); ++b) {
        diff = std::max(diff, std::abs(acc[b] - prev[b]));
      }
      if (diff < kQuadTol) return acc;
    }
    prev = std::move(acc);
  }
  throw std::runtime_error("pattern_probability: phase quadrature did not converge "
                           "within the grid cap");
}

}  // namespace

std::vector<double> mean_output_photons(const PulseConfiguration& config,
                                        const std::vector<double>& phases) {
  if (static_cast<int>(phases.size()) != config.ports()) {
    throw std::invalid_argument("mean_output_photons: phase vector length mismatch");
  }
  InterferencePlan plan(config);
  std::vector<double> out;
  plan.nbar(phases, out);
  return out;
}

double pattern_probability_fixed_phase(const PulseConfiguration& config,
                                       const std::vector<double>& phases,
                                       const ClickPattern& theta) {
  if (theta.size != config.ports()) {
    throw std::invalid_argument("pattern_probability_fixed_phase: pattern length mismatch");
  }
  const auto nbar = mean_output_photons(config, phases);
  double p = 1.0;
  for (int k = 0; k < config.ports(); ++k) {
    const double no_click = (1.0 - config.bank.p_dark) *
                            std::exp(-config.bank.kappa[static_cast<std::size_t>(k)] *
                                     nbar[static_cast<std::size_t>(k)]);
    p *= theta.click(k) ? 1.0 - no_click : no_click;
  }
  return p;
}

double pattern_probability(const PulseConfiguration& config, const ClickPattern& theta) {
  if (theta.size != config.ports()) {
    throw std::invalid_argument("pattern_probability: pattern length mismatch");
  }
  return phase_average(config)[theta.bits];
}

std::vector<double> all_pattern_probabilities(const PulseConfiguration& config) {
  return phase_average(config);
}

std::vector<ObservedStatistics> synthesize_dataset(
    const std::vector<PulseConfiguration>& configs) {
  std::vector<ObservedStatistics> out;
  out.reserve(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::vector<double> probs;
    try {
      probs = all_pattern_probabilities(configs[i]);
    } catch (const std::runtime_error& e) {
      throw std::runtime_error("synthesize_dataset: setting " + std::to_string(i) +
                               ": " + e.what());
    }
    double sum = 0.0;
    for (double p : probs) sum += p;
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::runtime_error("synthesize_dataset: setting " + std::to_string(i) +
                               " patterns sum to " + std::to_string(sum));
    }
    out.push_back({configs[i].mu, configs[i].bank, std::move(probs)});
  }
  return out;
}

std::vector<std::int64_t> sample_click_counts(const ObservedStatistics& stats,
                                              std::int64_t shots, std::uint64_t seed) {
  if (shots < 0) throw std::domain_error("sample_click_counts: negative shot count");
  std::vector<double> cdf(stats.probs.size());
  double run = 0.0;
  for (std::size_t b = 0; b < stats.probs.size(); ++b) {
    run += stats.probs[b];
    cdf[b] = run;
  }
  std::vector<std::int64_t> counts(stats.probs.size(), 0);
  std::mt19937_64 rng(seed);
  for (std::int64_t s = 0; s < shots; ++s) {
    // Top 53 bits -> uniform double in [0,1); fully specified, unlike
    // std::uniform_real_distribution.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * run;
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] > u) hi = mid; else lo = mid + 1;
    }
    ++counts[lo];
  }
  return counts;
}

}  // namespace fockbound
