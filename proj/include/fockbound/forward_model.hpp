#pragma once

#include <cstdint>
#include <vector>

#include "fockbound/devices.hpp"
#include "fockbound/internal_states.hpp"
#include "fockbound/unitary.hpp"

namespace fockbound {

/// One decoy setting: phase-randomized weak coherent pulses with per-port
/// intensity, arrival time and polarization, sent through the network onto
/// attenuated threshold detectors.
struct PulseConfiguration {
  ModeUnitary network;
  SourceIntensities mu;
  InternalStateSet internal;
  DetectorBank bank;

  PulseConfiguration(ModeUnitary network_in, SourceIntensities mu_in,
                     InternalStateSet internal_in, DetectorBank bank_in);

  int ports() const { return network.ports(); }
};

/// Click-pattern distribution observed for one (mu, kappa) setting; probs is
/// indexed by ClickPattern bits.
struct ObservedStatistics {
  SourceIntensities mu;
  DetectorBank bank;
  std::vector<double> probs;
};

/// Mean photon number of the coherent state in each output port for fixed
/// input phases, including the Gaussian temporal overlap and polarization
/// inner products in the interference cross terms.
std::vector<double> mean_output_photons(const PulseConfiguration& config,
                                        const std::vector<double>& phases);

/// Probability of the click pattern for fixed input phases:
/// prod_k [(1-(-1)^theta_k)/2 + (-1)^theta_k (1-p_dark) e^{-kappa_k nbar_k}].
double pattern_probability_fixed_phase(const PulseConfiguration& config,
                                       const std::vector<double>& phases,
                                       const ClickPattern& theta);

/// Phase-randomized pattern probability: the fixed-phase probability averaged
/// uniformly over all input phases. Only phase differences enter, so the
/// average runs over N-1 phases on a periodic trapezoid grid, doubled from 32
/// points per dimension until successive estimates differ by < 1e-10.
double pattern_probability(const PulseConfiguration& config, const ClickPattern& theta);

/// All 2^M pattern probabilities from one shared quadrature.
std::vector<double> all_pattern_probabilities(const PulseConfiguration& config);

/// Batch pattern_probability over a list of decoy settings. Every entry is
/// checked to sum to one within 1e-9.
std::vector<ObservedStatistics> synthesize_dataset(
    const std::vector<PulseConfiguration>& configs);

/// Multinomial click counts for finite-statistics emulation, reproducible for
/// a fixed seed. Returns counts indexed by ClickPattern bits.
std::vector<std::int64_t> sample_click_counts(const ObservedStatistics& stats,
                                              std::int64_t shots, std::uint64_t seed);

}  // namespace fockbound
