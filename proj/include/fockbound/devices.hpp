#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockbound/photon_vector.hpp"

namespace fockbound {

/// Mean photon number per input port, mu_i = gamma_i * mu' for a laser of
/// intensity mu' behind an attenuator of transmittance gamma_i.
class SourceIntensities {
 public:
  SourceIntensities() = default;
  explicit SourceIntensities(std::vector<double> mu) : mu_(std::move(mu)) {
    for (double m : mu_) {
      if (m < 0.0) throw std::domain_error("SourceIntensities: negative intensity");
    }
  }
  SourceIntensities(std::initializer_list<double> mu)
      : SourceIntensities(std::vector<double>(mu)) {}

  int size() const { return static_cast<int>(mu_.size()); }
  double operator[](int i) const { return mu_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return mu_; }
  double total() const;

 private:
  std::vector<double> mu_;
};

/// Threshold detectors behind output attenuators: effective efficiency
/// kappa_j = omega_j * eta_D per port, and a dark-count probability.
struct DetectorBank {
  std::vector<double> kappa;
  double p_dark = 0.0;

  DetectorBank() = default;
  DetectorBank(std::vector<double> kappa_in, double p_dark_in);

  int size() const { return static_cast<int>(kappa.size()); }
};

/// Click/no-click outcome over M threshold detectors, packed with port j at
/// bit j (port 0 = least significant bit).
struct ClickPattern {
  int size = 0;
  std::uint32_t bits = 0;

  ClickPattern() = default;
  ClickPattern(int size_in, std::uint32_t bits_in);

  bool click(int j) const { return (bits >> j) & 1u; }
  static std::uint32_t count(int size) { return 1u << size; }

  std::string str() const;
  bool operator==(const ClickPattern&) const = default;
};

/// P_n^mu = prod_i e^{-mu_i} mu_i^{n_i} / n_i!, evaluated in log space.
double poisson_input_probability(const SourceIntensities& mu, const PhotonVector& n);

/// P^kappa(theta|x): product over detectors of the threshold POVM outcome,
/// (1-p_dark)(1-kappa_j)^{x_j} for a no-click and its complement for a click.
double pattern_given_fock(const PhotonVector& x, const DetectorBank& bank,
                          const ClickPattern& theta);

/// Leftover Poisson mass outside the truncation set: the total photon number
/// over independent ports is Poisson with the summed mean, so this is
/// Pr[Poisson(sum mu_i) > m_cut].
double leftover_term(const SourceIntensities& mu, int m_cut);

}  // namespace fockbound
