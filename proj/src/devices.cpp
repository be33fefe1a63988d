#include "fockbound/devices.hpp"

#include <cmath>
#include <stdexcept>

namespace fockbound {

double SourceIntensities::total() const {
  double t = 0.0;
  for (double m : mu_) t += m;
  return t;
}

DetectorBank::DetectorBank(std::vector<double> kappa_in, double p_dark_in)
    : kappa(std::move(kappa_in)), p_dark(p_dark_in) {
  for (double k : kappa) {
    if (k < 0.0 || k > 1.0) throw std::domain_error("DetectorBank: kappa outside [0,1]");
  }
  if (p_dark < 0.0 || p_dark > 1.0) {
    throw std::domain_error("DetectorBank: p_dark outside [0,1]");
  }
}

ClickPattern::ClickPattern(int size_in, std::uint32_t bits_in)
    : size(size_in), bits(bits_in) {
  if (size < 0 || size > 30) throw std::invalid_argument("ClickPattern: bad size");
  if (size < 30 && bits >= (1u << size)) {
    throw std::invalid_argument("ClickPattern: bits outside range");
  }
}

std::string ClickPattern::str() const {
  std::string s;
  for (int j = 0; j < size; ++j) s += click(j) ? '1' : '0';
  return s;
}

double poisson_input_probability(const SourceIntensities& mu, const PhotonVector& n) {
  if (mu.size() != n.size()) {
    throw std::invalid_argument("poisson_input_probability: length mismatch");
  }
  double log_p = 0.0;
  for (int i = 0; i < n.size(); ++i) {
    const double m = mu[i];
    const int k = n[i];
    if (m == 0.0) {
      if (k > 0) return 0.0;
      continue;
    }
    log_p += -m + k * std::log(m) - std::lgamma(k + 1.0);
  }
  return std::exp(log_p);
}

double pattern_given_fock(const PhotonVector& x, const DetectorBank& bank,
                          const ClickPattern& theta) {
  if (x.size() != bank.size() || x.size() != theta.size) {
    throw std::invalid_argument("pattern_given_fock: length mismatch");
  }
  double p = 1.0;
  for (int j = 0; j < x.size(); ++j) {
    const double no_click =
        (1.0 - bank.p_dark) * std::pow(1.0 - bank.kappa[static_cast<std::size_t>(j)], x[j]);
    p *= theta.click(j) ? 1.0 - no_click : no_click;
  }
  return p;
}

double leftover_term(const SourceIntensities& mu, int m_cut) {
  if (m_cut < 0) throw std::domain_error("leftover_term: negative cutoff");
  const double s = mu.total();
  if (s == 0.0) return 0.0;

  // Tail sum Pr[Poisson(s) > m_cut], accumulated upward from the first
  // excluded term for good relative accuracy when the tail is tiny.
  double log_term = -s + (m_cut + 1) * std::log(s) - std::lgamma(m_cut + 2.0);
  double term = std::exp(log_term);
  double tail = 0.0;
  for (int t = m_cut + 1; t < m_cut + 2000; ++t) {
    tail += term;
    term *= s / (t + 1);
    if (t > s && term < tail * 1e-18) break;
  }
  return std::min(1.0, tail);
}

}  // namespace fockbound
