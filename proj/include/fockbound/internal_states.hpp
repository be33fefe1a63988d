#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fockbound {

/// Per-port single-photon internal descriptors: a polarization unit vector in
/// a shared space, an arrival time, and the common pulse FWHM. The pairwise
/// inner products <psi_j|psi_s> factor into the polarization inner product
/// times a Gaussian temporal overlap exp(-4 ln2 tau^2 / dT^2).
class InternalStateSet {
 public:
  static constexpr double kNormTol = 1e-12;

  InternalStateSet(std::vector<Eigen::VectorXcd> polarizations,
                   std::vector<double> delays, double fwhm);

  /// All ports share one polarization; distinguishability comes from delays only.
  static InternalStateSet delays_only(std::vector<double> delays, double fwhm);

  /// Identical states on every port (zero delays).
  static InternalStateSet identical(int ports);

  int ports() const { return static_cast<int>(delays_.size()); }
  const Eigen::VectorXcd& polarization(int j) const { return pols_[static_cast<std::size_t>(j)]; }
  double delay(int j) const { return delays_[static_cast<std::size_t>(j)]; }
  double fwhm() const { return fwhm_; }

  /// Gram matrix with entries Gamma_js = <psi_j|psi_s>.
  Eigen::MatrixXcd gram() const;

 private:
  std::vector<Eigen::VectorXcd> pols_;
  std::vector<double> delays_;
  double fwhm_;
};

}  // namespace fockbound
