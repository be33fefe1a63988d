#include "fockbound/internal_states.hpp"

#include <cmath>
#include <stdexcept>

#include "fockbound/fock.hpp"

namespace fockbound {

InternalStateSet::InternalStateSet(std::vector<Eigen::VectorXcd> polarizations,
                                   std::vector<double> delays, double fwhm)
    : pols_(std::move(polarizations)), delays_(std::move(delays)), fwhm_(fwhm) {
  if (pols_.size() != delays_.size() || pols_.empty()) {
    throw std::invalid_argument("InternalStateSet: ports mismatch");
  }
  if (!(fwhm_ > 0.0)) throw std::domain_error("InternalStateSet: FWHM must be positive");
  const Eigen::Index dim = pols_.front().size();
  for (const auto& p : pols_) {
    if (p.size() != dim || dim == 0) {
      throw std::invalid_argument("InternalStateSet: polarization dimensions differ");
    }
    if (std::abs(p.norm() - 1.0) > kNormTol) {
      throw std::invalid_argument("InternalStateSet: polarization vector not unit norm");
    }
  }
}

InternalStateSet InternalStateSet::delays_only(std::vector<double> delays, double fwhm) {
  Eigen::VectorXcd one(1);
  one << 1.0;
  std::vector<Eigen::VectorXcd> pols(delays.size(), one);
  return InternalStateSet(std::move(pols), std::move(delays), fwhm);
}

InternalStateSet InternalStateSet::identical(int ports) {
  return delays_only(std::vector<double>(static_cast<std::size_t>(ports), 0.0), 1.0);
}

Eigen::MatrixXcd InternalStateSet::gram() const {
  const int n = ports();
  Eigen::MatrixXcd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int s = 0; s < n; ++s) {
      double overlap = gaussian_overlap(delays_[static_cast<std::size_t>(j)] -
                                            delays_[static_cast<std::size_t>(s)],
                                        fwhm_);
      g(j, s) = pols_[static_cast<std::size_t>(j)].dot(pols_[static_cast<std::size_t>(s)]) * overlap;
    }
  }
  return g;
}

}  // namespace fockbound
