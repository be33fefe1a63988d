#include "fockbound/unitary.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fockbound {

ModeUnitary::ModeUnitary(Eigen::MatrixXcd entries) : u_(std::move(entries)) {
  if (u_.rows() == 0 || u_.rows() != u_.cols()) {
    throw std::invalid_argument("ModeUnitary: matrix must be square and non-empty");
  }
  Eigen::MatrixXcd gram = u_ * u_.adjoint();
  gram -= Eigen::MatrixXcd::Identity(u_.rows(), u_.cols());
  double dev = gram.cwiseAbs().maxCoeff();
  if (dev > kUnitarityTol) {
    throw std::invalid_argument("ModeUnitary: U U^dag deviates from identity by " +
                                std::to_string(dev));
  }
}

ModeUnitary ModeUnitary::beamsplitter(double eta) {
  if (eta < 0.0 || eta > 1.0) throw std::domain_error("beamsplitter: eta outside [0,1]");
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  Eigen::MatrixXcd u(2, 2);
  u << t, r, -r, t;
  return ModeUnitary(u);
}

ModeUnitary ModeUnitary::tritter() { return fourier(3); }

ModeUnitary ModeUnitary::identity(int ports) {
  if (ports <= 0) throw std::domain_error("identity: ports must be positive");
  return ModeUnitary(Eigen::MatrixXcd::Identity(ports, ports));
}

ModeUnitary ModeUnitary::fourier(int ports) {
  if (ports <= 0) throw std::domain_error("fourier: ports must be positive");
  Eigen::MatrixXcd u(ports, ports);
  const double norm = 1.0 / std::sqrt(static_cast<double>(ports));
  for (int j = 0; j < ports; ++j) {
    for (int k = 0; k < ports; ++k) {
      double phase = 2.0 * std::numbers::pi * j * k / ports;
      u(j, k) = std::polar(norm, phase);
    }
  }
  return ModeUnitary(u);
}

}  // namespace fockbound
