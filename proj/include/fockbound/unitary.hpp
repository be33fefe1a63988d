#pragma once

#include <Eigen/Dense>
#include <complex>

namespace fockbound {

/// Lossless network matrix. Convention: the input-port creation operator
/// transforms as a_j^dag = sum_k u_jk b_k^dag, so rows index input ports and
/// columns index output ports.
class ModeUnitary {
 public:
  static constexpr double kUnitarityTol = 1e-12;

  explicit ModeUnitary(Eigen::MatrixXcd entries);

  /// eta is the transmittance; entries follow the convention
  /// r = -sqrt(1-eta), r' = -r, t = t' = sqrt(eta).
  static ModeUnitary beamsplitter(double eta);

  /// Balanced three-port network: u_jk = exp(i 2 pi j k / 3) / sqrt(3).
  static ModeUnitary tritter();

  static ModeUnitary identity(int ports);

  /// Discrete-Fourier unitary of arbitrary dimension.
  static ModeUnitary fourier(int ports);

  int ports() const { return static_cast<int>(u_.rows()); }
  std::complex<double> operator()(int in, int out) const { return u_(in, out); }
  const Eigen::MatrixXcd& matrix() const { return u_; }

 private:
  Eigen::MatrixXcd u_;
};

}  // namespace fockbound
