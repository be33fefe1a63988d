#pragma once

// Test-side reference computations, kept independent of the library paths
// they are used to check.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "fockbound/photon_vector.hpp"

namespace testsupport {

using Complex = std::complex<double>;

/// Expands a product of linear forms in creation operators over `modes`
/// orthonormal modes: prod_r (sum_m forms[r][m] b_m^dag) |0>, returning the
/// coefficient of each occupation monomial prod (b_m^dag)^{x_m}.
inline std::map<std::vector<int>, Complex> expand_linear_forms(
    const std::vector<std::vector<Complex>>& forms, int modes) {
  std::map<std::vector<int>, Complex> poly;
  poly[std::vector<int>(static_cast<std::size_t>(modes), 0)] = 1.0;
  for (const auto& form : forms) {
    std::map<std::vector<int>, Complex> next;
    for (const auto& [mono, coef] : poly) {
      for (int m = 0; m < modes; ++m) {
        if (form[static_cast<std::size_t>(m)] == Complex(0.0)) continue;
        auto grown = mono;
        ++grown[static_cast<std::size_t>(m)];
        next[grown] += coef * form[static_cast<std::size_t>(m)];
      }
    }
    poly = std::move(next);
  }
  return poly;
}

inline double fact(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Fock-state transition probabilities by direct polynomial expansion of the
/// transformed creation operators (no permanents). Returns P(x|n) for every
/// output x reachable from n through the unitary (rows index input ports).
inline std::map<fockbound::PhotonVector, double> propagate_fock_state(
    const Eigen::MatrixXcd& u, const fockbound::PhotonVector& n) {
  const int ports = static_cast<int>(u.rows());
  std::vector<std::vector<Complex>> forms;
  for (int j = 0; j < ports; ++j) {
    std::vector<Complex> form(static_cast<std::size_t>(ports));
    for (int k = 0; k < ports; ++k) form[static_cast<std::size_t>(k)] = u(j, k);
    for (int c = 0; c < n[j]; ++c) forms.push_back(form);
  }
  double in_norm = 1.0;
  for (int j = 0; j < ports; ++j) in_norm *= fact(n[j]);

  std::map<fockbound::PhotonVector, double> out;
  for (const auto& [mono, coef] : expand_linear_forms(forms, ports)) {
    double x_fact = 1.0;
    for (int c : mono) x_fact *= fact(c);
    const double amp2 = std::norm(coef) * x_fact / in_norm;
    out[fockbound::PhotonVector(mono)] += amp2;
  }
  return out;
}

/// Ryser permanent without a size cap; a test-local copy so acceptance-side
/// aggregates do not depend on the library kernel under test.
inline Complex ryser_permanent(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  std::vector<Complex> rowsum(static_cast<std::size_t>(n), 0.0);
  Complex acc = 0.0;
  std::uint64_t gray = 0;
  for (std::uint64_t g = 1; g < (1ull << n); ++g) {
    const int j = std::countr_zero(g);
    const std::uint64_t bit = 1ull << j;
    gray ^= bit;
    const double sign_col = (gray & bit) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
      rowsum[static_cast<std::size_t>(i)] += sign_col * m(i, j);
    }
    Complex prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= rowsum[static_cast<std::size_t>(i)];
    acc += ((n - std::popcount(gray)) % 2 == 0) ? prod : -prod;
  }
  return acc;
}

/// Deterministic uniform double in [0,1) from raw engine bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Box-Muller normal deviate from fully specified engine output.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 == 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) g(r, c) = Complex(gaussian(rng), gaussian(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  // Fix the phase so the result does not depend on QR sign conventions.
  Eigen::MatrixXcd r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < n; ++c) {
    const Complex d = r_mat(c, c);
    if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
  }
  return q;
}

/// Random unit vector in C^dim.
inline Eigen::VectorXcd random_unit_vector(int dim, std::mt19937_64& rng) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(gaussian(rng), gaussian(rng));
  return v / v.norm();
}

}  // namespace testsupport
