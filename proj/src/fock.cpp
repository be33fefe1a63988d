#include "fockbound/fock.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fockbound/combinatorics.hpp"

namespace fockbound {

std::complex<double> permanent(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("permanent: matrix not square");
  const int n = static_cast<int>(m.rows());
  if (n > kPermanentCap) {
    throw std::length_error("permanent: dimension exceeds cap of " +
                            std::to_string(kPermanentCap));
  }
  if (n == 0) return 1.0;

  // Ryser: per(A) = (-1)^n sum_{S != empty} (-1)^|S| prod_i sum_{j in S} A_ij,
  // walking subsets in Gray-code order so each step updates one column.
  std::vector<std::complex<double>> rowsum(static_cast<std::size_t>(n), 0.0);
  std::complex<double> acc = 0.0;
  const std::uint32_t full = 1u << n;
  std::uint32_t gray = 0;
  for (std::uint32_t g = 1; g < full; ++g) {
    const int j = std::countr_zero(g);
    const std::uint32_t bit = 1u << j;
    gray ^= bit;
    if (gray & bit) {
      for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] += m(i, j);
    } else {
      for (int i = 0; i < n; ++i) rowsum[static_cast<std::size_t>(i)] -= m(i, j);
    }
    std::complex<double> prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= rowsum[static_cast<std::size_t>(i)];
    const int popcount = std::popcount(gray);
    acc += ((n - popcount) % 2 == 0) ? prod : -prod;
  }
  return acc;
}

namespace {

// Port indices with each port j repeated v_j times.
std::vector<int> repeat_ports(const PhotonVector& v) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(v.total()));
  for (int j = 0; j < v.size(); ++j) {
    for (int c = 0; c < v[j]; ++c) out.push_back(j);
  }
  return out;
}

double factorial_product(const PhotonVector& v) {
  double p = 1.0;
  for (int j = 0; j < v.size(); ++j) p *= factorial(v[j]);
  return p;
}

}  // namespace

double transition_probability(const ModeUnitary& u, const PhotonVector& n,
                              const PhotonVector& x) {
  if (n.size() != u.ports() || x.size() != u.ports()) {
    throw std::invalid_argument("transition_probability: port count mismatch");
  }
  if (n.total() != x.total()) {
    throw std::domain_error(
        "transition_probability: photon totals differ; a lossless network "
        "conserves the total, so this probability is identically zero");
  }
  const auto rows = repeat_ports(n);
  const auto cols = repeat_ports(x);
  const int t = static_cast<int>(rows.size());
  Eigen::MatrixXcd sub(t, t);
  for (int r = 0; r < t; ++r) {
    for (int c = 0; c < t; ++c) {
      sub(r, c) = u(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
    }
  }
  const double norm = factorial_product(n) * factorial_product(x);
  return std::norm(permanent(sub)) / norm;
}

std::map<PhotonVector, std::complex<double>> beamsplitter_output_amplitudes(
    double eta, int n1, int n2) {
  if (eta < 0.0 || eta > 1.0) {
    throw std::domain_error("beamsplitter_output_amplitudes: eta outside [0,1]");
  }
  if (n1 < 0 || n2 < 0) {
    throw std::domain_error("beamsplitter_output_amplitudes: negative photon number");
  }
  std::map<PhotonVector, std::complex<double>> amps;
  const double base = factorial(n1) * factorial(n2);
  for (int i = 0; i <= n1; ++i) {
    for (int j = 0; j <= n2; ++j) {
      const int out1 = n1 - i + j;
      const int out2 = n2 - j + i;
      double term = binomial(n1, i) * binomial(n2, j) *
                    std::pow(eta, 0.5 * (n1 + n2 - i - j)) *
                    std::pow(1.0 - eta, 0.5 * (i + j)) *
                    ((j % 2 == 0) ? 1.0 : -1.0) *
                    std::sqrt(factorial(out2) * factorial(out1) / base);
      amps[PhotonVector{out1, out2}] += term;
    }
  }
  return amps;
}

double distinguishable_transition_probability(const ModeUnitary& u,
                                              const PhotonVector& n,
                                              const PhotonVector& x) {
  if (n.size() != u.ports() || x.size() != u.ports()) {
    throw std::invalid_argument(
        "distinguishable_transition_probability: port count mismatch");
  }
  if (n.total() != x.total()) return 0.0;  // classically impossible routing

  const int m = u.ports();
  std::map<PhotonVector, double> dist;
  dist[PhotonVector::zeros(m)] = 1.0;
  for (int i = 0; i < m; ++i) {
    if (n[i] == 0) continue;
    std::vector<double> route(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) route[static_cast<std::size_t>(k)] = std::norm(u(i, k));
    std::map<PhotonVector, double> next;
    for (const auto& split : compositions_exact(n[i], m)) {
      double w = factorial(n[i]);
      for (int k = 0; k < m; ++k) {
        w *= std::pow(route[static_cast<std::size_t>(k)], split[k]) / factorial(split[k]);
      }
      if (w == 0.0) continue;
      for (const auto& [counts, p] : dist) {
        PhotonVector merged = counts;
        for (int k = 0; k < m; ++k) merged[k] += split[k];
        next[merged] += p * w;
      }
    }
    dist = std::move(next);
  }
  auto it = dist.find(x);
  return it == dist.end() ? 0.0 : it->second;
}

Eigen::MatrixXcd gram_factor(const Eigen::MatrixXcd& gram) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw std::invalid_argument("gram_factor: matrix not square");
  }
  constexpr double kClampFloor = -1e-10;
  constexpr double kDropTol = 1e-12;

  Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("gram_factor: eigendecomposition failed");
  }
  const auto& vals = es.eigenvalues();
  if (vals.minCoeff() < kClampFloor) {
    throw std::runtime_error("gram_factor: Gram matrix is not positive semidefinite "
                             "(min eigenvalue " + std::to_string(vals.minCoeff()) + ")");
  }
  std::vector<int> keep;
  for (int i = 0; i < vals.size(); ++i) {
    if (vals(i) > kDropTol) keep.push_back(i);
  }
  if (keep.empty()) throw std::runtime_error("gram_factor: Gram matrix has rank zero");

  Eigen::MatrixXcd factor(gram.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    factor.col(static_cast<Eigen::Index>(c)) =
        es.eigenvectors().col(keep[c]) * std::sqrt(vals(keep[c]));
  }
  // Rows of the returned matrix are coefficient vectors of explicit internal
  // states: sum_m conj(L_jm) L_sm = Gamma_js.
  return factor.conjugate();
}

double partial_transition_probability(const ModeUnitary& u,
                                      const Eigen::MatrixXcd& gram,
                                      const PhotonVector& n,
                                      const PhotonVector& x) {
  const int ports = u.ports();
  if (n.size() != ports || x.size() != ports || gram.rows() != ports) {
    throw std::invalid_argument("partial_transition_probability: port count mismatch");
  }
  if (n.total() != x.total()) {
    throw std::domain_error("partial_transition_probability: photon totals differ");
  }
  const int t = n.total();
  if (t > kPermanentCap) {
    throw std::length_error("partial_transition_probability: total photon number "
                            "exceeds the permanent cap");
  }
  if (t == 0) return 1.0;

  const Eigen::MatrixXcd l = gram_factor(gram);
  const int d = static_cast<int>(l.cols());
  const auto rows = repeat_ports(n);

  // Extended output modes are pairs (port, internal channel). Enumerate all
  // splits of each port's count over the d channels; each split contributes
  // one permanent of the combined amplitude matrix u_jk * L_jm.
  std::vector<std::vector<PhotonVector>> splits(static_cast<std::size_t>(ports));
  for (int k = 0; k < ports; ++k) {
    splits[static_cast<std::size_t>(k)] = compositions_exact(x[k], d);
  }

  Eigen::MatrixXcd w(t, t);
  double acc = 0.0;
  std::vector<std::size_t> pick(static_cast<std::size_t>(ports), 0);
  while (true) {
    double denom = 1.0;
    int col = 0;
    for (int k = 0; k < ports; ++k) {
      const PhotonVector& split = splits[static_cast<std::size_t>(k)][pick[static_cast<std::size_t>(k)]];
      for (int m = 0; m < d; ++m) {
        denom *= factorial(split[m]);
        for (int c = 0; c < split[m]; ++c) {
          for (int r = 0; r < t; ++r) {
            const int j = rows[static_cast<std::size_t>(r)];
            w(r, col) = u(j, k) * l(j, m);
          }
          ++col;
        }
      }
    }
    acc += std::norm(permanent(w)) / denom;

    int k = 0;
    while (k < ports) {
      if (++pick[static_cast<std::size_t>(k)] < splits[static_cast<std::size_t>(k)].size()) break;
      pick[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == ports) break;
  }
  return acc / factorial_product(n);
}

double partial_transition_probability(const ModeUnitary& u,
                                      const InternalStateSet& states,
                                      const PhotonVector& n,
                                      const PhotonVector& x) {
  if (states.ports() != u.ports()) {
    throw std::invalid_argument("partial_transition_probability: state set ports mismatch");
  }
  return partial_transition_probability(u, states.gram(), n, x);
}

double gaussian_overlap(double tau, double fwhm) {
  if (!(fwhm > 0.0)) throw std::domain_error("gaussian_overlap: FWHM must be positive");
  const double z = tau / fwhm;
  return std::exp(-4.0 * std::numbers::ln2 * z * z);
}

double tritter_coincidence_theory(double r12, double r23, double r31, double phi) {
  for (double r : {r12, r23, r31}) {
    if (r < 0.0 || r > 1.0) {
      throw std::domain_error("tritter_coincidence_theory: overlap modulus outside [0,1]");
    }
  }
  // Realizability: the moduli and triad phase must come from some PSD Gram
  // matrix; all phase gauges are equivalent, so put the whole phase on (1,2).
  Eigen::MatrixXcd gram(3, 3);
  const std::complex<double> g12 = std::polar(r12, phi);
  gram << 1.0, g12, r31,
          std::conj(g12), 1.0, r23,
          r31, r23, 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::domain_error("tritter_coincidence_theory: overlaps do not form a "
                            "PSD Gram matrix");
  }
  const double p = (2.0 + 4.0 * r12 * r23 * r31 * std::cos(phi) -
                    r12 * r12 - r23 * r23 - r31 * r31) / 9.0;
  if (p < -1e-12 || p > 1.0 + 1e-12) {
    throw std::domain_error("tritter_coincidence_theory: non-physical overlap data");
  }
  return std::min(1.0, std::max(0.0, p));
}

double visibility(double p_quantum, double p_classical) {
  if (!(p_classical > 0.0)) {
    throw std::domain_error("visibility: classical probability must be positive");
  }
  return (p_classical - p_quantum) / p_classical;
}

}  // namespace fockbound
