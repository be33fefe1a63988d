#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>

#include "fockbound/internal_states.hpp"
#include "fockbound/photon_vector.hpp"
#include "fockbound/unitary.hpp"

namespace fockbound {

/// Largest matrix dimension accepted by permanent().
inline constexpr int kPermanentCap = 12;

/// Matrix permanent via Ryser's inclusion-exclusion formula with Gray-code
/// subset updates, O(2^n n). Throws std::length_error above kPermanentCap.
std::complex<double> permanent(const Eigen::MatrixXcd& m);

/// P(x|n) = |<x|U|n>|^2 for indistinguishable photons through a lossless
/// network. Requires total(x) == total(n); a lossless unitary cannot change
/// the photon number, so a mismatched query is a caller error.
double transition_probability(const ModeUnitary& u, const PhotonVector& n,
                              const PhotonVector& x);

/// Output amplitudes of a beamsplitter for the Fock input |n1,n2>, as the
/// double binomial sum with the convention r = -sqrt(1-eta), r' = -r,
/// t = t' = sqrt(eta). Keys are output photon vectors of length 2.
std::map<PhotonVector, std::complex<double>> beamsplitter_output_amplitudes(
    double eta, int n1, int n2);

/// Classical routing model: each photon entering port i lands in port j
/// independently with probability |u_ij|^2. Returns 0 for mismatched totals.
double distinguishable_transition_probability(const ModeUnitary& u,
                                              const PhotonVector& n,
                                              const PhotonVector& x);

/// Factor a Hermitian near-PSD Gram matrix as Gamma_js = sum_m conj(L_jm) L_sm
/// with L of shape N x rank. Eigenvalues in [-1e-10, 0] are clamped to zero;
/// anything more negative aborts with std::runtime_error. Row j of L is an
/// explicit unit vector realizing the j-th internal state.
Eigen::MatrixXcd gram_factor(const Eigen::MatrixXcd& gram);

/// Transition probability for partially distinguishable photons. The mode
/// space is extended to (port x internal basis) using gram_factor of the
/// state set's Gram matrix; each extended output distribution contributes one
/// permanent. Reduces to transition_probability for identical states and to
/// distinguishable_transition_probability for orthogonal ones.
double partial_transition_probability(const ModeUnitary& u,
                                      const InternalStateSet& states,
                                      const PhotonVector& n,
                                      const PhotonVector& x);

/// As above but with the internal structure given directly as a Gram matrix.
double partial_transition_probability(const ModeUnitary& u,
                                      const Eigen::MatrixXcd& gram,
                                      const PhotonVector& n,
                                      const PhotonVector& x);

/// Temporal overlap exp(-4 ln2 tau^2 / dT^2) of two Gaussian pulses with
/// relative delay tau and common FWHM dT.
double gaussian_overlap(double tau, double fwhm);

/// Three-fold coincidence probability of a balanced tritter,
/// (1/9)(2 + 4 r12 r23 r31 cos(phi) - r12^2 - r23^2 - r31^2), where phi is the
/// triad phase phi_12 + phi_23 + phi_31. The overlap moduli must admit a PSD
/// Gram matrix and the result must land in [0,1].
double tritter_coincidence_theory(double r12, double r23, double r31, double phi);

/// Visibility (p_classical - p_quantum) / p_classical.
double visibility(double p_quantum, double p_classical);

}  // namespace fockbound
