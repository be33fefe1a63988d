#include <complex>
#include <numbers>

#include "doctest.h"
#include "fockbound/combinatorics.hpp"
#include "fockbound/fock.hpp"
#include "test_support.hpp"

using namespace fockbound;
using testsupport::Complex;

namespace {

Eigen::MatrixXcd all_ones(int n) { return Eigen::MatrixXcd::Ones(n, n); }

}  // namespace

TEST_CASE("permanent: closed forms") {
  Eigen::MatrixXcd m1(1, 1);
  m1 << Complex(2.5, -1.0);
  CHECK(permanent(m1) == Complex(2.5, -1.0));

  Eigen::MatrixXcd m2(2, 2);
  m2 << Complex(1, 1), Complex(0, 2), Complex(3, 0), Complex(1, -1);
  const Complex expected = Complex(1, 1) * Complex(1, -1) + Complex(0, 2) * Complex(3, 0);
  CHECK(std::abs(permanent(m2) - expected) < 1e-14);
}

TEST_CASE("permanent: 3x3 all-ones equals the brute-force permutation sum") {
  // Independent oracle: explicit sum over all 3! permutations.
  const Eigen::MatrixXcd m = all_ones(3);
  int perm[3] = {0, 1, 2};
  Complex brute = 0.0;
  do {
    Complex term = 1.0;
    for (int i = 0; i < 3; ++i) term *= m(i, perm[i]);
    brute += term;
  } while (std::next_permutation(perm, perm + 3));
  CHECK(std::abs(brute - 6.0) < 1e-15);
  CHECK(std::abs(permanent(m) - brute) < 1e-13);
}

TEST_CASE("permanent: dimension cap") {
  CHECK_THROWS_AS((void)permanent(all_ones(13)), std::length_error);
  CHECK(std::abs(permanent(Eigen::MatrixXcd(0, 0)) - 1.0) < 1e-15);
}

TEST_CASE("permanent agrees with the test-side Ryser copy on random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::MatrixXcd m(6, 6);
    for (int r = 0; r < 6; ++r) {
      for (int c = 0; c < 6; ++c) {
        m(r, c) = Complex(testsupport::gaussian(rng), testsupport::gaussian(rng));
      }
    }
    CHECK(std::abs(permanent(m) - testsupport::ryser_permanent(m)) <
          1e-10 * std::max(1.0, std::abs(permanent(m))));
  }
}

TEST_CASE("transition probabilities: paper beamsplitter cases") {
  const auto bs = ModeUnitary::beamsplitter(0.5);
  CHECK(transition_probability(bs, {1, 1}, {1, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(transition_probability(bs, {1, 1}, {2, 0}) == doctest::Approx(0.5).epsilon(1e-12));

  const auto id3 = ModeUnitary::identity(3);
  CHECK(transition_probability(id3, {2, 0, 1}, {2, 0, 1}) == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)transition_probability(bs, {1, 1}, {1, 0}), std::domain_error);
}

TEST_CASE("transition probabilities match direct Fock-space propagation") {
  std::mt19937_64 rng(42);
  for (int ports = 1; ports <= 3; ++ports) {
    const ModeUnitary u(testsupport::random_unitary(ports, rng));
    for (const auto& n : compositions_up_to(3, ports)) {
      const auto oracle = testsupport::propagate_fock_state(u.matrix(), n);
      for (const auto& x : compositions_exact(n.total(), ports)) {
        const auto it = oracle.find(x);
        const double expected = it == oracle.end() ? 0.0 : it->second;
        CHECK(transition_probability(u, n, x) == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("unitarity conservation: output distribution sums to one") {
  std::mt19937_64 rng(7);
  for (int ports = 2; ports <= 3; ++ports) {
    const ModeUnitary u(testsupport::random_unitary(ports, rng));
    for (const auto& n : compositions_up_to(5, ports)) {
      double sum = 0.0;
      for (const auto& x : compositions_exact(n.total(), ports)) {
        sum += transition_probability(u, n, x);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("beamsplitter amplitude table: paper cases") {
  const auto hom = beamsplitter_output_amplitudes(0.5, 1, 1);
  CHECK(std::abs(hom.at(PhotonVector{1, 1})) < 1e-12);

  const auto transparent = beamsplitter_output_amplitudes(1.0, 2, 3);
  CHECK(std::abs(transparent.at(PhotonVector{2, 3}) - 1.0) < 1e-12);
  for (const auto& [x, amp] : transparent) {
    if (!(x == PhotonVector{2, 3})) CHECK(std::abs(amp) < 1e-12);
  }

  const auto five_one = beamsplitter_output_amplitudes(5.0 / 6.0, 5, 1);
  CHECK(std::norm(five_one.at(PhotonVector{5, 1})) < 1e-12);

  CHECK_THROWS_AS((void)beamsplitter_output_amplitudes(1.2, 1, 1), std::domain_error);
}

TEST_CASE("beamsplitter table squared agrees with the permanent route") {
  for (double eta : {0.0, 0.3, 0.5, 5.0 / 6.0, 1.0}) {
    const auto u = ModeUnitary::beamsplitter(eta);
    for (int n1 = 0; n1 + 0 <= 6; ++n1) {
      for (int n2 = 0; n1 + n2 <= 6; ++n2) {
        const auto amps = beamsplitter_output_amplitudes(eta, n1, n2);
        double total = 0.0;
        for (const auto& [x, amp] : amps) {
          CHECK(std::norm(amp) ==
                doctest::Approx(transition_probability(u, PhotonVector{n1, n2}, x))
                    .epsilon(1e-10));
          total += std::norm(amp);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("classical routing: paper cases and normalization") {
  const auto bs = ModeUnitary::beamsplitter(0.5);
  CHECK(distinguishable_transition_probability(bs, {1, 1}, {1, 1}) == doctest::Approx(0.5));
  CHECK(distinguishable_transition_probability(bs, {3, 3}, {3, 3}) ==
        doctest::Approx(0.3125).epsilon(1e-12));
  CHECK(distinguishable_transition_probability(ModeUnitary::identity(2), {4, 1}, {4, 1}) ==
        doctest::Approx(1.0));
  CHECK(distinguishable_transition_probability(bs, {1, 1}, {1, 0}) == 0.0);

  std::mt19937_64 rng(3);
  const ModeUnitary u(testsupport::random_unitary(2, rng));
  for (const auto& n : compositions_up_to(8, 2)) {
    double sum = 0.0;
    for (const auto& x : compositions_exact(n.total(), 2)) {
      sum += distinguishable_transition_probability(u, n, x);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gram_factor reconstructs the Gram matrix") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    Eigen::MatrixXcd gram(3, 3);
    std::vector<Eigen::VectorXcd> vecs;
    for (int j = 0; j < 3; ++j) vecs.push_back(testsupport::random_unit_vector(3, rng));
    for (int j = 0; j < 3; ++j) {
      for (int s = 0; s < 3; ++s) gram(j, s) = vecs[static_cast<std::size_t>(j)].dot(vecs[static_cast<std::size_t>(s)]);
    }
    const Eigen::MatrixXcd l = gram_factor(gram);
    for (int j = 0; j < 3; ++j) {
      for (int s = 0; s < 3; ++s) {
        Complex rebuilt = 0.0;
        for (int m = 0; m < l.cols(); ++m) rebuilt += std::conj(l(j, m)) * l(s, m);
        CHECK(std::abs(rebuilt - gram(j, s)) < 1e-10);
      }
    }
  }

  // Slightly negative eigenvalues within the clamp window pass; beyond, abort.
  Eigen::MatrixXcd near = Eigen::MatrixXcd::Identity(2, 2);
  near(0, 0) = near(1, 1) = 1.0;
  near -= 5e-11 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_NOTHROW((void)gram_factor(near - Eigen::MatrixXcd::Identity(2, 2) +
                                  Eigen::MatrixXcd::Identity(2, 2)));
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, 1.5, 1.5, 1.0;  // eigenvalue -0.5
  CHECK_THROWS_AS((void)gram_factor(bad), std::runtime_error);
}

TEST_CASE("partial distinguishability endpoints") {
  std::mt19937_64 rng(9);
  for (int ports = 2; ports <= 3; ++ports) {
    const ModeUnitary u(testsupport::random_unitary(ports, rng));
    const Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(ports, ports);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ports, ports);
    for (const auto& n : compositions_up_to(3, ports)) {
      for (const auto& x : compositions_exact(n.total(), ports)) {
        CHECK(partial_transition_probability(u, ones, n, x) ==
              doctest::Approx(transition_probability(u, n, x)).epsilon(1e-10));
        CHECK(partial_transition_probability(u, id, n, x) ==
              doctest::Approx(distinguishable_transition_probability(u, n, x))
                  .epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("partial distinguishability against an extended-space expansion") {
  // Photons carry explicit complex internal vectors; the oracle expands the
  // transformed creation-operator product directly over (port, internal)
  // modes. This pins down the Gram orientation conventions.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    const int ports = 2 + trial % 2;
    const int dim = 2 + trial % 2;
    const ModeUnitary u(testsupport::random_unitary(ports, rng));
    std::vector<Eigen::VectorXcd> internal_vecs;
    for (int j = 0; j < ports; ++j) {
      internal_vecs.push_back(testsupport::random_unit_vector(dim, rng));
    }
    const InternalStateSet states(internal_vecs,
                                  std::vector<double>(static_cast<std::size_t>(ports), 0.0),
                                  1.0);

    for (const auto& n : compositions_up_to(3, ports)) {
      if (n.total() == 0) continue;
      // forms over extended modes (k, m) -> index k * dim + m
      std::vector<std::vector<Complex>> forms;
      for (int j = 0; j < ports; ++j) {
        std::vector<Complex> form(static_cast<std::size_t>(ports * dim));
        for (int k = 0; k < ports; ++k) {
          for (int m = 0; m < dim; ++m) {
            form[static_cast<std::size_t>(k * dim + m)] =
                u(j, k) * internal_vecs[static_cast<std::size_t>(j)](m);
          }
        }
        for (int c = 0; c < n[j]; ++c) forms.push_back(form);
      }
      double in_norm = 1.0;
      for (int j = 0; j < ports; ++j) in_norm *= testsupport::fact(n[j]);

      std::map<PhotonVector, double> expected;
      for (const auto& [mono, coef] : testsupport::expand_linear_forms(forms, ports * dim)) {
        double x_fact = 1.0;
        std::vector<int> spatial(static_cast<std::size_t>(ports), 0);
        for (int k = 0; k < ports; ++k) {
          for (int m = 0; m < dim; ++m) {
            x_fact *= testsupport::fact(mono[static_cast<std::size_t>(k * dim + m)]);
            spatial[static_cast<std::size_t>(k)] += mono[static_cast<std::size_t>(k * dim + m)];
          }
        }
        expected[PhotonVector(spatial)] += std::norm(coef) * x_fact / in_norm;
      }

      for (const auto& x : compositions_exact(n.total(), ports)) {
        const auto it = expected.find(x);
        const double want = it == expected.end() ? 0.0 : it->second;
        CHECK(partial_transition_probability(u, states, n, x) ==
              doctest::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("partial HOM and balanced tritter coincidences") {
  const auto bs = ModeUnitary::beamsplitter(0.5);
  CHECK(partial_transition_probability(bs, InternalStateSet::identical(2), {1, 1}, {1, 1}) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const auto tritter = ModeUnitary::tritter();
  CHECK(partial_transition_probability(tritter, InternalStateSet::identical(3), {1, 1, 1},
                                       {1, 1, 1}) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

  // Fully distinguishable photons: delays far beyond the pulse width.
  const auto far = InternalStateSet::delays_only({0.0, 100.0, 200.0}, 1.0);
  CHECK(partial_transition_probability(tritter, far, {1, 1, 1}, {1, 1, 1}) ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-8));
}

TEST_CASE("gaussian overlap closed form") {
  CHECK(gaussian_overlap(0.0, 1.0) == 1.0);
  CHECK(gaussian_overlap(1.0, 1.0) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(gaussian_overlap(2.0, 2.0) == doctest::Approx(0.0625).epsilon(1e-12));
  CHECK(gaussian_overlap(50.0, 1.0) < 1e-300);
  CHECK_THROWS_AS((void)gaussian_overlap(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)gaussian_overlap(1.0, -1.0), std::domain_error);
}

TEST_CASE("tritter coincidence closed form") {
  CHECK(tritter_coincidence_theory(0, 0, 0, 0.3) == doctest::Approx(2.0 / 9.0));
  CHECK(tritter_coincidence_theory(1, 1, 1, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(tritter_coincidence_theory(0.5, 0.5, 0.5, 0.0) ==
        doctest::Approx(1.75 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)tritter_coincidence_theory(1, 1, 1, std::numbers::pi),
                  std::domain_error);
  CHECK_THROWS_AS((void)tritter_coincidence_theory(-0.1, 0, 0, 0), std::domain_error);
}

TEST_CASE("tritter closed form equals the partial-distinguishability oracle") {
  std::mt19937_64 rng(21);
  const auto tritter = ModeUnitary::tritter();
  int checked = 0;
  while (checked < 20) {
    std::vector<Eigen::VectorXcd> vecs;
    for (int j = 0; j < 3; ++j) vecs.push_back(testsupport::random_unit_vector(3, rng));
    Eigen::MatrixXcd gram(3, 3);
    for (int j = 0; j < 3; ++j) {
      for (int s = 0; s < 3; ++s) gram(j, s) = vecs[static_cast<std::size_t>(j)].dot(vecs[static_cast<std::size_t>(s)]);
    }
    const double r12 = std::abs(gram(0, 1));
    const double r23 = std::abs(gram(1, 2));
    const double r31 = std::abs(gram(2, 0));
    const double phi = std::arg(gram(0, 1)) + std::arg(gram(1, 2)) + std::arg(gram(2, 0));
    const InternalStateSet states(vecs, {0.0, 0.0, 0.0}, 1.0);
    CHECK(tritter_coincidence_theory(r12, r23, r31, phi) ==
          doctest::Approx(partial_transition_probability(tritter, states, {1, 1, 1}, {1, 1, 1}))
              .epsilon(1e-8));
    ++checked;
  }
}

TEST_CASE("visibility") {
  CHECK(visibility(0.0, 0.5) == doctest::Approx(1.0));
  CHECK(visibility(0.5, 0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)visibility(0.1, 0.0), std::domain_error);
}

TEST_CASE("mode unitary construction enforces unitarity") {
  Eigen::MatrixXcd not_unitary(2, 2);
  not_unitary << 1.0, 0.0, 0.0, 0.5;
  CHECK_THROWS_AS(ModeUnitary{not_unitary}, std::invalid_argument);
  CHECK_NOTHROW(ModeUnitary::fourier(4));
  CHECK_THROWS_AS(ModeUnitary::beamsplitter(-0.1), std::domain_error);
}
