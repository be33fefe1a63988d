#include <cmath>

#include "doctest.h"
#include "fockbound/combinatorics.hpp"
#include "fockbound/devices.hpp"
#include "test_support.hpp"

using namespace fockbound;

TEST_CASE("poisson input probabilities") {
  CHECK(poisson_input_probability(SourceIntensities{0.0, 0.0}, {0, 0}) == doctest::Approx(1.0));
  CHECK(poisson_input_probability(SourceIntensities{1.0}, {1}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(poisson_input_probability(SourceIntensities{0.5, 0.5}, {1, 1}) ==
        doctest::Approx(0.25 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(poisson_input_probability(SourceIntensities{0.0}, {2}) == 0.0);
  CHECK_THROWS_AS(SourceIntensities{-0.1}, std::domain_error);
}

TEST_CASE("threshold POVM probabilities") {
  const DetectorBank ideal({0.8}, 0.0);
  CHECK(pattern_given_fock({0}, ideal, ClickPattern(1, 0)) == doctest::Approx(1.0));
  CHECK(pattern_given_fock({1}, ideal, ClickPattern(1, 1)) == doctest::Approx(0.8));

  const DetectorBank bank({0.5, 0.5}, 1e-6);
  const double expected = (1.0 - (1.0 - 1e-6) * 0.25) * ((1.0 - 1e-6) * 1.0);
  CHECK(pattern_given_fock({2, 0}, bank, ClickPattern(2, 0b01)) ==
        doctest::Approx(expected).epsilon(1e-14));

  CHECK_THROWS_AS(DetectorBank({1.5}, 0.0), std::domain_error);
  CHECK_THROWS_AS(DetectorBank({0.5}, -0.1), std::domain_error);
}

TEST_CASE("POVM outcomes sum to one over all patterns") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 3);
    std::vector<double> kappa;
    for (int j = 0; j < m; ++j) kappa.push_back(testsupport::uniform01(rng));
    const DetectorBank bank(kappa, testsupport::uniform01(rng) * 0.1);
    std::vector<int> x;
    for (int j = 0; j < m; ++j) x.push_back(static_cast<int>(rng() % 7));
    const PhotonVector xv(x);
    double sum = 0.0;
    for (std::uint32_t bits = 0; bits < ClickPattern::count(m); ++bits) {
      sum += pattern_given_fock(xv, bank, ClickPattern(m, bits));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("no-click probability is monotone in occupation and efficiency") {
  const ClickPattern none(2, 0);
  double prev = 1.0;
  for (int n = 0; n <= 6; ++n) {
    const double p = pattern_given_fock({n, 0}, DetectorBank({0.6, 0.6}, 1e-3), none);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
  prev = 1.0;
  for (double kappa : {0.1, 0.3, 0.5, 0.9}) {
    const double p = pattern_given_fock({2, 1}, DetectorBank({kappa, kappa}, 1e-3), none);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("leftover term: closed forms") {
  CHECK(leftover_term(SourceIntensities{0.1, 0.1}, 0) ==
        doctest::Approx(1.0 - std::exp(-0.2)).epsilon(1e-12));
  CHECK(leftover_term(SourceIntensities{0.0, 0.0}, 5) == 0.0);

  // Poisson(1) tail beyond 10, cross-checked by direct summation over the
  // two-port photon-number lattice.
  const SourceIntensities mu{0.4, 0.6};
  double lattice = 0.0;
  for (const auto& n : compositions_up_to(10, 2)) {
    lattice += poisson_input_probability(mu, n);
  }
  const double lam = leftover_term(mu, 10);
  CHECK(lam == doctest::Approx(1.0 - lattice).epsilon(1e-9));
  CHECK(lam == doctest::Approx(1.00e-8).epsilon(0.01));
}

TEST_CASE("poisson mass within the truncation plus the leftover equals one") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const int ports = 1 + static_cast<int>(rng() % 3);
    std::vector<double> mu;
    for (int i = 0; i < ports; ++i) mu.push_back(testsupport::uniform(rng, 0.0, 1.2));
    const SourceIntensities source(mu);
    const int cut = static_cast<int>(rng() % 13);
    double mass = 0.0;
    for (const auto& n : compositions_up_to(cut, ports)) {
      mass += poisson_input_probability(source, n);
    }
    CHECK(mass + leftover_term(source, cut) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("leftover term monotonicity") {
  const SourceIntensities mu{0.7, 0.5};
  for (int cut = 0; cut < 10; ++cut) {
    CHECK(leftover_term(mu, cut + 1) <= leftover_term(mu, cut));
  }
  double prev = 0.0;
  for (double total : {0.1, 0.5, 1.0, 2.0}) {
    const double lam = leftover_term(SourceIntensities{total}, 4);
    CHECK(lam >= prev);
    prev = lam;
  }
  CHECK_THROWS_AS((void)leftover_term(mu, -1), std::domain_error);
}

TEST_CASE("click pattern packing") {
  const ClickPattern p(3, 0b101);
  CHECK(p.click(0));
  CHECK(!p.click(1));
  CHECK(p.click(2));
  CHECK(p.str() == "101");
  CHECK_THROWS_AS(ClickPattern(2, 4), std::invalid_argument);
}
