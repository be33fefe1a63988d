#include "doctest.h"
#include "fockbound/combinatorics.hpp"
#include "fockbound/photon_vector.hpp"

using namespace fockbound;

TEST_CASE("factorials are exact integers up to 20!") {
  CHECK(factorial(0) == 1.0);
  CHECK(factorial(5) == 120.0);
  CHECK(factorial(12) == 479001600.0);
  CHECK(factorial(20) == 2432902008176640000.0);
  CHECK_THROWS_AS((void)factorial(-1), std::domain_error);
}

TEST_CASE("binomials") {
  CHECK(binomial(6, 3) == 20.0);
  CHECK(binomial(5, 0) == 1.0);
  CHECK(binomial(5, 6) == 0.0);
  CHECK(binomial(5, -1) == 0.0);
}

TEST_CASE("compositions enumerate every split exactly once") {
  const auto exact = compositions_exact(3, 2);
  REQUIRE(exact.size() == 4);
  CHECK(exact.front() == PhotonVector{0, 3});
  CHECK(exact.back() == PhotonVector{3, 0});
  for (const auto& v : exact) CHECK(v.total() == 3);

  CHECK(composition_count(3, 2) == 4);
  CHECK(composition_count(6, 3) == 28);
  for (int t = 0; t <= 8; ++t) {
    for (int p = 1; p <= 4; ++p) {
      CHECK(static_cast<std::int64_t>(compositions_exact(t, p).size()) ==
            composition_count(t, p));
    }
  }
}

TEST_CASE("compositions_up_to is ordered by total then lexicographically") {
  const auto all = compositions_up_to(2, 2);
  REQUIRE(all.size() == 6);
  CHECK(all[0] == PhotonVector{0, 0});
  CHECK(all[1] == PhotonVector{0, 1});
  CHECK(all[2] == PhotonVector{1, 0});
  CHECK(all[3] == PhotonVector{0, 2});
  CHECK(all[4] == PhotonVector{1, 1});
  CHECK(all[5] == PhotonVector{2, 0});
}

TEST_CASE("photon vectors reject negative entries") {
  CHECK_THROWS_AS(PhotonVector({1, -1}), std::domain_error);
  CHECK(PhotonVector({1, 2, 3}).total() == 6);
}
