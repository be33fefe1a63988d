#pragma once

#include <cstdint>
#include <vector>

#include "fockbound/photon_vector.hpp"

namespace fockbound {

/// Exact factorials up to 20!, converted to double once.
double factorial(int n);

/// Binomial coefficient as a double, exact for n <= 20.
double binomial(int n, int k);

/// All length-`ports` vectors with entries >= 0 summing exactly to `total`,
/// in lexicographic order.
std::vector<PhotonVector> compositions_exact(int total, int ports);

/// All length-`ports` vectors with sum <= `total`, ordered by (sum, lex).
std::vector<PhotonVector> compositions_up_to(int total, int ports);

/// Number of compositions of `total` into `ports` parts: C(total+ports-1, ports-1).
std::int64_t composition_count(int total, int ports);

}  // namespace fockbound
