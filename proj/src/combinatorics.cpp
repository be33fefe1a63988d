#include "fockbound/combinatorics.hpp"

#include <array>
#include <stdexcept>

namespace fockbound {

namespace {

constexpr std::array<std::uint64_t, 21> kFactorials = [] {
  std::array<std::uint64_t, 21> f{};
  f[0] = 1;
  for (int i = 1; i <= 20; ++i) f[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i - 1)] * static_cast<std::uint64_t>(i);
  return f;
}();

}  // namespace

double factorial(int n) {
  if (n < 0) throw std::domain_error("factorial: negative argument");
  if (n <= 20) return static_cast<double>(kFactorials[static_cast<std::size_t>(n)]);
  double r = static_cast<double>(kFactorials[20]);
  for (int i = 21; i <= n; ++i) r *= i;
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (n <= 20) {
    return static_cast<double>(kFactorials[static_cast<std::size_t>(n)]) /
           (static_cast<double>(kFactorials[static_cast<std::size_t>(k)]) *
            static_cast<double>(kFactorials[static_cast<std::size_t>(n - k)]));
  }
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace {

void emit_compositions(int total, int ports, std::vector<int>& scratch, int pos,
                       std::vector<PhotonVector>& out) {
  if (pos == ports - 1) {
    scratch[static_cast<std::size_t>(pos)] = total;
    out.emplace_back(scratch);
    return;
  }
  for (int c = 0; c <= total; ++c) {
    scratch[static_cast<std::size_t>(pos)] = c;
    emit_compositions(total - c, ports, scratch, pos + 1, out);
  }
}

}  // namespace

std::vector<PhotonVector> compositions_exact(int total, int ports) {
  if (ports <= 0) throw std::domain_error("compositions_exact: ports must be positive");
  if (total < 0) throw std::domain_error("compositions_exact: negative total");
  std::vector<PhotonVector> out;
  out.reserve(static_cast<std::size_t>(composition_count(total, ports)));
  std::vector<int> scratch(static_cast<std::size_t>(ports), 0);
  emit_compositions(total, ports, scratch, 0, out);
  return out;
}

std::vector<PhotonVector> compositions_up_to(int total, int ports) {
  std::vector<PhotonVector> out;
  for (int t = 0; t <= total; ++t) {
    auto shell = compositions_exact(t, ports);
    out.insert(out.end(), shell.begin(), shell.end());
  }
  return out;
}

std::int64_t composition_count(int total, int ports) {
  // C(total + ports - 1, ports - 1) in exact integer arithmetic.
  std::int64_t r = 1;
  for (int i = 1; i <= ports - 1; ++i) {
    r = r * (total + i) / i;
  }
  return r;
}

}  // namespace fockbound
