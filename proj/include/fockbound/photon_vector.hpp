#pragma once

#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fockbound {

/// Occupation numbers per spatial port. Used both for input states and
/// for detected output states.
class PhotonVector {
 public:
  PhotonVector() = default;

  explicit PhotonVector(std::vector<int> counts) : counts_(std::move(counts)) {
    for (int c : counts_) {
      if (c < 0) throw std::domain_error("PhotonVector: negative occupation");
    }
  }

  PhotonVector(std::initializer_list<int> counts)
      : PhotonVector(std::vector<int>(counts)) {}

  static PhotonVector zeros(int ports) {
    return PhotonVector(std::vector<int>(static_cast<std::size_t>(ports), 0));
  }

  int size() const { return static_cast<int>(counts_.size()); }
  int operator[](int i) const { return counts_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return counts_[static_cast<std::size_t>(i)]; }

  int total() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }

  const std::vector<int>& counts() const { return counts_; }

  auto operator<=>(const PhotonVector&) const = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(counts_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> counts_;
};

}  // namespace fockbound
