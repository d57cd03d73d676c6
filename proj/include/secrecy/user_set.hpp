#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace secrecy {

/// Subset of users, stored as a bit mask over 0-based user indices.
class UserSet {
 public:
  static constexpr std::size_t kMaxUsers = 63;

  constexpr UserSet() = default;
  constexpr explicit UserSet(std::uint64_t mask) : mask_(mask) {}
  UserSet(std::initializer_list<std::size_t> users) {
    for (auto k : users) insert(k);
  }

  static constexpr UserSet all(std::size_t k_users) {
    return UserSet(k_users == 0 ? 0 : (~std::uint64_t{0} >> (64 - k_users)));
  }
  // Users [first, last).
  static constexpr UserSet range(std::size_t first, std::size_t last) {
    UserSet s;
    for (auto k = first; k < last; ++k) s.insert(k);
    return s;
  }

  constexpr void insert(std::size_t k) { mask_ |= std::uint64_t{1} << k; }
  constexpr void erase(std::size_t k) { mask_ &= ~(std::uint64_t{1} << k); }
  constexpr bool contains(std::size_t k) const { return (mask_ >> k) & 1u; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask_)); }
  constexpr std::uint64_t mask() const { return mask_; }

  constexpr UserSet complement(std::size_t k_users) const {
    return UserSet(all(k_users).mask_ & ~mask_);
  }
  constexpr bool subset_of(UserSet other) const { return (mask_ & ~other.mask_) == 0; }

  // Visits members in increasing index order.
  template <typename F>
  constexpr void for_each(F&& f) const {
    for (auto m = mask_; m != 0; m &= m - 1) f(static_cast<std::size_t>(std::countr_zero(m)));
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (auto m = mask_; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
  }

  // 1-based labels, the convention used in every serialized output.
  std::vector<std::size_t> labels() const {
    auto out = members();
    for (auto& k : out) ++k;
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto k : labels()) {
      if (!first) s += ",";
      s += std::to_string(k);
      first = false;
    }
    return s + "}";
  }

  friend constexpr bool operator==(UserSet, UserSet) = default;
  friend constexpr UserSet operator|(UserSet a, UserSet b) { return UserSet(a.mask_ | b.mask_); }
  friend constexpr UserSet operator&(UserSet a, UserSet b) { return UserSet(a.mask_ & b.mask_); }

 private:
  std::uint64_t mask_ = 0;
};

/// Every nonempty subset of {0..k_users-1}, in increasing mask order.
inline std::vector<UserSet> nonempty_subsets(std::size_t k_users) {
  std::vector<UserSet> out;
  const std::uint64_t n = std::uint64_t{1} << k_users;
  out.reserve(static_cast<std::size_t>(n - 1));
  for (std::uint64_t m = 1; m < n; ++m) out.emplace_back(m);
  return out;
}

}  // namespace secrecy
