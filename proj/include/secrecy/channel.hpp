#pragma once

// Channel descriptions, the standard-form transforms, and the rate and ratio
// primitives shared by every solver. Rates are in bits per channel use.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "secrecy/errors.hpp"
#include "secrecy/user_set.hpp"

namespace secrecy {

/// Absolute tolerance for threshold comparisons.
inline constexpr double kTol = 1e-12;
/// Relative tolerance under which two standardized gains count as tied.
inline constexpr double kTieTol = 1e-9;

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

/// ½·log₂(1 + x).
inline double half_log2_1p(double x) { return 0.5 * std::log1p(x) / std::numbers::ln2; }

inline bool gains_tied(double a, double b) {
  return std::abs(a - b) <= kTieTol * std::max(std::abs(a), std::abs(b));
}

namespace detail {

inline void require_finite_nonneg(std::span<const double> v, const std::string& field) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k]) || v[k] < 0.0)
      throw InvalidInput(field, "entry " + std::to_string(k + 1) + " must be finite and >= 0");
  }
}

inline void require_positive(double v, const std::string& field) {
  if (!std::isfinite(v) || v <= 0.0) throw InvalidInput(field, "must be finite and > 0");
}

inline void require_size(std::size_t got, std::size_t want, const std::string& field) {
  if (got != want)
    throw InvalidInput(field, "expected " + std::to_string(want) + " entries, got " + std::to_string(got));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Channel types

/// Multiple-access wiretap channel before standardization.
struct RawMacChannel {
  std::vector<double> main_gains;
  std::vector<double> tap_gains;
  double main_noise = 1.0;
  double tap_noise = 1.0;
  std::vector<double> power_caps;

  std::size_t k_users() const { return main_gains.size(); }

  void validate() const {
    if (main_gains.empty()) throw InvalidInput("main_gains", "at least one user is required");
    if (main_gains.size() > UserSet::kMaxUsers) throw InvalidInput("main_gains", "too many users");
    detail::require_size(tap_gains.size(), main_gains.size(), "tap_gains");
    detail::require_size(power_caps.size(), main_gains.size(), "power_caps");
    detail::require_finite_nonneg(main_gains, "main_gains");
    detail::require_finite_nonneg(tap_gains, "tap_gains");
    detail::require_finite_nonneg(power_caps, "power_caps");
    detail::require_positive(main_noise, "main_noise");
    detail::require_positive(tap_noise, "tap_noise");
  }
};

enum class TieMode { merge, keep };

/// Standard-form multiple-access wiretap channel: unit main gains and noises,
/// eavesdropper gains h_k, power caps P̄_k. Users are sorted by ascending h_k.
/// Each standardized user owns one or more original users (more than one only
/// after tie merging).
class StdMacChannel {
 public:
  StdMacChannel() = default;

  /// Sorts users by gain and, with TieMode::merge, folds users whose gains
  /// agree to kTieTol (relative) into one super-user with the summed cap.
  static StdMacChannel from_gains(std::vector<double> eve_gains, std::vector<double> power_caps,
                                  TieMode ties = TieMode::merge) {
    if (eve_gains.empty()) throw InvalidInput("eve_gains", "at least one user is required");
    if (eve_gains.size() > UserSet::kMaxUsers) throw InvalidInput("eve_gains", "too many users");
    detail::require_size(power_caps.size(), eve_gains.size(), "power_caps");
    detail::require_finite_nonneg(eve_gains, "eve_gains");
    detail::require_finite_nonneg(power_caps, "power_caps");

    std::vector<std::size_t> order(eve_gains.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return eve_gains[a] < eve_gains[b]; });

    StdMacChannel ch;
    ch.original_users_ = eve_gains.size();
    ch.original_caps_ = power_caps;
    ch.permutation_ = order;
    for (auto k : order) {
      const bool join = ties == TieMode::merge && !ch.groups_.empty() &&
                        gains_tied(ch.gains_.back(), eve_gains[k]);
      if (join) {
        ch.caps_.back() += power_caps[k];
        ch.groups_.back().push_back(k);
      } else {
        ch.gains_.push_back(eve_gains[k]);
        ch.caps_.push_back(power_caps[k]);
        ch.groups_.push_back({k});
      }
    }
    return ch;
  }

  std::size_t k_users() const { return gains_.size(); }
  std::size_t original_users() const { return original_users_; }
  std::span<const double> eve_gains() const { return gains_; }
  std::span<const double> power_caps() const { return caps_; }
  double gain(std::size_t k) const { return gains_[k]; }
  double cap(std::size_t k) const { return caps_[k]; }
  UserSet users() const { return UserSet::all(k_users()); }

  /// Original user indices in ascending-gain order.
  const std::vector<std::size_t>& permutation() const { return permutation_; }
  /// Original users folded into each standardized user.
  const std::vector<std::vector<std::size_t>>& groups() const { return groups_; }

  /// Maps standardized powers back to the original users. A super-user's
  /// power is split in proportion to its members' caps.
  std::vector<double> split_back(std::span<const double> std_powers) const {
    std::vector<double> out(original_users_, 0.0);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const double total = caps_[g];
      for (auto k : groups_[g]) {
        if (total > 0.0) out[k] = std::min(original_caps_[k], std_powers[g] * (original_caps_[k] / total));
      }
    }
    return out;
  }

 private:
  std::vector<double> gains_;
  std::vector<double> caps_;
  std::vector<double> original_caps_;
  std::vector<std::size_t> permutation_;
  std::vector<std::vector<std::size_t>> groups_;
  std::size_t original_users_ = 0;
};

/// Two-way wiretap channel before standardization.
struct RawTwChannel {
  std::array<double, 2> main_gains{1.0, 1.0};
  std::array<double, 2> tap_gains{1.0, 1.0};
  std::array<double, 2> receiver_noises{1.0, 1.0};
  double tap_noise = 1.0;
  std::array<double, 2> power_caps{0.0, 0.0};

  void validate() const {
    detail::require_finite_nonneg(main_gains, "main_gains");
    detail::require_finite_nonneg(tap_gains, "tap_gains");
    detail::require_finite_nonneg(power_caps, "power_caps");
    for (auto s : receiver_noises) detail::require_positive(s, "receiver_noises");
    detail::require_positive(tap_noise, "tap_noise");
  }
};

/// Standard-form two-way wiretap channel. Terminals are ordered so that
/// eve_gains[0] <= eve_gains[1]; `swapped` records whether the caller's
/// terminal 1 now sits in slot 1.
struct StdTwChannel {
  std::array<double, 2> eve_gains{0.0, 0.0};
  // Stored for completeness; each terminal cancels its own signal, so the
  // self gains never enter a rate expression.
  std::array<double, 2> self_gains{1.0, 1.0};
  std::array<double, 2> power_caps{0.0, 0.0};
  bool swapped = false;

  static StdTwChannel from_gains(std::array<double, 2> eve_gains, std::array<double, 2> power_caps,
                                 std::array<double, 2> self_gains = {1.0, 1.0}) {
    detail::require_finite_nonneg(eve_gains, "eve_gains");
    detail::require_finite_nonneg(power_caps, "power_caps");
    detail::require_finite_nonneg(self_gains, "self_gains");
    StdTwChannel ch{eve_gains, self_gains, power_caps, false};
    if (eve_gains[1] < eve_gains[0]) {
      std::swap(ch.eve_gains[0], ch.eve_gains[1]);
      std::swap(ch.self_gains[0], ch.self_gains[1]);
      std::swap(ch.power_caps[0], ch.power_caps[1]);
      ch.swapped = true;
    }
    return ch;
  }

  /// Powers in the caller's original terminal order.
  std::array<double, 2> to_original(std::array<double, 2> p) const {
    if (swapped) std::swap(p[0], p[1]);
    return p;
  }
};

/// Per-user transmit powers; valid when 0 <= P_k <= P̄_k.
struct PowerAllocation {
  std::vector<double> powers;

  std::size_t size() const { return powers.size(); }
  double operator[](std::size_t k) const { return powers[k]; }
  operator std::span<const double>() const { return powers; }

  bool within(std::span<const double> caps, double tol = 0.0) const {
    if (caps.size() != powers.size()) return false;
    for (std::size_t k = 0; k < powers.size(); ++k)
      if (!(powers[k] >= -tol && powers[k] <= caps[k] + tol)) return false;
    return true;
  }

  friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;
};

// ---------------------------------------------------------------------------
// Standardization

inline StdMacChannel standardize_mac(const RawMacChannel& raw) {
  raw.validate();
  const auto n = raw.k_users();
  std::vector<double> gains(n), caps(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (raw.main_gains[k] == 0.0)
      throw NonStandardizableChannel("main_gains", "user " + std::to_string(k + 1) + " has zero main gain");
    gains[k] = raw.tap_gains[k] * raw.main_noise / (raw.main_gains[k] * raw.tap_noise);
    caps[k] = raw.main_gains[k] * raw.power_caps[k] / raw.main_noise;
  }
  return StdMacChannel::from_gains(std::move(gains), std::move(caps), TieMode::merge);
}

inline StdTwChannel standardize_tw(const RawTwChannel& raw) {
  raw.validate();
  for (std::size_t k = 0; k < 2; ++k) {
    if (raw.main_gains[k] == 0.0)
      throw NonStandardizableChannel("main_gains", "terminal " + std::to_string(k + 1) + " has zero main gain");
  }
  const auto& hm = raw.main_gains;
  const auto& hw = raw.tap_gains;
  const double s1 = raw.receiver_noises[0];
  const double s2 = raw.receiver_noises[1];
  const double sw = raw.tap_noise;
  return StdTwChannel::from_gains({hw[0] * s2 / (hm[0] * sw), hw[1] * s1 / (hm[1] * sw)},
                                  {hm[0] * raw.power_caps[0] / s2, hm[1] * raw.power_caps[1] / s1},
                                  {s2 / (hm[0] * s1), s1 / (hm[1] * s2)});
}

// ---------------------------------------------------------------------------
// Rate and ratio primitives

inline double power_sum(std::span<const double> powers, UserSet s) {
  double acc = 0.0;
  s.for_each([&](std::size_t k) { acc += powers[k]; });
  return acc;
}

inline double weighted_sum(std::span<const double> powers, std::span<const double> gains, UserSet s) {
  double acc = 0.0;
  s.for_each([&](std::size_t k) { acc += gains[k] * powers[k]; });
  return acc;
}

/// Main-channel sum capacity of the users in `s`.
inline double cap_main(std::span<const double> powers, UserSet s) {
  return half_log2_1p(power_sum(powers, s));
}

/// Eavesdropper sum capacity of the users in `s`, others silent.
inline double cap_eve(std::span<const double> powers, std::span<const double> gains, UserSet s) {
  return half_log2_1p(weighted_sum(powers, gains, s));
}

/// Eavesdropper rate for `s` when every other user is treated as noise.
inline double cap_eve_tilde(std::span<const double> powers, std::span<const double> gains, UserSet s) {
  const auto rest = s.complement(gains.size());
  return half_log2_1p(weighted_sum(powers, gains, s) / (1.0 + weighted_sum(powers, gains, rest)));
}

/// φ_S(P) = (1 + Σ_S h_k P_k) / (1 + Σ_S P_k).
inline double phi(std::span<const double> powers, std::span<const double> gains, UserSet s) {
  return (1.0 + weighted_sum(powers, gains, s)) / (1.0 + power_sum(powers, s));
}

/// ψ_S(P) = (1 + Σ_S h_k P_k) / Π_S (1 + P_k).
inline double psi(std::span<const double> powers, std::span<const double> gains, UserSet s) {
  double denom = 1.0;
  s.for_each([&](std::size_t k) { denom *= 1.0 + powers[k]; });
  return (1.0 + weighted_sum(powers, gains, s)) / denom;
}

/// True when every gain is the same (to kTieTol) and that gain is below 1,
/// i.e. the eavesdropper sees a degraded copy of the receiver's signal.
inline bool is_degraded(const StdMacChannel& ch) {
  const auto g = ch.eve_gains();
  for (auto h : g)
    if (!gains_tied(h, g.front())) return false;
  return g.front() < 1.0;
}

}  // namespace secrecy
