#pragma once

// Secrecy sum-rate maximizing power allocations for the superposition and
// TDMA multiple-access schemes and for the two-way channel.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/regions.hpp"

namespace secrecy {

enum class SumRateMode { SUP, TDMA, TW };

inline const char* to_string(SumRateMode m) {
  switch (m) {
    case SumRateMode::SUP: return "SUP";
    case SumRateMode::TDMA: return "TDMA";
    case SumRateMode::TW: return "TW";
  }
  return "?";
}

struct SumRateSolution {
  PowerAllocation allocation;
  UserSet transmit_set;
  double sum_rate = 0.0;
  SumRateMode mode = SumRateMode::SUP;
  std::optional<TdmaShares> shares;
  /// Number of users in the transmitting prefix (SUP only).
  std::size_t limiting_user = 0;
};

inline UserSet positive_users(std::span<const double> p) {
  UserSet s;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] > 0.0) s.insert(k);
  return s;
}

/// ½[log₂(1+ΣP) − log₂(1+Σh_kP_k)]^+ over all users.
inline double sup_sum_rate(std::span<const double> gains, std::span<const double> powers) {
  const auto all = UserSet::all(powers.size());
  return positive_part(cap_main(powers, all) - cap_eve(powers, gains, all));
}

/// ½[Σ_k log₂(1+P_k) − log₂(1+h₁P₁+h₂P₂)]^+.
inline double tw_sum_rate(const std::array<double, 2>& gains, const std::array<double, 2>& powers) {
  return positive_part(half_log2_1p(powers[0]) + half_log2_1p(powers[1]) -
                       half_log2_1p(gains[0] * powers[0] + gains[1] * powers[1]));
}

namespace detail {

inline SumRateSolution sup_solution(const StdMacChannel& ch, std::vector<double> p, std::size_t t) {
  SumRateSolution s;
  s.sum_rate = sup_sum_rate(ch.eve_gains(), p);
  s.transmit_set = positive_users(p);
  s.allocation = PowerAllocation{std::move(p)};
  s.mode = SumRateMode::SUP;
  s.limiting_user = t;
  return s;
}

// Margin of h_next below the prefix ratio: (1 + Σh_kP_k) − h_next(1 + ΣP_k).
// Positive exactly when h_next < φ_prefix.
inline double prefix_margin(double sum_hp, double sum_p, double h_next) {
  return 1.0 + sum_hp - h_next * (1.0 + sum_p);
}

}  // namespace detail

/// Users join in ascending-gain order while their gain stays strictly below
/// the ratio φ of the users already admitted; the admitted prefix transmits
/// at full power and everyone else is silent.
inline SumRateSolution mac_sup_optimal(const StdMacChannel& ch) {
  const std::size_t n = ch.k_users();
  std::vector<double> p(n, 0.0);
  double sum_hp = 0.0, sum_p = 0.0;
  std::size_t t = 0;
  while (t < n && detail::prefix_margin(sum_hp, sum_p, ch.gain(t)) > kTol) {
    p[t] = ch.cap(t);
    sum_hp += ch.gain(t) * ch.cap(t);
    sum_p += ch.cap(t);
    ++t;
  }
  return detail::sup_solution(ch, std::move(p), t);
}

/// Three-branch rule for K = 2.
inline SumRateSolution mac_two_user_closed_form(const StdMacChannel& ch) {
  if (ch.k_users() != 2) throw UnsupportedUserCount("k_users", "the two-user closed form needs exactly 2 users");
  const double h1 = ch.gain(0), h2 = ch.gain(1);
  const double p1 = ch.cap(0), p2 = ch.cap(1);
  if (1.0 - h1 > kTol && 1.0 + h1 * p1 - h2 * (1.0 + p1) > kTol) return detail::sup_solution(ch, {p1, p2}, 2);
  if (1.0 - h1 > kTol) return detail::sup_solution(ch, {p1, 0.0}, 1);
  return detail::sup_solution(ch, {0.0, 0.0}, 0);
}

// ---------------------------------------------------------------------------
// TDMA

namespace detail {

// d/da of a·½[log₂(1+P/a) − log₂(1+hP/a)], with a floored away from 0 so the
// a → 0 limit ½log₂(1/h) is approached smoothly.
inline double tdma_slope(double a, double p, double h) {
  a = std::max(a, 1e-250);
  const double x = p / a;
  const double y = h * p / a;
  return 0.5 * (std::log1p(x) - std::log1p(y) - x / (1.0 + x) + y / (1.0 + y)) / std::numbers::ln2;
}

inline double tdma_objective(std::span<const double> alpha, const StdMacChannel& ch) {
  double acc = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) acc += tdma_user_rate(alpha[k], ch.cap(k), ch.gain(k));
  return acc;
}

// Moves share between users i and j to the 1-D optimum. The objective is
// concave in the shares, so the directional slope is decreasing in t and a
// bisection on its sign finds the maximizer.
inline void tdma_pair_step(std::vector<double>& alpha, std::size_t i, std::size_t j, const StdMacChannel& ch) {
  const double total = alpha[i] + alpha[j];
  if (total <= 0.0) return;
  auto slope = [&](double ai) {
    return tdma_slope(ai, ch.cap(i), ch.gain(i)) - tdma_slope(total - ai, ch.cap(j), ch.gain(j));
  };
  double lo = 0.0, hi = total;
  if (slope(lo) <= 0.0) {
    alpha[i] = 0.0;
    alpha[j] = total;
    return;
  }
  if (slope(hi) >= 0.0) {
    alpha[i] = total;
    alpha[j] = 0.0;
    return;
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  alpha[i] = 0.5 * (lo + hi);
  alpha[j] = total - alpha[i];
}

inline std::vector<std::vector<double>> tdma_starts(const std::vector<std::size_t>& active, std::size_t n) {
  std::vector<std::vector<double>> starts;
  auto add = [&](std::vector<double> a) {
    if (starts.size() < 8) starts.push_back(std::move(a));
  };
  std::vector<double> centroid(n, 0.0);
  for (auto k : active) centroid[k] = 1.0 / double(active.size());
  add(centroid);
  for (auto k : active) {
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    add(v);
  }
  for (std::size_t a = 0; a < active.size(); ++a)
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      std::vector<double> v(n, 0.0);
      v[active[a]] = v[active[b]] = 0.5;
      add(v);
    }
  return starts;
}

inline SumRateSolution tdma_solution(const StdMacChannel& ch, std::vector<double> alpha) {
  SumRateSolution s;
  s.mode = SumRateMode::TDMA;
  s.sum_rate = tdma_objective(alpha, ch);
  std::vector<double> p(ch.k_users(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k)
    if (alpha[k] > 0.0) p[k] = ch.cap(k);
  s.transmit_set = positive_users(p);
  s.allocation = PowerAllocation{std::move(p)};
  s.shares = TdmaShares{std::move(alpha)};
  return s;
}

}  // namespace detail

struct TdmaOptions {
  std::size_t max_sweeps = 10000;
  double share_tol = 1e-14;
};

/// Numeric share optimization, with no closed-form shortcut. Users with
/// h_k >= 1 or a zero cap get no share.
inline SumRateSolution mac_tdma_numeric(const StdMacChannel& ch, const TdmaOptions& opt = {}) {
  const std::size_t n = ch.k_users();
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < n; ++k)
    if (1.0 - ch.gain(k) > kTol && ch.cap(k) > 0.0) active.push_back(k);
  if (active.empty()) {
    auto s = detail::tdma_solution(ch, TdmaShares::uniform(n).alpha);
    s.sum_rate = 0.0;
    s.transmit_set = UserSet{};
    std::fill(s.allocation.powers.begin(), s.allocation.powers.end(), 0.0);
    return s;
  }

  std::vector<double> best;
  double best_val = -1.0;
  for (auto alpha : detail::tdma_starts(active, n)) {
    for (std::size_t sweep = 0; sweep < opt.max_sweeps; ++sweep) {
      const auto before = alpha;
      for (std::size_t a = 0; a < active.size(); ++a)
        for (std::size_t b = a + 1; b < active.size(); ++b) detail::tdma_pair_step(alpha, active[a], active[b], ch);
      double moved = 0.0;
      for (std::size_t k = 0; k < n; ++k) moved = std::max(moved, std::abs(alpha[k] - before[k]));
      if (moved <= opt.share_tol) break;
    }
    const double v = detail::tdma_objective(alpha, ch);
    if (!std::isfinite(v)) throw NumericalFailure("TDMA share optimization produced a non-finite rate");
    if (v > best_val) {
      best_val = v;
      best = alpha;
    }
  }
  return detail::tdma_solution(ch, std::move(best));
}

/// Degraded channels use the closed form α_k = P̄_k / ΣP̄; others go numeric.
inline SumRateSolution mac_tdma_optimal(const StdMacChannel& ch) {
  if (is_degraded(ch)) {
    double total = 0.0;
    for (auto p : ch.power_caps()) total += p;
    if (total > 0.0) {
      std::vector<double> alpha(ch.k_users());
      for (std::size_t k = 0; k < alpha.size(); ++k) alpha[k] = ch.cap(k) / total;
      return detail::tdma_solution(ch, std::move(alpha));
    }
  }
  return mac_tdma_numeric(ch);
}

/// The better of the superposition and TDMA optima; ties go to SUP.
inline SumRateSolution mac_best_sum_rate(const StdMacChannel& ch) {
  auto sup = mac_sup_optimal(ch);
  auto tdma = mac_tdma_optimal(ch);
  return tdma.sum_rate > sup.sum_rate + kTol ? tdma : sup;
}

// ---------------------------------------------------------------------------
// Two-way

inline SumRateSolution tw_optimal(const StdTwChannel& ch) {
  const double h1 = ch.eve_gains[0], h2 = ch.eve_gains[1];
  const double p1 = ch.power_caps[0], p2 = ch.power_caps[1];
  std::array<double, 2> p{0.0, 0.0};
  if (1.0 + h2 * p2 - h1 >= -kTol && 1.0 + h1 * p1 - h2 > kTol)
    p = {p1, p2};
  else if (1.0 - h1 > kTol)
    p = {p1, 0.0};

  SumRateSolution s;
  s.mode = SumRateMode::TW;
  s.sum_rate = tw_sum_rate(ch.eve_gains, p);
  // A zero rate needs no power.
  if (s.sum_rate == 0.0) p = {0.0, 0.0};
  s.allocation = PowerAllocation{{p[0], p[1]}};
  s.transmit_set = positive_users(s.allocation);
  return s;
}

}  // namespace secrecy
