#pragma once

// Cooperative jamming: users that cannot help by transmitting send noise to
// the eavesdropper instead. Covers the K-user multiple-access channel (with
// at most one partial-power jammer) and the two-way channel.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/power_allocation.hpp"

namespace secrecy {

enum class PivotCase { none, no_real_root, root_nonpositive, interior_root, clamped_to_cap, linear, flat };

inline const char* to_string(PivotCase c) {
  switch (c) {
    case PivotCase::none: return "none";
    case PivotCase::no_real_root: return "no_real_root";
    case PivotCase::root_nonpositive: return "root_nonpositive";
    case PivotCase::interior_root: return "interior_root";
    case PivotCase::clamped_to_cap: return "clamped_to_cap";
    case PivotCase::linear: return "linear";
    case PivotCase::flat: return "flat";
  }
  return "?";
}

/// ρ_J(P_J) = c1·P_J² + c2·P_J + c3 with every other power held fixed.
struct PivotQuadratic {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double discriminant = 0.0;
  /// The "+√" root when it exists and is positive (or the linear root).
  std::optional<double> root;
  PivotCase kind = PivotCase::none;

  double operator()(double x) const { return (c1 * x + c2) * x + c3; }
};

struct JammingSolution {
  UserSet transmit_set;
  UserSet jam_set;
  UserSet silent_set;
  PowerAllocation allocation;
  double sum_rate = 0.0;
  std::optional<std::size_t> pivot_user;
  std::array<double, 3> quad_coeffs{0.0, 0.0, 0.0};
  double discriminant = 0.0;
  std::optional<double> pivot_root;
  double pivot_power = 0.0;
  PivotCase active_case = PivotCase::none;
  std::string branch;
};

// ---------------------------------------------------------------------------
// Objectives

/// φ_K(P) / φ_{T^c}(P).
inline double cj_objective_mac(const StdMacChannel& ch, const PowerAllocation& alloc, UserSet transmit_set) {
  const auto h = ch.eve_gains();
  return phi(alloc, h, ch.users()) / phi(alloc, h, transmit_set.complement(ch.k_users()));
}

/// Secrecy sum-rate of the transmitters in `transmit_set` while every other
/// user with positive power jams. Written as a difference of the full-set
/// and jammer-set rate gaps so that an empty jammer set reproduces the
/// plain superposition rate bit for bit.
inline double mac_cj_rate(std::span<const double> gains, std::span<const double> powers, UserSet transmit_set) {
  const auto all = UserSet::all(powers.size());
  const auto jam = transmit_set.complement(powers.size());
  return positive_part((cap_main(powers, all) - cap_eve(powers, gains, all)) -
                       (cap_main(powers, jam) - cap_eve(powers, gains, jam)));
}

/// Σ_T ½log₂(1+P_k) − ½log₂(1 + Σ_T h_kP_k / (1 + Σ_J h_kP_k)), clamped.
inline double tw_cj_rate(const std::array<double, 2>& gains, const std::array<double, 2>& powers, UserSet transmit_set) {
  double open = 0.0, heard = 0.0, jam = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    if (transmit_set.contains(k)) {
      open += half_log2_1p(powers[k]);
      heard += gains[k] * powers[k];
    } else {
      jam += gains[k] * powers[k];
    }
  }
  return positive_part(open - half_log2_1p(heard / (1.0 + jam)));
}

/// The stationarity numerator for jammer j, evaluated term by term.
inline double rho_eval(const StdMacChannel& ch, UserSet transmit_set, UserSet jam_set, const PowerAllocation& alloc,
                       std::size_t j) {
  if (!jam_set.contains(j)) throw InvalidInput("user", "rho is defined for jamming users only");
  const auto h = ch.eve_gains();
  const auto all = ch.users();
  const double t1 = -h[j] * (1.0 + power_sum(alloc, all)) * (1.0 + power_sum(alloc, jam_set)) *
                    weighted_sum(alloc, h, transmit_set);
  const double t2 = (1.0 + weighted_sum(alloc, h, all)) * (1.0 + weighted_sum(alloc, h, jam_set)) *
                    power_sum(alloc, transmit_set);
  return t1 + t2;
}

/// Largest magnitude among the two terms of rho_eval; the scale for
/// relative stationarity checks.
inline double rho_scale(const StdMacChannel& ch, UserSet transmit_set, UserSet jam_set, const PowerAllocation& alloc,
                        std::size_t j) {
  const auto h = ch.eve_gains();
  const auto all = ch.users();
  const double t1 = h[j] * (1.0 + power_sum(alloc, all)) * (1.0 + power_sum(alloc, jam_set)) *
                    weighted_sum(alloc, h, transmit_set);
  const double t2 = (1.0 + weighted_sum(alloc, h, all)) * (1.0 + weighted_sum(alloc, h, jam_set)) *
                    power_sum(alloc, transmit_set);
  return std::max(std::abs(t1), std::abs(t2));
}

// ---------------------------------------------------------------------------
// Pivot quadratic

/// Coefficients of ρ_J as a function of the pivot power, all other powers
/// taken from `fixed_alloc` (the pivot's own entry is ignored).
inline PivotQuadratic pivot_quadratic(const StdMacChannel& ch, UserSet transmit_set, UserSet jam_set, std::size_t pivot,
                                      const PowerAllocation& fixed_alloc) {
  if (!jam_set.contains(pivot)) throw InvalidInput("pivot", "pivot must belong to the jamming set");
  if (!(transmit_set & jam_set).empty()) throw InvalidInput("jam_set", "transmitters cannot also jam");
  const auto h = ch.eve_gains();
  auto others = ch.users();
  others.erase(pivot);
  auto other_jam = jam_set;
  other_jam.erase(pivot);
  const double hj = h[pivot];
  // Objective numerator (1+Σ_K hP)(1+Σ_J P) and denominator
  // (1+Σ_K P)(1+Σ_J hP), each written as (u + hj·x)(v + x) or (u + x)(v + hj·x).
  const double a = 1.0 + power_sum(fixed_alloc, others);
  const double b = 1.0 + weighted_sum(fixed_alloc, h, others);
  const double c = 1.0 + power_sum(fixed_alloc, other_jam);
  const double d = 1.0 + weighted_sum(fixed_alloc, h, other_jam);
  const double f1 = b + hj * c, f0 = b * c;
  const double g1 = d + hj * a, g0 = a * d;

  PivotQuadratic q;
  q.c1 = hj * (g1 - f1);
  q.c2 = 2.0 * hj * (g0 - f0);
  q.c3 = f1 * g0 - f0 * g1;
  q.discriminant = q.c2 * q.c2 - 4.0 * q.c1 * q.c3;
  if (q.c1 == 0.0) {
    if (q.c2 == 0.0) {
      q.kind = PivotCase::flat;
      return q;
    }
    q.kind = PivotCase::linear;
    const double r = -q.c3 / q.c2;
    if (r > 0.0) q.root = r;
    return q;
  }
  if (q.discriminant < 0.0) {
    q.kind = PivotCase::no_real_root;
    return q;
  }
  const double s = std::sqrt(q.discriminant);
  // Stable form of (−c2 + √D) / (2·c1).
  double r;
  if (q.c2 >= 0.0) {
    const double den = -0.5 * (q.c2 + s);
    r = den != 0.0 ? q.c3 / den : 0.0;
  } else {
    r = 0.5 * (-q.c2 + s) / q.c1;
  }
  if (!(r > 0.0)) {
    q.kind = PivotCase::root_nonpositive;
    return q;
  }
  q.root = r;
  q.kind = r >= ch.cap(pivot) ? PivotCase::clamped_to_cap : PivotCase::interior_root;
  return q;
}

namespace detail {

// Real roots of c1·x² + c2·x + c3 (or of the linear remainder).
inline std::vector<double> real_roots(const PivotQuadratic& q) {
  std::vector<double> out;
  if (q.c1 == 0.0) {
    if (q.c2 != 0.0) out.push_back(-q.c3 / q.c2);
    return out;
  }
  if (q.discriminant < 0.0) return out;
  const double s = std::sqrt(q.discriminant);
  const double t = -0.5 * (q.c2 + (q.c2 >= 0.0 ? s : -s));
  if (t != 0.0) {
    out.push_back(t / q.c1);
    out.push_back(q.c3 / t);
  } else {
    out.push_back(0.0);
  }
  return out;
}

inline std::size_t count_positive(std::span<const double> p, UserSet s) {
  std::size_t n = 0;
  s.for_each([&](std::size_t k) { n += p[k] > 0.0 ? 1 : 0; });
  return n;
}

inline void fill_roles(JammingSolution& sol, UserSet transmit, std::size_t k_users) {
  const auto& p = sol.allocation.powers;
  sol.transmit_set = UserSet{};
  sol.jam_set = UserSet{};
  sol.silent_set = UserSet{};
  for (std::size_t k = 0; k < k_users; ++k) {
    if (!(p[k] > 0.0))
      sol.silent_set.insert(k);
    else if (transmit.contains(k))
      sol.transmit_set.insert(k);
    else
      sol.jam_set.insert(k);
  }
}

inline constexpr double kRateTieTol = 1e-12;

}  // namespace detail

/// Best role pattern for transmitter count T (users 0..T-1) and pivot index
/// `pivot` (users after it jam at full power, users between are silent).
/// `pivot == k_users` means no jammers.
inline JammingSolution mac_cj_candidate(const StdMacChannel& ch, std::size_t t, std::size_t pivot) {
  const std::size_t n = ch.k_users();
  const auto h = ch.eve_gains();
  JammingSolution sol;
  std::vector<double> p(n, 0.0);
  for (std::size_t k = 0; k < t; ++k) p[k] = ch.cap(k);
  for (std::size_t k = pivot + 1; k < n; ++k) p[k] = ch.cap(k);
  const auto transmit = UserSet::range(0, t);

  if (pivot < n) {
    const auto jam = UserSet::range(pivot, n);
    auto q = pivot_quadratic(ch, transmit, jam, pivot, PowerAllocation{p});
    sol.pivot_user = pivot;
    sol.quad_coeffs = {q.c1, q.c2, q.c3};
    sol.discriminant = q.discriminant;
    sol.pivot_root = q.root;
    sol.active_case = q.kind;

    // The rate is a ratio of quadratics in x whose slope has the sign of
    // ρ_J(x), so the best x is an endpoint or a real root in between.
    const double cap = ch.cap(pivot);
    std::vector<double> xs{0.0, cap};
    for (double r : detail::real_roots(q))
      if (r > 0.0 && r < cap) xs.push_back(r);
    double best_x = 0.0, best_rate = -1.0;
    for (double x : xs) {
      p[pivot] = x;
      const double r = mac_cj_rate(h, p, transmit);
      if (r > best_rate + detail::kRateTieTol || (std::abs(r - best_rate) <= detail::kRateTieTol && x < best_x)) {
        best_rate = r;
        best_x = x;
      }
    }
    p[pivot] = best_x;
    sol.pivot_power = best_x;
  }
  sol.sum_rate = mac_cj_rate(h, p, transmit);
  sol.allocation = PowerAllocation{std::move(p)};
  detail::fill_roles(sol, transmit, n);
  sol.branch = "T=" + std::to_string(t) + ",J=" + std::to_string(pivot + 1);
  return sol;
}

namespace detail {

// True when `a` should replace `b`: higher rate, then fewer active jammers,
// then less total power.
inline bool better_jamming(const JammingSolution& a, const JammingSolution& b) {
  if (a.sum_rate > b.sum_rate + kRateTieTol) return true;
  if (a.sum_rate < b.sum_rate - kRateTieTol) return false;
  if (a.jam_set.size() != b.jam_set.size()) return a.jam_set.size() < b.jam_set.size();
  const auto all_a = UserSet::all(a.allocation.size());
  const auto all_b = UserSet::all(b.allocation.size());
  return power_sum(a.allocation, all_a) < power_sum(b.allocation, all_b) - kTol;
}

inline JammingSolution zero_jamming(std::size_t n, std::string branch) {
  JammingSolution s;
  s.allocation = PowerAllocation{std::vector<double>(n, 0.0)};
  s.silent_set = UserSet::all(n);
  s.branch = std::move(branch);
  return s;
}

}  // namespace detail

/// Searches every (T, J) pattern: transmit prefix, silent gap, jam suffix
/// led by a possibly partial-power pivot.
inline JammingSolution mac_cj_optimal(const StdMacChannel& ch) {
  const std::size_t n = ch.k_users();
  JammingSolution best = detail::zero_jamming(n, "T=0");
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t pivot = t; pivot <= n; ++pivot) {
      auto cand = mac_cj_candidate(ch, t, pivot);
      if (!std::isfinite(cand.sum_rate)) throw NumericalFailure("jamming candidate produced a non-finite rate");
      if (detail::better_jamming(cand, best)) best = std::move(cand);
    }
  }
  if (best.sum_rate == 0.0) best = detail::zero_jamming(n, "T=0");
  return best;
}

/// Four-branch rule for K = 2. The jamming threshold (h₁−1)/(h₂−h₁) is
/// compared with min{p, P̄₂}.
inline JammingSolution mac_cj_two_user(const StdMacChannel& ch) {
  if (ch.k_users() != 2) throw UnsupportedUserCount("k_users", "the two-user closed form needs exactly 2 users");
  const double h1 = ch.gain(0), h2 = ch.gain(1);
  const double p1 = ch.cap(0), p2 = ch.cap(1);
  auto root_p = [&] {
    const double d = h1 * h2 * (h2 - 1.0) * ((h2 - 1.0) + (h2 - h1) * p1);
    return (h1 - 1.0) / (h2 - h1) + std::sqrt(std::max(d, 0.0)) / (h2 * (h2 - h1));
  };

  std::array<double, 2> p{0.0, 0.0};
  std::string branch = "none";
  if (1.0 - h1 > kTol) {
    if (h2 - 1.0 <= kTol) {
      if (1.0 + h1 * p1 - h2 * (1.0 + p1) > kTol) {
        p = {p1, p2};
        branch = "both_transmit";
      } else {
        p = {p1, 0.0};
        branch = "user1_only";
      }
    } else {
      p = {p1, positive_part(std::min(root_p(), p2))};
      branch = "user2_jams";
      // p can cancel to a rounding-level positive value; a jammer that buys
      // no rate stays silent.
      const double alone = mac_cj_rate(ch.eve_gains(), std::vector<double>{p1, 0.0}, UserSet{0});
      if (!(mac_cj_rate(ch.eve_gains(), std::vector<double>{p[0], p[1]}, UserSet{0}) > alone + detail::kRateTieTol)) {
        p = {p1, 0.0};
        branch = "user1_only";
      }
    }
  } else if (h2 - h1 > kTol) {
    const double jam = std::min(root_p(), p2);
    if ((h1 - 1.0) / (h2 - h1) < jam) {
      p = {p1, jam};
      branch = "user2_jams_strong";
    }
  }

  const bool both = branch == "both_transmit";
  const UserSet transmit = both ? UserSet::all(2) : UserSet{0};
  JammingSolution sol;
  sol.allocation = PowerAllocation{{p[0], p[1]}};
  sol.sum_rate = mac_cj_rate(ch.eve_gains(), sol.allocation, transmit);
  // Rates within the tie tolerance of zero are not worth any power.
  if (sol.sum_rate <= detail::kRateTieTol) return detail::zero_jamming(2, "none");
  sol.branch = branch;
  if (!both && p[1] > 0.0) {
    sol.pivot_user = 1;
    sol.pivot_power = p[1];
  }
  detail::fill_roles(sol, transmit, 2);
  return sol;
}

// ---------------------------------------------------------------------------
// Two-way

inline JammingSolution tw_cj_optimal(const StdTwChannel& ch) {
  const double h1 = ch.eve_gains[0], h2 = ch.eve_gains[1];
  const double p1 = ch.power_caps[0], p2 = ch.power_caps[1];
  const std::span<const double> h(ch.eve_gains);
  const PowerAllocation caps{{p1, p2}};
  const double psi1 = psi(caps, h, UserSet{0});
  const double psi2 = psi(caps, h, UserSet{1});

  UserSet transmit;
  std::string branch = "none";
  if (h2 - 1.0 <= kTol) {
    transmit = UserSet::all(2);
    branch = "both_transmit";
  } else if (h1 - 1.0 <= kTol) {
    transmit = UserSet{0};
    branch = "user2_jams";
  } else if (1.0 + h2 * p2 - h1 > kTol && psi2 >= psi1) {
    transmit = UserSet{0};
    branch = psi2 == psi1 ? "user2_jams_psi_tie" : "user2_jams_psi";
  } else if (1.0 + h1 * p1 - h2 > kTol && psi1 > psi2) {
    transmit = UserSet{1};
    branch = "user1_jams_psi";
  }

  if (transmit.empty()) return detail::zero_jamming(2, "none");
  JammingSolution sol;
  sol.allocation = caps;
  sol.sum_rate = tw_cj_rate(ch.eve_gains, {p1, p2}, transmit);
  if (sol.sum_rate == 0.0) return detail::zero_jamming(2, "none");
  sol.branch = branch;
  detail::fill_roles(sol, transmit, 2);
  return sol;
}

}  // namespace secrecy
