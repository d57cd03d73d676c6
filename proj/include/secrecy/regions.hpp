#pragma once

// Achievable secrecy-rate regions: superposition (SUP), TDMA, two-way (TW),
// and sampled convex hulls of their secrecy projections.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/geometry.hpp"

namespace secrecy {

enum class ConstraintKind { total_rate, secrecy_rate, per_user_total, per_user_secrecy };
enum class Provenance { SUP, TDMA, TW, HULL };

inline const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::total_rate: return "total_rate";
    case ConstraintKind::secrecy_rate: return "secrecy_rate";
    case ConstraintKind::per_user_total: return "per_user_total";
    case ConstraintKind::per_user_secrecy: return "per_user_secrecy";
  }
  return "?";
}

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::SUP: return "SUP";
    case Provenance::TDMA: return "TDMA";
    case Provenance::TW: return "TW";
    case Provenance::HULL: return "HULL";
  }
  return "?";
}

/// Sum over `subset` of the rates selected by `kind` is at most `bound`.
/// Total kinds bound R^s + R^o, secrecy kinds bound R^s alone.
/// `clamped` marks a secrecy bound whose unclamped value was negative.
struct RateConstraint {
  UserSet subset;
  ConstraintKind kind = ConstraintKind::total_rate;
  double bound = 0.0;
  bool clamped = false;

  bool is_secrecy() const {
    return kind == ConstraintKind::secrecy_rate || kind == ConstraintKind::per_user_secrecy;
  }
};

struct HullSampling {
  std::size_t power_grid_resolution = 0;
  std::size_t share_grid_resolution = 0;
};

struct SecrecyRegion {
  Provenance provenance = Provenance::SUP;
  std::size_t k_users = 0;
  std::vector<RateConstraint> constraints;
  /// Secrecy projection for K <= 2, counterclockwise. For K = 1 the second
  /// coordinate is always 0.
  std::optional<std::vector<Point2>> vertices2d;
  std::optional<HullSampling> sampling;

  /// Bound of the first secrecy constraint on exactly `s`, if any.
  std::optional<double> secrecy_bound(UserSet s) const {
    for (const auto& c : constraints)
      if (c.is_secrecy() && c.subset == s) return c.bound;
    return std::nullopt;
  }
  std::optional<double> total_bound(UserSet s) const {
    for (const auto& c : constraints)
      if (!c.is_secrecy() && c.subset == s) return c.bound;
    return std::nullopt;
  }
};

struct TdmaShares {
  std::vector<double> alpha;

  void validate(std::size_t k_users) const {
    detail::require_size(alpha.size(), k_users, "shares");
    double sum = 0.0;
    for (auto a : alpha) {
      if (!(a >= 0.0 && a <= 1.0)) throw InvalidInput("shares", "each share must lie in [0, 1]");
      sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("shares", "shares must sum to 1");
  }

  static TdmaShares uniform(std::size_t k) { return {std::vector<double>(k, 1.0 / double(k))}; }
};

/// A candidate operating point. Empty `open_rates` means all zero.
struct RatePoint {
  std::vector<double> secrecy_rates;
  std::vector<double> open_rates;
};

namespace detail {

struct HalfPlane {
  double a, b, c;  // a·x + b·y <= c
};

/// Vertices of {x, y >= 0 : every secrecy-projected constraint}. Setting the
/// open rates to zero only loosens the total constraints, so each constraint
/// restricts the secrecy projection as Σ_S R^s <= bound.
inline std::vector<Point2> secrecy_polygon(const std::vector<RateConstraint>& cs, std::size_t k_users) {
  std::vector<HalfPlane> hp{{-1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}};
  if (k_users == 1) hp.push_back({0.0, 1.0, 0.0});
  for (const auto& c : cs) {
    const double a = c.subset.contains(0) ? 1.0 : 0.0;
    const double b = c.subset.contains(1) ? 1.0 : 0.0;
    hp.push_back({a, b, c.bound});
  }
  auto feasible = [&](const Point2& p) {
    for (const auto& h : hp)
      if (h.a * p.x + h.b * p.y > h.c + 1e-12 * (1.0 + std::abs(h.c))) return false;
    return true;
  };
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < hp.size(); ++i) {
    for (std::size_t j = i + 1; j < hp.size(); ++j) {
      const double det = hp[i].a * hp[j].b - hp[i].b * hp[j].a;
      if (det == 0.0) continue;
      Point2 p{(hp[i].c * hp[j].b - hp[i].b * hp[j].c) / det, (hp[i].a * hp[j].c - hp[i].c * hp[j].a) / det};
      // Snap the tiny negatives left by cancellation.
      if (std::abs(p.x) < 1e-15) p.x = 0.0;
      if (std::abs(p.y) < 1e-15) p.y = 0.0;
      if (feasible(p)) pts.push_back(p);
    }
  }
  return convex_hull(std::move(pts));
}

inline void attach_polygon(SecrecyRegion& r) {
  if (r.k_users <= 2) r.vertices2d = secrecy_polygon(r.constraints, r.k_users);
}

inline RateConstraint secrecy_constraint(UserSet s, ConstraintKind kind, double raw) {
  return {s, kind, positive_part(raw), raw < 0.0};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Region builders

inline SecrecyRegion mac_sup_region(const StdMacChannel& ch, const PowerAllocation& alloc) {
  detail::require_size(alloc.size(), ch.k_users(), "powers");
  if (!alloc.within(ch.power_caps(), 1e-12)) throw InvalidInput("powers", "allocation outside the power caps");
  SecrecyRegion r;
  r.provenance = Provenance::SUP;
  r.k_users = ch.k_users();
  const auto h = ch.eve_gains();
  for (auto s : nonempty_subsets(ch.k_users())) {
    const double cm = cap_main(alloc, s);
    r.constraints.push_back({s, ConstraintKind::total_rate, cm, false});
    r.constraints.push_back(
        detail::secrecy_constraint(s, ConstraintKind::secrecy_rate, cm - cap_eve_tilde(alloc, h, s)));
  }
  detail::attach_polygon(r);
  return r;
}

/// Per-user TDMA rate with share `a` and full cap `p`, gain `g`.
inline double tdma_user_rate(double a, double p, double g) {
  if (a <= 0.0) return 0.0;
  return a * positive_part(half_log2_1p(p / a) - half_log2_1p(g * p / a));
}

inline SecrecyRegion mac_tdma_region(const StdMacChannel& ch, const TdmaShares& shares) {
  shares.validate(ch.k_users());
  SecrecyRegion r;
  r.provenance = Provenance::TDMA;
  r.k_users = ch.k_users();
  for (std::size_t k = 0; k < ch.k_users(); ++k) {
    const double a = shares.alpha[k];
    const double p = ch.cap(k);
    const UserSet s{k};
    const double total = a > 0.0 ? a * half_log2_1p(p / a) : 0.0;
    const double raw = a > 0.0 ? a * (half_log2_1p(p / a) - half_log2_1p(ch.gain(k) * p / a)) : 0.0;
    r.constraints.push_back({s, ConstraintKind::per_user_total, total, false});
    r.constraints.push_back(detail::secrecy_constraint(s, ConstraintKind::per_user_secrecy, raw));
  }
  detail::attach_polygon(r);
  return r;
}

inline SecrecyRegion tw_region(const StdTwChannel& ch, const PowerAllocation& alloc) {
  detail::require_size(alloc.size(), 2, "powers");
  if (!alloc.within(ch.power_caps, 1e-12)) throw InvalidInput("powers", "allocation outside the power caps");
  SecrecyRegion r;
  r.provenance = Provenance::TW;
  r.k_users = 2;
  const std::span<const double> h(ch.eve_gains);
  for (std::size_t k = 0; k < 2; ++k)
    r.constraints.push_back(
        {UserSet{k}, ConstraintKind::per_user_total, half_log2_1p(alloc[k]), false});
  for (auto s : nonempty_subsets(2)) {
    double open = 0.0;
    s.for_each([&](std::size_t k) { open += half_log2_1p(alloc[k]); });
    r.constraints.push_back(
        detail::secrecy_constraint(s, ConstraintKind::secrecy_rate, open - cap_eve_tilde(alloc, h, s)));
  }
  detail::attach_polygon(r);
  return r;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
  v.back() = hi;
  return v;
}

struct HullOptions {
  std::size_t power_grid_resolution = 33;
  std::size_t share_grid_resolution = 33;
  bool include_sup = true;
  bool include_tdma = true;
};

namespace detail {

inline void check_resolution(std::size_t n, const char* field) {
  if (n < 2) throw InvalidInput(field, "resolution must be at least 2");
}

inline void append_projection(std::vector<Point2>& out, const SecrecyRegion& r) {
  if (r.vertices2d) out.insert(out.end(), r.vertices2d->begin(), r.vertices2d->end());
}

inline SecrecyRegion hull_of(std::vector<Point2> pts, std::size_t k_users, HullSampling sampling) {
  SecrecyRegion r;
  r.provenance = Provenance::HULL;
  r.k_users = k_users;
  pts.push_back({0.0, 0.0});
  r.vertices2d = convex_hull(std::move(pts));
  r.sampling = sampling;
  return r;
}

}  // namespace detail

inline SecrecyRegion mac_hull_region(const StdMacChannel& ch, const HullOptions& opt = {}) {
  if (ch.k_users() > 2)
    throw UnsupportedUserCount("k_users", "hull regions are available for at most two users");
  detail::check_resolution(opt.power_grid_resolution, "power_grid_resolution");
  detail::check_resolution(opt.share_grid_resolution, "share_grid_resolution");
  const std::size_t k = ch.k_users();
  std::vector<Point2> pts;
  if (opt.include_sup) {
    std::vector<std::vector<double>> axes;
    for (std::size_t i = 0; i < k; ++i) axes.push_back(linspace(0.0, ch.cap(i), opt.power_grid_resolution));
    const std::size_t n = opt.power_grid_resolution;
    const std::size_t cells = k == 1 ? n : n * n;
    for (std::size_t c = 0; c < cells; ++c) {
      PowerAllocation p{{axes[0][c % n]}};
      if (k == 2) p.powers.push_back(axes[1][c / n]);
      detail::append_projection(pts, mac_sup_region(ch, p));
    }
  }
  if (opt.include_tdma) {
    for (double a : linspace(0.0, 1.0, opt.share_grid_resolution)) {
      TdmaShares s = k == 1 ? TdmaShares{{1.0}} : TdmaShares{{a, 1.0 - a}};
      detail::append_projection(pts, mac_tdma_region(ch, s));
    }
  }
  return detail::hull_of(std::move(pts), k, {opt.power_grid_resolution, opt.include_tdma ? opt.share_grid_resolution : 0});
}

inline SecrecyRegion mac_hull_region(const StdMacChannel& ch, std::size_t power_grid_resolution,
                                     std::size_t share_grid_resolution) {
  return mac_hull_region(ch, HullOptions{power_grid_resolution, share_grid_resolution, true, true});
}

/// Convex hull of the TW secrecy polygons over a power grid.
inline SecrecyRegion tw_hull_region(const StdTwChannel& ch, std::size_t power_grid_resolution = 33) {
  detail::check_resolution(power_grid_resolution, "power_grid_resolution");
  const auto a1 = linspace(0.0, ch.power_caps[0], power_grid_resolution);
  const auto a2 = linspace(0.0, ch.power_caps[1], power_grid_resolution);
  std::vector<Point2> pts;
  for (double p2 : a2)
    for (double p1 : a1) detail::append_projection(pts, tw_region(ch, PowerAllocation{{p1, p2}}));
  return detail::hull_of(std::move(pts), 2, {power_grid_resolution, 0});
}

// ---------------------------------------------------------------------------
// Membership

inline constexpr double kRegionTol = 1e-9;

inline bool region_contains(const SecrecyRegion& region, const RatePoint& pt) {
  detail::require_size(pt.secrecy_rates.size(), region.k_users, "secrecy_rates");
  if (!pt.open_rates.empty()) detail::require_size(pt.open_rates.size(), region.k_users, "open_rates");
  auto open = [&](std::size_t k) { return pt.open_rates.empty() ? 0.0 : pt.open_rates[k]; };
  for (std::size_t k = 0; k < region.k_users; ++k)
    if (pt.secrecy_rates[k] < -kRegionTol || open(k) < -kRegionTol) return false;

  for (const auto& c : region.constraints) {
    double acc = 0.0;
    c.subset.for_each([&](std::size_t k) { acc += pt.secrecy_rates[k] + (c.is_secrecy() ? 0.0 : open(k)); });
    if (acc > c.bound + kRegionTol) return false;
  }
  // Hulls carry no constraints; test the secrecy projection directly.
  if (region.provenance == Provenance::HULL && region.vertices2d) {
    const Point2 p{pt.secrecy_rates[0], region.k_users > 1 ? pt.secrecy_rates[1] : 0.0};
    return polygon_contains(*region.vertices2d, p, kRegionTol);
  }
  return true;
}

}  // namespace secrecy
