#pragma once

// Brute-force verifiers. Each oracle evaluates its objective from scratch on
// a power grid and shares no code path with the closed-form solvers beyond
// the channel types.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/jamming.hpp"
#include "secrecy/parallel.hpp"
#include "secrecy/power_allocation.hpp"

namespace secrecy {

struct GridSpec {
  std::size_t points_per_axis = 101;
  bool include_corners = true;
  bool include_analytic_candidates = true;

  static constexpr double kMaxGridSize = 1e8;

  void validate() const {
    if (points_per_axis < 2) throw InvalidInput("points_per_axis", "must be at least 2");
  }

  /// The grid obtained by halving the spacing; it contains every point of
  /// this one.
  GridSpec refined() const {
    GridSpec g = *this;
    g.points_per_axis = 2 * points_per_axis - 1;
    return g;
  }
};

namespace oracle_detail {

inline double log2_ratio_half(double num, double den) { return 0.5 * std::log2(num / den); }

inline std::vector<double> axis(double cap, const GridSpec& spec, std::span<const double> extra = {}) {
  std::vector<double> v;
  const std::size_t n = spec.points_per_axis;
  if (spec.include_corners) {
    for (std::size_t i = 0; i < n; ++i) v.push_back(cap * double(i) / double(n - 1));
    v.back() = cap;
  } else {
    for (std::size_t i = 0; i < n; ++i) v.push_back(cap * (double(i) + 0.5) / double(n));
  }
  for (double x : extra)
    if (x > 0.0 && x < cap) v.push_back(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Best {
  std::vector<double> powers;
  double value = -1.0;
  bool found = false;
};

// Higher value wins; equal values go to the lexicographically lower point.
inline bool improves(double value, std::span<const double> powers, const Best& best) {
  if (!best.found || value > best.value) return true;
  if (value < best.value) return false;
  return std::lexicographical_compare(powers.begin(), powers.end(), best.powers.begin(), best.powers.end());
}

inline double grid_size(const std::vector<std::vector<double>>& axes) {
  double total = 1.0;
  for (const auto& a : axes) total *= double(a.size());
  return total;
}

/// Exhaustive argmax over the Cartesian product of ascending axes. Index
/// order equals lexicographic order, so keeping the first strict maximum
/// per block and merging blocks in order gives the lowest-lexicographic
/// tie-break regardless of threading.
template <typename Eval>
Best grid_argmax(const std::vector<std::vector<double>>& axes, Eval&& eval) {
  const std::size_t dims = axes.size();
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(total, worker_count() * 8));
  std::vector<Best> partial(blocks);

  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = total * b / blocks;
    const std::size_t hi = total * (b + 1) / blocks;
    if (lo >= hi) return;
    std::vector<std::size_t> idx(dims);
    std::size_t rem = lo;
    for (std::size_t d = dims; d-- > 0;) {
      idx[d] = rem % axes[d].size();
      rem /= axes[d].size();
    }
    std::vector<double> p(dims);
    for (std::size_t d = 0; d < dims; ++d) p[d] = axes[d][idx[d]];
    Best local;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = eval(std::span<const double>(p));
      if (!local.found || v > local.value) {
        local.value = v;
        local.powers = p;
        local.found = true;
      }
      // Odometer step, last axis fastest.
      for (std::size_t d = dims; d-- > 0;) {
        if (++idx[d] < axes[d].size()) {
          p[d] = axes[d][idx[d]];
          break;
        }
        idx[d] = 0;
        p[d] = axes[d][0];
      }
    }
    partial[b] = std::move(local);
  });

  Best best;
  for (auto& part : partial)
    if (part.found && (!best.found || part.value > best.value)) best = std::move(part);
  return best;
}

inline void check_size(double size, const char* what) {
  if (size > GridSpec::kMaxGridSize)
    throw GridTooLarge("points_per_axis", std::string(what) + " grid exceeds 1e8 points");
}

// Roles used by the jamming oracles.
enum class Role { silent, transmit, jam };

inline std::vector<std::vector<Role>> role_patterns(std::size_t k) {
  std::vector<std::vector<Role>> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<Role>> next;
    for (const auto& r : out)
      for (Role x : {Role::silent, Role::transmit, Role::jam}) {
        auto c = r;
        c.push_back(x);
        next.push_back(std::move(c));
      }
    out = std::move(next);
  }
  return out;
}

// MAC jamming objective: ½log₂[(1+ΣP)(1+Σ_J hP) / ((1+ΣhP)(1+Σ_J P))], clamped.
inline double mac_cj_value(std::span<const double> h, std::span<const double> p, const std::vector<Role>& roles) {
  double sp = 1.0, shp = 1.0, jp = 1.0, jhp = 1.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    sp += p[k];
    shp += h[k] * p[k];
    if (roles[k] == Role::jam) {
      jp += p[k];
      jhp += h[k] * p[k];
    }
  }
  return std::max(0.0, log2_ratio_half(sp * jhp, shp * jp));
}

// Stationary points of the MAC jamming objective in jammer j's power, other
// active users at their caps. The objective is u(x)/v(x) with u, v products
// of two affine factors; u'v − uv' is a quadratic, recovered from three
// samples by Lagrange interpolation and then solved.
inline std::vector<double> mac_jammer_candidates(std::span<const double> h, std::span<const double> caps,
                                                 const std::vector<Role>& roles, std::size_t j) {
  std::vector<double> base(caps.begin(), caps.end());
  for (std::size_t k = 0; k < base.size(); ++k)
    if (roles[k] == Role::silent) base[k] = 0.0;
  auto numer = [&](double x) {
    auto p = base;
    p[j] = x;
    double sp = 1.0, shp = 1.0, jp = 1.0, jhp = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      sp += p[k];
      shp += h[k] * p[k];
      if (roles[k] == Role::jam) {
        jp += p[k];
        jhp += h[k] * p[k];
      }
    }
    // u = shp·jp, v = sp·jhp; each factor has slope 1 or h_j in x.
    const double u = shp * jp, du = h[j] * jp + shp;
    const double v = sp * jhp, dv = jhp + sp * h[j];
    return du * v - u * dv;
  };
  const double y0 = numer(0.0), y1 = numer(1.0), y2 = numer(2.0);
  const double a = 0.5 * (y2 - 2.0 * y1 + y0);
  const double b = y1 - y0 - a;
  const double c = y0;
  std::vector<double> out;
  const double scale = std::max({std::abs(y0), std::abs(y1), std::abs(y2), 1e-300});
  if (std::abs(a) <= 1e-13 * scale) {
    if (b != 0.0) out.push_back(-c / b);
    return out;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return out;
  const double s = std::sqrt(disc);
  out.push_back((-b + s) / (2.0 * a));
  out.push_back((-b - s) / (2.0 * a));
  // One Newton step on the sampled polynomial tightens each root.
  for (auto& r : out) {
    const double f = (a * r + b) * r + c, df = 2.0 * a * r + b;
    if (df != 0.0) r -= f / df;
  }
  return out;
}

inline double tw_cj_value(std::span<const double> h, std::span<const double> p, const std::vector<Role>& roles) {
  double open = 0.0, heard = 1.0, jam = 1.0;
  for (std::size_t k = 0; k < 2; ++k) {
    if (roles[k] == Role::transmit) {
      open += 0.5 * std::log2(1.0 + p[k]);
      heard += h[k] * p[k];
    } else if (roles[k] == Role::jam) {
      jam += h[k] * p[k];
    }
  }
  // heard/jam = 1 + Σ_T hP / (1 + Σ_J hP) after adding the jammer noise back.
  return std::max(0.0, open - 0.5 * std::log2((heard - 1.0 + jam) / jam));
}

template <typename Value, typename Candidates>
JammingSolution role_search(std::size_t n, std::span<const double> caps, const GridSpec& spec, Value&& value,
                            Candidates&& candidates) {
  const auto patterns = role_patterns(n);
  std::vector<std::vector<std::vector<double>>> all_axes;
  double total = 0.0;
  for (const auto& roles : patterns) {
    std::vector<std::vector<double>> axes;
    for (std::size_t k = 0; k < n; ++k) {
      if (roles[k] == Role::silent) {
        axes.push_back({0.0});
      } else if (roles[k] == Role::jam && spec.include_analytic_candidates) {
        const auto extra = candidates(roles, k);
        axes.push_back(axis(caps[k], spec, extra));
      } else {
        axes.push_back(axis(caps[k], spec));
      }
    }
    total += grid_size(axes);
    all_axes.push_back(std::move(axes));
  }
  check_size(total, "jamming");

  Best best;
  std::vector<Role> best_roles(n, Role::silent);
  for (std::size_t r = 0; r < patterns.size(); ++r) {
    const auto& roles = patterns[r];
    auto b = grid_argmax(all_axes[r], [&](std::span<const double> p) { return value(p, roles); });
    if (b.found && improves(b.value, b.powers, best)) {
      best = std::move(b);
      best_roles = roles;
    }
  }

  JammingSolution sol;
  sol.allocation = PowerAllocation{best.powers};
  sol.sum_rate = best.value;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(best.powers[k] > 0.0))
      sol.silent_set.insert(k);
    else if (best_roles[k] == Role::transmit)
      sol.transmit_set.insert(k);
    else
      sol.jam_set.insert(k);
  }
  sol.branch = "oracle";
  return sol;
}

}  // namespace oracle_detail

/// Exhaustive search of the superposition secrecy sum-rate.
inline SumRateSolution grid_max_mac_sup(const StdMacChannel& ch, const GridSpec& spec = {}) {
  spec.validate();
  const auto h = ch.eve_gains();
  std::vector<std::vector<double>> axes;
  for (std::size_t k = 0; k < ch.k_users(); ++k) axes.push_back(oracle_detail::axis(ch.cap(k), spec));
  oracle_detail::check_size(oracle_detail::grid_size(axes), "superposition");
  auto best = oracle_detail::grid_argmax(axes, [&](std::span<const double> p) {
    double sp = 1.0, shp = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      sp += p[k];
      shp += h[k] * p[k];
    }
    return std::max(0.0, oracle_detail::log2_ratio_half(sp, shp));
  });
  SumRateSolution s;
  s.mode = SumRateMode::SUP;
  s.sum_rate = best.value;
  s.allocation = PowerAllocation{std::move(best.powers)};
  s.transmit_set = positive_users(s.allocation);
  return s;
}

inline JammingSolution grid_max_mac_cj(const StdMacChannel& ch, const GridSpec& spec = {}) {
  spec.validate();
  if (ch.k_users() > 3) throw UnsupportedUserCount("k_users", "the jamming oracle supports at most 3 users");
  const auto h = ch.eve_gains();
  const auto caps = ch.power_caps();
  return oracle_detail::role_search(
      ch.k_users(), caps, spec,
      [&](std::span<const double> p, const std::vector<oracle_detail::Role>& roles) {
        return oracle_detail::mac_cj_value(h, p, roles);
      },
      [&](const std::vector<oracle_detail::Role>& roles, std::size_t j) {
        auto c = oracle_detail::mac_jammer_candidates(h, caps, roles, j);
        // Two-user activation threshold of the jammer's power.
        if (ch.k_users() == 2 && j == 1 && h[1] > h[0]) c.push_back((h[0] - 1.0) / (h[1] - h[0]));
        return c;
      });
}

inline SumRateSolution grid_max_tw(const StdTwChannel& ch, const GridSpec& spec = {}) {
  spec.validate();
  const auto& h = ch.eve_gains;
  std::vector<std::vector<double>> axes{oracle_detail::axis(ch.power_caps[0], spec),
                                        oracle_detail::axis(ch.power_caps[1], spec)};
  oracle_detail::check_size(oracle_detail::grid_size(axes), "two-way");
  auto best = oracle_detail::grid_argmax(axes, [&](std::span<const double> p) {
    return std::max(0.0, oracle_detail::log2_ratio_half((1.0 + p[0]) * (1.0 + p[1]), 1.0 + h[0] * p[0] + h[1] * p[1]));
  });
  SumRateSolution s;
  s.mode = SumRateMode::TW;
  s.sum_rate = best.value;
  s.allocation = PowerAllocation{std::move(best.powers)};
  s.transmit_set = positive_users(s.allocation);
  return s;
}

inline JammingSolution grid_max_tw_cj(const StdTwChannel& ch, const GridSpec& spec = {}) {
  spec.validate();
  const std::span<const double> h(ch.eve_gains);
  const std::span<const double> caps(ch.power_caps);
  return oracle_detail::role_search(
      2, caps, spec,
      [&](std::span<const double> p, const std::vector<oracle_detail::Role>& roles) {
        return oracle_detail::tw_cj_value(h, p, roles);
      },
      [](const std::vector<oracle_detail::Role>&, std::size_t) { return std::vector<double>{}; });
}

struct TdmaScanResult {
  double alpha1 = 0.0;
  double sum_rate = 0.0;
};

/// Dense scan of the two-user TDMA objective over α₁ ∈ [0, 1], polished by
/// a golden-section search on the bracket around the best sample.
inline TdmaScanResult tdma_scan_two_user(const StdMacChannel& ch, std::size_t points = 1'000'001) {
  if (ch.k_users() != 2) throw UnsupportedUserCount("k_users", "the TDMA scan needs exactly 2 users");
  if (points < 3) throw InvalidInput("points", "must be at least 3");
  auto user = [&](std::size_t k, double a) {
    if (a <= 0.0) return 0.0;
    const double p = ch.cap(k), g = ch.gain(k);
    return std::max(0.0, 0.5 * a * std::log2((1.0 + p / a) / (1.0 + g * p / a)));
  };
  auto f = [&](double a) { return user(0, a) + user(1, 1.0 - a); };

  const std::size_t blocks = std::max<std::size_t>(1, worker_count() * 4);
  std::vector<std::pair<double, std::size_t>> part(blocks, {-1.0, 0});
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t lo = points * b / blocks, hi = points * (b + 1) / blocks;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = f(double(i) / double(points - 1));
      if (v > part[b].first) part[b] = {v, i};
    }
  });
  std::pair<double, std::size_t> best{-1.0, 0};
  for (auto& p : part)
    if (p.first > best.first) best = p;

  const double step = 1.0 / double(points - 1);
  double lo = std::max(0.0, double(best.second) * step - step);
  double hi = std::min(1.0, double(best.second) * step + step);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  TdmaScanResult r{double(best.second) * step, best.first};
  if (f(mid) >= r.sum_rate) r = {mid, f(mid)};
  return r;
}

}  // namespace secrecy
