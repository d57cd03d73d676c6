#include <gtest/gtest.h>

#include "secrecy/jamming.hpp"
#include "secrecy/oracle.hpp"
#include "secrecy/power_allocation.hpp"
#include "support/reference.hpp"

using namespace secrecy;

namespace {

StdMacChannel mac(std::vector<double> h, std::vector<double> p, TieMode t = TieMode::merge) {
  return StdMacChannel::from_gains(std::move(h), std::move(p), t);
}

StdTwChannel tw(double h1, double h2, double p1, double p2) { return StdTwChannel::from_gains({h1, h2}, {p1, p2}); }

std::vector<double> gains(const StdMacChannel& ch) { return {ch.eve_gains().begin(), ch.eve_gains().end()}; }

// Two-user jammer root p written out from the factored stationarity condition.
double two_user_p(double h1, double h2, double p1) {
  return (h1 - 1) / (h2 - h1) + std::sqrt(h1 * h2 * (h2 - 1) * ((h2 - 1) + (h2 - h1) * p1)) / (h2 * (h2 - h1));
}

void expect_partition(const JammingSolution& s, std::size_t k) {
  EXPECT_TRUE((s.transmit_set & s.jam_set).empty());
  EXPECT_TRUE((s.transmit_set & s.silent_set).empty());
  EXPECT_TRUE((s.jam_set & s.silent_set).empty());
  EXPECT_EQ(s.transmit_set | s.jam_set | s.silent_set, UserSet::all(k));
}

}  // namespace

// --- objective -------------------------------------------------------------

TEST(CjObjective, NoJammersReducesToPhi) {
  auto ch = mac({0.2, 0.6}, {3, 3});
  PowerAllocation p{{3, 1}};
  EXPECT_DOUBLE_EQ(cj_objective_mac(ch, p, UserSet{0, 1}), phi(p, ch.eve_gains(), ch.users()));
}

TEST(CjObjective, HandEvaluated) {
  auto ch = mac({1.1, 1.4}, {2, 2});
  PowerAllocation p{{2, 2}};
  EXPECT_NEAR(cj_objective_mac(ch, p, UserSet{0}), 1.2 / (3.8 / 3.0), 1e-15);
  EXPECT_NEAR(cj_objective_mac(ch, p, UserSet{0}), 0.947368, 1e-6);
  const double rate = mac_cj_rate(ch.eve_gains(), p, UserSet{0});
  EXPECT_NEAR(rate, -0.5 * std::log2(1.2 / (3.8 / 3.0)), 1e-14);
  EXPECT_NEAR(rate, 0.039001, 1e-6);
  EXPECT_NEAR(rate, ref::mac_jam_rate({1.1, 1.4}, {2, 2}, {false, true}), 1e-14);
}

TEST(CjObjective, UnitGainsNeverHelp) {
  auto ch = mac({1, 1}, {2, 5}, TieMode::keep);
  for (double a : linspace(0, 2, 9))
    for (double b : linspace(0, 5, 9)) {
      PowerAllocation p{{a, b}};
      EXPECT_GE(cj_objective_mac(ch, p, UserSet{0}), 1.0 - 1e-15);
      EXPECT_EQ(mac_cj_rate(ch.eve_gains(), p, UserSet{0}), 0.0);
    }
}

TEST(CjRate, MatchesReferenceOnRandomRoles) {
  ref::Rng rng(41, "cj-rate");
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 1 + rng.integer(0, 3);
    auto h = rng.uniforms(k, 0, 3);
    auto p = rng.uniforms(k, 0, 10);
    const auto mask = rng.integer(0, (1 << k) - 1);
    std::vector<bool> jam(k);
    UserSet t;
    for (std::size_t j = 0; j < k; ++j) {
      jam[j] = !((mask >> j) & 1);
      if (!jam[j]) t.insert(j);
    }
    EXPECT_NEAR(mac_cj_rate(h, p, t), ref::mac_jam_rate(h, p, jam), 1e-12);
  }
  ref::Rng rng2(42, "tw-cj-rate");
  for (int i = 0; i < 1000; ++i) {
    const std::array<double, 2> h{rng2.uniform(0, 3), rng2.uniform(0, 3)};
    const std::array<double, 2> p{rng2.uniform(0, 10), rng2.uniform(0, 10)};
    EXPECT_NEAR(tw_cj_rate(h, p, UserSet{0}), ref::tw_jam_rate(h[0], h[1], p[0], p[1], 1), 1e-12);
    EXPECT_NEAR(tw_cj_rate(h, p, UserSet{1}), ref::tw_jam_rate(h[0], h[1], p[0], p[1], 0), 1e-12);
    EXPECT_NEAR(tw_cj_rate(h, p, UserSet{0, 1}), ref::tw_rate(h[0], h[1], p[0], p[1]), 1e-12);
  }
}

// --- pivot quadratic and rho -----------------------------------------------

TEST(Pivot, RootClampedToCap) {
  auto ch = mac({1.1, 1.4}, {2, 2});
  auto q = pivot_quadratic(ch, UserSet{0}, UserSet{1}, 1, PowerAllocation{{2, 0}});
  ASSERT_TRUE(q.root);
  EXPECT_NEAR(*q.root, two_user_p(1.1, 1.4, 2), 1e-12);
  EXPECT_NEAR(*q.root, 2.2021, 1e-4);
  EXPECT_EQ(q.kind, PivotCase::clamped_to_cap);
}

TEST(Pivot, InteriorRootIsStationary) {
  auto ch = mac({0.5, 1.4}, {2, 2});
  auto q = pivot_quadratic(ch, UserSet{0}, UserSet{1}, 1, PowerAllocation{{2, 0}});
  ASSERT_TRUE(q.root);
  EXPECT_EQ(q.kind, PivotCase::interior_root);
  EXPECT_NEAR(*q.root, two_user_p(0.5, 1.4, 2), 1e-12);
  EXPECT_NEAR(*q.root, 0.067347, 1e-6);
  PowerAllocation at{{2, *q.root}};
  const double rho = rho_eval(ch, UserSet{0}, UserSet{1}, at, 1);
  EXPECT_LE(std::abs(rho), 1e-9 * rho_scale(ch, UserSet{0}, UserSet{1}, at, 1));
  // A nearby power away from the root is not stationary.
  PowerAllocation off{{2, 0.3215}};
  EXPECT_GT(std::abs(rho_eval(ch, UserSet{0}, UserSet{1}, off, 1)), 1e-3);
}

TEST(Pivot, NoPositiveRootBelowRatio) {
  // h₂ below φ₁(P̄) with h₁ < 1: jamming never pays.
  auto ch = mac({0.1, 0.2}, {4, 4});
  auto q = pivot_quadratic(ch, UserSet{0}, UserSet{1}, 1, PowerAllocation{{4, 0}});
  EXPECT_FALSE(q.root);
  EXPECT_TRUE(q.kind == PivotCase::no_real_root || q.kind == PivotCase::root_nonpositive);
}

TEST(Pivot, PolynomialEqualsRhoEverywhere) {
  ref::Rng rng(43, "rho-poly");
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = 2 + rng.integer(0, 2);
    auto ch = mac(rng.uniforms(k, 0, 3), rng.uniforms(k, 0.1, 8), TieMode::keep);
    const std::size_t t = 1 + rng.integer(0, int(k) - 2);
    const std::size_t pivot = t + rng.integer(0, int(k - t) - 1);
    std::vector<double> p(k, 0.0);
    for (std::size_t j = 0; j < t; ++j) p[j] = ch.cap(j);
    for (std::size_t j = pivot + 1; j < k; ++j) p[j] = ch.cap(j);
    const auto T = UserSet::range(0, t), J = UserSet::range(pivot, k);
    auto q = pivot_quadratic(ch, T, J, pivot, PowerAllocation{p});
    for (double x : {0.0, 0.5, 1.7, 4.0}) {
      p[pivot] = x;
      PowerAllocation a{p};
      const double rho = rho_eval(ch, T, J, a, pivot);
      EXPECT_NEAR(q(x), rho, 1e-10 * std::max(1.0, rho_scale(ch, T, J, a, pivot)));
    }
  }
}

TEST(Pivot, RhoVanishesWithoutTransmitters) {
  auto ch = mac({0.3, 0.9, 1.6}, {1, 2, 3});
  PowerAllocation p{{0, 2, 3}};
  EXPECT_EQ(rho_eval(ch, UserSet{}, UserSet{1, 2}, p, 2), 0.0);
  EXPECT_THROW(rho_eval(ch, UserSet{0}, UserSet{1}, p, 2), InvalidInput);
  EXPECT_THROW(pivot_quadratic(ch, UserSet{0}, UserSet{1}, 2, p), InvalidInput);
  EXPECT_THROW(pivot_quadratic(ch, UserSet{1}, UserSet{1, 2}, 2, p), InvalidInput);
}

// --- MAC optimum -----------------------------------------------------------

TEST(MacCj, WeakGainsMatchNoJamOptimum) {
  auto ch = mac({0.1, 0.3}, {4, 4});
  auto s = mac_cj_optimal(ch);
  EXPECT_TRUE(s.jam_set.empty());
  EXPECT_EQ(s.allocation.powers, mac_sup_optimal(ch).allocation.powers);
  EXPECT_EQ(s.sum_rate, mac_sup_optimal(ch).sum_rate);
}

TEST(MacCj, JammingEnablesSecrecy) {
  auto ch = mac({1.1, 1.4}, {2, 2});
  EXPECT_EQ(mac_sup_optimal(ch).sum_rate, 0.0);
  auto s = mac_cj_optimal(ch);
  EXPECT_EQ(s.transmit_set, UserSet{0});
  EXPECT_EQ(s.jam_set, UserSet{1});
  EXPECT_EQ(s.allocation.powers, (std::vector<double>{2, 2}));
  EXPECT_NEAR(s.sum_rate, 0.039001, 1e-6);
  ASSERT_TRUE(s.pivot_user);
  EXPECT_EQ(*s.pivot_user, 1u);
  EXPECT_EQ(s.active_case, PivotCase::clamped_to_cap);
}

TEST(MacCj, ThresholdAboveCapGivesZero) {
  auto s = mac_cj_optimal(mac({1.5, 1.6}, {0.1, 0.1}));
  EXPECT_EQ(s.sum_rate, 0.0);
  EXPECT_EQ(s.allocation.powers, (std::vector<double>{0, 0}));
  EXPECT_EQ(s.silent_set, (UserSet{0, 1}));
  EXPECT_EQ(s.branch, "T=0");
}

TEST(MacCj, PartialPowerPivot) {
  auto ch = mac({0.5, 1.4}, {2, 2});
  auto s = mac_cj_optimal(ch);
  EXPECT_EQ(s.transmit_set, UserSet{0});
  EXPECT_EQ(s.jam_set, UserSet{1});
  EXPECT_NEAR(s.allocation[1], 0.067347, 1e-6);
  EXPECT_EQ(s.active_case, PivotCase::interior_root);
  EXPECT_NEAR(s.sum_rate, 0.293247, 1e-6);
  EXPECT_GT(s.sum_rate, ref::single_user(0.5, 2));
}

// --- two-user closed form --------------------------------------------------

TEST(MacCjTwoUser, Branches) {
  auto a = mac_cj_two_user(mac({0.5, 0.8}, {4, 4}));
  EXPECT_EQ(a.branch, "user1_only");
  EXPECT_EQ(a.allocation.powers, (std::vector<double>{4, 0}));

  auto b = mac_cj_two_user(mac({0.5, 1.4}, {2, 2}));
  EXPECT_EQ(b.branch, "user2_jams");
  EXPECT_NEAR(b.allocation[1], two_user_p(0.5, 1.4, 2), 1e-15);

  auto c = mac_cj_two_user(mac({1.2, 1.2}, {2, 2}, TieMode::keep));
  EXPECT_EQ(c.sum_rate, 0.0);
  EXPECT_EQ(c.allocation.powers, (std::vector<double>{0, 0}));

  auto d = mac_cj_two_user(mac({1.1, 1.4}, {2, 2}));
  EXPECT_EQ(d.branch, "user2_jams_strong");
  EXPECT_EQ(d.allocation.powers, (std::vector<double>{2, 2}));

  auto e = mac_cj_two_user(mac({0.1, 0.2}, {4, 4}));
  EXPECT_EQ(e.branch, "both_transmit");

  EXPECT_THROW(mac_cj_two_user(mac({0.5}, {1})), UnsupportedUserCount);
}

TEST(MacCjTwoUser, AgreesWithSearchExhaustively) {
  const auto hs = linspace(0, 2, 41);
  for (double h1 : hs)
    for (double h2 : hs)
      for (double p1 : {0.5, 2.0, 8.0})
        for (double p2 : {0.5, 2.0, 8.0}) {
          auto ch = mac({h1, h2}, {p1, p2}, TieMode::keep);
          auto a = mac_cj_two_user(ch);
          auto b = mac_cj_optimal(ch);
          const auto where = ::testing::Message() << "h=(" << h1 << "," << h2 << ") P=(" << p1 << "," << p2 << ")";
          ASSERT_EQ(a.transmit_set, b.transmit_set) << where;
          ASSERT_EQ(a.jam_set, b.jam_set) << where;
          ASSERT_NEAR(a.allocation[0], b.allocation[0], 1e-9) << where;
          ASSERT_NEAR(a.allocation[1], b.allocation[1], 1e-9) << where;
          ASSERT_NEAR(a.sum_rate, b.sum_rate, 1e-12) << where;
        }
}

// --- MAC properties --------------------------------------------------------

TEST(MacCjProperties, StructureDominanceAndRoleOrder) {
  ref::Rng rng(44, "cj-structure");
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 1 + rng.integer(0, 4);
    auto ch = mac(rng.uniforms(k, 0, 2.5), rng.uniforms(k, 0.1, 10));
    auto s = mac_cj_optimal(ch);
    const std::size_t n = ch.k_users();
    expect_partition(s, n);
    EXPECT_GE(s.sum_rate, mac_sup_optimal(ch).sum_rate);
    EXPECT_TRUE(s.allocation.within(ch.power_caps()));
    // Transmitters are a prefix at full power; at most one jammer is partial.
    std::size_t t = 0;
    while (t < n && s.transmit_set.contains(t)) ++t;
    EXPECT_EQ(s.transmit_set, UserSet::range(0, t));
    std::size_t partial = 0;
    s.transmit_set.for_each([&](std::size_t j) { EXPECT_EQ(s.allocation[j], ch.cap(j)); });
    s.jam_set.for_each([&](std::size_t j) {
      if (s.allocation[j] < ch.cap(j)) ++partial;
      EXPECT_GT(ch.gain(j), ch.gain(t - 1));
    });
    EXPECT_LE(partial, 1u);
    if (!s.jam_set.empty()) {
      // Jammers form a suffix apart from the pivot.
      std::size_t first = n;
      s.jam_set.for_each([&](std::size_t j) { first = std::min(first, j); });
      EXPECT_EQ(s.jam_set, UserSet::range(first, n));
    }
    EXPECT_NEAR(s.sum_rate, mac_cj_rate(ch.eve_gains(), s.allocation, s.transmit_set), 1e-15);
  }
}

TEST(MacCjProperties, SplittingPowerNeverHelps) {
  ref::Rng rng(45, "no-split");
  auto split_rate = [](const std::vector<double>& h, const std::vector<double>& p, const std::vector<double>& frac) {
    double tx = 0, txh = 0, jm = 0, jmh = 0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      tx += frac[k] * p[k];
      txh += h[k] * frac[k] * p[k];
      jm += (1 - frac[k]) * p[k];
      jmh += h[k] * (1 - frac[k]) * p[k];
    }
    return ref::pos(ref::half_log2(1 + tx / (1 + jm)) - ref::half_log2(1 + txh / (1 + jmh)));
  };
  for (int i = 0; i < 60; ++i) {
    auto ch = mac(rng.uniforms(2, 0, 2.5), rng.uniforms(2, 0.1, 10), TieMode::keep);
    const double best = mac_cj_optimal(ch).sum_rate;
    const auto h = gains(ch);
    const auto fr = linspace(0, 1, 21);
    for (double s1 : linspace(0, 1, 11))
      for (double s2 : linspace(0, 1, 11))
        for (double f1 : fr)
          for (double f2 : fr) {
            const std::vector<double> p{s1 * ch.cap(0), s2 * ch.cap(1)};
            EXPECT_LE(split_rate(h, p, {f1, f2}), best + 1e-12);
          }
  }
}

TEST(MacCjProperties, MatchesGridOracleTwoUsers) {
  ref::Rng rng(46, "cj-oracle-2");
  for (int i = 0; i < 200; ++i) {
    auto ch = mac(rng.uniforms(2, 0, 2), rng.uniforms(2, 0.1, 10));
    if (ch.k_users() != 2) continue;
    auto s = mac_cj_optimal(ch);
    auto g = grid_max_mac_cj(ch, GridSpec{101, true, true});
    EXPECT_NEAR(s.sum_rate, g.sum_rate, 1e-6) << ch.gain(0) << " " << ch.gain(1);
    EXPECT_GE(s.sum_rate, g.sum_rate - 1e-12);
  }
}

TEST(MacCjProperties, MatchesGridOracleThreeUsers) {
  ref::Rng rng(47, "cj-oracle-3");
  for (int i = 0; i < 6; ++i) {
    auto ch = mac(rng.uniforms(3, 0, 2), rng.uniforms(3, 0.1, 10));
    auto s = mac_cj_optimal(ch);
    auto g = grid_max_mac_cj(ch, GridSpec{41, true, true});
    EXPECT_GE(s.sum_rate, g.sum_rate - 1e-12);
    EXPECT_NEAR(s.sum_rate, g.sum_rate, 1e-6);
  }
}

// --- two-way ---------------------------------------------------------------

TEST(TwCj, Branches) {
  auto a = tw_cj_optimal(tw(0.3, 0.7, 4, 2));
  EXPECT_EQ(a.branch, "both_transmit");
  EXPECT_EQ(a.sum_rate, tw_optimal(tw(0.3, 0.7, 4, 2)).sum_rate);

  auto b = tw_cj_optimal(tw(0.5, 4.2, 2, 2));
  EXPECT_EQ(b.branch, "user2_jams");
  EXPECT_EQ(b.transmit_set, UserSet{0});
  EXPECT_EQ(b.jam_set, UserSet{1});
  EXPECT_NEAR(b.sum_rate, ref::half_log2(3) - ref::half_log2(1 + 1.0 / 9.4), 1e-14);
  EXPECT_NEAR(b.sum_rate, 0.719556, 1e-6);
  EXPECT_NEAR(tw_optimal(tw(0.5, 4.2, 2, 2)).sum_rate, 0.5 * (std::log2(3) - std::log2(2)), 1e-14);

  auto c = tw_cj_optimal(tw(3, 5, 0.1, 0.1));
  EXPECT_EQ(c.sum_rate, 0.0);
  EXPECT_EQ(c.allocation.powers, (std::vector<double>{0, 0}));
}

TEST(TwCj, PsiBranches) {
  // 1 < h₁ < h₂, user 2 jamming gives the better ratio.
  auto a = tw_cj_optimal(tw(1.2, 3.0, 2, 2));
  EXPECT_EQ(a.branch, "user2_jams_psi");
  // Weak user 1 at huge power, user 2 barely above it: user 1 jams.
  auto b = tw_cj_optimal(tw(1.2, 1.3, 50, 0.5));
  EXPECT_EQ(b.branch, "user1_jams_psi");
  EXPECT_EQ(b.jam_set, UserSet{0});
  EXPECT_GT(b.sum_rate, 0.0);
  // Equal gains and caps make ψ₁ = ψ₂.
  auto c = tw_cj_optimal(tw(1.5, 1.5, 2, 2));
  EXPECT_EQ(c.branch, "user2_jams_psi_tie");
}

TEST(TwCjProperties, DominanceAndOracle) {
  ref::Rng rng(48, "tw-cj-oracle");
  for (int i = 0; i < 300; ++i) {
    auto ch = tw(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0.1, 10), rng.uniform(0.1, 10));
    auto s = tw_cj_optimal(ch);
    expect_partition(s, 2);
    EXPECT_GE(s.sum_rate, tw_optimal(ch).sum_rate - 1e-15);
    auto g = grid_max_tw_cj(ch, GridSpec{101, true, true});
    EXPECT_NEAR(s.sum_rate, g.sum_rate, 1e-6) << ch.eve_gains[0] << " " << ch.eve_gains[1] << " "
                                               << ch.power_caps[0] << " " << ch.power_caps[1];
  }
}

TEST(TwCjProperties, JammingHelpsExactlyAboveUnitGain) {
  ref::Rng rng(49, "tw-jam-condition");
  for (int i = 0; i < 1000; ++i) {
    const std::array<double, 2> h{rng.uniform(0, 3), rng.uniform(0, 3)};
    const std::array<double, 2> p{rng.uniform(0.1, 10), rng.uniform(0.1, 10)};
    const double both = tw_sum_rate(h, p);
    for (std::size_t j = 0; j < 2; ++j) {
      const double jam = tw_cj_rate(h, p, UserSet{1 - j});
      if (h[j] > 1)
        EXPECT_GE(jam, both);
      else
        EXPECT_LE(jam, both);
      EXPECT_EQ(psi(p, std::span<const double>(h), UserSet{j}) < 1.0, h[j] < 1.0 || h[j] * p[j] < p[j]);
    }
  }
}
