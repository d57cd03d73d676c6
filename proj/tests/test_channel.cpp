#include <gtest/gtest.h>

#include "secrecy/channel.hpp"
#include "support/reference.hpp"

using namespace secrecy;

namespace {

std::vector<double> v(std::initializer_list<double> x) { return x; }

}  // namespace

TEST(UserSet, BasicsAndLabels) {
  UserSet s{0, 2};
  EXPECT_TRUE(s.contains(0));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.labels(), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(s.complement(3), UserSet{1});
  EXPECT_EQ(UserSet::range(1, 3), (UserSet{1, 2}));
  EXPECT_EQ(nonempty_subsets(3).size(), 7u);
  EXPECT_EQ(s.to_string(), "{1,3}");
}

// --- standardize_mac -------------------------------------------------------

TEST(StandardizeMac, IdentityGainsMergeIntoOneSuperUser) {
  RawMacChannel raw{v({1, 1}), v({1, 1}), 1.0, 1.0, v({4, 2})};
  auto ch = standardize_mac(raw);
  ASSERT_EQ(ch.k_users(), 1u);
  EXPECT_DOUBLE_EQ(ch.gain(0), 1.0);
  EXPECT_DOUBLE_EQ(ch.cap(0), 6.0);
  EXPECT_EQ(ch.groups()[0], (std::vector<std::size_t>{0, 1}));
  // Split back in proportion to the original caps.
  auto back = ch.split_back(std::vector<double>{3.0});
  EXPECT_DOUBLE_EQ(back[0], 2.0);
  EXPECT_DOUBLE_EQ(back[1], 1.0);
}

TEST(StandardizeMac, HandEvaluatedTransform) {
  RawMacChannel raw{v({2, 1}), v({1, 1}), 1.0, 2.0, v({2, 4})};
  auto ch = standardize_mac(raw);
  ASSERT_EQ(ch.k_users(), 2u);
  EXPECT_NEAR(ch.gain(0), 0.25, 1e-15);
  EXPECT_NEAR(ch.gain(1), 0.5, 1e-15);
  EXPECT_NEAR(ch.cap(0), 4.0, 1e-15);
  EXPECT_NEAR(ch.cap(1), 4.0, 1e-15);
  EXPECT_EQ(ch.permutation(), (std::vector<std::size_t>{0, 1}));
}

TEST(StandardizeMac, SortsAndRecordsPermutation) {
  RawMacChannel raw{v({1, 1, 1}), v({0.7, 0.1, 0.4}), 1.0, 1.0, v({1, 2, 3})};
  auto ch = standardize_mac(raw);
  EXPECT_EQ(ch.permutation(), (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_DOUBLE_EQ(ch.gain(0), 0.1);
  EXPECT_DOUBLE_EQ(ch.cap(2), 1.0);
}

TEST(StandardizeMac, ZeroMainGainIsRejected) {
  RawMacChannel raw{v({0, 1}), v({1, 1}), 1.0, 1.0, v({1, 1})};
  EXPECT_THROW(standardize_mac(raw), NonStandardizableChannel);
}

TEST(StandardizeMac, InvalidInputsNameTheField) {
  RawMacChannel raw{v({1, 1}), v({1}), 1.0, 1.0, v({1, 1})};
  try {
    standardize_mac(raw);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_EQ(e.field(), "tap_gains");
  }
  RawMacChannel neg{v({1}), v({1}), -1.0, 1.0, v({1})};
  EXPECT_THROW(standardize_mac(neg), InvalidInput);
}

// --- standardize_tw --------------------------------------------------------

TEST(StandardizeTw, Identity) {
  RawTwChannel raw{{1, 1}, {1, 1}, {1, 1}, 1.0, {4, 2}};
  auto ch = standardize_tw(raw);
  EXPECT_EQ(ch.eve_gains, (std::array<double, 2>{1, 1}));
  EXPECT_EQ(ch.self_gains, (std::array<double, 2>{1, 1}));
  EXPECT_EQ(ch.power_caps, (std::array<double, 2>{4, 2}));
  EXPECT_FALSE(ch.swapped);
}

TEST(StandardizeTw, HandEvaluatedTransformThenSorted) {
  RawTwChannel raw{{1, 2}, {1, 1}, {1, 2}, 1.0, {1, 1}};
  auto ch = standardize_tw(raw);
  // Caller order: h = (2, 0.5), alpha = (2, 0.25), P = (0.5, 2); stored sorted.
  EXPECT_TRUE(ch.swapped);
  EXPECT_NEAR(ch.eve_gains[0], 0.5, 1e-15);
  EXPECT_NEAR(ch.eve_gains[1], 2.0, 1e-15);
  EXPECT_NEAR(ch.self_gains[0], 0.25, 1e-15);
  EXPECT_NEAR(ch.self_gains[1], 2.0, 1e-15);
  EXPECT_NEAR(ch.power_caps[0], 2.0, 1e-15);
  EXPECT_NEAR(ch.power_caps[1], 0.5, 1e-15);
  auto orig = ch.to_original(ch.power_caps);
  EXPECT_NEAR(orig[0], 0.5, 1e-15);
}

TEST(StandardizeTw, ZeroMainGainIsRejected) {
  RawTwChannel raw{{1, 0}, {1, 1}, {1, 1}, 1.0, {1, 1}};
  EXPECT_THROW(standardize_tw(raw), NonStandardizableChannel);
}

// --- rate primitives -------------------------------------------------------

TEST(Rates, CapMain) {
  const auto p = v({4, 2});
  EXPECT_NEAR(cap_main(p, UserSet{0, 1}), ref::half_log2(7.0), 1e-14);
  EXPECT_NEAR(cap_main(p, UserSet{0, 1}), 1.40368, 1e-5);
  EXPECT_EQ(cap_main(p, UserSet{}), 0.0);
  EXPECT_EQ(cap_main(v({0, 0}), UserSet{0, 1}), 0.0);
}

TEST(Rates, CapEveAndTilde) {
  const auto h = v({0.1, 0.3});
  const auto p = v({4, 4});
  EXPECT_NEAR(cap_eve(p, h, UserSet{0, 1}), 0.689256, 1e-6);
  EXPECT_DOUBLE_EQ(cap_eve_tilde(p, h, UserSet{0, 1}), cap_eve(p, h, UserSet{0, 1}));
  // Reference: ½log₂(1 + 0.4/2.2).
  const double tilde = ref::half_log2(1.0 + 0.4 / 2.2);
  EXPECT_NEAR(cap_eve_tilde(p, h, UserSet{0}), tilde, 1e-14);
  EXPECT_NEAR(cap_eve_tilde(p, h, UserSet{0}), 0.120504, 1e-6);
  const auto zero = v({0, 0});
  for (auto s : nonempty_subsets(2)) {
    EXPECT_EQ(cap_eve(p, zero, s), 0.0);
    EXPECT_EQ(cap_eve_tilde(p, zero, s), 0.0);
  }
}

TEST(Rates, PhiAndPsi) {
  EXPECT_NEAR(phi(v({4, 0}), v({0.1, 0.3}), UserSet{0}), 0.28, 1e-15);
  EXPECT_EQ(phi(v({0, 0}), v({0.1, 0.3}), UserSet{0, 1}), 1.0);
  EXPECT_EQ(phi(v({3, 5}), v({1, 1}), UserSet{0, 1}), 1.0);
  EXPECT_EQ(phi(v({3, 5}), v({0.2, 0.4}), UserSet{}), 1.0);
  EXPECT_NEAR(psi(v({4, 2}), v({0.3, 0.7}), UserSet{0, 1}), 0.24, 1e-15);
  EXPECT_EQ(psi(v({0, 0}), v({0.3, 0.7}), UserSet{0, 1}), 1.0);
  EXPECT_NEAR(psi(v({0, 2}), v({0, 4.2}), UserSet{1}), 9.4 / 3.0, 1e-15);
  EXPECT_EQ(psi(v({4, 2}), v({0.3, 0.7}), UserSet{}), 1.0);
}

TEST(Rates, IsDegraded) {
  EXPECT_TRUE(is_degraded(StdMacChannel::from_gains(v({0.4, 0.4}), v({1, 1}), TieMode::keep)));
  EXPECT_TRUE(is_degraded(StdMacChannel::from_gains(v({0.4, 0.4}), v({1, 1}))));
  EXPECT_FALSE(is_degraded(StdMacChannel::from_gains(v({0.4, 0.5}), v({1, 1}))));
  EXPECT_FALSE(is_degraded(StdMacChannel::from_gains(v({1.2, 1.2}), v({1, 1}), TieMode::keep)));
}

TEST(Rates, TieToleranceIsRelative) {
  auto ch = StdMacChannel::from_gains(v({0.5, 0.5 * (1 + 1e-10), 0.6}), v({1, 2, 3}));
  EXPECT_EQ(ch.k_users(), 2u);
  EXPECT_DOUBLE_EQ(ch.cap(0), 3.0);
}

// --- properties ------------------------------------------------------------

TEST(ChannelProperties, StandardizationInvariantToCommonScaling) {
  ref::Rng rng(11, "scaling");
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 2 + rng.integer(0, 2);
    RawMacChannel raw{rng.uniforms(k, 0.1, 3), rng.uniforms(k, 0, 3), rng.uniform(0.1, 2), rng.uniform(0.1, 2),
                      rng.uniforms(k, 0, 5)};
    const double c = rng.uniform(0.1, 10);
    RawMacChannel scaled = raw;
    scaled.main_noise *= c;
    for (auto& g : scaled.main_gains) g *= c;
    auto a = standardize_mac(raw);
    auto b = standardize_mac(scaled);
    ASSERT_EQ(a.k_users(), b.k_users());
    for (std::size_t j = 0; j < a.k_users(); ++j) EXPECT_NEAR(a.gain(j), b.gain(j), 1e-12 * (1 + a.gain(j)));
    EXPECT_NEAR(phi(a.power_caps(), a.eve_gains(), a.users()), phi(b.power_caps(), b.eve_gains(), b.users()), 1e-12);
  }
}

TEST(ChannelProperties, MonotonicityAndTildeBound) {
  ref::Rng rng(12, "monotone");
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = 3;
    auto h = rng.uniforms(k, 0, 2);
    auto p = rng.uniforms(k, 0, 5);
    const std::size_t j = rng.integer(0, 2);
    auto q = p;
    q[j] += rng.uniform(0, 3);
    for (auto s : nonempty_subsets(k)) {
      EXPECT_LE(cap_main(p, s), cap_main(q, s) + 1e-15);
      EXPECT_LE(cap_eve(p, h, s), cap_eve(q, h, s) + 1e-15);
      if (s.contains(j))
        EXPECT_LE(cap_eve_tilde(p, h, s), cap_eve_tilde(q, h, s) + 1e-15);
      else
        EXPECT_GE(cap_eve_tilde(p, h, s), cap_eve_tilde(q, h, s) - 1e-15);

      const double tilde = cap_eve_tilde(p, h, s), full = cap_eve(p, h, s);
      EXPECT_LE(tilde, full + 1e-15);
      if (weighted_sum(p, h, s.complement(k)) > 1e-9) { EXPECT_LT(tilde, full); }
    }
  }
}

TEST(ChannelProperties, PhiStaysBetweenGainsAndOne) {
  ref::Rng rng(13, "phi-bounds");
  for (int i = 0; i < 500; ++i) {
    auto h = rng.uniforms(3, 0, 2);
    auto p = rng.uniforms(3, 0, 10);
    for (auto s : nonempty_subsets(3)) {
      double lo = 1.0, hi = 1.0;
      s.for_each([&](std::size_t k) {
        lo = std::min(lo, h[k]);
        hi = std::max(hi, h[k]);
      });
      const double f = phi(p, h, s);
      EXPECT_GE(f, lo - 1e-15);
      EXPECT_LE(f, hi + 1e-15);
    }
  }
}
