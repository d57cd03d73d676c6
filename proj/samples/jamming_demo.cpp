// Cooperative jamming versus plain transmission as the second user's
// eavesdropper gain grows. Role labels follow the standardized (ascending
// gain) order.

#include <cstdio>

#include "secrecy/secrecy.hpp"

using namespace secrecy;

int main() {
  std::printf("%6s %10s %10s  %s\n", "h2", "no jam", "jamming", "roles");
  for (double h2 = 0.2; h2 <= 3.01; h2 += 0.2) {
    const auto ch = StdMacChannel::from_gains({0.5, h2}, {2, 2});
    const auto plain = mac_sup_optimal(ch);
    const auto cj = mac_cj_optimal(ch);
    std::printf("%6.2f %10.6f %10.6f  T=%s J=%s\n", h2, plain.sum_rate, cj.sum_rate, cj.transmit_set.to_string().c_str(),
                cj.jam_set.to_string().c_str());
  }

  // Two-way: the terminal the eavesdropper hears best jams for the other.
  const auto tw = StdTwChannel::from_gains({0.5, 4.2}, {2, 2});
  const auto s = tw_cj_optimal(tw);
  std::printf("two-way h=(0.5,4.2): %.6f bits, branch %s\n", s.sum_rate, s.branch.c_str());
  return 0;
}
