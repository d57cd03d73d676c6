// Prints the two-user secrecy region for a multiple-access wiretap channel,
// first from superposition at full power, then hulled with TDMA points.

#include <cstdio>

#include "secrecy/secrecy.hpp"

using namespace secrecy;

static void print(const char* title, const SecrecyRegion& r) {
  std::printf("%s\n", title);
  for (const auto& v : *r.vertices2d) std::printf("  %.6f  %.6f\n", v.x, v.y);
}

int main() {
  const auto ch = StdMacChannel::from_gains({0.1, 0.3}, {4, 4});

  print("superposition, both users at cap:", mac_sup_region(ch, PowerAllocation{{4, 4}}));
  print("hull of superposition and TDMA:", mac_hull_region(ch, 33, 33));

  const auto best = mac_best_sum_rate(ch);
  std::printf("best sum rate %.6f bits via %s\n", best.sum_rate, to_string(best.mode));
  return 0;
}
