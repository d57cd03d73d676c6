// ASCII map of the jamming-aided MAC sum rate as the eavesdropper moves.
// '.' is zero, digits 0-9 scale to the largest rate, T marks transmitters,
// R the receiver.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "secrecy/secrecy.hpp"

using namespace secrecy;

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 32;
  const Scene scene;
  const auto map = sweep(scene, SweepBounds{}, n, SweepMode::mac_cj);

  double top = 0.0;
  for (const auto& c : map.cells) top = std::max(top, c.sum_rate);

  auto near = [&](Point2 a, Point2 b) {
    return std::abs(a.x - b.x) <= (map.xs[1] - map.xs[0]) / 2 && std::abs(a.y - b.y) <= (map.ys[1] - map.ys[0]) / 2;
  };
  for (std::size_t iy = n; iy-- > 0;) {
    for (std::size_t ix = 0; ix < n; ++ix) {
      const auto& c = map.at(ix, iy);
      char ch = c.sum_rate <= 0.0 ? '.' : char('0' + std::min(9, int(9.999 * c.sum_rate / top)));
      if (near(c.eve, scene.transmitters[0]) || near(c.eve, scene.transmitters[1])) ch = 'T';
      if (scene.receiver && near(c.eve, *scene.receiver)) ch = 'R';
      std::putchar(ch);
    }
    std::putchar('\n');
  }
  std::printf("max %.4f bits\n", top);
  return 0;
}
