#pragma once

// Eavesdropper-position sweeps over a path-loss geometry.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "secrecy/channel.hpp"
#include "secrecy/geometry.hpp"
#include "secrecy/jamming.hpp"
#include "secrecy/parallel.hpp"

namespace secrecy {

enum class SweepMode { mac_cj, tw_cj };

inline const char* to_string(SweepMode m) { return m == SweepMode::mac_cj ? "mac_cj" : "tw_cj"; }

/// Two transmitters and, for the multiple-access case, one receiver. In the
/// two-way case the transmitters receive from each other.
struct Scene {
  std::array<Point2, 2> transmitters{Point2{-10.0, 0.0}, Point2{10.0, 0.0}};
  std::optional<Point2> receiver = Point2{0.0, 0.0};
  double path_loss_exponent = 2.0;
  double reference_gain = 1.0;
  double distance_floor = 1e-3;
  std::array<double, 2> raw_power_caps{10.0, 10.0};
  double main_noise = 0.01;
  std::array<double, 2> receiver_noises{0.01, 0.01};
  double tap_noise = 0.01;

  void validate(SweepMode mode) const {
    if (!(path_loss_exponent > 0.0) || !std::isfinite(path_loss_exponent))
      throw InvalidInput("path_loss_exponent", "must be finite and > 0");
    if (!(distance_floor > 0.0) || !std::isfinite(distance_floor))
      throw InvalidInput("distance_floor", "must be finite and > 0");
    if (!(reference_gain >= 0.0) || !std::isfinite(reference_gain))
      throw InvalidInput("reference_gain", "must be finite and >= 0");
    for (const auto& t : transmitters)
      if (!std::isfinite(t.x) || !std::isfinite(t.y)) throw InvalidInput("transmitters", "positions must be finite");
    if (mode == SweepMode::mac_cj) {
      if (!receiver) throw InvalidInput("receiver", "the multiple-access sweep needs a receiver position");
      if (!std::isfinite(receiver->x) || !std::isfinite(receiver->y))
        throw InvalidInput("receiver", "position must be finite");
    }
    detail::require_finite_nonneg(raw_power_caps, "raw_power_caps");
    detail::require_positive(main_noise, "main_noise");
    detail::require_positive(tap_noise, "tap_noise");
    for (double s : receiver_noises) detail::require_positive(s, "receiver_noises");
  }
};

inline double path_gain(const Scene& scene, const Point2& a, const Point2& b) {
  const double d = std::max(std::hypot(a.x - b.x, a.y - b.y), scene.distance_floor);
  return scene.reference_gain * std::pow(d, -scene.path_loss_exponent);
}

inline RawMacChannel mac_channel_at(const Scene& scene, const Point2& eve) {
  if (!scene.receiver) throw InvalidInput("receiver", "the multiple-access channel needs a receiver position");
  RawMacChannel raw;
  for (const auto& t : scene.transmitters) {
    raw.main_gains.push_back(path_gain(scene, t, *scene.receiver));
    raw.tap_gains.push_back(path_gain(scene, t, eve));
  }
  raw.main_noise = scene.main_noise;
  raw.tap_noise = scene.tap_noise;
  raw.power_caps.assign(scene.raw_power_caps.begin(), scene.raw_power_caps.end());
  return raw;
}

inline RawTwChannel tw_channel_at(const Scene& scene, const Point2& eve) {
  RawTwChannel raw;
  const double link = path_gain(scene, scene.transmitters[0], scene.transmitters[1]);
  raw.main_gains = {link, link};
  raw.tap_gains = {path_gain(scene, scene.transmitters[0], eve), path_gain(scene, scene.transmitters[1], eve)};
  raw.receiver_noises = scene.receiver_noises;
  raw.tap_noise = scene.tap_noise;
  raw.power_caps = scene.raw_power_caps;
  return raw;
}

struct SweepBounds {
  double x_min = -31.0, x_max = 32.0;
  double y_min = -31.0, y_max = 32.0;
};

struct SweepCell {
  Point2 eve;
  std::array<double, 2> tx_power{0.0, 0.0};   // raw power units
  std::array<double, 2> jam_power{0.0, 0.0};  // raw power units
  double sum_rate = 0.0;
  std::string branch;
  bool error = false;
  std::string error_message;
};

struct SweepResult {
  Scene scene;
  SweepBounds bounds;
  std::size_t resolution = 0;
  SweepMode mode = SweepMode::mac_cj;
  std::vector<double> xs, ys;
  std::vector<SweepCell> cells;  // row-major, x fastest

  const SweepCell& at(std::size_t ix, std::size_t iy) const { return cells[iy * resolution + ix]; }
};

/// Cell centres, placed symmetrically about the interval midpoint so that a
/// reflected grid is bit-identical.
inline std::vector<double> cell_positions(double lo, double hi, std::size_t n) {
  const double centre = 0.5 * (lo + hi);
  const double step = (hi - lo) / double(n - 1);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = centre + step * (double(i) - 0.5 * double(n - 1));
  return v;
}

namespace detail {

inline SweepCell mac_cell(const Scene& scene, const Point2& eve) {
  SweepCell cell;
  cell.eve = eve;
  const auto raw = mac_channel_at(scene, eve);
  const auto ch = standardize_mac(raw);
  const auto sol = mac_cj_optimal(ch);
  const auto std_powers = ch.split_back(sol.allocation);
  for (std::size_t g = 0; g < ch.k_users(); ++g) {
    const bool tx = sol.transmit_set.contains(g);
    const bool jam = sol.jam_set.contains(g);
    for (auto k : ch.groups()[g]) {
      const double p = std::min(raw.power_caps[k], std_powers[k] * raw.main_noise / raw.main_gains[k]);
      if (tx) cell.tx_power[k] = p;
      if (jam) cell.jam_power[k] = p;
    }
  }
  cell.sum_rate = sol.sum_rate;
  cell.branch = sol.branch;
  return cell;
}

inline SweepCell tw_cell(const Scene& scene, const Point2& eve) {
  SweepCell cell;
  cell.eve = eve;
  const auto raw = tw_channel_at(scene, eve);
  const auto ch = standardize_tw(raw);
  const auto sol = tw_cj_optimal(ch);
  // Undo the ordering, then the power scaling of each terminal.
  const auto p = ch.to_original({sol.allocation[0], sol.allocation[1]});
  std::array<bool, 2> tx{sol.transmit_set.contains(0), sol.transmit_set.contains(1)};
  std::array<bool, 2> jam{sol.jam_set.contains(0), sol.jam_set.contains(1)};
  if (ch.swapped) {
    std::swap(tx[0], tx[1]);
    std::swap(jam[0], jam[1]);
  }
  const std::array<double, 2> scale{raw.receiver_noises[1] / raw.main_gains[0],
                                    raw.receiver_noises[0] / raw.main_gains[1]};
  for (std::size_t k = 0; k < 2; ++k) {
    const double rp = std::min(raw.power_caps[k], p[k] * scale[k]);
    if (tx[k]) cell.tx_power[k] = rp;
    if (jam[k]) cell.jam_power[k] = rp;
  }
  cell.sum_rate = sol.sum_rate;
  cell.branch = sol.branch;
  return cell;
}

}  // namespace detail

/// Runs the jamming optimizer for every eavesdropper cell. Cells whose
/// channel cannot be standardized come back with zero rate and an error flag.
inline SweepResult sweep(const Scene& scene, const SweepBounds& bounds, std::size_t resolution, SweepMode mode) {
  if (resolution < 2) throw InvalidInput("resolution", "must be at least 2");
  if (!(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min))
    throw InvalidInput("bounds", "each maximum must exceed its minimum");
  scene.validate(mode);

  SweepResult out;
  out.scene = scene;
  out.bounds = bounds;
  out.resolution = resolution;
  out.mode = mode;
  out.xs = cell_positions(bounds.x_min, bounds.x_max, resolution);
  out.ys = cell_positions(bounds.y_min, bounds.y_max, resolution);
  out.cells.resize(resolution * resolution);

  parallel_for(out.cells.size(), [&](std::size_t i) {
    const Point2 eve{out.xs[i % resolution], out.ys[i / resolution]};
    try {
      out.cells[i] = mode == SweepMode::mac_cj ? detail::mac_cell(scene, eve) : detail::tw_cell(scene, eve);
    } catch (const InvalidInput& e) {
      SweepCell c;
      c.eve = eve;
      c.error = true;
      c.error_message = e.what();
      c.branch = "error";
      out.cells[i] = c;
    }
  });
  return out;
}

}  // namespace secrecy
