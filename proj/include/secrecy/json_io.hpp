#pragma once

// JSON (de)serialization for channels, regions, solutions and sweeps. Every
// float is rounded to 12 significant digits so output is byte-stable.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "secrecy/jamming.hpp"
#include "secrecy/power_allocation.hpp"
#include "secrecy/regions.hpp"
#include "secrecy/sweep.hpp"

namespace secrecy {

using Json = nlohmann::ordered_json;

inline constexpr const char* kLibraryVersion = "1.0.0";

inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // drop the sign of -0
}

inline std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", round12(v));
  return buf;
}

inline Json num(double v) { return Json(round12(v)); }

template <typename Range>
Json num_array(const Range& r) {
  Json a = Json::array();
  for (double v : r) a.push_back(num(v));
  return a;
}

inline Json labels(UserSet s) { return Json(s.labels()); }

// ---------------------------------------------------------------------------
// Channels

using ChannelDoc = std::variant<RawMacChannel, StdMacChannel, RawTwChannel, StdTwChannel>;

namespace json_detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(key, "missing field");
  return j.at(key);
}

inline double number(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number()) throw InvalidInput(key, "expected a number");
  return v.get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

inline std::vector<double> numbers(const Json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_array()) throw InvalidInput(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw InvalidInput(key, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline std::array<double, 2> pair(const Json& j, const char* key) {
  auto v = numbers(j, key);
  detail::require_size(v.size(), 2, key);
  return {v[0], v[1]};
}

inline std::string text(const Json& j, const char* key, const std::string& fallback = "") {
  if (!j.contains(key)) {
    if (fallback.empty()) throw InvalidInput(key, "missing field");
    return fallback;
  }
  if (!j.at(key).is_string()) throw InvalidInput(key, "expected a string");
  return j.at(key).get<std::string>();
}

}  // namespace json_detail

inline Json to_json(const RawMacChannel& c) {
  return Json{{"model", "mac"},
              {"form", "raw"},
              {"main_gains", num_array(c.main_gains)},
              {"tap_gains", num_array(c.tap_gains)},
              {"main_noise", num(c.main_noise)},
              {"tap_noise", num(c.tap_noise)},
              {"power_caps", num_array(c.power_caps)}};
}

inline Json to_json(const StdMacChannel& c) {
  Json perm = Json::array();
  for (const auto& g : c.groups()) {
    Json members = Json::array();
    for (auto k : g) members.push_back(k + 1);
    perm.push_back(members);
  }
  return Json{{"model", "mac"},
              {"form", "standard"},
              {"eve_gains", num_array(c.eve_gains())},
              {"power_caps", num_array(c.power_caps())},
              {"permutation", perm}};
}

inline Json to_json(const RawTwChannel& c) {
  return Json{{"model", "tw"},
              {"form", "raw"},
              {"main_gains", num_array(c.main_gains)},
              {"tap_gains", num_array(c.tap_gains)},
              {"receiver_noises", num_array(c.receiver_noises)},
              {"tap_noise", num(c.tap_noise)},
              {"power_caps", num_array(c.power_caps)}};
}

inline Json to_json(const StdTwChannel& c) {
  const std::array<int, 2> perm = c.swapped ? std::array<int, 2>{2, 1} : std::array<int, 2>{1, 2};
  return Json{{"model", "tw"},
              {"form", "standard"},
              {"eve_gains", num_array(c.eve_gains)},
              {"self_gains", num_array(c.self_gains)},
              {"power_caps", num_array(c.power_caps)},
              {"permutation", perm}};
}

inline Json to_json(const ChannelDoc& c) {
  return std::visit([](const auto& x) { return to_json(x); }, c);
}

/// Accepts a channel document, or any document carrying one under "channel".
inline ChannelDoc channel_from_json(const Json& doc) {
  using namespace json_detail;
  if (!doc.is_object()) throw InvalidInput("channel", "expected a JSON object");
  const Json& j = doc.contains("channel") ? doc.at("channel") : doc;
  if (!j.is_object()) throw InvalidInput("channel", "expected a JSON object");
  const auto model = text(j, "model");
  const auto form = text(j, "form");
  if (model != "mac" && model != "tw") throw InvalidInput("model", "expected \"mac\" or \"tw\"");
  if (form != "raw" && form != "standard") throw InvalidInput("form", "expected \"raw\" or \"standard\"");

  if (model == "mac") {
    if (form == "raw") {
      RawMacChannel c;
      c.main_gains = numbers(j, "main_gains");
      c.tap_gains = numbers(j, "tap_gains");
      c.main_noise = number_or(j, "main_noise", 1.0);
      c.tap_noise = number_or(j, "tap_noise", 1.0);
      c.power_caps = numbers(j, "power_caps");
      c.validate();
      return c;
    }
    auto gains = numbers(j, "eve_gains");
    auto caps = numbers(j, "power_caps");
    detail::require_size(caps.size(), gains.size(), "power_caps");
    // Emitted documents list users sorted, with the original labels under
    // "permutation"; restore that order when every group is a single user.
    if (j.contains("permutation")) {
      const auto& p = j.at("permutation");
      if (!p.is_array() || p.size() != gains.size()) throw InvalidInput("permutation", "one entry per user expected");
      std::vector<double> g2(gains.size()), c2(gains.size());
      std::vector<bool> seen(gains.size(), false);
      bool singletons = true;
      for (std::size_t i = 0; i < p.size() && singletons; ++i) {
        const auto& e = p[i];
        if (!e.is_array() || e.size() != 1 || !e[0].is_number_integer()) {
          singletons = false;
          break;
        }
        const auto label = e[0].get<long>();
        if (label < 1 || std::size_t(label) > gains.size() || seen[label - 1])
          throw InvalidInput("permutation", "labels must be a permutation of 1..K");
        seen[label - 1] = true;
        g2[label - 1] = gains[i];
        c2[label - 1] = caps[i];
      }
      if (singletons) {
        gains = std::move(g2);
        caps = std::move(c2);
      }
    }
    return StdMacChannel::from_gains(std::move(gains), std::move(caps));
  }
  if (form == "raw") {
    RawTwChannel c;
    c.main_gains = pair(j, "main_gains");
    c.tap_gains = pair(j, "tap_gains");
    c.receiver_noises = j.contains("receiver_noises") ? pair(j, "receiver_noises") : std::array<double, 2>{1.0, 1.0};
    c.tap_noise = number_or(j, "tap_noise", 1.0);
    c.power_caps = pair(j, "power_caps");
    c.validate();
    return c;
  }
  // A standardized document lists terminals in ascending-gain order; its
  // permutation says which caller terminal sits in each slot.
  auto ch = StdTwChannel::from_gains(pair(j, "eve_gains"), pair(j, "power_caps"),
                                     j.contains("self_gains") ? pair(j, "self_gains") : std::array<double, 2>{1.0, 1.0});
  if (j.contains("permutation")) {
    const auto& p = j.at("permutation");
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer())
      throw InvalidInput("permutation", "expected [1,2] or [2,1]");
    if (p[0].get<int>() == 2) ch.swapped = !ch.swapped;
  }
  return ch;
}

inline Json parse_json_text(const std::string& text, const char* field) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(field, std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Regions and solutions

inline Json to_json(const SecrecyRegion& r) {
  Json cs = Json::array();
  for (const auto& c : r.constraints)
    cs.push_back(
        Json{{"subset", labels(c.subset)}, {"kind", to_string(c.kind)}, {"bound_bits", num(c.bound)}, {"clamped", c.clamped}});
  Json out{{"provenance", to_string(r.provenance)}, {"k_users", r.k_users}, {"constraints", cs}};
  if (r.vertices2d) {
    Json vs = Json::array();
    for (const auto& p : *r.vertices2d) vs.push_back(Json::array({num(p.x), num(p.y)}));
    out["vertices_bits"] = vs;
  }
  if (r.sampling)
    out["sampling"] = Json{{"power_grid_resolution", r.sampling->power_grid_resolution},
                           {"share_grid_resolution", r.sampling->share_grid_resolution}};
  return out;
}

inline std::string vertices_csv(const SecrecyRegion& r) {
  std::string out = "rs1,rs2\n";
  if (r.vertices2d)
    for (const auto& p : *r.vertices2d) out += fmt12(p.x) + "," + fmt12(p.y) + "\n";
  return out;
}

inline Json to_json(const SumRateSolution& s) {
  Json out{{"mode", to_string(s.mode)},
           {"powers", num_array(s.allocation.powers)},
           {"shares", s.shares ? num_array(s.shares->alpha) : Json(nullptr)},
           {"transmit_set", labels(s.transmit_set)},
           {"sum_rate_bits", num(s.sum_rate)}};
  if (s.mode == SumRateMode::SUP) out["limiting_user"] = s.limiting_user;
  return out;
}

inline Json to_json(const JammingSolution& s) {
  return Json{{"transmit_set", labels(s.transmit_set)},
              {"jam_set", labels(s.jam_set)},
              {"silent_set", labels(s.silent_set)},
              {"powers", num_array(s.allocation.powers)},
              {"sum_rate_bits", num(s.sum_rate)},
              {"branch", s.branch},
              {"diagnostics",
               Json{{"pivot_user", s.pivot_user ? Json(*s.pivot_user + 1) : Json(nullptr)},
                    {"quad_coeffs", num_array(s.quad_coeffs)},
                    {"discriminant", num(s.discriminant)},
                    {"pivot_root", s.pivot_root ? num(*s.pivot_root) : Json(nullptr)},
                    {"pivot_power", num(s.pivot_power)},
                    {"active_case", to_string(s.active_case)}}}};
}

// ---------------------------------------------------------------------------
// Scenes and sweeps

inline Json to_json(const Scene& s) {
  Json tx = Json::array();
  for (const auto& t : s.transmitters) tx.push_back(Json::array({num(t.x), num(t.y)}));
  return Json{{"transmitters", tx},
              {"receiver", s.receiver ? Json::array({num(s.receiver->x), num(s.receiver->y)}) : Json(nullptr)},
              {"path_loss_exponent", num(s.path_loss_exponent)},
              {"reference_gain", num(s.reference_gain)},
              {"distance_floor", num(s.distance_floor)},
              {"raw_power_caps", num_array(s.raw_power_caps)},
              {"main_noise", num(s.main_noise)},
              {"receiver_noises", num_array(s.receiver_noises)},
              {"tap_noise", num(s.tap_noise)}};
}

inline Json to_json(const SweepBounds& b) {
  return Json{{"x_min", num(b.x_min)}, {"x_max", num(b.x_max)}, {"y_min", num(b.y_min)}, {"y_max", num(b.y_max)}};
}

struct SceneFile {
  Scene scene;
  SweepBounds bounds;
};

/// Missing keys keep their defaults.
inline SceneFile scene_from_json(const Json& j) {
  using namespace json_detail;
  if (!j.is_object()) throw InvalidInput("scene", "expected a JSON object");
  SceneFile f;
  auto point = [](const Json& v, const char* key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw InvalidInput(key, "expected [x, y]");
    return Point2{v[0].get<double>(), v[1].get<double>()};
  };
  if (j.contains("transmitters")) {
    const auto& t = j.at("transmitters");
    if (!t.is_array() || t.size() != 2) throw InvalidInput("transmitters", "expected two [x, y] positions");
    f.scene.transmitters = {point(t[0], "transmitters"), point(t[1], "transmitters")};
  }
  if (j.contains("receiver")) {
    if (j.at("receiver").is_null())
      f.scene.receiver.reset();
    else
      f.scene.receiver = point(j.at("receiver"), "receiver");
  }
  f.scene.path_loss_exponent = number_or(j, "path_loss_exponent", f.scene.path_loss_exponent);
  f.scene.reference_gain = number_or(j, "reference_gain", f.scene.reference_gain);
  f.scene.distance_floor = number_or(j, "distance_floor", f.scene.distance_floor);
  if (j.contains("raw_power_caps")) f.scene.raw_power_caps = pair(j, "raw_power_caps");
  f.scene.main_noise = number_or(j, "main_noise", f.scene.main_noise);
  if (j.contains("receiver_noises")) f.scene.receiver_noises = pair(j, "receiver_noises");
  f.scene.tap_noise = number_or(j, "tap_noise", f.scene.tap_noise);
  if (j.contains("bounds")) {
    const auto& b = j.at("bounds");
    f.bounds.x_min = number_or(b, "x_min", f.bounds.x_min);
    f.bounds.x_max = number_or(b, "x_max", f.bounds.x_max);
    f.bounds.y_min = number_or(b, "y_min", f.bounds.y_min);
    f.bounds.y_max = number_or(b, "y_max", f.bounds.y_max);
  }
  return f;
}

inline Json sweep_metadata(const SweepResult& r) {
  return Json{{"mode", to_string(r.mode)},
              {"resolution", r.resolution},
              {"bounds", to_json(r.bounds)},
              {"scene", to_json(r.scene)},
              {"power_units", "raw"},
              {"library_version", kLibraryVersion}};
}

inline std::string sweep_csv(const SweepResult& r) {
  std::string out = "x,y,p1_tx,p2_tx,p1_jam,p2_jam,sum_rate_bits,branch\n";
  for (const auto& c : r.cells) {
    out += fmt12(c.eve.x) + "," + fmt12(c.eve.y) + "," + fmt12(c.tx_power[0]) + "," + fmt12(c.tx_power[1]) + "," +
           fmt12(c.jam_power[0]) + "," + fmt12(c.jam_power[1]) + "," + fmt12(c.sum_rate) + "," + c.branch + "\n";
  }
  return out;
}

inline Json to_json(const SweepResult& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json cell{{"x", num(c.eve.x)},
              {"y", num(c.eve.y)},
              {"tx_power", num_array(c.tx_power)},
              {"jam_power", num_array(c.jam_power)},
              {"sum_rate_bits", num(c.sum_rate)},
              {"branch", c.branch}};
    if (c.error) {
      cell["error"] = true;
      cell["error_message"] = c.error_message;
    }
    cells.push_back(std::move(cell));
  }
  Json out = sweep_metadata(r);
  out["cells"] = std::move(cells);
  return out;
}

}  // namespace secrecy
