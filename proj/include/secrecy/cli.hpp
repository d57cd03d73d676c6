#pragma once

// Command-line front end. `run_cli` never touches the process streams, so
// tests can drive it directly; tools/secrecy_rates.cpp is a thin wrapper.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secrecy/json_io.hpp"
#include "secrecy/oracle.hpp"

namespace secrecy {

struct CliOutcome {
  int exit_code = 0;
  std::string out;
  std::string err;
};

enum class Command { region, sumrate, jam, sweep, verify };

struct RunConfig {
  Command command = Command::sumrate;
  std::string model = "mac";
  std::string caps, eve_gains, main_gains, noises;
  std::string channel;
  std::string scene;
  std::string out;
  std::string format = "json";
  bool verify = false;
  std::size_t grid = 0;  // 0 selects the per-command default
};

namespace cli_detail {

inline constexpr double kVerifyTol = 1e-6;

inline std::vector<double> parse_list(const std::string& text, const char* field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const char* begin = item.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == begin || (end && *end != '\0')) throw InvalidInput(field, "cannot parse '" + item + "' as a number");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput(field, "expected a comma-separated list of numbers");
  return out;
}

inline std::string read_file(const std::string& path, const char* field) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(field, "cannot open file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool looks_inline(const std::string& s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

inline std::array<double, 2> two(const std::vector<double>& v, const char* field) {
  detail::require_size(v.size(), 2, field);
  return {v[0], v[1]};
}

inline ChannelDoc channel_from_flags(const RunConfig& cfg) {
  if (!cfg.channel.empty()) {
    const auto text = looks_inline(cfg.channel) ? cfg.channel : read_file(cfg.channel, "channel");
    return channel_from_json(parse_json_text(text, "channel"));
  }
  if (cfg.model != "mac" && cfg.model != "tw") throw InvalidInput("model", "expected mac or tw");
  if (cfg.caps.empty()) throw InvalidInput("caps", "required unless --channel is given");
  if (cfg.eve_gains.empty()) throw InvalidInput("eve-gains", "required unless --channel is given");
  const auto caps = parse_list(cfg.caps, "caps");
  const auto eve = parse_list(cfg.eve_gains, "eve-gains");
  const bool raw = !cfg.main_gains.empty();
  const auto noises = cfg.noises.empty() ? std::vector<double>{} : parse_list(cfg.noises, "noises");
  if (!noises.empty() && !raw) throw InvalidInput("noises", "only meaningful together with --main-gains");

  if (cfg.model == "mac") {
    if (!raw) return StdMacChannel::from_gains(eve, caps);
    RawMacChannel c;
    c.main_gains = parse_list(cfg.main_gains, "main-gains");
    c.tap_gains = eve;
    c.power_caps = caps;
    if (!noises.empty()) {
      detail::require_size(noises.size(), 2, "noises");
      c.main_noise = noises[0];
      c.tap_noise = noises[1];
    }
    c.validate();
    return c;
  }
  if (!raw) return StdTwChannel::from_gains(two(eve, "eve-gains"), two(caps, "caps"));
  RawTwChannel c;
  c.main_gains = two(parse_list(cfg.main_gains, "main-gains"), "main-gains");
  c.tap_gains = two(eve, "eve-gains");
  c.power_caps = two(caps, "caps");
  if (!noises.empty()) {
    detail::require_size(noises.size(), 3, "noises");
    c.receiver_noises = {noises[0], noises[1]};
    c.tap_noise = noises[2];
  }
  c.validate();
  return c;
}

struct MacInput {
  StdMacChannel ch;
  std::optional<RawMacChannel> raw;
};

struct TwInput {
  StdTwChannel ch;
  std::optional<RawTwChannel> raw;
};

inline Json user_order(const StdMacChannel& ch) {
  Json out = Json::array();
  for (const auto& g : ch.groups()) {
    Json m = Json::array();
    for (auto k : g) m.push_back(k + 1);
    out.push_back(m);
  }
  return out;
}

inline Json user_order(const StdTwChannel& ch) {
  return ch.swapped ? Json::array({Json::array({2}), Json::array({1})}) : Json::array({Json::array({1}), Json::array({2})});
}

/// Powers in the caller's user order and units.
inline Json original_powers(const MacInput& in, std::span<const double> std_powers) {
  auto p = in.ch.split_back(std_powers);
  if (in.raw)
    for (std::size_t k = 0; k < p.size(); ++k)
      p[k] = std::min(in.raw->power_caps[k], p[k] * in.raw->main_noise / in.raw->main_gains[k]);
  return num_array(p);
}

inline Json original_powers(const TwInput& in, std::span<const double> std_powers) {
  auto p = in.ch.to_original({std_powers[0], std_powers[1]});
  if (in.raw) {
    p[0] = std::min(in.raw->power_caps[0], p[0] * in.raw->receiver_noises[1] / in.raw->main_gains[0]);
    p[1] = std::min(in.raw->power_caps[1], p[1] * in.raw->receiver_noises[0] / in.raw->main_gains[1]);
  }
  return num_array(p);
}

inline Json header(const char* command, const ChannelDoc& doc, const Json& standard, const Json& order) {
  return Json{{"command", command},
              {"model", std::holds_alternative<RawMacChannel>(doc) || std::holds_alternative<StdMacChannel>(doc) ? "mac" : "tw"},
              {"channel", to_json(doc)},
              {"standard_channel", standard},
              {"user_order", order},
              {"units", "standard"}};
}

inline Json check(const char* name, double optimum, double oracle, bool allocation_match, std::size_t points) {
  const double diff = optimum - oracle;
  return Json{{"check", name},
              {"points_per_axis", points},
              {"optimizer_bits", num(optimum)},
              {"oracle_bits", num(oracle)},
              {"difference_bits", num(diff)},
              {"allocation_match", allocation_match},
              {"pass", std::abs(diff) <= kVerifyTol}};
}

inline bool same_powers(const PowerAllocation& a, const PowerAllocation& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > 1e-9 * (1.0 + std::abs(a[k]))) return false;
  return true;
}

// -- command bodies ---------------------------------------------------------

inline Json mac_region(const MacInput& in, const RunConfig& cfg, std::string& csv) {
  const auto& ch = in.ch;
  const PowerAllocation caps{{ch.power_caps().begin(), ch.power_caps().end()}};
  Json out;
  if (ch.k_users() > 2) {
    if (cfg.format == "csv") throw UnsupportedUserCount("k_users", "vertex output needs at most 2 users");
    out["region"] = to_json(mac_sup_region(ch, caps));
    return out;
  }
  const std::size_t n = cfg.grid ? cfg.grid : 33;
  const auto hull = mac_hull_region(ch, n, n);
  csv = vertices_csv(hull);
  out["region"] = to_json(hull);
  out["sup_at_caps"] = to_json(mac_sup_region(ch, caps));
  out["tdma_optimal_shares"] = to_json(mac_tdma_region(ch, *mac_tdma_optimal(ch).shares));
  return out;
}

inline Json tw_region_cmd(const TwInput& in, const RunConfig& cfg, std::string& csv) {
  const std::size_t n = cfg.grid ? cfg.grid : 33;
  const auto hull = tw_hull_region(in.ch, n);
  csv = vertices_csv(hull);
  Json out;
  out["region"] = to_json(hull);
  out["tw_at_caps"] = to_json(tw_region(in.ch, PowerAllocation{{in.ch.power_caps[0], in.ch.power_caps[1]}}));
  return out;
}

inline GridSpec verify_grid(const RunConfig& cfg) {
  GridSpec g;
  if (cfg.grid) g.points_per_axis = cfg.grid;
  return g;
}

inline Json mac_sumrate(const MacInput& in, const RunConfig& cfg) {
  const auto sup = mac_sup_optimal(in.ch);
  const auto tdma = mac_tdma_optimal(in.ch);
  const auto best = mac_best_sum_rate(in.ch);
  Json out;
  out["solution"] = to_json(best);
  out["solution"]["original_powers"] = original_powers(in, best.allocation);
  out["candidates"] = Json{{"SUP", to_json(sup)}, {"TDMA", to_json(tdma)}};
  if (cfg.verify) {
    const auto g = verify_grid(cfg);
    const auto o = grid_max_mac_sup(in.ch, g);
    Json checks = Json::array({check("sup_vs_grid", sup.sum_rate, o.sum_rate, sup.allocation == o.allocation, g.points_per_axis)});
    if (in.ch.k_users() == 2) {
      const auto scan = tdma_scan_two_user(in.ch);
      const bool match = std::abs(tdma.shares->alpha[0] - scan.alpha1) <= kVerifyTol;
      checks.push_back(check("tdma_vs_scan", tdma.sum_rate, scan.sum_rate, match, 1'000'001));
    }
    out["verify"] = checks;
  }
  return out;
}

inline Json tw_sumrate(const TwInput& in, const RunConfig& cfg) {
  const auto s = tw_optimal(in.ch);
  Json out;
  out["solution"] = to_json(s);
  out["solution"]["original_powers"] = original_powers(in, s.allocation);
  if (cfg.verify) {
    const auto g = verify_grid(cfg);
    const auto o = grid_max_tw(in.ch, g);
    out["verify"] = Json::array({check("tw_vs_grid", s.sum_rate, o.sum_rate, s.allocation == o.allocation, g.points_per_axis)});
  }
  return out;
}

inline Json mac_jam(const MacInput& in, const RunConfig& cfg) {
  const auto s = mac_cj_optimal(in.ch);
  Json out;
  out["solution"] = to_json(s);
  out["solution"]["original_powers"] = original_powers(in, s.allocation);
  if (in.ch.k_users() == 2) out["closed_form"] = to_json(mac_cj_two_user(in.ch));
  if (cfg.verify) {
    const auto g = verify_grid(cfg);
    const auto o = grid_max_mac_cj(in.ch, g);
    out["verify"] = Json::array({check("mac_cj_vs_grid", s.sum_rate, o.sum_rate, same_powers(s.allocation, o.allocation),
                                       g.points_per_axis)});
  }
  return out;
}

inline Json tw_jam(const TwInput& in, const RunConfig& cfg) {
  const auto s = tw_cj_optimal(in.ch);
  Json out;
  out["solution"] = to_json(s);
  out["solution"]["original_powers"] = original_powers(in, s.allocation);
  if (cfg.verify) {
    const auto g = verify_grid(cfg);
    const auto o = grid_max_tw_cj(in.ch, g);
    out["verify"] = Json::array({check("tw_cj_vs_grid", s.sum_rate, o.sum_rate, same_powers(s.allocation, o.allocation),
                                       g.points_per_axis)});
  }
  return out;
}

inline bool all_pass(const Json& checks) {
  for (const auto& c : checks)
    if (!c.at("pass").get<bool>()) return false;
  return true;
}

inline void emit(CliOutcome& r, const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    r.out += text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw InvalidInput("out", "cannot write '" + cfg.out + "'");
  f << text;
}

inline void dispatch(const RunConfig& cfg, CliOutcome& r) {
  if (cfg.format != "json" && cfg.format != "csv") throw InvalidInput("format", "expected json or csv");
  if (cfg.grid == 1) throw InvalidInput("grid", "must be at least 2");

  if (cfg.command == Command::sweep) {
    if (cfg.model != "mac" && cfg.model != "tw") throw InvalidInput("model", "expected mac or tw");
    SceneFile sf;
    if (!cfg.scene.empty()) sf = scene_from_json(parse_json_text(read_file(cfg.scene, "scene"), "scene"));
    const auto res = sweep(sf.scene, sf.bounds, cfg.grid ? cfg.grid : 64, cfg.model == "mac" ? SweepMode::mac_cj : SweepMode::tw_cj);
    if (cfg.format == "csv") {
      emit(r, cfg, sweep_csv(res));
      if (!cfg.out.empty()) {
        RunConfig meta = cfg;
        meta.out = cfg.out + ".meta.json";
        emit(r, meta, sweep_metadata(res).dump(2) + "\n");
      }
    } else {
      emit(r, cfg, to_json(res).dump(2) + "\n");
    }
    return;
  }

  const auto doc = channel_from_flags(cfg);
  const bool is_mac = std::holds_alternative<RawMacChannel>(doc) || std::holds_alternative<StdMacChannel>(doc);
  const char* names[] = {"region", "sumrate", "jam", "sweep", "verify"};
  const char* name = names[static_cast<int>(cfg.command)];
  std::string csv;
  Json out;

  if (is_mac) {
    MacInput in;
    if (auto raw = std::get_if<RawMacChannel>(&doc)) {
      in.raw = *raw;
      in.ch = standardize_mac(*raw);
    } else {
      in.ch = std::get<StdMacChannel>(doc);
    }
    out = header(name, doc, to_json(in.ch), user_order(in.ch));
    Json body;
    switch (cfg.command) {
      case Command::region: body = mac_region(in, cfg, csv); break;
      case Command::sumrate: body = mac_sumrate(in, cfg); break;
      case Command::jam: body = mac_jam(in, cfg); break;
      case Command::verify: {
        RunConfig v = cfg;
        v.verify = true;
        Json checks = mac_sumrate(in, v)["verify"];
        if (in.ch.k_users() <= 3) {
          const Json jam = mac_jam(in, v);
          for (const auto& c : jam.at("verify")) checks.push_back(c);
        }
        body["verify"] = checks;
        break;
      }
      case Command::sweep: break;
    }
    out.update(body);
  } else {
    TwInput in;
    if (auto raw = std::get_if<RawTwChannel>(&doc)) {
      in.raw = *raw;
      in.ch = standardize_tw(*raw);
    } else {
      in.ch = std::get<StdTwChannel>(doc);
    }
    out = header(name, doc, to_json(in.ch), user_order(in.ch));
    Json body;
    switch (cfg.command) {
      case Command::region: body = tw_region_cmd(in, cfg, csv); break;
      case Command::sumrate: body = tw_sumrate(in, cfg); break;
      case Command::jam: body = tw_jam(in, cfg); break;
      case Command::verify: {
        RunConfig v = cfg;
        v.verify = true;
        Json checks = tw_sumrate(in, v)["verify"];
        const Json jam = tw_jam(in, v);
        for (const auto& c : jam.at("verify")) checks.push_back(c);
        body["verify"] = checks;
        break;
      }
      case Command::sweep: break;
    }
    out.update(body);
  }

  if (cfg.format == "csv") {
    if (cfg.command != Command::region) throw InvalidInput("format", "csv output is available for region and sweep");
    emit(r, cfg, csv);
  } else {
    emit(r, cfg, out.dump(2) + "\n");
  }
  if (out.contains("verify") && !all_pass(out["verify"])) {
    r.err += "verification mismatch above tolerance\n";
    r.exit_code = 2;
  }
}

}  // namespace cli_detail

/// Parses `args` (without the program name) and runs the command.
/// Exit codes: 0 success, 1 invalid input, 2 numerical failure or a
/// verification mismatch.
inline CliOutcome run_cli(const std::vector<std::string>& args) {
  CliOutcome r;
  RunConfig cfg;
  CLI::App app{"Secrecy rate regions, optimal powers and cooperative jamming for Gaussian wiretap channels",
               "secrecy_rates"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool channel_opts) {
    sub->add_option("--model", cfg.model, "Channel model")->check(CLI::IsMember({"mac", "tw"}));
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--grid", cfg.grid, "Grid resolution (hull, oracle or sweep)");
    sub->add_option("--out", cfg.out, "Write the output to this file");
    if (!channel_opts) return;
    sub->add_option("--caps", cfg.caps, "Power caps, comma separated");
    sub->add_option("--eve-gains", cfg.eve_gains,
                    "Eavesdropper gains; standardized, or raw tap gains when --main-gains is given");
    sub->add_option("--main-gains", cfg.main_gains, "Raw main-channel gains (selects the raw form)");
    sub->add_option("--noises", cfg.noises, "Raw noises: mac main,tap; tw sigma1,sigma2,tap");
    sub->add_option("--channel", cfg.channel, "Channel JSON, inline or a file path");
  };

  struct Sub {
    const char* name;
    const char* help;
    Command cmd;
  };
  const Sub subs[] = {{"region", "Achievable secrecy region", Command::region},
                      {"sumrate", "Secrecy sum-rate maximizing powers", Command::sumrate},
                      {"jam", "Cooperative jamming optimum", Command::jam},
                      {"sweep", "Eavesdropper position sweep", Command::sweep},
                      {"verify", "Compare every optimizer with its brute-force oracle", Command::verify}};
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, s.cmd != Command::sweep);
    if (s.cmd == Command::sumrate || s.cmd == Command::jam)
      sub->add_flag("--verify", cfg.verify, "Also run the brute-force oracle");
    if (s.cmd == Command::sweep) sub->add_option("--scene", cfg.scene, "Scene JSON file");
    const Command c = s.cmd;
    sub->callback([&cfg, c] { cfg.command = c; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    r.exit_code = app.exit(e, o, er) == 0 ? 0 : 1;
    r.out = o.str();
    r.err = er.str();
    return r;
  }

  try {
    cli_detail::dispatch(cfg, r);
  } catch (const InvalidInput& e) {
    r.exit_code = 1;
    r.err += std::string("error: ") + e.what() + "\n";
  } catch (const NumericalFailure& e) {
    r.exit_code = 2;
    r.err += std::string("numerical failure: ") + e.what() + "\n";
  } catch (const std::exception& e) {
    r.exit_code = 2;
    r.err += std::string("internal error: ") + e.what() + "\n";
  }
  return r;
}

}  // namespace secrecy
