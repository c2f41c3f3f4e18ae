#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rqtraj/errors.hpp"
#include "rqtraj/format.hpp"
#include "rqtraj/microstate.hpp"
#include "rqtraj/particle.hpp"
#include "rqtraj/potential.hpp"
#include "rqtraj/units.hpp"

namespace rqtraj {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const std::string t = trim(s);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::ConfigError, "cannot parse number '" + s + "'");
  }
  return v;
}

inline long parse_long(const std::string& s) {
  long v = 0;
  const std::string t = trim(s);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw Error(ErrorCode::ConfigError, "cannot parse integer '" + s + "'");
  }
  return v;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_double(item));
  }
  return out;
}

}  // namespace detail

// Merged view of config-file values and flag overrides. Flags win; the
// effective configuration is echoed into every output so a run is
// reproducible from its own header.
struct RunConfig {
  UnitSystem units{};
  ParticleSpec particle{1.0, 1.4142135623730951};
  Microstate ms{};

  std::string pot_tag = "free";
  std::vector<double> pot_params;

  double tol_deg = 1e-12;
  double tol_quad = 1e-12;
  double tol_root = 1e-12;
  double tol_residual = 1e-8;
  double tol_deviation = 1e-7;
  double tol_wronskian = 1e-8;
  double guard = 1e-6;

  // NaN means "choose a sensible span for the command".
  double t_begin = std::numeric_limits<double>::quiet_NaN();
  double t_end = std::numeric_limits<double>::quiet_NaN();
  double x_min = std::numeric_limits<double>::quiet_NaN();
  double x_max = std::numeric_limits<double>::quiet_NaN();
  double kg_step = 1e-3;
  long samples = 201;
  long node_count = 8;
  std::string mode = "both";
  std::string suite = "all";
  std::string format = "csv";
  std::string out;
  std::vector<double> ladder;

  Potential potential() const {
    if (pot_tag == "free") return Potential::free();
    if (pot_tag == "constant") {
      if (pot_params.size() != 1) {
        throw Error(ErrorCode::ConfigError, "constant potential needs one parameter: v0");
      }
      return Potential::constant(pot_params[0]);
    }
    if (pot_tag == "linear") {
      if (pot_params.empty() || pot_params.size() > 2) {
        throw Error(ErrorCode::ConfigError, "linear potential needs parameters: slope[,v0]");
      }
      return Potential::linear(pot_params[0], pot_params.size() == 2 ? pot_params[1] : 0.0);
    }
    throw Error(ErrorCode::ConfigError, "unknown potential tag '" + pot_tag + "'");
  }

  void set(const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_list;
    using detail::parse_long;
    if (key == "hbar") units.hbar = parse_double(value);
    else if (key == "c") units.c = parse_double(value);
    else if (key == "m0") particle.m0 = parse_double(value);
    else if (key == "E") particle.E = parse_double(value);
    else if (key == "a") ms.a = parse_double(value);
    else if (key == "b") ms.b = parse_double(value);
    else if (key == "x0") ms.x0 = parse_double(value);
    else if (key == "t0") ms.t0 = parse_double(value);
    else if (key == "potential.tag") pot_tag = detail::trim(value);
    else if (key == "potential.params") pot_params = parse_list(value);
    else if (key == "tol.deg") tol_deg = parse_double(value);
    else if (key == "tol.quad") tol_quad = parse_double(value);
    else if (key == "tol.root") tol_root = parse_double(value);
    else if (key == "tol.residual") tol_residual = parse_double(value);
    else if (key == "tol.deviation") tol_deviation = parse_double(value);
    else if (key == "tol.wronskian") tol_wronskian = parse_double(value);
    else if (key == "guard") guard = parse_double(value);
    else if (key == "t_begin") t_begin = parse_double(value);
    else if (key == "t_end") t_end = parse_double(value);
    else if (key == "x_min") x_min = parse_double(value);
    else if (key == "x_max") x_max = parse_double(value);
    else if (key == "kg_step") kg_step = parse_double(value);
    else if (key == "samples") samples = parse_long(value);
    else if (key == "nodes") node_count = parse_long(value);
    else if (key == "mode") mode = detail::trim(value);
    else if (key == "suite") suite = detail::trim(value);
    else if (key == "format") format = detail::trim(value);
    else if (key == "out") out = detail::trim(value);
    else if (key == "ladder") ladder = parse_list(value);
    else throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = detail::trim(line);
      if (t.empty() || t[0] == '#') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::ConfigError,
                    "line " + std::to_string(line_no) + ": expected key=value");
      }
      set(detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
  }

  void validate() const {
    units.validate();
    particle.validate();
    ms.validate();
    for (double t : {tol_deg, tol_quad, tol_root, tol_residual, tol_deviation, tol_wronskian,
                     guard, kg_step}) {
      if (!(t > 0.0)) throw Error(ErrorCode::ConfigError, "all tolerances must be positive");
    }
  }

  // Deterministic key order; every output embeds these lines.
  std::vector<std::pair<std::string, std::string>> echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("hbar", float17(units.hbar));
    kv.emplace_back("c", float17(units.c));
    kv.emplace_back("m0", float17(particle.m0));
    kv.emplace_back("E", float17(particle.E));
    kv.emplace_back("a", float17(ms.a));
    kv.emplace_back("b", float17(ms.b));
    kv.emplace_back("x0", float17(ms.x0));
    kv.emplace_back("t0", float17(ms.t0));
    kv.emplace_back("potential.tag", pot_tag);
    std::string params;
    for (std::size_t i = 0; i < pot_params.size(); ++i) {
      if (i) params += ",";
      params += float17(pot_params[i]);
    }
    kv.emplace_back("potential.params", params);
    kv.emplace_back("mode", mode);
    kv.emplace_back("t_begin", float17(t_begin));
    kv.emplace_back("t_end", float17(t_end));
    kv.emplace_back("samples", int_str(samples));
    kv.emplace_back("nodes", int_str(node_count));
    kv.emplace_back("suite", suite);
    std::string lad;
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      if (i) lad += ",";
      lad += float17(ladder[i]);
    }
    kv.emplace_back("ladder", lad);
    kv.emplace_back("x_min", float17(x_min));
    kv.emplace_back("x_max", float17(x_max));
    kv.emplace_back("kg_step", float17(kg_step));
    kv.emplace_back("guard", float17(guard));
    kv.emplace_back("tol.deg", float17(tol_deg));
    kv.emplace_back("tol.quad", float17(tol_quad));
    kv.emplace_back("tol.root", float17(tol_root));
    kv.emplace_back("tol.residual", float17(tol_residual));
    kv.emplace_back("tol.deviation", float17(tol_deviation));
    kv.emplace_back("tol.wronskian", float17(tol_wronskian));
    kv.emplace_back("format", format);
    return kv;
  }
};

}  // namespace rqtraj
