// Command-line driver: trajectories, node reports, forbidden-region runs,
// validation suites and basis dumps, all emitted deterministically (fixed
// float formatting, fixed ordering, config echoed into every output).
//
// Exit codes: 0 success, 1 input error, 2 tolerance failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rqtraj/rqtraj.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rqtraj;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitToleranceFailure = 2;

struct Overrides {
  std::optional<double> hbar, c, m0, E, a, b, x0, t0;
  std::optional<double> tol_deg, tol_quad, tol_root, tol_residual, tol_deviation,
      tol_wronskian, guard;
  std::optional<double> t_begin, t_end, x_min, x_max, kg_step;
  std::optional<long> samples, node_count;
  std::optional<std::string> mode, format, out, potential, potential_params, ladder;
  std::string config_path;

  bool e_explicit = false, a_explicit = false, b_explicit = false;

  RunConfig merge() const {
    RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    auto setd = [&cfg](const char* key, const std::optional<double>& v) {
      if (v) cfg.set(key, float17(*v));
    };
    setd("hbar", hbar);
    setd("c", c);
    setd("m0", m0);
    setd("E", E);
    setd("a", a);
    setd("b", b);
    setd("x0", x0);
    setd("t0", t0);
    setd("tol.deg", tol_deg);
    setd("tol.quad", tol_quad);
    setd("tol.root", tol_root);
    setd("tol.residual", tol_residual);
    setd("tol.deviation", tol_deviation);
    setd("tol.wronskian", tol_wronskian);
    setd("guard", guard);
    setd("t_begin", t_begin);
    setd("t_end", t_end);
    setd("x_min", x_min);
    setd("x_max", x_max);
    setd("kg_step", kg_step);
    if (samples) cfg.samples = *samples;
    if (node_count) cfg.node_count = *node_count;
    if (mode) cfg.mode = *mode;
    if (format) cfg.format = *format;
    if (out) cfg.out = *out;
    if (potential) cfg.pot_tag = *potential;
    if (potential_params) cfg.set("potential.params", *potential_params);
    if (ladder) cfg.set("ladder", *ladder);
    return cfg;
  }
};

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::string path = cfg.out;
  if (const char* dir = std::getenv("RQTRAJ_OUT_DIR"); dir && *dir && path[0] != '/') {
    path = std::string(dir) + "/" + path;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write output file '" + path + "'");
  f << text;
}

std::string echo_comment(const RunConfig& cfg) {
  std::string s;
  for (const auto& [k, v] : cfg.echo()) s += "# " + k + "=" + v + "\n";
  return s;
}

ordered_json echo_json(const RunConfig& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : cfg.echo()) j[k] = v;
  return j;
}

TrajectoryOptions options_from(const RunConfig& cfg) {
  TrajectoryOptions opt;
  opt.quad_tol = cfg.tol_quad;
  opt.root_tol = cfg.tol_root;
  opt.guard_fraction = cfg.guard;
  opt.eps_deg = cfg.tol_deg;
  return opt;
}

struct TrajectoryRow {
  double t, x, v, p, firqnl;
  long branch;
  std::optional<double> x_closed, deviation;
};

// Free-particle P on a closed-form sample, through the momentum-velocity
// relation.
double closed_momentum(const ParticleSpec& p, const UnitSystem& u, double v) {
  const double mc2 = p.rest_energy(u);
  return (p.E * p.E - mc2 * mc2) / (p.E * v);
}

int cmd_trajectory(const RunConfig& cfg) {
  cfg.validate();
  const UnitSystem& u = cfg.units;
  const ParticleSpec& p = cfg.particle;
  const Potential pot = cfg.potential();
  const bool is_free = pot.tag() == Potential::Tag::Free;
  const std::string mode = cfg.mode;
  if (mode != "closed" && mode != "quadrature" && mode != "both") {
    throw Error(ErrorCode::ConfigError, "mode must be closed, quadrature or both");
  }
  if (!is_free && mode != "quadrature") {
    throw Error(ErrorCode::ConfigError,
                "closed forms exist only for the free particle; use --mode quadrature");
  }

  double t_begin = cfg.t_begin, t_end = cfg.t_end;
  if (std::isnan(t_begin)) t_begin = cfg.ms.t0;
  if (std::isnan(t_end)) {
    if (!is_free) {
      throw Error(ErrorCode::ConfigError, "t_end is required for non-free potentials");
    }
    t_end = t_begin + 3.0 * node_lattice(p, u, 0.0, 0.0, cfg.tol_deg).dt;
  }
  if (!(t_end > t_begin)) throw Error(ErrorCode::ConfigError, "need t_end > t_begin");
  const long n = cfg.samples;
  if (n < 2) throw Error(ErrorCode::ConfigError, "need at least two samples");

  std::vector<TrajectoryRow> rows;

  if (mode == "closed") {
    for (long i = 0; i < n; ++i) {
      const double t = t_begin + (t_end - t_begin) * static_cast<double>(i) / (n - 1);
      const ClosedPoint cp = free_trajectory_closed(p, cfg.ms, u, t, cfg.tol_deg);
      const KinematicState kin = closed_free_kinematics(p, cfg.ms, u, t, cfg.tol_deg);
      TrajectoryRow row{t, cp.x, kin.v, closed_momentum(p, u, kin.v),
                        firqnl_residual(kin, p, pot, u, cp.x, cfg.tol_deg), cp.branch, {}, {}};
      rows.push_back(row);
    }
  } else {
    Trajectory traj;
    if (is_free) {
      // The user's constants label the closed-form family; the quadrature
      // engine runs the same curve through the dual action constants.
      const ActionRun run = action_run_for_closed(p, cfg.ms, u, cfg.tol_deg);
      const KGBasis basis = kg_basis_free_allowed(p, u, run.basis_origin, cfg.tol_deg);
      traj = trajectory_by_quadrature(basis, run.ms, p, pot, u, t_begin, t_end,
                                      static_cast<std::size_t>(n), options_from(cfg));
    } else {
      if (std::isnan(cfg.x_min) || std::isnan(cfg.x_max)) {
        throw Error(ErrorCode::ConfigError, "x_min and x_max are required for numeric bases");
      }
      const KGBasis basis = kg_basis_numeric(p, pot, u, cfg.x_min, cfg.x_max, cfg.kg_step,
                                             cfg.tol_wronskian, cfg.tol_deg);
      traj = trajectory_by_quadrature(basis, cfg.ms, p, pot, u, t_begin, t_end,
                                      static_cast<std::size_t>(n), options_from(cfg));
    }
    for (const auto& s : traj.samples) {
      TrajectoryRow row{s.t, s.x, s.v, s.p, s.firqnl, s.branch, {}, {}};
      if (mode == "both") {
        const double xc = free_trajectory_closed(p, cfg.ms, u, s.t, cfg.tol_deg).x;
        row.x_closed = xc;
        row.deviation = std::abs(s.x - xc);
      }
      rows.push_back(row);
    }
  }

  double worst_residual = 0.0, worst_deviation = 0.0;
  const double e4 = p.E * p.E * p.E * p.E;
  for (const auto& r : rows) {
    worst_residual = std::max(worst_residual, std::abs(r.firqnl) / e4);
    if (r.deviation) worst_deviation = std::max(worst_deviation, *r.deviation);
  }

  const bool with_closed = mode == "both";
  std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format == "csv") {
    std::string text = "# rqtraj trajectory\n" + echo_comment(cfg);
    text += "t,x,v,P,branch,firqnl_residual";
    if (with_closed) text += ",x_closed,deviation";
    text += "\n";
    for (const auto& r : rows) {
      text += float17(r.t) + "," + float17(r.x) + "," + float17(r.v) + "," + float17(r.p) +
              "," + int_str(r.branch) + "," + float17(r.firqnl);
      if (with_closed) text += "," + float17(*r.x_closed) + "," + float17(*r.deviation);
      text += "\n";
    }
    write_output(cfg, text);
  } else if (format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["samples"] = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json s;
      s["t"] = r.t;
      s["x"] = r.x;
      s["v"] = r.v;
      s["P"] = r.p;
      s["branch"] = r.branch;
      s["firqnl_residual"] = r.firqnl;
      if (with_closed) {
        s["x_closed"] = *r.x_closed;
        s["deviation"] = *r.deviation;
      }
      j["samples"].push_back(s);
    }
    write_output(cfg, j.dump(2) + "\n");
  } else {
    throw Error(ErrorCode::ConfigError, "format must be csv or json");
  }

  if (worst_residual > cfg.tol_residual) {
    std::cerr << "tolerance failure: scaled firqnl residual " << float17(worst_residual)
              << " > " << float17(cfg.tol_residual) << "\n";
    return kExitToleranceFailure;
  }
  if (with_closed && worst_deviation > cfg.tol_deviation) {
    std::cerr << "tolerance failure: closed-form deviation " << float17(worst_deviation)
              << " > " << float17(cfg.tol_deviation) << "\n";
    return kExitToleranceFailure;
  }
  return kExitOk;
}

int cmd_nodes(const RunConfig& cfg) {
  cfg.validate();
  const NodeLattice lat =
      node_lattice(cfg.particle, cfg.units, cfg.ms.x0, cfg.ms.t0, cfg.tol_deg);
  const double vbar = mean_velocity(cfg.particle, cfg.units, cfg.tol_deg);

  std::string format = cfg.format.empty() ? "json" : cfg.format;
  if (format == "json") {
    ordered_json j;
    j["config"] = echo_json(cfg);
    j["dt"] = lat.dt;
    j["dx"] = lat.dx;
    j["mean_velocity"] = vbar;
    j["nodes"] = ordered_json::array();
    for (long i = 0; i < cfg.node_count; ++i) {
      ordered_json node;
      node["n"] = i;
      node["t"] = lat.node_time(i);
      node["x"] = lat.node_position(i);
      j["nodes"].push_back(node);
    }
    write_output(cfg, j.dump(2) + "\n");
  } else if (format == "csv") {
    std::string text = "# rqtraj nodes\n" + echo_comment(cfg);
    text += "# dt=" + float17(lat.dt) + "\n# dx=" + float17(lat.dx) +
            "\n# mean_velocity=" + float17(vbar) + "\n";
    text += "n,t,x\n";
    for (long i = 0; i < cfg.node_count; ++i) {
      text += int_str(i) + "," + float17(lat.node_time(i)) + "," +
              float17(lat.node_position(i)) + "\n";
    }
    write_output(cfg, text);
  } else {
    throw Error(ErrorCode::ConfigError, "format must be csv or json");
  }
  return kExitOk;
}

int cmd_forbidden(const RunConfig& cfg) {
  cfg.validate();
  const UnitSystem& u = cfg.units;
  const ParticleSpec& p = cfg.particle;
  const double mc2 = p.rest_energy(u);
  const double omega = (p.E * p.E - mc2 * mc2) / (u.hbar * p.E);

  double t_begin = cfg.t_begin, t_end = cfg.t_end;
  if (std::isnan(t_begin)) t_begin = cfg.ms.t0;
  if (std::isnan(t_end)) t_end = t_begin + 2.0 * 3.14159265358979323846 / std::abs(omega);
  if (!(t_end > t_begin)) throw Error(ErrorCode::ConfigError, "need t_end > t_begin");

  const std::vector<double> singular =
      forbidden_singular_times(p, cfg.ms, u, t_begin, t_end, cfg.tol_deg);

  // Segment boundaries: span edges plus every singular time inside.
  std::vector<double> bounds{t_begin};
  for (double s : singular) {
    if (s > bounds.back()) bounds.push_back(s);
  }
  if (t_end > bounds.back()) bounds.push_back(t_end);

  const long per_segment =
      std::max<long>(8, cfg.samples / std::max<long>(1, static_cast<long>(bounds.size()) - 1));

  std::string text = "# rqtraj forbidden\n" + echo_comment(cfg);
  for (double s : singular) text += "# singular_time=" + float17(s) + "\n";
  text += "segment,t,x,v\n";
  for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
    const double lo = bounds[seg], hi = bounds[seg + 1];
    const double trim = cfg.guard * (hi - lo);
    for (long i = 0; i < per_segment; ++i) {
      const double t =
          (lo + trim) + (hi - lo - 2.0 * trim) * static_cast<double>(i) / (per_segment - 1);
      const double x = forbidden_trajectory_closed(p, cfg.ms, u, t, cfg.tol_deg);
      const double v = forbidden_velocity_closed(p, cfg.ms, u, t, cfg.tol_deg);
      text += int_str(static_cast<long>(seg)) + "," + float17(t) + "," + float17(x) + "," +
              float17(v) + "\n";
    }
  }
  write_output(cfg, text);
  return kExitOk;
}

ordered_json report_json(const LimitReport& rep) {
  ordered_json j;
  j["name"] = rep.name;
  j["ladder"] = rep.ladder;
  j["metrics"] = ordered_json::array();
  for (std::size_t i = 0; i < rep.deviations.size(); ++i) {
    ordered_json m;
    if (i < rep.ladder.size()) m["param"] = rep.ladder[i];
    m["deviation"] = rep.deviations[i];
    j["metrics"].push_back(m);
  }
  for (const auto& [k, v] : rep.metrics) j[k] = v;
  j["fitted_order"] = rep.fitted_order;
  j["expected_order"] = rep.expected_order;
  j["pass"] = rep.pass;
  return j;
}

int cmd_validate(const RunConfig& cfg, bool e_explicit, bool a_explicit, bool b_explicit) {
  cfg.validate();
  const std::string& suite = cfg.suite;
  const bool all = suite == "all";
  if (!all && suite != "classical-limit" && suite != "nonrel-limit" &&
      suite != "ode-crosscheck" && suite != "rqshje") {
    throw Error(ErrorCode::ConfigError, "unknown suite '" + suite + "'");
  }

  // Suite defaults: a non-classical microstate and, for the c-ladder, a small
  // kinetic energy, unless the user pinned them.
  Microstate ms = cfg.ms;
  if (!a_explicit && !b_explicit) ms = Microstate{2.0, 0.0, cfg.ms.x0, cfg.ms.t0};

  ordered_json suites = ordered_json::array();
  bool pass = true;

  if (all || suite == "classical-limit") {
    std::vector<double> ladder =
        cfg.ladder.empty() ? std::vector<double>{1.0, 0.5, 0.25, 0.125} : cfg.ladder;
    const LimitReport rep = classical_limit_suite(cfg.particle, ms, cfg.units, ladder);
    suites.push_back(report_json(rep));
    pass = pass && rep.pass;
  }
  if (all || suite == "nonrel-limit") {
    ParticleSpec p_nr = cfg.particle;
    if (!e_explicit) p_nr.E = p_nr.rest_energy(cfg.units) * 1.001;
    std::vector<double> ladder =
        cfg.ladder.empty() ? std::vector<double>{1.0, 2.0, 4.0, 8.0} : cfg.ladder;
    const LimitReport rep = nonrelativistic_limit_suite(p_nr, ms, cfg.units, ladder);
    suites.push_back(report_json(rep));
    pass = pass && rep.pass;
  }
  if (all || suite == "ode-crosscheck") {
    const NodeLattice lat = node_lattice(cfg.particle, cfg.units, 0.0, ms.t0, cfg.tol_deg);
    // 80% of one inter-node window, centered.
    const double t_begin = lat.node_time(0) + 0.1 * lat.dt;
    const double t_end = lat.node_time(1) - 0.1 * lat.dt;
    const double dev = firqnl_ode_crosscheck(cfg.particle, ms, cfg.units, t_begin, t_end, 1e-10);
    LimitReport rep;
    rep.name = "ode-crosscheck";
    rep.deviations.push_back(dev);
    rep.metrics.emplace_back("max_deviation", dev);
    rep.pass = dev <= 1e-6;
    suites.push_back(report_json(rep));
    pass = pass && rep.pass;
  }
  if (all || suite == "rqshje") {
    const LimitReport rep = rqshje_closure_suite(cfg.particle, cfg.units);
    suites.push_back(report_json(rep));
    pass = pass && rep.pass;
  }

  ordered_json j;
  j["config"] = echo_json(cfg);
  j["suites"] = suites;
  j["pass"] = pass;
  write_output(cfg, j.dump(2) + "\n");
  return pass ? kExitOk : kExitToleranceFailure;
}

KGBasis basis_for_config(const RunConfig& cfg) {
  const UnitSystem& u = cfg.units;
  const ParticleSpec& p = cfg.particle;
  const Potential pot = cfg.potential();
  if (pot.tag() != Potential::Tag::Free) {
    if (std::isnan(cfg.x_min) || std::isnan(cfg.x_max)) {
      throw Error(ErrorCode::ConfigError, "x_min and x_max are required for numeric bases");
    }
    return kg_basis_numeric(p, pot, u, cfg.x_min, cfg.x_max, cfg.kg_step, cfg.tol_wronskian,
                            cfg.tol_deg);
  }
  const double mc2 = p.rest_energy(u);
  if (p.E > mc2) return kg_basis_free_allowed(p, u, 0.0, cfg.tol_deg);
  return kg_basis_free_forbidden(p, u, 0.0, cfg.tol_deg);
}

// Diagnostic dump of the reduced action along x, with the f-function and the
// Hamilton-Jacobi residual.
int cmd_action_dump(const RunConfig& cfg) {
  cfg.validate();
  const KGBasis basis = basis_for_config(cfg);
  const Potential pot = cfg.potential();
  const ReducedAction action(basis, cfg.ms, cfg.units);

  double x_min = cfg.x_min, x_max = cfg.x_max;
  if (std::isnan(x_min)) x_min = 0.0;
  if (std::isnan(x_max)) {
    x_max = basis.wave_number() > 0.0 ? 4.0 * 3.14159265358979323846 / basis.wave_number() : 1.0;
  }
  const long n = std::max<long>(2, cfg.samples);

  std::string text = "# rqtraj action-dump\n" + echo_comment(cfg);
  text += "x,S0,P,d2S0,d3S0,f,residual\n";
  for (long i = 0; i < n; ++i) {
    const double x = x_min + (x_max - x_min) * static_cast<double>(i) / (n - 1);
    const ActionState st = action.at(x);
    const double f = f_function(basis, cfg.ms, cfg.particle, pot, cfg.units, x, cfg.tol_deg);
    const double res = rqshje_residual(st, cfg.particle, pot, cfg.units, x);
    text += float17(x) + "," + float17(st.s0) + "," + float17(st.p) + "," + float17(st.d2s0) +
            "," + float17(st.d3s0) + "," + float17(f) + "," + float17(res) + "\n";
  }
  write_output(cfg, text);
  return kExitOk;
}

int cmd_basis_dump(const RunConfig& cfg) {
  cfg.validate();
  const KGBasis basis = basis_for_config(cfg);

  double x_min = cfg.x_min, x_max = cfg.x_max;
  if (std::isnan(x_min)) x_min = 0.0;
  if (std::isnan(x_max)) {
    x_max = basis.wave_number() > 0.0 ? 4.0 * 3.14159265358979323846 / basis.wave_number() : 1.0;
  }
  const long n = std::max<long>(2, cfg.samples);

  std::string text = "# rqtraj basis-dump\n" + echo_comment(cfg);
  text += "# regime=" + std::string(region_name(basis.regime())) + "\n";
  text += "x,theta,theta_prime,phi,phi_prime,wronskian\n";
  for (long i = 0; i < n; ++i) {
    const double x = x_min + (x_max - x_min) * static_cast<double>(i) / (n - 1);
    const BasisSample s = basis.eval(x);
    text += float17(x) + "," + float17(s.theta) + "," + float17(s.theta_prime) + "," +
            float17(s.phi) + "," + float17(s.phi_prime) + "," + float17(s.local_wronskian()) +
            "\n";
  }
  write_output(cfg, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rqtraj: one-dimensional relativistic quantum trajectories"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  app.add_option("--config", ov.config_path, "flat key=value config file");
  app.add_option("--hbar", ov.hbar, "reduced Planck constant (default 1)");
  app.add_option("--c", ov.c, "speed of light (default 1)");
  app.add_option("--m0", ov.m0, "rest mass (0 selects the photon)");
  app.add_option("--E", ov.E, "total energy including rest energy");
  app.add_option("--a", ov.a, "microstate constant a (nonzero)");
  app.add_option("--b", ov.b, "microstate constant b");
  app.add_option("--x0", ov.x0, "trajectory offset x0");
  app.add_option("--t0", ov.t0, "trajectory offset t0");
  app.add_option("--potential", ov.potential, "potential tag: free|constant|linear");
  app.add_option("--potential-params", ov.potential_params, "comma-separated parameters");
  app.add_option("--out", ov.out, "output path (default stdout)");
  app.add_option("--format", ov.format, "csv or json");
  app.add_option("--tol-deg", ov.tol_deg, "degenerate band width");
  app.add_option("--tol-quad", ov.tol_quad, "quadrature relative tolerance");
  app.add_option("--tol-root", ov.tol_root, "root-finding tolerance in t");
  app.add_option("--tol-residual", ov.tol_residual, "scaled residual gate");
  app.add_option("--tol-deviation", ov.tol_deviation, "closed-vs-quadrature gate");
  app.add_option("--tol-wronskian", ov.tol_wronskian, "Wronskian drift tolerance");
  app.add_option("--guard", ov.guard, "node guard band, fraction of the spacing");

  auto* trajectory = app.add_subcommand(
      "trajectory", "sample x(t): closed form, quadrature inversion, or both");
  trajectory->add_option("--mode", ov.mode, "closed|quadrature|both (default both)");
  trajectory->add_option("--t-begin", ov.t_begin, "span start (default t0)");
  trajectory->add_option("--t-end", ov.t_end, "span end (default 3 node spacings)");
  trajectory->add_option("--samples", ov.samples, "sample count (default 201)");
  trajectory->add_option("--x-min", ov.x_min, "numeric basis domain start");
  trajectory->add_option("--x-max", ov.x_max, "numeric basis domain end");
  trajectory->add_option("--kg-step", ov.kg_step, "numeric basis integration step");

  auto* nodes = app.add_subcommand("nodes", "node lattice report");
  nodes->add_option("--count", ov.node_count, "number of nodes to list (default 8)");

  auto* validate = app.add_subcommand("validate", "run verification suites");
  std::string suite = "all";
  validate->add_option("suite", suite,
                       "classical-limit|nonrel-limit|ode-crosscheck|rqshje|all");
  validate->add_option("--ladder", ov.ladder, "comma-separated parameter ladder");

  auto* forbidden = app.add_subcommand("forbidden", "segmented forbidden-region trajectory");
  forbidden->add_option("--t-begin", ov.t_begin, "span start (default t0)");
  forbidden->add_option("--t-end", ov.t_end, "span end (default two tangent periods)");
  forbidden->add_option("--samples", ov.samples, "total sample budget");

  auto* basis_dump = app.add_subcommand("basis-dump", "sample the Klein-Gordon basis as CSV");
  basis_dump->add_option("--x-min", ov.x_min, "dump start (default 0)");
  basis_dump->add_option("--x-max", ov.x_max, "dump end (default four periods)");
  basis_dump->add_option("--samples", ov.samples, "sample count (default 201)");
  basis_dump->add_option("--kg-step", ov.kg_step, "numeric basis integration step");

  auto* action_dump = app.add_subcommand(
      "action-dump", "sample the reduced action, its derivatives, f and the residual");
  action_dump->add_option("--x-min", ov.x_min, "dump start (default 0)");
  action_dump->add_option("--x-max", ov.x_max, "dump end (default four periods)");
  action_dump->add_option("--samples", ov.samples, "sample count (default 201)");
  action_dump->add_option("--kg-step", ov.kg_step, "numeric basis integration step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    ov.e_explicit = ov.E.has_value();
    ov.a_explicit = ov.a.has_value();
    ov.b_explicit = ov.b.has_value();
    RunConfig cfg = ov.merge();
    if (trajectory->parsed()) return cmd_trajectory(cfg);
    if (nodes->parsed()) return cmd_nodes(cfg);
    if (validate->parsed()) {
      cfg.suite = suite;
      return cmd_validate(cfg, ov.e_explicit, ov.a_explicit, ov.b_explicit);
    }
    if (forbidden->parsed()) return cmd_forbidden(cfg);
    if (basis_dump->parsed()) return cmd_basis_dump(cfg);
    if (action_dump->parsed()) return cmd_action_dump(cfg);
    return kExitInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
