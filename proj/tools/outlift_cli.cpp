#include "outlift/charts.hpp"
#include "outlift/verify.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

namespace {

int parse_index(const std::string& t) {
  int v = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size())
    throw outlift::ConfigError("bad integer '" + t + "' in map spec");
  return v;
}

outlift::ChartMap parse_map(const std::string& s, const outlift::BumpProfile& bump,
                            const outlift::StepProfile& step) {
  const auto bad = [&s]() -> outlift::ChartMap {
    throw outlift::ConfigError("map must look like F:i,j or G:j or T:i (got '" + s + "')");
  };
  if (s.size() < 3 || s[1] != ':') return bad();
  const std::string rest = s.substr(2);
  switch (s[0]) {
    case 'F': {
      const auto comma = rest.find(',');
      if (comma == std::string::npos) return bad();
      return outlift::ChartMap::torus_shear(parse_index(rest.substr(0, comma)),
                                            parse_index(rest.substr(comma + 1)), bump);
    }
    case 'G':
      return outlift::ChartMap::ball_half_turn(parse_index(rest), bump);
    case 'T':
      return outlift::ChartMap::sphere_twist(parse_index(rest), step);
    default:
      return bad();
  }
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw outlift::ConfigError("cannot open output file: " + path);
  fn(f);
  if (!f) throw outlift::ConfigError("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chart-level lifts of Nielsen generators: verification and data dumps"};
  app.require_subcommand(1);

  outlift::RunConfig cfg;
  std::string format = "text";
  std::string out_path;
  std::string map_spec = "F:1,2";
  int gen = 1;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--n", cfg.rank, "number of handles (sweeps cover 2..n)");
    cmd->add_option("--seed", cfg.seed, "rng seed for sampled checks");
    cmd->add_option("--samples", cfg.loop_samples, "loop samples, power of two");
    cmd->add_option("--path-samples", cfg.path_grid, "matrix-path grid, power of two");
    cmd->add_option("--refine-budget", cfg.refine_budget, "bisection depth per grid interval");
    cmd->add_option("--plateau-end", cfg.bump.plateau_end, "bump profile plateau radius");
    cmd->add_option("--support-end", cfg.bump.support_end, "bump profile support radius");
    cmd->add_option("--steepness", cfg.bump.steepness, "bump profile steepness");
    cmd->add_option("--ramp-start", cfg.step.ramp_start, "collar ramp start");
    cmd->add_option("--ramp-end", cfg.step.ramp_end, "collar ramp end");
    cmd->add_option("--ramp-steepness", cfg.step.steepness, "collar ramp steepness");
    cmd->add_option("--out", out_path, "write to this file instead of stdout");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the full verification suite");
  add_common(verify);
  verify->add_option("--fd-points", cfg.fd_points, "jacobian probe points per map family");
  verify->add_option("--equiv-points", cfg.equiv_points, "cover points for equivariance");
  verify->add_option("--cocycle-points", cfg.cocycle_points, "sample points per chart pair");
  verify->add_option("--tol-fd", cfg.tol_fd, "analytic-vs-fd jacobian tolerance");
  verify->add_option("--fd-step", cfg.fd_step, "central-difference step");
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* dump = app.add_subcommand("dump", "write tables for offline inspection");
  dump->require_subcommand(1);
  CLI::App* dump_psi_cmd = dump->add_subcommand("psi", "radial profile table (csv)");
  CLI::App* dump_jac_cmd =
      dump->add_subcommand("jacobian", "chart jacobian along a generator loop (csv)");
  CLI::App* dump_path_cmd =
      dump->add_subcommand("matrixpath", "derivative loop and its quaternion lift (csv)");
  CLI::App* dump_loop_cmd =
      dump->add_subcommand("loop", "tracked image loop and crossing word (json)");
  for (CLI::App* cmd : {dump_psi_cmd, dump_jac_cmd, dump_path_cmd, dump_loop_cmd})
    add_common(cmd);
  for (CLI::App* cmd : {dump_jac_cmd, dump_path_cmd, dump_loop_cmd}) {
    cmd->add_option("--map", map_spec, "chart map: F:i,j | G:j | T:i");
    cmd->add_option("--gen", gen, "index k of the tracked loop a_k");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      const outlift::Report report = outlift::run_verify(cfg);
      const std::string rendered =
          format == "json" ? outlift::to_json(report) : outlift::to_text(report);
      with_output(out_path, [&](std::ostream& os) { os << rendered; });
      return report.all_pass() ? 0 : 1;
    }

    cfg.validate();
    if (dump_psi_cmd->parsed()) {
      with_output(out_path, [&](std::ostream& os) { outlift::dump_psi(cfg, os); });
      return 0;
    }
    const outlift::ChartMap map = parse_map(map_spec, cfg.bump, cfg.step);
    if (dump_jac_cmd->parsed())
      with_output(out_path, [&](std::ostream& os) { outlift::dump_jacobian(cfg, map, gen, os); });
    else if (dump_path_cmd->parsed())
      with_output(out_path,
                  [&](std::ostream& os) { outlift::dump_matrixpath(cfg, map, gen, os); });
    else
      with_output(out_path, [&](std::ostream& os) { outlift::dump_loop(cfg, map, gen, os); });
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
