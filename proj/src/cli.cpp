#include "ahvol/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "ahvol/acceptance.hpp"
#include "ahvol/compactify.hpp"
#include "ahvol/error.hpp"
#include "ahvol/escobar.hpp"
#include "ahvol/geometry.hpp"
#include "ahvol/report.hpp"
#include "ahvol/scattering.hpp"
#include "ahvol/specfun.hpp"
#include "ahvol/yamabe.hpp"

namespace ahvol::cli {

namespace {

using json = nlohmann::ordered_json;

struct Output {
  std::string dir;
  bool json = false;
};

struct WarpOptions {
  std::string kind = "hyperbolic";
  double eps = 0.0;
  double decay = 3.0;
  std::string profile = "smoothstep";

  geometry::WarpSpec spec() const {
    if (kind == "perturbed") {
      auto s = geometry::WarpSpec::perturbed(eps, decay);
      s.profile = profile;
      return s;
    }
    if (kind == "flat") return geometry::WarpSpec::flat();
    return geometry::WarpSpec::hyperbolic();
  }
  json echo() const {
    json j{{"warp", kind}};
    if (kind == "perturbed") {
      j["eps"] = eps;
      j["decay"] = decay;
      j["profile"] = profile;
    }
    return j;
  }
};

struct Grid {
  double lo, hi;
  int points;
  std::vector<double> values() const { return geometry::linspace(lo, hi, points); }
};

json header(const std::string& command, json inputs) {
  json j;
  j["schema_version"] = report::kSchemaVersion;
  j["command"] = command;
  j["inputs"] = std::move(inputs);
  return j;
}

std::string path_in(const Output& out, const std::string& name) {
  return out.dir.empty() ? name : out.dir + "/" + name;
}

int finish(const Output& out, const std::string& stem, json j, bool pass,
           const std::string& summary) {
  j["pass"] = pass;
  const std::string text = j.dump(2) + "\n";
  report::write_text(path_in(out, stem + ".json"), text);
  if (out.json)
    std::cout << text;
  else if (!summary.empty())
    std::cout << summary;
  return pass ? kExitOk : kExitVerification;
}

double gauge(double v) { return std::isfinite(v) ? v : -1.0; }

// --- subcommands ------------------------------------------------------------

struct ConstantsArgs {
  int n = 3;
  double gamma = 0.5;
};

int cmd_constants(const ConstantsArgs& a, const Output& out) {
  const auto c = specfun::sphere_constants(a.n, a.gamma);
  auto j = header("constants", {{"n", a.n}, {"gamma", a.gamma}});
  j["d_gamma"] = c.d_gamma;
  j["Q"] = c.q_curv;
  j["Y"] = c.yamabe;
  j["sphere_volume"] = c.sphere_volume;
  char buf[256];
  std::snprintf(buf, sizeof buf, "d_gamma=%.17g\nQ=%.17g\nY=%.17g\nsphere_volume=%.17g\n",
                c.d_gamma, c.q_curv, c.yamabe, c.sphere_volume);
  return finish(out, "constants", std::move(j), true, buf);
}

struct MultiplierArgs {
  int n = 3;
  double gamma = 0.5;
  int kmax = 8;
  double t_max = 30.0;
  double rel_tol = 1e-12;
};

int cmd_multiplier(const MultiplierArgs& a, const Output& out) {
  scattering::SolveOptions opts;
  opts.t_max = a.t_max;
  opts.rel_tol = a.rel_tol;
  report::CsvTable table;
  table.comments = {"n=" + std::to_string(a.n), "gamma=" + report::format_real(a.gamma)};
  table.header = {"k", "numeric", "closed_form", "abs_deviation", "rel_deviation", "error_estimate"};
  double worst = 0.0;
  for (int k = 0; k <= a.kmax; ++k) {
    const auto m = scattering::scattering_multiplier_detailed(a.n, a.gamma, k, opts);
    const double exact = specfun::sphere_multiplier(a.n, a.gamma, k);
    const double dev = std::abs(m.value - exact);
    worst = std::max(worst, dev / std::abs(exact));
    table.rows.push_back({double(k), m.value, exact, dev, dev / std::abs(exact), m.error});
  }
  const std::string csv = table.str();
  report::write_text(path_in(out, "multiplier.csv"), csv);
  auto j = header("multiplier", {{"n", a.n}, {"gamma", a.gamma}, {"kmax", a.kmax},
                                 {"t_max", a.t_max}, {"rel_tol", a.rel_tol}});
  j["max_rel_deviation"] = worst;
  j["tolerance"] = 1e-6;
  return finish(out, "multiplier", std::move(j), worst <= 1e-6, csv);
}

struct AdaptedArgs {
  int n = 3;
  double gamma = 0.5;
  double t_max = 30.0;
  Grid grid{0.01, 20.0, 400};
};

int cmd_adapted(const AdaptedArgs& a, const Output& out) {
  scattering::AdaptedOptions opts;
  opts.solve.t_max = a.t_max;
  const auto ap = scattering::adapted_profile(a.n, a.gamma, opts);
  report::CsvTable prof;
  prof.header = {"t", "Phi", "dPhi", "d2Phi"};
  for (double t : a.grid.values()) {
    const auto p = ap.phi(t);
    prof.rows.push_back({t, p.value, p.d1, p.d2});
  }
  report::write_text(path_in(out, "adapted_profile.csv"), prof.str());
  report::write_text(path_in(out, "adapted_solution.csv"), scattering::solution_csv(ap.solution()));

  const auto hyp = geometry::make_warped_metric(a.n, geometry::WarpSpec::hyperbolic());
  const auto c = compactify::build_compactification(compactify::CompactKind::type_i, a.n, a.gamma,
                                                    hyp, opts);
  report::write_text(path_in(out, "compactification.csv"),
                     compactify::diagnostics_csv(c, hyp, geometry::linspace(0.5, 20.0, 40)));

  const double dG = std::abs(ap.G0() - ap.G0_expected());
  const double dF = std::abs(ap.F1_relative() - ap.F1_relative_expected());
  auto j = header("adapted", {{"n", a.n}, {"gamma", a.gamma}, {"solve_t_max", a.t_max},
                              {"t_min", a.grid.lo}, {"t_max", a.grid.hi}, {"points", a.grid.points}});
  j["G0"] = ap.G0();
  j["G0_error"] = ap.eG0();
  j["G0_expected"] = ap.G0_expected();
  j["F1_relative"] = ap.F1_relative();
  j["F1_relative_error"] = ap.eF1_relative();
  j["F1_relative_expected"] = ap.F1_relative_expected();
  j["monotone"] = ap.monotone();
  const bool pass = ap.monotone() && dG <= 1e-6 && dF <= 1e-5;
  char buf[256];
  std::snprintf(buf, sizeof buf, "G0=%.12g (expected %.12g)\nF1/F0=%.10g (expected %.10g)\nmonotone=%s\n",
                ap.G0(), ap.G0_expected(), ap.F1_relative(), ap.F1_relative_expected(),
                ap.monotone() ? "true" : "false");
  return finish(out, "adapted", std::move(j), pass, buf);
}

struct VolumeArgs {
  int n = 3;
  WarpOptions warp;
  Grid grid{0.1, 20.0, 200};
};

int cmd_volume(const VolumeArgs& a, const Output& out) {
  const auto metric = geometry::make_warped_metric(a.n, a.warp.spec());
  const auto grid = a.grid.values();
  const auto curve = geometry::volume_data(metric, grid);
  const auto curv = geometry::curvature_report(metric, grid);
  report::CsvTable table;
  table.comments = {"metric=" + metric.label()};
  table.header = {"t", "area", "ball", "area_ratio", "ball_ratio"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    table.rows.push_back({grid[i], curve.area[i], curve.ball[i], curve.area_ratio[i], curve.ball_ratio[i]});
  report::write_text(path_in(out, "volume.csv"), table.str());
  auto inputs = a.warp.echo();
  inputs["n"] = a.n;
  inputs["t_min"] = a.grid.lo;
  inputs["t_max"] = a.grid.hi;
  inputs["points"] = a.grid.points;
  auto j = header("volume", std::move(inputs));
  const bool gated = curv.ricci_defect <= 1e-12;
  j["metric"] = metric.label();
  j["ricci_defect"] = curv.ricci_defect;
  j["einstein_defect"] = curv.einstein_defect;
  j["ricci_gate"] = gated;
  j["monotone"] = curve.monotone;
  j["quadrature_error"] = curve.quadrature_error;
  char buf[256];
  std::snprintf(buf, sizeof buf, "ricci_gate=%s\nmonotone=%s\n", gated ? "true" : "false",
                curve.monotone ? "true" : "false");
  return finish(out, "volume", std::move(j), !gated || curve.monotone, buf);
}

struct ChainArgs {
  int n = 3;
  double gamma = 0.5;
  WarpOptions warp;
  Grid grid{0.1, 20.0, 200};
};

int cmd_chain(const ChainArgs& a, const Output& out) {
  const auto metric = geometry::make_warped_metric(a.n, a.warp.spec());
  const auto grid = a.grid.values();
  const auto rep = yamabe::theorem_chain_report(a.n, a.gamma, metric, grid);
  report::CsvTable table;
  table.comments = {"metric=" + rep.metric, "lower_bound=" + report::format_real(rep.lower_bound)};
  table.header = {"t", "area_ratio", "ball_ratio"};
  for (std::size_t i = 0; i < grid.size(); ++i)
    table.rows.push_back({grid[i], rep.eta.area_ratio[i], rep.eta.ball_ratio[i]});
  report::write_text(path_in(out, "chain.csv"), table.str());
  auto inputs = a.warp.echo();
  inputs["n"] = a.n;
  inputs["gamma"] = a.gamma;
  inputs["t_min"] = a.grid.lo;
  inputs["t_max"] = a.grid.hi;
  inputs["points"] = a.grid.points;
  auto j = header("chain", std::move(inputs));
  j["metric"] = rep.metric;
  j["y_manifold"] = rep.y_manifold;
  j["y_sphere"] = rep.y_sphere;
  j["lower_bound"] = rep.lower_bound;
  j["bg_monotone"] = rep.bg_monotone;
  j["ricci_defect"] = rep.ricci_defect;
  j["verdict"] = yamabe::to_string(rep.verdict);
  const bool pass = rep.verdict != yamabe::Verdict::fail;
  return finish(out, "chain", std::move(j), pass,
                "verdict=" + yamabe::to_string(rep.verdict) + "\npass=" + (pass ? "true" : "false") + "\n");
}

struct RayleighArgs {
  int n = 3;
  double gamma = 0.5;
  yamabe::MinimizeOptions opts;
};

int cmd_rayleigh(const RayleighArgs& a, const Output& out) {
  const auto res = yamabe::minimize_rayleigh(a.n, a.gamma, a.opts);
  const double Y = specfun::sphere_constants(a.n, a.gamma).yamabe;
  report::CsvTable table;
  table.header = {"k", "coefficient"};
  for (std::size_t k = 0; k < res.argmin.coeffs.size(); ++k)
    table.rows.push_back({double(k), res.argmin.coeffs[k]});
  report::write_text(path_in(out, "rayleigh_argmin.csv"), table.str());
  auto j = header("rayleigh", {{"n", a.n}, {"gamma", a.gamma}, {"kmax", a.opts.kmax},
                               {"restarts", a.opts.restarts}, {"seed", a.opts.seed},
                               {"max_iters", a.opts.max_iters}, {"grad_tol", a.opts.grad_tol},
                               {"init_scale", a.opts.init_scale}});
  const double dev = std::abs(res.min - Y);
  j["min"] = res.min;
  j["Y"] = Y;
  j["deviation"] = dev;
  j["best_restart"] = res.best_restart;
  j["converged"] = res.converged;
  json restarts = json::array();
  for (const auto& r : res.restarts)
    restarts.push_back({{"value", gauge(r.value)}, {"iters", r.iters}, {"converged", r.converged}});
  j["restarts"] = std::move(restarts);
  char buf[160];
  std::snprintf(buf, sizeof buf, "min=%.15g\nY=%.15g\ndeviation=%.3e\n", res.min, Y, dev);
  return finish(out, "rayleigh", std::move(j), dev <= 1e-6, buf);
}

struct EscobarArgs {
  int n = 3;
  Grid grid{0.1, 20.0, 200};
};

int cmd_escobar(const EscobarArgs& a, const Output& out) {
  const auto r = escobar::hemisphere_check(a.n, a.grid.values());
  report::CsvTable table;
  table.header = {"t", "ball_ratio"};
  for (std::size_t i = 0; i < r.t.size(); ++i) table.rows.push_back({r.t[i], r.ball_ratio[i]});
  report::write_text(path_in(out, "escobar_ratio.csv"), table.str());
  auto j = header("escobar", {{"n", a.n}, {"t_min", a.grid.lo}, {"t_max", a.grid.hi},
                              {"points", a.grid.points}});
  j["ya_hemisphere"] = r.ya_hemisphere;
  j["ya_quadrature"] = r.ya_quadrature;
  j["yb_conversion"] = r.yb_conversion;
  j["rtilde_max_dev"] = r.rtilde_max_dev;
  j["rtilde_cross_dev"] = r.rtilde_cross_dev;
  j["sectional_max_dev"] = r.sectional_max_dev;
  j["equator_H"] = r.equator_H;
  j["volume"] = r.volume;
  j["ratio_limit"] = r.ratio_limit;
  j["ratio_monotone"] = r.ratio_monotone;
  j["cosh_max_rel_dev"] = r.cosh_max_rel_dev;
  j["cosh_x2_coefficient"] = r.cosh_x2_coefficient;
  const bool pass = r.cosh_max_rel_dev <= 1e-10 && r.rtilde_max_dev <= 1e-8 &&
                    r.rtilde_cross_dev <= 1e-8 && r.sectional_max_dev <= 1e-8 &&
                    r.ratio_monotone && std::abs(r.ratio_limit - 1.0) <= 1e-8 &&
                    std::abs(r.ya_quadrature - r.ya_hemisphere) <= 1e-10 * r.ya_hemisphere;
  char buf[200];
  std::snprintf(buf, sizeof buf, "ya=%.15g\nratio_limit=%.15g\nmonotone=%s\n", r.ya_hemisphere,
                r.ratio_limit, r.ratio_monotone ? "true" : "false");
  return finish(out, "escobar", std::move(j), pass, buf);
}

int cmd_verify_all(const Output& out) {
  auto j = header("verify-all", json::object());
  json list = json::array();
  bool pass = true;
  for (int id = 1; id <= acceptance::kCriterionCount; ++id) {
    const auto r = acceptance::run_criterion(id);
    pass = pass && r.pass;
    if (!out.json) {
      std::cout << acceptance::format_line(r) << '\n' << std::flush;
    }
    json parts = json::array();
    for (const auto& p : r.parts)
      parts.push_back({{"label", p.label}, {"value", p.value}, {"tolerance", p.tolerance},
                       {"pass", p.pass}});
    list.push_back({{"id", r.id}, {"name", r.name}, {"measured", r.measured},
                    {"tolerance", r.tolerance}, {"pass", r.pass}, {"seconds", r.seconds},
                    {"detail", r.detail}, {"parts", std::move(parts)}});
  }
  j["criteria"] = std::move(list);
  return finish(out, "verify_all", std::move(j), pass, "");
}

// --- option wiring ----------------------------------------------------------

void add_n(CLI::App* sub, int& n, int lo) {
  sub->add_option("--n", n, "boundary dimension")->check(CLI::Range(lo, 64))->capture_default_str();
}

void add_gamma(CLI::App* sub, double& gamma) {
  sub->add_option("--gamma", gamma, "fractional order in (0,1)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

void add_grid(CLI::App* sub, Grid& g) {
  sub->add_option("--t-min", g.lo, "first radius")->capture_default_str();
  sub->add_option("--t-max", g.hi, "last radius")->capture_default_str();
  sub->add_option("--points", g.points, "grid size")->check(CLI::Range(2, 1000000))->capture_default_str();
}

void add_warp(CLI::App* sub, WarpOptions& w) {
  sub->add_option("--warp", w.kind, "hyperbolic, perturbed or flat")
      ->check(CLI::IsMember({"hyperbolic", "perturbed", "flat"}))
      ->capture_default_str();
  sub->add_option("--eps", w.eps, "perturbation amplitude")->capture_default_str();
  sub->add_option("--decay", w.decay, "perturbation decay rate (>= 2)")->capture_default_str();
  sub->add_option("--profile", w.profile, "perturbation profile")->capture_default_str();
}

std::string default_output_dir() {
  if (const char* env = std::getenv("AHVOL_OUTPUT_DIR"); env && *env) return env;
  return "ahvol_out";
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Volume-renormalization and fractional Yamabe numerics on hyperbolic models"};
  app.set_config("--config", "", "TOML/INI file; sections name subcommands");
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  out.dir = default_output_dir();
  app.add_option("--out-dir", out.dir, "artifact directory ($AHVOL_OUTPUT_DIR)");
  app.add_flag("--json", out.json, "print the JSON report instead of the summary");

  ConstantsArgs constants;
  auto* c_constants = app.add_subcommand("constants", "sphere constants d_gamma, Q, Y, |S^n|");
  add_n(c_constants, constants.n, 2);
  add_gamma(c_constants, constants.gamma);

  MultiplierArgs multiplier;
  auto* c_multiplier = app.add_subcommand("multiplier", "numeric scattering multipliers vs closed form");
  add_n(c_multiplier, multiplier.n, 2);
  add_gamma(c_multiplier, multiplier.gamma);
  c_multiplier->add_option("--kmax", multiplier.kmax, "largest harmonic degree")
      ->check(CLI::Range(0, 64))
      ->capture_default_str();
  c_multiplier->add_option("--t-max", multiplier.t_max, "integration radius")->capture_default_str();
  c_multiplier->add_option("--rel-tol", multiplier.rel_tol, "integrator tolerance")->capture_default_str();

  AdaptedArgs adapted;
  auto* c_adapted = app.add_subcommand("adapted", "adapted profile, branch coefficients, compactification");
  add_n(c_adapted, adapted.n, 2);
  add_gamma(c_adapted, adapted.gamma);
  c_adapted->add_option("--solve-t-max", adapted.t_max, "integration radius")->capture_default_str();
  c_adapted->add_option("--t-min", adapted.grid.lo, "first sample radius")->capture_default_str();
  c_adapted->add_option("--t-max", adapted.grid.hi, "last sample radius")->capture_default_str();
  c_adapted->add_option("--points", adapted.grid.points, "sample count")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();

  VolumeArgs volume;
  auto* c_volume = app.add_subcommand("volume", "area and ball volume ratios of a warped metric");
  add_n(c_volume, volume.n, 1);
  add_warp(c_volume, volume.warp);
  add_grid(c_volume, volume.grid);

  ChainArgs chain;
  auto* c_chain = app.add_subcommand("chain", "volume ratio chain against the Yamabe lower bound");
  add_n(c_chain, chain.n, 2);
  add_gamma(c_chain, chain.gamma);
  add_warp(c_chain, chain.warp);
  add_grid(c_chain, chain.grid);

  RayleighArgs rayleigh;
  auto* c_rayleigh = app.add_subcommand("rayleigh", "minimize the zonal Rayleigh quotient");
  add_n(c_rayleigh, rayleigh.n, 2);
  add_gamma(c_rayleigh, rayleigh.gamma);
  c_rayleigh->add_option("--kmax", rayleigh.opts.kmax, "largest harmonic degree")
      ->check(CLI::Range(0, 64))
      ->capture_default_str();
  c_rayleigh->add_option("--restarts", rayleigh.opts.restarts, "number of starts")
      ->check(CLI::Range(1, 10000))
      ->capture_default_str();
  c_rayleigh->add_option("--seed", rayleigh.opts.seed, "random seed")->capture_default_str();
  c_rayleigh->add_option("--max-iters", rayleigh.opts.max_iters, "iterations per start")
      ->check(CLI::Range(0, 1000000))
      ->capture_default_str();
  c_rayleigh->add_option("--grad-tol", rayleigh.opts.grad_tol, "gradient norm stop")->capture_default_str();
  c_rayleigh->add_option("--init-scale", rayleigh.opts.init_scale, "spread of random starts")
      ->capture_default_str();

  EscobarArgs escobar_args;
  auto* c_escobar = app.add_subcommand("escobar", "hemisphere compactification checks");
  add_n(c_escobar, escobar_args.n, 2);
  add_grid(c_escobar, escobar_args.grid);

  auto* c_verify = app.add_subcommand("verify-all", "run every acceptance criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_constants) return cmd_constants(constants, out);
    if (*c_multiplier) return cmd_multiplier(multiplier, out);
    if (*c_adapted) return cmd_adapted(adapted, out);
    if (*c_volume) return cmd_volume(volume, out);
    if (*c_chain) return cmd_chain(chain, out);
    if (*c_rayleigh) return cmd_rayleigh(rayleigh, out);
    if (*c_escobar) return cmd_escobar(escobar_args, out);
    if (*c_verify) return cmd_verify_all(out);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidWarpError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "verification error: " << e.what() << '\n';
    return kExitVerification;
  }
  return kExitUsage;
}

}  // namespace ahvol::cli
