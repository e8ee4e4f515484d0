#include "agewave/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "agewave/cauchy.hpp"
#include "agewave/config.hpp"
#include "agewave/errors.hpp"
#include "agewave/model.hpp"
#include "agewave/spectral.hpp"
#include "agewave/spreading.hpp"
#include "agewave/textio.hpp"
#include "agewave/waves.hpp"

namespace agewave {

namespace {

using ordered_json = nlohmann::ordered_json;
using clock_type = std::chrono::steady_clock;

constexpr const char* kVersion = "0.1.0";

struct RunContext {
  std::string config_path;
  std::string out_dir = ".";
  bool manifest_only = false;

  Config cfg;
  clock_type::time_point started;
  std::vector<std::string> outputs;

  std::string file(const std::string& name) {
    outputs.push_back(name);
    return (std::filesystem::path(out_dir) / name).string();
  }

  double wall_s() const {
    return std::chrono::duration<double>(clock_type::now() - started).count();
  }
};

void prepare(RunContext& ctx) {
  ctx.started = clock_type::now();
  ctx.cfg = parse_config(ctx.config_path);
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + ctx.out_dir);
}

void write_manifest(RunContext& ctx, const std::string& sub, const ordered_json& grids,
                    const ordered_json& tolerances, const ordered_json& margins) {
  ordered_json m;
  m["tool"] = "agewave";
  m["version"] = kVersion;
  m["subcommand"] = sub;
  m["config_path"] = ctx.config_path;
  m["config_hash"] = hex_digest(fnv1a64(ctx.cfg.text));
  m["dry_run"] = ctx.manifest_only;
  m["grids"] = grids;
  m["tolerances"] = tolerances;
  m["margins"] = margins;
  m["wall_clock_s"] = ctx.wall_s();
  m["outputs"] = ctx.outputs;
  std::string path = (std::filesystem::path(ctx.out_dir) / (sub + "_manifest.json")).string();
  write_text_file(path, m.dump(2) + "\n");
  std::cout << "manifest: " << path << "\n";
}

ModelSpec checked_model(const Config& cfg) {
  ModelSpec model = model_from_config(cfg);
  ValidationReport rep = validate_assumptions(model);
  if (!rep.ok) {
    std::string bad;
    for (const auto& item : rep.items)
      if (!item.pass) bad += (bad.empty() ? "" : ", ") + item.name;
    throw ValidationError("model assumptions failed: " + bad);
  }
  return model;
}

std::vector<double> parse_time_list(const std::string& raw, const std::string& what) {
  std::vector<double> out;
  std::istringstream row(raw);
  std::string cell;
  while (std::getline(row, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ValidationError(what + ": not a number: '" + cell + "'");
    }
  }
  if (out.empty()) throw ValidationError(what + ": empty list");
  return out;
}

Field box_field(const ModelSpec& model, const SpaceGrid& grid, double amp, double radius) {
  return make_field(model, grid,
                    [amp, radius](double, double x) { return std::abs(x) <= radius ? amp : 0.0; });
}

// ---- validate ----------------------------------------------------------

int run_validate(RunContext& ctx) {
  prepare(ctx);
  ModelSpec model = model_from_config(ctx.cfg);
  ordered_json grids = {{"a_max", model.age.a_max}, {"n_a", model.age.n}};

  if (ctx.manifest_only) {
    ctx.outputs.push_back("validate_report.json");
    write_manifest(ctx, "validate", grids, ordered_json::object(), ordered_json::object());
    return 0;
  }

  ValidationReport report = validate_assumptions(model);
  ordered_json checks = ordered_json::array();
  ordered_json margins;
  for (const auto& item : report.items) {
    checks.push_back({{"name", item.name},
                      {"pass", item.pass},
                      {"measured", item.measured},
                      {"detail", item.detail}});
    margins[item.name] = item.measured;
    std::cout << (item.pass ? "PASS " : "FAIL ") << item.name << "  " << item.detail << "\n";
  }
  ordered_json body = {{"ok", report.ok}, {"checks", checks}};
  write_text_file(ctx.file("validate_report.json"), body.dump(2) + "\n");
  write_manifest(ctx, "validate", grids, ordered_json::object(), margins);
  if (!report.ok) throw ValidationError("model assumptions failed, see validate_report.json");
  return 0;
}

// ---- speed -------------------------------------------------------------

int run_speed(RunContext& ctx) {
  prepare(ctx);
  ModelSpec model = checked_model(ctx.cfg);
  ordered_json grids = {{"a_max", model.age.a_max}, {"n_a", model.age.n}};
  ordered_json tolerances = {{"s0_rho_tol", 1e-10}, {"power_tol", 1e-12}, {"speed_tol", 1e-10}};

  if (ctx.manifest_only) {
    ctx.outputs.push_back("speed_dispersion.csv");
    ctx.outputs.push_back("speed_report.json");
    write_manifest(ctx, "speed", grids, tolerances, ordered_json::object());
    return 0;
  }

  DispersionReport rep = dispersion_report(model);
  std::vector<double> cs = ctx.cfg.list("speed.c_list");
  if (cs.empty())
    for (double f : {1.05, 1.2, 1.5, 2.0}) cs.push_back(f * rep.c_star);

  std::vector<std::vector<double>> rows;
  for (double c : cs) {
    auto [l1, l2] = decay_roots(model, rep.s0, c);
    double lc = lambda_of_c(model, c);
    rows.push_back({c, l1, l2, lc, big_lambda(model, lc, c)});
  }
  write_csv(ctx.file("speed_dispersion.csv"),
            {"c", "lambda1", "lambda2", "lambda_of_c", "big_lambda_at_tangency"}, rows);

  ordered_json body = {{"s0", rep.s0},
                       {"rho_at_zero", rep.rho_at_zero},
                       {"c_star", rep.c_star},
                       {"lambda_star", rep.lambda_star},
                       {"eigen_residual", rep.eigen_residual},
                       {"phi", rep.phi}};
  write_text_file(ctx.file("speed_report.json"), body.dump(2) + "\n");

  std::cout << "s0 = " << csv_number(rep.s0) << "\nc_star = " << csv_number(rep.c_star)
            << "\nlambda_star = " << csv_number(rep.lambda_star) << "\n";
  ordered_json margins = {{"eigen_residual", rep.eigen_residual}};
  write_manifest(ctx, "speed", grids, tolerances, margins);
  return 0;
}

// ---- wave --------------------------------------------------------------

struct WaveArgs {
  double c = 0.0;
  bool c_set = false;
  bool critical = false;
  double L_xi = 0.0;
  bool L_set = false;
  int n_xi = 0;
  bool n_set = false;
  double tol = 0.0;
  bool tol_set = false;
  int max_iter = 0;
  bool iter_set = false;
};

int run_wave(RunContext& ctx, const WaveArgs& args) {
  prepare(ctx);
  ModelSpec model = checked_model(ctx.cfg);
  DispersionReport rep = dispersion_report(model);

  double L_xi = args.L_set ? args.L_xi : ctx.cfg.num("wave.L_xi", 30.0);
  int n_xi = args.n_set ? args.n_xi : ctx.cfg.integer("wave.n_xi", 1201);
  double tol = args.tol_set ? args.tol : ctx.cfg.num("wave.tol", 1e-8);
  int max_iter = args.iter_set ? args.max_iter : ctx.cfg.integer("wave.max_iter", 2000);
  SpaceGrid grid{L_xi, n_xi};

  double c = 0.0;
  if (!args.critical) {
    if (args.c_set)
      c = args.c;
    else if (ctx.cfg.has("wave.c"))
      c = ctx.cfg.num("wave.c", 0.0);
    else
      throw ValidationError("wave: provide --c or --critical (or set wave.c)");
  }

  ordered_json grids = {{"a_max", model.age.a_max},
                        {"n_a", model.age.n},
                        {"L_xi", L_xi},
                        {"n_xi", n_xi}};
  ordered_json tolerances = {{"tol", tol}, {"max_iter", max_iter}};

  if (ctx.manifest_only) {
    ctx.outputs.push_back("wave_profile.csv");
    ctx.outputs.push_back("wave_report.json");
    write_manifest(ctx, "wave", grids, tolerances, ordered_json::object());
    return 0;
  }

  ordered_json body;
  WaveProfile profile;
  if (args.critical) {
    CriticalWave cw = critical_wave(model, rep, grid, tol, max_iter);
    profile = std::move(cw.profile);
    body["mode"] = "critical";
    body["speeds"] = cw.speeds;
    body["gaps"] = cw.gaps;
    body["translates"] = cw.translates;
    body["extrapolated_gap"] = cw.extrapolated_gap;
  } else {
    SubSuperPair pair = select_sub_parameters(model, rep, c, grid);
    profile = monotone_iterate(model, pair, grid, tol, max_iter);
    body["mode"] = "fixed_speed";
  }

  EdgeReport edges = edge_limits(profile, model);
  body["c"] = profile.c;
  body["lambda"] = profile.lambda;
  body["iterations"] = profile.iterations;
  body["last_increment"] = profile.last_increment;
  body["residual"] = profile.residual;
  body["m_fit"] = profile.lipschitz_m;
  body["translate"] = profile.translate;
  body["sandwich_low"] = profile.sandwich_low;
  body["sandwich_high"] = profile.sandwich_high;
  body["mono_margin"] = profile.mono_margin;
  body["range"] = {profile.range_min, profile.range_max};
  body["edges"] = {{"left_defect", edges.left_defect},
                   {"right_defect", edges.right_defect},
                   {"left_tol", edges.left_tol},
                   {"right_tol", edges.right_tol},
                   {"ok", edges.ok()}};

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(model.age.n) * grid.n);
  for (int i = 0; i < model.age.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      rows.push_back({model.age.node(i), profile.xi.node(j), profile.at(i, j)});
  write_csv(ctx.file("wave_profile.csv"), {"a", "xi", "w"}, rows);
  write_text_file(ctx.file("wave_report.json"), body.dump(2) + "\n");

  std::cout << "c = " << csv_number(profile.c) << ", iterations = " << profile.iterations
            << ", residual = " << csv_number(profile.residual) << "\n";
  ordered_json margins = {{"residual", profile.residual},
                          {"sandwich_low", profile.sandwich_low},
                          {"mono_margin", profile.mono_margin},
                          {"edge_left", edges.left_defect},
                          {"edge_right", edges.right_defect}};
  write_manifest(ctx, "wave", grids, tolerances, margins);
  return 0;
}

// ---- simulate ----------------------------------------------------------

struct SimulateArgs {
  double T = 0.0;
  bool T_set = false;
  double dt = 0.0;
  bool dt_set = false;
  double domain = 0.0;
  bool domain_set = false;
  std::string closure;
  std::string snapshots;
};

Field initial_field(const Config& cfg, const ModelSpec& model, const SpaceGrid& grid) {
  std::string family = cfg.str("simulate.u0", "box");
  double amp = cfg.num("simulate.u0_amp", 1.0);
  double radius = cfg.num("simulate.u0_radius", 1.0);
  if (radius <= 0.0) throw ValidationError("simulate.u0_radius must be positive");
  if (family == "box") return box_field(model, grid, amp, radius);
  if (family == "gaussian")
    return make_field(model, grid, [amp, radius](double, double x) {
      return amp * std::exp(-x * x / (2.0 * radius * radius));
    });
  throw ValidationError("simulate.u0: unknown family '" + family + "'");
}

int run_simulate(RunContext& ctx, const SimulateArgs& args) {
  prepare(ctx);
  ModelSpec model = checked_model(ctx.cfg);

  double T = args.T_set ? args.T : ctx.cfg.num("simulate.T", 10.0);
  double domain = args.domain_set ? args.domain : ctx.cfg.num("simulate.domain", 40.0);
  int n_x = ctx.cfg.integer("simulate.n_x", 801);
  std::string closure_name =
      args.closure.empty() ? ctx.cfg.str("simulate.closure", "zero") : args.closure;
  SpaceClosure closure;
  if (closure_name == "zero")
    closure = SpaceClosure::zero;
  else if (closure_name == "edge")
    closure = SpaceClosure::edge;
  else
    throw ValidationError("simulate.closure must be 'zero' or 'edge', got '" + closure_name + "'");

  double dt_expected = model.age.h();
  if (args.dt_set && std::abs(args.dt - dt_expected) > 1e-12 * std::max(1.0, dt_expected))
    throw ValidationError("--dt must equal the age step " + csv_number(dt_expected) +
                          " (time marches along age characteristics), got " +
                          csv_number(args.dt));

  std::vector<double> snaps;
  if (!args.snapshots.empty())
    snaps = parse_time_list(args.snapshots, "--snapshots");
  else if (ctx.cfg.has("simulate.snapshots"))
    snaps = ctx.cfg.list("simulate.snapshots");
  else
    snaps = {T};

  SpaceGrid grid{domain, n_x};
  ordered_json grids = {{"a_max", model.age.a_max}, {"n_a", model.age.n},
                        {"domain", domain},         {"n_x", n_x},
                        {"dt", dt_expected},        {"closure", closure_name}};
  ordered_json tolerances = {{"range_tol", 1e-8},
                             {"cfl", dt_expected * (1.0 + model.M)},
                             {"transmission_sup", model.M}};

  if (ctx.manifest_only) {
    for (std::size_t k = 0; k < snaps.size(); ++k)
      ctx.outputs.push_back("simulate_snap" + std::to_string(k) + ".csv");
    write_manifest(ctx, "simulate", grids, tolerances, ordered_json::object());
    return 0;
  }

  Field u0 = initial_field(ctx.cfg, model, grid);
  CauchySimulator sim(model, grid, closure);
  Trajectory traj = sim.run(u0, T, snaps);

  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const Field& f = traj.snapshots[k];
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(model.age.n) * grid.n);
    for (int i = 0; i < model.age.n; ++i)
      for (int j = 0; j < grid.n; ++j)
        rows.push_back({model.age.node(i), grid.node(j), f.at(i, j)});
    write_csv(ctx.file("simulate_snap" + std::to_string(k) + ".csv"), {"a", "x", "u"}, rows);
  }

  ordered_json margins = {{"range_low", traj.range_low}, {"range_high", traj.range_high}};
  ordered_json snap_times = ordered_json::array();
  for (const Field& f : traj.snapshots) snap_times.push_back(f.t);
  grids["snapshots"] = snap_times;

  std::cout << "T = " << csv_number(T) << ", snapshots = " << traj.snapshots.size()
            << ", range = [" << csv_number(traj.range_low) << ", "
            << csv_number(traj.range_high) << "]\n";
  write_manifest(ctx, "simulate", grids, tolerances, margins);
  return 0;
}

// ---- spread ------------------------------------------------------------

struct SpreadArgs {
  std::string experiment = "speed";
  double rho = 0.0;
  bool rho_set = false;
  double c_frac = 0.0;
  bool c_frac_set = false;
  double T = 0.0;
  bool T_set = false;
};

int run_spread(RunContext& ctx, const SpreadArgs& args) {
  prepare(ctx);
  ModelSpec model = checked_model(ctx.cfg);
  DispersionReport rep = dispersion_report(model);

  std::string experiment =
      args.experiment.empty() ? ctx.cfg.str("spread.experiment", "speed") : args.experiment;
  double T = args.T_set ? args.T : ctx.cfg.num("spread.T", 20.0);
  double c_frac = args.c_frac_set ? args.c_frac : ctx.cfg.num("spread.c_frac", 0.5);
  double domain = ctx.cfg.num("spread.domain", 50.0);
  int n_x = ctx.cfg.integer("spread.n_x", 1001);
  double rho_default = experiment == "hair" ? 0.9 : 0.5;
  double rho = args.rho_set ? args.rho : ctx.cfg.num("spread.rho", rho_default);
  SpaceGrid grid{domain, n_x};

  ordered_json grids = {{"a_max", model.age.a_max}, {"n_a", model.age.n},
                        {"domain", domain},         {"n_x", n_x},
                        {"dt", model.age.h()},      {"experiment", experiment}};
  ordered_json tolerances = {{"rho", rho}, {"T", T}};

  bool tracking = experiment == "speed" || experiment == "outer";
  if (ctx.manifest_only) {
    if (tracking) ctx.outputs.push_back("spread_track.csv");
    ctx.outputs.push_back("spread_verdict.json");
    write_manifest(ctx, "spread", grids, tolerances, ordered_json::object());
    return 0;
  }

  ordered_json verdict = {{"experiment", experiment}, {"c_star", rep.c_star}};
  ordered_json margins;

  if (tracking) {
    Field u0 = box_field(model, grid, 1.0, 1.0);
    CauchySimulator sim(model, grid, SpaceClosure::zero);
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) times.push_back(T * k / 40.0);
    Trajectory traj = sim.run(u0, T, times);
    FrontTrack track = track_front(traj, rho);

    std::vector<std::vector<double>> rows;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < track.times.size(); ++k)
      rows.push_back({track.times[k], track.present[k] ? track.x_plus[k] : nan,
                      track.present[k] ? track.x_minus[k] : nan});
    write_csv(ctx.file("spread_track.csv"), {"t", "x_plus", "x_minus"}, rows);

    if (experiment == "speed") {
      SpeedEstimate est = estimate_speed(track);
      verdict["c_hat"] = est.c_right;
      verdict["c_left"] = est.c_left;
      verdict["ratio"] = est.c_right / rep.c_star;
      verdict["points"] = est.points;
      verdict["margins"] = {{"stderr_right", est.stderr_right}, {"asymmetry", est.asymmetry}};
      margins = {{"asymmetry", est.asymmetry}};
      std::cout << "c_hat = " << csv_number(est.c_right)
                << ", ratio = " << csv_number(est.c_right / rep.c_star) << "\n";
    } else {
      double c_outer = ctx.cfg.num("spread.c_outer", rep.c_star + 0.3);
      OuterBoundResult ob = outer_bound_check(traj, model, rep, c_outer);
      verdict["c"] = c_outer;
      verdict["v0"] = ob.v0;
      verdict["lambda"] = ob.lambda;
      verdict["margins"] = {{"worst_margin", ob.worst_margin}};
      margins = {{"worst_margin", ob.worst_margin}};
      std::cout << "outer bound margin = " << csv_number(ob.worst_margin) << "\n";
    }
  } else if (experiment == "inner") {
    Field u0 = box_field(model, grid, 1.0, 1.0);
    InnerSpreadingResult in = inner_spreading_check(model, rep, grid, u0, c_frac, T);
    verdict["interior_min"] = in.interior_min;
    verdict["plateau"] = in.plateau;
    verdict["v0_amp"] = in.v0_amp;
    verdict["margins"] = {{"sub_margin", in.sub_margin}, {"p_cap_excess", in.p_cap_excess}};
    margins = {{"sub_margin", in.sub_margin}, {"p_cap_excess", in.p_cap_excess}};
    std::cout << "interior min = " << csv_number(in.interior_min) << "\n";
  } else if (experiment == "hair") {
    double rho0 = ctx.cfg.num("spread.rho0", 0.1);
    double x0 = ctx.cfg.num("spread.x0", 0.0);
    HairTriggerResult ht = hair_trigger_check(model, grid, rho0, rho, x0, T);
    verdict["reached"] = ht.reached;
    verdict["elapsed"] = ht.elapsed;
    verdict["rho0"] = rho0;
    verdict["rho"] = rho;
    verdict["x0"] = x0;
    verdict["margins"] = {{"worst_margin", ht.worst_margin}};
    margins = {{"worst_margin", ht.worst_margin}};
    std::cout << "reached = " << (ht.reached ? "yes" : "no")
              << ", elapsed = " << csv_number(ht.elapsed) << "\n";
  } else {
    throw ValidationError("spread: unknown experiment '" + experiment +
                          "' (expected speed|outer|inner|hair)");
  }

  write_text_file(ctx.file("spread_verdict.json"), verdict.dump(2) + "\n");
  write_manifest(ctx, "spread", grids, tolerances, margins);
  return 0;
}

// ---- sweep -------------------------------------------------------------

int sweep_threads(std::size_t points) {
  int n = 0;
  if (const char* env = std::getenv("AGEWAVE_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string("AGEWAVE_THREADS: not an integer: '") + env + "'");
    }
    if (n < 1) throw ValidationError("AGEWAVE_THREADS must be >= 1");
  } else {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
  }
  return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(points, 1)));
}

int run_sweep(RunContext& ctx) {
  prepare(ctx);
  ModelSpec base = checked_model(ctx.cfg);

  std::vector<double> kappas = ctx.cfg.list("sweep.kappa");
  std::vector<double> sigmas = ctx.cfg.list("sweep.sigma");
  std::vector<double> amaxes = ctx.cfg.list("sweep.a_max");
  bool any_axis = !(kappas.empty() && sigmas.empty() && amaxes.empty());
  if (!sigmas.empty() && ctx.cfg.str("model.kernel", "gaussian") != "gaussian")
    throw ValidationError("sweep.sigma requires model.kernel = gaussian");

  if (kappas.empty()) kappas = {ctx.cfg.num("model.kappa", 1.0)};
  if (sigmas.empty()) sigmas = {ctx.cfg.num("model.sigma", 1.0)};
  if (amaxes.empty()) amaxes = {ctx.cfg.num("model.a_max", 1.0)};

  struct Point {
    double kappa, sigma, a_max;
  };
  std::vector<Point> points;
  if (any_axis)
    for (double k : kappas)
      for (double s : sigmas)
        for (double a : amaxes) points.push_back({k, s, a});

  ordered_json grids = {{"n_a", base.age.n}, {"points", points.size()}};
  int threads = sweep_threads(points.size());
  grids["threads"] = threads;
  ordered_json tolerances = {{"s0_rho_tol", 1e-10}, {"speed_tol", 1e-10}};

  if (ctx.manifest_only) {
    ctx.outputs.push_back("sweep_summary.csv");
    write_manifest(ctx, "sweep", grids, tolerances, ordered_json::object());
    return 0;
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::vector<double>> rows(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= points.size()) return;
      const Point& p = points[k];
      Config pt = ctx.cfg;
      pt.kv["model.kappa"] = csv_number(p.kappa);
      pt.kv["model.sigma"] = csv_number(p.sigma);
      pt.kv["model.a_max"] = csv_number(p.a_max);
      try {
        ModelSpec model = model_from_config(pt);
        double s0 = find_s0(model);
        double c_star = critical_speed(model, s0);
        double lambda_star = lambda_of_c(model, c_star);
        rows[k] = {p.kappa, p.sigma, p.a_max, s0, c_star, lambda_star, 1.0};
      } catch (const std::exception&) {
        rows[k] = {p.kappa, p.sigma, p.a_max, nan, nan, nan, 0.0};
      }
    }
  };
  std::vector<std::future<void>> jobs;
  for (int t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, worker));
  for (auto& job : jobs) job.get();

  write_csv(ctx.file("sweep_summary.csv"),
            {"kappa", "sigma", "a_max", "s0", "c_star", "lambda_star", "ok"}, rows);
  std::size_t failed = 0;
  for (const auto& row : rows)
    if (row[6] == 0.0) ++failed;
  std::cout << "sweep: " << rows.size() << " points, " << failed << " failed, " << threads
            << " threads\n";
  write_manifest(ctx, "sweep", grids, tolerances, ordered_json::object());
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"age-structured epidemic waves with nonlocal dispersal"};
  app.set_version_flag("--version", std::string("agewave ") + kVersion);
  app.require_subcommand(1);

  RunContext ctx;
  auto add_common = [&ctx](CLI::App* sub) {
    sub->add_option("config", ctx.config_path, "configuration file")->required();
    sub->add_option("--out", ctx.out_dir, "output directory (default .)");
    sub->add_flag("--manifest-only", ctx.manifest_only,
                  "resolve and validate, write only the manifest");
  };

  CLI::App* validate = app.add_subcommand("validate", "check model assumptions");
  add_common(validate);

  CLI::App* speed = app.add_subcommand("speed", "dispersion relation and critical speed");
  add_common(speed);

  WaveArgs wave_args;
  CLI::App* wave = app.add_subcommand("wave", "monotone traveling-wave construction");
  add_common(wave);
  CLI::Option* c_opt = wave->add_option("--c", wave_args.c, "wave speed (> critical)");
  CLI::Option* crit = wave->add_flag("--critical", wave_args.critical,
                                     "descend toward the critical speed");
  crit->excludes(c_opt);
  CLI::Option* L_opt = wave->add_option("--L-xi", wave_args.L_xi, "half-width of the wave grid");
  CLI::Option* n_opt = wave->add_option("--n-xi", wave_args.n_xi, "wave grid points");
  CLI::Option* tol_opt = wave->add_option("--tol", wave_args.tol, "sup-increment stop");
  CLI::Option* iter_opt = wave->add_option("--max-iter", wave_args.max_iter, "sweep limit");

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "initial-value evolution");
  add_common(simulate);
  CLI::Option* T_opt = simulate->add_option("--T", sim_args.T, "final time");
  CLI::Option* dt_opt =
      simulate->add_option("--dt", sim_args.dt, "time step; must equal the age step");
  CLI::Option* dom_opt = simulate->add_option("--domain", sim_args.domain, "space half-width");
  simulate->add_option("--closure", sim_args.closure, "boundary closure: zero|edge");
  simulate->add_option("--snapshots", sim_args.snapshots, "comma-separated snapshot times");

  SpreadArgs spread_args;
  CLI::App* spread = app.add_subcommand("spread", "spreading-speed experiments");
  add_common(spread);
  spread->add_option("--experiment", spread_args.experiment, "speed|outer|inner|hair");
  CLI::Option* rho_opt = spread->add_option("--rho", spread_args.rho, "front level");
  CLI::Option* cf_opt = spread->add_option("--c-frac", spread_args.c_frac,
                                           "interior window fraction of c*");
  CLI::Option* sT_opt = spread->add_option("--T", spread_args.T, "final time");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep of the critical speed");
  add_common(sweep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  wave_args.c_set = c_opt->count() > 0;
  wave_args.L_set = L_opt->count() > 0;
  wave_args.n_set = n_opt->count() > 0;
  wave_args.tol_set = tol_opt->count() > 0;
  wave_args.iter_set = iter_opt->count() > 0;
  sim_args.T_set = T_opt->count() > 0;
  sim_args.dt_set = dt_opt->count() > 0;
  sim_args.domain_set = dom_opt->count() > 0;
  spread_args.rho_set = rho_opt->count() > 0;
  spread_args.c_frac_set = cf_opt->count() > 0;
  spread_args.T_set = sT_opt->count() > 0;

  try {
    if (validate->parsed()) return run_validate(ctx);
    if (speed->parsed()) return run_speed(ctx);
    if (wave->parsed()) return run_wave(ctx, wave_args);
    if (simulate->parsed()) return run_simulate(ctx, sim_args);
    if (spread->parsed()) return run_spread(ctx, spread_args);
    if (sweep->parsed()) return run_sweep(ctx);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical check failed: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
  return 1;
}

}  // namespace agewave
