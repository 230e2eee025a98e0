#include "magwave/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "magwave/errors.hpp"
#include "magwave/report_io.hpp"

namespace magwave::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kCommands[] = {"spectrum", "sweep",     "weyl",      "effective1d",
                                     "hardy",    "gauge-check", "gf-bounds", "convergence"};

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  std::ostream& out;
  Json result = Json::object();
  bool converged = true;

  std::ofstream open(const std::string& name) const {
    std::ofstream f(out_dir / name);
    if (!f) throw std::ios_base::failure("cannot write '" + (out_dir / name).string() + "'");
    f.exceptions(std::ios::failbit | std::ios::badbit);
    return f;
  }
};

Grid grid_of(const RunConfig& cfg) { return build_grid(cfg.grid.L, cfg.grid.Nx, cfg.grid.Ny); }

std::string fmt(double v, int digits = 10) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

void run_spectrum(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = grid_of(cfg);
  const SpectrumResult s = ground_state(cfg.profile, cfg.field, grid, cfg.solver);
  ctx.result = spectrum_json(s, cfg.grid, cfg.profile, cfg.field);
  ctx.converged = s.converged;
  auto f = ctx.open("spectrum.csv");
  write_spectrum_csv(f, s);
  ctx.out << "eigenvalues (delta = " << fmt(s.delta, 4) << "):\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    ctx.out << "  " << i + 1 << "  " << fmt(s.eigenvalues[i], 12) << "  residual " << fmt(s.residual_norms[i], 3)
            << (s.below_threshold[i] ? "  below threshold" : "") << '\n';
  ctx.out << "count_below = " << count_below_threshold(s, s.delta).count << '\n';
}

void run_sweep(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.sweep.alphas.empty()) throw ConfigError("sweep.alphas", "missing required key");
  SweepOptions opts;
  opts.grid = cfg.grid;
  opts.eigen = cfg.solver;
  opts.bisection_steps = cfg.sweep.bisection_steps;
  const SweepResult s = alpha_sweep(cfg.profile, cfg.field, cfg.sweep.alphas, opts);
  ctx.result = to_json(s);
  for (const SweepPoint& pt : s.points) ctx.converged = ctx.converged && pt.converged;
  auto csv = ctx.open("sweep.csv");
  write_sweep_csv(csv, s);
  auto dat = ctx.open("sweep.dat");
  write_sweep_gnuplot(dat, s);
  ctx.out << "alpha  lambda1(B)  lambda1(0)\n";
  for (const SweepPoint& pt : s.points)
    ctx.out << "  " << fmt(pt.alpha, 6) << "  " << fmt(pt.lambda_magnetic) << (pt.flag_magnetic ? "*" : " ") << "  "
            << fmt(pt.lambda_nonmagnetic) << (pt.flag_nonmagnetic ? "*" : " ") << '\n';
  if (s.alpha_critical)
    ctx.out << "alpha_critical in [" << fmt(s.alpha_critical->first) << ", " << fmt(s.alpha_critical->second) << "]\n";
  else
    ctx.out << "no bracket found\n";
  if (!s.monotone) ctx.out << "magnetic flag is not monotone in alpha\n";
}

void run_weyl(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  for (double n : cfg.weyl.n)
    if (!(2.0 * n < cfg.grid.L)) throw ConfigError("weyl.n", "every n must satisfy 2n < grid.L");
  const Grid grid = grid_of(cfg);
  auto csv_file = ctx.open("weyl.csv");
  CsvWriter csv(csv_file, {"n", "residual_sq", "norm_sq"});
  Json rows = Json::array();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double n : cfg.weyl.n) {
    const WeylResidual w = weyl_residual(cfg.profile, cfg.field, cfg.weyl.k, n, grid);
    csv << n << w.residual_sq << w.norm_sq;
    csv.end_row();
    rows.push_back(Json{{"n", n}, {"residual_sq", w.residual_sq}, {"norm_sq", w.norm_sq}});
    const double lx = std::log(n);
    const double ly = std::log(w.residual_sq);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ctx.out << "  n = " << fmt(n, 6) << "  residual^2 = " << fmt(w.residual_sq) << "  |phi|^2 = " << fmt(w.norm_sq) << '\n';
  }
  const double m = static_cast<double>(cfg.weyl.n.size());
  const double denom = m * sxx - sx * sx;
  const double slope = cfg.weyl.n.size() >= 2 && denom != 0.0 ? (m * sxy - sx * sy) / denom : std::nan("");
  ctx.result = Json{{"k", cfg.weyl.k}, {"rows", rows}};
  ctx.result["loglog_slope"] = std::isfinite(slope) ? Json(slope) : Json(nullptr);
  ctx.out << "log-log slope = " << fmt(slope, 6) << '\n';
}

void run_effective1d(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const std::vector<double> xs = default_profile_samples(cfg.profile);
  const EffectivePotential1D V = effective_potential(cfg.profile, xs);
  const std::vector<double> ev = solve_1d(V, cfg.effective1d.L1, cfg.effective1d.N1);
  const ConditionReport cond = check_discrete_condition(cfg.profile, xs);
  auto csv_file = ctx.open("effective1d.csv");
  CsvWriter csv(csv_file, {"x", "V"});
  for (std::size_t i = 0; i < V.xs.size(); ++i) {
    csv << V.xs[i] << V.V[i];
    csv.end_row();
  }
  Json evs = Json::array();
  for (double e : ev) evs.push_back(e);
  ctx.result = Json{{"negative_eigenvalues", evs},
                    {"cutoff", kNegativeCutoff1D},
                    {"condition", {{"max_violation", cond.max_violation},
                                   {"strict_somewhere", cond.strict_somewhere},
                                   {"satisfied", cond.satisfied}}}};
  if (ev.empty())
    ctx.out << "no negative eigenvalues\n";
  else
    for (double e : ev) ctx.out << "  negative eigenvalue " << fmt(e, 12) << '\n';
  ctx.out << "bound-state condition " << (cond.satisfied ? "satisfied" : "violated") << " (max violation "
          << fmt(cond.max_violation, 4) << ")\n";
}

void run_hardy(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = grid_of(cfg);
  const HardyWeight w = cfg.hardy.weight == HardyWeightKind::unit ? HardyWeight::unit()
                                                                  : HardyWeight::plateau(cfg.hardy.height, cfg.hardy.width);
  const HardyResult h = hardy_estimate(cfg.field, w, grid, cfg.solver, cfg.hardy.threshold);
  ctx.converged = h.converged;
  ctx.result = Json{{"C_est", h.C_est}, {"threshold", h.threshold}, {"converged", h.converged},
                    {"note", "truncated strip [-L, L]; C_est tends to 0 as L grows when B = 0"}};
  auto csv_file = ctx.open("hardy.csv");
  CsvWriter csv(csv_file, {"L", "C_est", "threshold"});
  csv << cfg.grid.L << h.C_est << h.threshold;
  csv.end_row();
  ctx.out << "C_est = " << fmt(h.C_est, 12) << "  (threshold " << fmt(h.threshold, 12) << ")\n";
}

void run_gauge_check(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = grid_of(cfg);
  const GaugeOptions gopts{cfg.gauge.nquad, true};
  auto csv_file = ctx.open("gauge_check.csv");
  CsvWriter csv(csv_file, {"h_fd", "max_error"});
  Json rows = Json::array();
  std::vector<double> errors;
  for (double h : cfg.gauge.h_fd) {
    const double e = curl_check(cfg.field, grid, h, gopts);
    errors.push_back(e);
    csv << h << e;
    csv.end_row();
    rows.push_back(Json{{"h_fd", h}, {"max_error", e}});
    ctx.out << "  h_fd = " << fmt(h, 4) << "  max |curl a - B| = " << fmt(e, 6) << '\n';
  }
  Json orders = Json::array();
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double o = std::log(errors[i - 1] / errors[i]) / std::log(cfg.gauge.h_fd[i - 1] / cfg.gauge.h_fd[i]);
    orders.push_back(std::isfinite(o) ? Json(o) : Json(nullptr));
  }
  ctx.result = Json{{"rows", rows}, {"orders", orders}};
  const GaugeSamples gs = pullback_gauge(cfg.field, cfg.profile, grid, gopts);
  auto samples = ctx.open("gauge_samples.csv");
  write_gauge_csv(samples, gs);
  ctx.result["sup_a1"] = gs.sup_a1;
  ctx.result["sup_a2"] = gs.sup_a2;
}

void run_gf_bounds(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const Grid grid = grid_of(cfg);
  const GaugeSamples gs = pullback_gauge(cfg.field, cfg.profile, grid, GaugeOptions{cfg.gauge.nquad, true});
  std::vector<double> xs(static_cast<std::size_t>(cfg.gf.samples));
  for (int i = 0; i < cfg.gf.samples; ++i)
    xs[static_cast<std::size_t>(i)] = cfg.gf.x_min + (cfg.gf.x_max - cfg.gf.x_min) * i / (cfg.gf.samples - 1);
  const GfReport r = gf_bounds(cfg.profile, gs.sup_a1, gs.sup_a2, xs, GfOptions{cfg.gf.denominator, cfg.gf.h_fd});
  auto csv_file = ctx.open("gf_bounds.csv");
  CsvWriter csv(csv_file, {"x", "G1", "G1_d1", "G1_d2", "G2"});
  for (std::size_t i = 0; i < r.xs.size(); ++i) {
    csv << r.xs[i] << r.G1[i] << r.G1_d1[i] << r.G1_d2[i] << r.G2[i];
    csv.end_row();
  }
  ctx.result = Json{{"C", std::isfinite(r.C) ? Json(r.C) : Json(nullptr)},
                    {"g_norm", r.g_norm},
                    {"sup_a1", gs.sup_a1},
                    {"sup_a2", gs.sup_a2}};
  ctx.out << "C = " << fmt(r.C) << "  ||g|| = " << fmt(r.g_norm) << '\n';
}

void run_convergence(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  if (cfg.convergence.empty()) throw ConfigError("convergence.grids", "missing required key");
  const ConvergenceReport r = convergence_study(cfg.profile, cfg.field, cfg.convergence, cfg.solver);
  for (const LadderEntry& e : r.runs) ctx.converged = ctx.converged && e.converged;
  ctx.result = to_json(r);
  auto csv_file = ctx.open("convergence.csv");
  CsvWriter csv(csv_file, {"L", "Nx", "Ny", "index", "eigenvalue"});
  for (const LadderEntry& e : r.runs)
    for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
      csv << e.grid.L << e.grid.Nx << e.grid.Ny << static_cast<long long>(i) << e.eigenvalues[i];
      csv.end_row();
    }
  for (std::size_t i = 0; i < r.measured_order.size(); ++i)
    ctx.out << "  eigenvalue " << i + 1 << ": order " << fmt(r.measured_order[i], 4)
            << (i < r.discrete.size() ? (r.discrete[i] ? "  discrete" : "  not discrete") : "") << '\n';
}

const std::map<std::string, std::function<void(Context&)>>& handlers() {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"spectrum", run_spectrum},       {"sweep", run_sweep},         {"weyl", run_weyl},
      {"effective1d", run_effective1d}, {"hardy", run_hardy},         {"gauge-check", run_gauge_check},
      {"gf-bounds", run_gf_bounds},     {"convergence", run_convergence}};
  return table;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream s;
  s << std::put_time(&utc, "%FT%TZ");
  return s.str();
}

}  // namespace

std::string usage() {
  std::string s = "usage: magwave <subcommand> <config.ini> [--out DIR]\n\nsubcommands:\n";
  for (const char* c : kCommands) s += std::string("  ") + c + "\n";
  s += std::string("\nThe output directory defaults to [output] dir; ") + kOutDirEnv + " and --out override it.\n";
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Magnetic Dirichlet Laplacian on deformed strips", "magwave"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_override;
  for (const char* c : kCommands) {
    CLI::App* sub = app.add_subcommand(c);
    sub->add_option("config", config_path, "config file")->required();
    sub->add_option("--out", out_override, "output directory");
  }

  if (!args.empty() && !args.front().starts_with("-") && !handlers().contains(args.front())) {
    err << "error: unknown subcommand '" << args.front() << "'\n\n" << usage();
    return kValidation;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << usage();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << usage();
    return kValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    Context ctx{load_config_file(config_path), {}, out};
    std::string dir = ctx.cfg.output_dir;
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') dir = env;
    if (!out_override.empty()) dir = out_override;
    ctx.out_dir = dir;
    fs::create_directories(ctx.out_dir);

    out << "magwave " << command << "  (config " << config_path << ")\n";
    handlers().at(command)(ctx);

    Json doc{{"command", command}, {"config", to_json(ctx.cfg)}, {"result", ctx.result}, {"converged", ctx.converged}};
    doc["metadata"] = Json{{"timestamp", timestamp()}};
    auto f = ctx.open(command + ".json");
    f << doc.dump(2) << '\n';
    out << "wrote " << (ctx.out_dir / (command + ".json")).string() << '\n';
    if (!ctx.converged) {
      err << "error: eigensolver did not converge\n";
      return kNotConverged;
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kValidation;
  } catch (const ArgumentError& e) {
    err << "validation error: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    err << "io error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::ios_base::failure& e) {
    err << "io error: " << e.what() << '\n';
    return kIoFailure;
  }
}

}  // namespace magwave::cli
