#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <spolight/analysis.hpp>
#include <spolight/counting.hpp>
#include <spolight/io.hpp>
#include <spolight/plasmon.hpp>
#include <spolight/plot.hpp>
#include <spolight/simulator.hpp>

namespace spolight::cli {

namespace {

void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  fn(file);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  file << text;
}

// Either a fixed lambda or eta with lambda = eta * x; exactly one required.
struct LambdaChoice {
  std::optional<double> lambda;
  std::optional<double> eta;

  counting::LambdaMode resolve() const {
    if (lambda.has_value() == eta.has_value())
      throw CLI::ValidationError("exactly one of --lambda or --eta is required");
    return lambda ? counting::LambdaMode::fixed(*lambda)
                  : counting::LambdaMode::proportional(*eta);
  }
};

void add_lambda_flags(CLI::App* cmd, LambdaChoice& lc) {
  auto* l = cmd->add_option("--lambda", lc.lambda, "fixed occupation parameter lambda")
                ->check(CLI::NonNegativeNumber);
  auto* e = cmd->add_option("--eta", lc.eta, "detection efficiency eta, uses lambda = eta*x")
                ->check(CLI::Range(1e-12, 1.0));
  l->excludes(e);
  e->excludes(l);
}

// All CLI output follows one display rule: values rounded to the requested
// precision with round-half-even ties (IEEE correct rounding in fmt).
std::string fixed_str(std::optional<double> v, int decimals) {
  if (!v) return "nan";
  return fmt::format("{:.{}f}", *v, decimals);
}

struct PlasmonOpts {
  plasmon::OpticalConfig cfg;
  double mu_over_omega0 = 0.032;
  int precision = 6;
  std::string out_path;
};

void run_plasmon(const PlasmonOpts& o, std::ostream& fallback) {
  const plasmon::PlasmonDerived d = plasmon::derive_plasmon_parameters(o.cfg, o.mu_over_omega0);
  with_output(o.out_path, fallback, [&](std::ostream& os) {
    const int p = o.precision;
    const auto row = [&](const char* name, double value, const char* unit) {
      fmt::print(os, "{:<12} = {:.{}g} {}\n", name, value, p, unit);
    };
    row("ksp_re", d.ksp_re, "(omega0/c)");
    row("ksp_im", d.ksp_im, "(omega0/c)");
    row("k2z_re", d.k2z_re, "(omega0/c)");
    row("k2z_im", d.k2z_im, "(omega0/c)");
    row("Lsp", d.lsp_nm, "nm");
    row("delta2", d.delta2_nm, "nm");
    row("theta_t", d.theta_t_deg, "deg");
    row("theta_c", d.theta_c_deg, "deg");
    row("Asp", d.asp_nm2, "nm^2");
    row("Mtr", d.mtr, "");
    row("sigma", d.sigma, "");
    row("delta_nu", d.delta_nu_hz, "1/s");
    row("mu", d.mu_hz, "1/s");
    row("tau_s", d.tau_s_s, "s");
    row("tau_c", d.tau_c_s, "s");
  });
}

struct MomentsOpts {
  double s = 1.0;
  double x = 5.0;
  LambdaChoice lc;
  int precision = 4;
  std::string out_path;
};

void run_moments(const MomentsOpts& o, std::ostream& fallback) {
  counting::CountingParams p;
  p.s = o.s;
  p.x = o.x;
  p.lambda = o.lc.resolve();
  const counting::MomentSet m = counting::moments(p);
  with_output(o.out_path, fallback, [&](std::ostream& os) {
    fmt::print(os, "mean,variance,fano,R\n{},{},{},{}\n", fixed_str(m.mean, o.precision),
               fixed_str(m.variance, o.precision), fixed_str(m.fano, o.precision),
               fixed_str(m.reduced_covariance, o.precision));
  });
}

struct DistOpts {
  double s = 1.0;
  double x = 5.0;
  LambdaChoice lc;
  std::optional<int> n_max;
  std::string out_path;
};

void run_dist(const DistOpts& o, std::ostream& fallback) {
  counting::CountingParams p;
  p.s = o.s;
  p.x = o.x;
  p.lambda = o.lc.resolve();
  with_output(o.out_path, fallback, [&](std::ostream& os) {
    fmt::print(os, "n,W\n");
    if (o.n_max) {
      for (int n = 0; n <= *o.n_max; ++n)
        fmt::print(os, "{},{:.9g}\n", n, counting::weight(p, n));
    } else {
      const counting::CountDistribution d = counting::distribution(p);
      for (std::size_t n = 0; n < d.weights.size(); ++n)
        fmt::print(os, "{},{:.9g}\n", n, d.weights[n]);
    }
  });
}

struct SweepOpts {
  counting::SweepQuantity quantity = counting::SweepQuantity::mean;
  std::vector<double> s_list;
  LambdaChoice lc;
  double x_min = 0.1;
  double x_max = 50.0;
  int x_steps = 40;
  bool log_x = false;
  std::string out_path;
  std::string svg_path;
};

void run_sweep(const SweepOpts& o, std::ostream& fallback, std::ostream& err) {
  if (o.log_x && !(o.x_min > 0))
    throw CLI::ValidationError("--log needs --x-min > 0");
  std::vector<counting::CountingParams> grid;
  const counting::LambdaMode mode = o.lc.resolve();
  for (double s : o.s_list) {
    for (int i = 0; i < o.x_steps; ++i) {
      const double f = o.x_steps == 1 ? 0.0 : static_cast<double>(i) / (o.x_steps - 1);
      counting::CountingParams p;
      p.s = s;
      p.lambda = mode;
      p.x = o.log_x ? o.x_min * std::pow(o.x_max / o.x_min, f)
                    : o.x_min + f * (o.x_max - o.x_min);
      grid.push_back(p);
    }
  }
  const auto rows = counting::sweep(grid, o.quantity);
  for (const auto& row : rows)
    if (!row.error.empty())
      fmt::print(err, "warning: s={} x={}: {}\n", row.s, row.x, row.error);
  with_output(o.out_path, fallback, [&](std::ostream& os) { io::write_sweep_csv(os, rows); });

  if (!o.svg_path.empty()) {
    io::Table table;
    table.columns = {"s", "lambda", "x", "value"};
    for (const auto& row : rows)
      table.rows.push_back({row.s, row.lambda, row.x,
                            row.value.value_or(std::numeric_limits<double>::quiet_NaN())});
    plot::PlotSelection sel;
    sel.x_column = "x";
    sel.y_column = "value";
    sel.series_column = "s";
    sel.log_x = o.log_x;
    write_text_file(o.svg_path, plot::render_plot(table, sel));
  }
}

struct SimulateOpts {
  sim::SimConfig cfg;
  std::string out_path;
};

void run_simulate(const SimulateOpts& o, std::ostream& fallback) {
  o.cfg.validate();
  with_output(o.out_path, fallback, [&](std::ostream& os) {
    sim::ExperimentStream stream(o.cfg);
    const int channels = o.cfg.topology == sim::Topology::beam_splitter ? 2 : 1;
    io::BinnedCsvWriter writer(os, o.cfg.bin_width_ns, channels);
    BinnedCountStream chunk;
    constexpr std::size_t chunk_bins = 4'000'000;  // bounded memory for long runs
    while (stream.next(chunk, chunk_bins) > 0) writer.add_chunk(chunk);
  });
}

struct AnalyzeOpts {
  std::string in_path;
  analysis::Mode mode = analysis::Mode::cross_correlation;
  int channel = 1;  // 1-based on the command line
  int min_delay = -1;
  int max_delay = 80;
  int runs = 10;
  std::string out_path;
  std::string svg_path;
};

void run_analyze(const AnalyzeOpts& o, std::ostream& fallback, std::ostream& err) {
  std::ifstream in(o.in_path);
  if (!in) throw std::runtime_error("cannot open input file: " + o.in_path);
  const BinnedCountStream stream = io::read_binned_csv(in);

  const bool is_auto = o.mode == analysis::Mode::auto_correlation;
  const std::size_t min_delay =
      o.min_delay >= 0 ? static_cast<std::size_t>(o.min_delay) : (is_auto ? 1 : 0);
  if (is_auto && min_delay == 0)
    fmt::print(err, "warning: auto-correlation at delay 0 includes the self-product bias\n");
  if (static_cast<std::size_t>(o.max_delay) < min_delay)
    throw CLI::ValidationError("--max-delay is below the first delay");
  std::vector<std::size_t> delays;
  for (std::size_t d = min_delay; d <= static_cast<std::size_t>(o.max_delay); ++d)
    delays.push_back(d);

  const analysis::CorrelationResult result =
      o.runs <= 1 ? analysis::correlation(stream, delays, o.mode, o.channel - 1)
                  : analysis::run_split(stream, static_cast<std::size_t>(o.runs), delays, o.mode,
                                        o.channel - 1);
  with_output(o.out_path, fallback,
              [&](std::ostream& os) { io::write_correlation_csv(os, result); });

  if (!o.svg_path.empty()) {
    io::Table table;
    table.columns = {"delay_bins", "delay_ns", "K", "R", "stderr_R"};
    for (std::size_t i = 0; i < result.delays.size(); ++i)
      table.rows.push_back({static_cast<double>(result.delays[i]), result.delay_ns[i],
                            result.K[i], result.R[i], result.stderr_R[i]});
    plot::PlotSelection sel;
    sel.x_column = "delay_ns";
    sel.y_column = "R";
    write_text_file(o.svg_path, plot::render_plot(table, sel));
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"spolight: surface-plasmon light counting statistics toolkit"};
  app.require_subcommand(1);

  PlasmonOpts po;
  auto* plasmon_cmd =
      app.add_subcommand("plasmon", "derived surface-plasmon quantities of the Kretschmann stack");
  plasmon_cmd->add_option("--lambda0-nm", po.cfg.lambda0_nm, "vacuum wavelength (nm)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--eps-r", po.cfg.eps_r, "|Re eps2| of the metal")
      ->capture_default_str();
  plasmon_cmd->add_option("--eps-i", po.cfg.eps_i, "Im eps2 of the metal")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--eps1", po.cfg.eps1, "substrate permittivity")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--eps3", po.cfg.eps3, "exit medium permittivity")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--d-nm", po.cfg.d_nm, "metal thickness (nm)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--ly-nm", po.cfg.ly_nm, "transverse spot extent (nm)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--rel-linewidth", po.cfg.rel_linewidth, "Delta lambda / lambda0")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  plasmon_cmd->add_option("--mu-over-omega0", po.mu_over_omega0, "relaxation rate over omega0")
      ->check(CLI::PositiveNumber)->capture_default_str();
  plasmon_cmd->add_option("--precision", po.precision, "significant digits")
      ->check(CLI::Range(1, 17))->capture_default_str();
  plasmon_cmd->add_option("--out", po.out_path, "output path (default: stdout)");
  plasmon_cmd->callback([&] { run_plasmon(po, out); });

  MomentsOpts mo;
  auto* moments_cmd = app.add_subcommand("moments", "mean, variance, Fano factor and R");
  moments_cmd->add_option("--s", mo.s, "coupling parameter")
      ->required()->check(CLI::PositiveNumber);
  moments_cmd->add_option("--x", mo.x, "dimensionless interaction time sigma*mu*tau")
      ->required()->check(CLI::NonNegativeNumber);
  add_lambda_flags(moments_cmd, mo.lc);
  moments_cmd->add_option("--precision", mo.precision, "decimal places")
      ->check(CLI::Range(0, 17))->capture_default_str();
  moments_cmd->add_option("--out", mo.out_path, "output path (default: stdout)");
  moments_cmd->callback([&] { run_moments(mo, out); });

  DistOpts dopt;
  auto* dist_cmd = app.add_subcommand("dist", "counting weights W_n");
  dist_cmd->add_option("--s", dopt.s, "coupling parameter")
      ->required()->check(CLI::PositiveNumber);
  dist_cmd->add_option("--x", dopt.x, "dimensionless interaction time")
      ->required()->check(CLI::NonNegativeNumber);
  add_lambda_flags(dist_cmd, dopt.lc);
  dist_cmd->add_option("--n-max", dopt.n_max, "largest n to print")
      ->check(CLI::NonNegativeNumber);
  dist_cmd->add_option("--out", dopt.out_path, "output path (default: stdout)");
  dist_cmd->callback([&] { run_dist(dopt, out); });

  SweepOpts so;
  auto* sweep_cmd = app.add_subcommand("sweep", "quantity over an (s, x) grid, CSV output");
  const std::map<std::string, counting::SweepQuantity> quantity_names{
      {"mean", counting::SweepQuantity::mean},
      {"fano", counting::SweepQuantity::fano},
      {"reduced_covariance", counting::SweepQuantity::reduced_covariance}};
  sweep_cmd->add_option("--quantity", so.quantity, "mean | fano | reduced_covariance")
      ->required()->transform(CLI::CheckedTransformer(quantity_names));
  sweep_cmd->add_option("--s-list", so.s_list, "comma-separated coupling values")
      ->required()->delimiter(',');
  add_lambda_flags(sweep_cmd, so.lc);
  sweep_cmd->add_option("--x-min", so.x_min, "grid start")->capture_default_str();
  sweep_cmd->add_option("--x-max", so.x_max, "grid end")->capture_default_str();
  sweep_cmd->add_option("--x-steps", so.x_steps, "grid points")
      ->check(CLI::Range(1, 1000000))->capture_default_str();
  sweep_cmd->add_flag("--log", so.log_x, "log-spaced x grid");
  sweep_cmd->add_option("--out", so.out_path, "output path (default: stdout)");
  sweep_cmd->add_option("--svg", so.svg_path, "also render an SVG line plot to this path");
  sweep_cmd->callback([&] { run_sweep(so, out, err); });

  SimulateOpts simo;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo detection chain, binned CSV output");
  sim_cmd->add_option("--flux", simo.cfg.photon_flux_hz, "photon flux (1/s)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  sim_cmd->add_option("--duration-s", simo.cfg.duration_s, "observation window (s)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--efficiency", simo.cfg.quantum_efficiency, "detector quantum efficiency")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  sim_cmd->add_option("--dead-time-ns", simo.cfg.dead_time_ns, "non-paralyzable dead time (ns)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  sim_cmd->add_option("--bin-ns", simo.cfg.bin_width_ns, "bin width (ns)")
      ->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--split-ratio", simo.cfg.split_ratio, "probability of channel 1")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  const std::map<std::string, sim::Topology> topology_names{
      {"single_detector", sim::Topology::single_detector},
      {"beam_splitter", sim::Topology::beam_splitter}};
  sim_cmd->add_option("--topology", simo.cfg.topology, "single_detector | beam_splitter")
      ->transform(CLI::CheckedTransformer(topology_names))
      ->default_str("beam_splitter");
  sim_cmd->add_option("--seed", simo.cfg.seed, "master seed")->capture_default_str();
  sim_cmd->add_option("--out", simo.out_path, "output path (default: stdout)");
  sim_cmd->callback([&] { run_simulate(simo, out); });

  AnalyzeOpts ao;
  auto* an_cmd = app.add_subcommand("analyze", "delayed correlations of a binned CSV");
  an_cmd->add_option("--in", ao.in_path, "binned CSV input path")->required();
  const std::map<std::string, analysis::Mode> mode_names{
      {"auto", analysis::Mode::auto_correlation},
      {"cross", analysis::Mode::cross_correlation}};
  an_cmd->add_option("--mode", ao.mode, "auto | cross")
      ->transform(CLI::CheckedTransformer(mode_names))->default_str("cross");
  an_cmd->add_option("--channel", ao.channel, "channel for auto mode (1 or 2)")
      ->check(CLI::Range(1, 2))->capture_default_str();
  an_cmd->add_option("--min-delay", ao.min_delay, "first delay (default: 0 cross, 1 auto)");
  an_cmd->add_option("--max-delay", ao.max_delay, "last delay (bins)")
      ->check(CLI::NonNegativeNumber)->capture_default_str();
  an_cmd->add_option("--runs", ao.runs, "run-split segments for error bars (1 = no split)")
      ->check(CLI::Range(1, 1000000))->capture_default_str();
  an_cmd->add_option("--out", ao.out_path, "output path (default: stdout)");
  an_cmd->add_option("--svg", ao.svg_path, "also render an SVG correlogram to this path");
  an_cmd->callback([&] { run_analyze(ao, out, err); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace spolight::cli
