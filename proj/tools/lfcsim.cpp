#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lfc/config_io.hpp"
#include "lfc/diagnostics.hpp"
#include "lfc/io.hpp"
#include "lfc/scenario.hpp"
#include "lfc/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitBlowup = 2;

struct RunOptions {
  std::string out_dir;
  double dt_override = 0.0;
  double horizon_override = 0.0;
  int stride = 1;
};

void add_run_options(CLI::App* cmd, RunOptions& opts, bool out_required) {
  auto* out = cmd->add_option("--out", opts.out_dir, "Output directory");
  if (out_required) out->required();
  cmd->add_option("--dt", opts.dt_override, "Override the integration step");
  cmd->add_option("--horizon", opts.horizon_override, "Override the horizon T");
  cmd->add_option("--stride", opts.stride, "Log every n-th grid point in CSVs")
      ->check(CLI::PositiveNumber);
}

std::vector<lfc::RateRow> fit_error_rates(const lfc::TrajectoryLog& log) {
  const int n = log.n_agents;
  std::vector<double> stacked_vtilde(log.n_points()), stacked_stilde(log.n_points());
  std::vector<std::vector<double>> vtilde(n, std::vector<double>(log.n_points()));
  for (int at = 0; at < log.n_points(); ++at) {
    double v_sq = 0.0, s_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double vn = (log.v_hat[i].col(at) - log.v.col(at)).norm();
      vtilde[i][at] = vn;
      v_sq += vn * vn;
      s_sq += log.s_tilde_norm(i, at) * log.s_tilde_norm(i, at);
    }
    stacked_vtilde[at] = std::sqrt(v_sq);
    stacked_stilde[at] = std::sqrt(s_sq);
  }

  std::vector<lfc::RateRow> rows;
  auto add_fit = [&](const std::string& name, const std::vector<double>& series) {
    lfc::RateRow row;
    row.series = name;
    try {
      const auto [a, b] = lfc::tail_window(log.t, series);
      row.fit = lfc::fit_rate(log.t, series, a, b);
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    rows.push_back(row);
  };
  add_fit("Stilde_norm", stacked_stilde);
  add_fit("vtilde_norm", stacked_vtilde);
  for (int i = 0; i < n; ++i) {
    add_fit("vtilde_norm" + std::to_string(i + 1), vtilde[i]);
  }
  return rows;
}

void write_plots(const std::filesystem::path& dir, const lfc::TrajectoryLog& log) {
  const int n = log.n_agents;
  const int r = log.r;
  const int n_w = log.q - log.r;

  auto series_of = [&](auto value, const std::string& label) {
    lfc::PlotSeries s;
    s.label = label;
    s.x = log.t;
    s.y.resize(log.t.size());
    for (int at = 0; at < log.n_points(); ++at) s.y[at] = value(at);
    return s;
  };

  {
    std::vector<lfc::PlotSeries> series;
    for (int k = 0; k < log.q; ++k) {
      series.push_back(series_of([&, k](int at) { return log.v(k, at); },
                                 "v[" + std::to_string(k + 1) + "]"));
    }
    std::ofstream os(dir / "leader_states.svg");
    lfc::write_line_chart_svg(os, "Leader states v(t)", series);
  }
  {
    std::vector<lfc::PlotSeries> series;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < r; ++k) {
        series.push_back(series_of(
            [&, i, k](int at) { return log.v_hat[i](k, at) - log.v(k, at); },
            "xhat" + std::to_string(i + 1) + "[" + std::to_string(k + 1) + "]"));
      }
    }
    std::ofstream os(dir / "xhat_errors.svg");
    lfc::write_line_chart_svg(os, "Reference-estimate errors xhat_i - x0", series);
  }
  {
    std::vector<lfc::PlotSeries> series;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n_w; ++k) {
        series.push_back(series_of(
            [&, i, k](int at) {
              return log.v_hat[i](r + k, at) - log.v(r + k, at);
            },
            "what" + std::to_string(i + 1) + "[" + std::to_string(k + 1) + "]"));
      }
    }
    std::ofstream os(dir / "what_errors.svg");
    lfc::write_line_chart_svg(os, "Disturbance-estimate errors what_i - w", series);
  }
  {
    std::vector<lfc::PlotSeries> series;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < r; ++k) {
        series.push_back(series_of(
            [&, i, k](int at) { return log.x[i](k, at) - log.v(k, at); },
            "x" + std::to_string(i + 1) + "[" + std::to_string(k + 1) + "]"));
      }
    }
    std::ofstream os(dir / "tracking_errors.svg");
    lfc::write_line_chart_svg(os, "Tracking errors x_i - x0", series);
  }
}

int execute_run(lfc::SimConfig cfg, const RunOptions& opts) {
  if (opts.dt_override > 0.0) cfg.settings.dt = opts.dt_override;
  if (opts.horizon_override > 0.0) cfg.settings.horizon = opts.horizon_override;
  const std::string out_dir =
      !opts.out_dir.empty() ? opts.out_dir : cfg.settings.out_dir;
  if (out_dir.empty()) {
    std::cerr << "error: no output directory (pass --out or set sim.out)\n";
    return kExitValidation;
  }

  const lfc::TrajectoryLog log = lfc::run(cfg);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  auto open_or_fail = [&](const char* name) {
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot write " + (dir / name).string());
    return os;
  };
  {
    std::ofstream os = open_or_fail("trajectory.csv");
    lfc::write_trajectory_csv(os, log, opts.stride);
  }
  {
    std::ofstream os = open_or_fail("errors.csv");
    lfc::write_errors_csv(os, log, cfg, opts.stride);
  }
  {
    std::ofstream os = open_or_fail("rates.csv");
    lfc::write_rates_csv(os, fit_error_rates(log));
  }
  write_plots(dir, log);

  std::cout << "wrote " << log.n_points() << " grid points to " << dir.string()
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader-following consensus simulator for switched multi-agent networks"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Integrate a configured scenario");
  run_cmd->add_option("--config", config_path, "JSON configuration file")->required();
  add_run_options(run_cmd, run_opts, false);

  RunOptions rep_opts;
  auto* rep_cmd = app.add_subcommand(
      "replicate-paper", "Run the built-in van der Pol benchmark scenario");
  add_run_options(rep_cmd, rep_opts, true);

  std::string check_config;
  double epsilon = 0.0;
  auto* check_cmd =
      app.add_subcommand("check-graph", "Validate joint connectivity of the schedule");
  check_cmd->add_option("--config", check_config, "JSON configuration file")
      ->required();
  check_cmd->add_option("--epsilon", epsilon, "Window span bound");

  std::string fit_csv, fit_column;
  double fit_from = 0.0, fit_to = 0.0;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a decay rate to a logged norm");
  fit_cmd->add_option("--csv", fit_csv, "CSV file")->required();
  fit_cmd->add_option("--column", fit_column, "Column to fit")->required();
  fit_cmd->add_option("--from", fit_from, "Window start")->required();
  fit_cmd->add_option("--to", fit_to, "Window end")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return execute_run(lfc::load_config(config_path), run_opts);
    }
    if (rep_cmd->parsed()) {
      return execute_run(lfc::vdp_scenario(), rep_opts);
    }
    if (check_cmd->parsed()) {
      const lfc::SimConfig cfg = lfc::load_config(check_config);
      const lfc::SwitchingSchedule sched =
          lfc::materialize_schedule(cfg.schedule, cfg.settings.horizon);
      double eps = epsilon;
      if (eps <= 0.0) {
        eps = cfg.settings.joint_epsilon > 0.0 ? cfg.settings.joint_epsilon
              : cfg.schedule.periodic          ? 2.0 * cfg.schedule.T0
                                               : sched.switch_times.back() +
                                                    2.0 * sched.dwell;
      }
      const auto report = lfc::check_jointly_connected(cfg.family, sched, eps);
      std::cout << "jointly connected: " << (report.jointly_connected ? "true" : "false")
                << "\n";
      for (const auto& [first, last] : report.windows) {
        const double t_a = sched.switch_times[first];
        const double t_b = (last + 1 < static_cast<int>(sched.switch_times.size()))
                               ? sched.switch_times[last + 1]
                               : sched.switch_times[last] + sched.dwell;
        std::cout << "window intervals " << first << ".." << last << " span ["
                  << lfc::format_double(t_a) << ", " << lfc::format_double(t_b)
                  << ")\n";
      }
      return report.jointly_connected ? kExitOk : kExitValidation;
    }
    if (fit_cmd->parsed()) {
      std::ifstream is(fit_csv);
      if (!is) {
        std::cerr << "error: cannot open " << fit_csv << "\n";
        return kExitValidation;
      }
      const lfc::CsvTable table = lfc::read_csv(is);
      const int t_col = table.column_index("t");
      const int y_col = table.column_index(fit_column);
      if (t_col < 0 || y_col < 0) {
        std::cerr << "error: column not found: " << (t_col < 0 ? "t" : fit_column)
                  << "\n";
        return kExitValidation;
      }
      const lfc::RateFit fit =
          lfc::fit_rate(table.data[t_col], table.data[y_col], fit_from, fit_to);
      std::cout << "lambda = " << lfc::format_double(fit.lambda)
                << "\nr_squared = " << lfc::format_double(fit.r_squared)
                << "\nwindow = [" << lfc::format_double(fit.t_start) << ", "
                << lfc::format_double(fit.t_end) << "]\nn_samples = "
                << fit.n_samples << "\n";
      return kExitOk;
    }
  } catch (const lfc::SimError& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitBlowup;
  } catch (const lfc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
