#include "lfc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lfc {

std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log, int stride) {
  if (stride < 1) stride = 1;
  const int n = log.n_agents;

  os << "t,sigma";
  for (int k = 1; k <= log.q; ++k) os << ",v[" << k << "]";
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= log.r; ++k) os << ",x" << i << "[" << k << "]";
  }
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= log.q; ++k) os << ",vhat" << i << "[" << k << "]";
  }
  for (int i = 1; i <= n; ++i) os << ",Stilde_norm" << i;
  for (int i = 1; i <= n; ++i) os << ",s" << i;
  for (int i = 1; i <= n; ++i) os << ",u" << i;
  for (int i = 1; i <= n; ++i) {
    for (int k = 1; k <= log.m[i - 1]; ++k) os << ",thetahat" << i << "[" << k << "]";
  }
  os << ",V\n";

  for (int at = 0; at < log.n_points(); at += stride) {
    os << format_double(log.t[at]) << ',' << log.sigma[at];
    for (int k = 0; k < log.q; ++k) os << ',' << format_double(log.v(k, at));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < log.r; ++k) os << ',' << format_double(log.x[i](k, at));
    }
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < log.q; ++k) os << ',' << format_double(log.v_hat[i](k, at));
    }
    for (int i = 0; i < n; ++i) os << ',' << format_double(log.s_tilde_norm(i, at));
    for (int i = 0; i < n; ++i) os << ',' << format_double(log.s(i, at));
    for (int i = 0; i < n; ++i) os << ',' << format_double(log.u(i, at));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < log.m[i]; ++k) {
        os << ',' << format_double(log.theta_hat[i](k, at));
      }
    }
    os << ',' << format_double(log.V(at)) << '\n';
  }
}

void write_errors_csv(std::ostream& os, const TrajectoryLog& log,
                      const SimConfig& cfg, int stride) {
  if (stride < 1) stride = 1;
  const int n = log.n_agents;
  const int r = log.r;
  const int n_w = cfg.exosystem.n_w;

  os << "t,sigma";
  for (int i = 1; i <= n; ++i) os << ",xtrack_norm" << i;
  for (int i = 1; i <= n; ++i) os << ",xhat_err_norm" << i;
  for (int i = 1; i <= n; ++i) os << ",what_err_norm" << i;
  for (int i = 1; i <= n; ++i) os << ",vtilde_norm" << i;
  for (int i = 1; i <= n; ++i) os << ",Stilde_norm" << i;
  os << ",vtilde_norm,Stilde_norm,V\n";

  for (int at = 0; at < log.n_points(); at += stride) {
    os << format_double(log.t[at]) << ',' << log.sigma[at];
    const Eigen::VectorXd x0 = log.v.col(at).head(r);
    const Eigen::VectorXd w = log.v.col(at).tail(n_w);
    double vtilde_sq = 0.0, stilde_sq = 0.0;
    std::vector<double> xtrack(n), xhat_err(n), what_err(n), vtilde(n);
    for (int i = 0; i < n; ++i) {
      xtrack[i] = (log.x[i].col(at) - x0).norm();
      xhat_err[i] = (log.v_hat[i].col(at).head(r) - x0).norm();
      what_err[i] = (log.v_hat[i].col(at).tail(n_w) - w).norm();
      vtilde[i] = (log.v_hat[i].col(at) - log.v.col(at)).norm();
      vtilde_sq += vtilde[i] * vtilde[i];
      stilde_sq += log.s_tilde_norm(i, at) * log.s_tilde_norm(i, at);
    }
    for (int i = 0; i < n; ++i) os << ',' << format_double(xtrack[i]);
    for (int i = 0; i < n; ++i) os << ',' << format_double(xhat_err[i]);
    for (int i = 0; i < n; ++i) os << ',' << format_double(what_err[i]);
    for (int i = 0; i < n; ++i) os << ',' << format_double(vtilde[i]);
    for (int i = 0; i < n; ++i) os << ',' << format_double(log.s_tilde_norm(i, at));
    os << ',' << format_double(std::sqrt(vtilde_sq)) << ','
       << format_double(std::sqrt(stilde_sq)) << ',' << format_double(log.V(at))
       << '\n';
  }
}

void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows) {
  os << "series,lambda,r_squared,t_start,t_end,n_samples,status\n";
  for (const RateRow& row : rows) {
    os << row.series << ',' << format_double(row.fit.lambda) << ','
       << format_double(row.fit.r_squared) << ','
       << format_double(row.fit.t_start) << ',' << format_double(row.fit.t_end)
       << ',' << row.fit.n_samples << ',' << row.status << '\n';
  }
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return static_cast<int>(k);
  }
  return -1;
}

CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty input");
  {
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  }
  table.data.assign(table.columns.size(), {});

  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= table.columns.size()) {
        throw std::runtime_error("read_csv: extra cell on line " +
                                 std::to_string(line_no));
      }
      try {
        table.data[col].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("read_csv: non-numeric cell '" + cell +
                                 "' on line " + std::to_string(line_no));
      }
      ++col;
    }
    if (col != table.columns.size()) {
      throw std::runtime_error("read_csv: short row on line " +
                               std::to_string(line_no));
    }
  }
  return table;
}

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 30;
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 50;
constexpr int kMaxPointsPerSeries = 2000;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

double nice_tick(double span) {
  if (span <= 0.0) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac < 1.5) return mag;
  if (frac < 3.5) return 2.0 * mag;
  if (frac < 7.5) return 5.0 * mag;
  return 10.0 * mag;
}

}  // namespace

void write_line_chart_svg(std::ostream& os, const std::string& title,
                          const std::vector<PlotSeries>& series) {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const PlotSeries& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if (first) {
        x_min = x_max = s.x[k];
        y_min = y_max = s.y[k];
        first = false;
      } else {
        x_min = std::min(x_min, s.x[k]);
        x_max = std::max(x_max, s.x[k]);
        y_min = std::min(y_min, s.y[k]);
        y_max = std::max(y_max, s.y[k]);
      }
    }
  }
  if (x_max - x_min < 1e-300) x_max = x_min + 1.0;
  if (y_max - y_min < 1e-300) {
    y_max = y_min + 1.0;
    y_min -= 1.0;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto px = [&](double x) {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](double y) {
    return kMarginTop + (y_max - y) / (y_max - y_min) * plot_h;
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"18\">" << title << "</text>\n";

  // Axes and ticks.
  os << "<g stroke=\"#cccccc\" stroke-width=\"1\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n";
  const double x_tick = nice_tick(x_max - x_min);
  for (double x = std::ceil(x_min / x_tick) * x_tick; x <= x_max + 1e-12 * x_tick;
       x += x_tick) {
    os << "<line x1=\"" << px(x) << "\" y1=\"" << kMarginTop << "\" x2=\""
       << px(x) << "\" y2=\"" << kHeight - kMarginBottom << "\"/>\n";
    os << "<text x=\"" << px(x) << "\" y=\"" << kHeight - kMarginBottom + 18
       << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">"
       << format_double(x) << "</text>\n";
  }
  const double y_tick = nice_tick(y_max - y_min);
  for (double y = std::ceil(y_min / y_tick) * y_tick; y <= y_max + 1e-12 * y_tick;
       y += y_tick) {
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << py(y) << "\" x2=\""
       << kWidth - kMarginRight << "\" y2=\"" << py(y) << "\"/>\n";
    os << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(y) + 4
       << "\" text-anchor=\"end\" stroke=\"none\" fill=\"black\">"
       << format_double(y) << "</text>\n";
  }
  os << "</g>\n";
  os << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
     << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (std::size_t idx = 0; idx < series.size(); ++idx) {
    const PlotSeries& s = series[idx];
    const char* color = kPalette[idx % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const std::size_t stride =
        std::max<std::size_t>(1, s.x.size() / kMaxPointsPerSeries);
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); k += stride) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      os << px(s.x[k]) << ',' << py(s.y[k]) << ' ';
    }
    os << "\"/>\n";
    const double lx = kMarginLeft + 12;
    const double ly = kMarginTop + 16 + 16 * static_cast<double>(idx);
    os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22
       << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 28 << "\" y=\"" << ly
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace lfc
