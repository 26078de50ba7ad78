#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lfc/diagnostics.hpp"
#include "lfc/sim.hpp"

namespace lfc {

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double value);

/// One row per grid point with columns
/// t, sigma, v[k], x{i}[k], vhat{i}[k], Stilde_norm{i}, s{i}, u{i},
/// thetahat{i}[k], V (agents and components 1-based).
void write_trajectory_csv(std::ostream& os, const TrajectoryLog& log,
                          int stride = 1);

/// Error norms per agent and stacked: tracking error, reference-estimate
/// error, disturbance-estimate error, v_tilde, S_tilde, plus V.
void write_errors_csv(std::ostream& os, const TrajectoryLog& log,
                      const SimConfig& cfg, int stride = 1);

struct RateRow {
  std::string series;
  RateFit fit;
  std::string status;  // "ok" or the failure reason
};

void write_rates_csv(std::ostream& os, const std::vector<RateRow>& rows);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // column-major

  int column_index(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(std::istream& is);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal self-contained line chart (no plotting dependency); long series
/// are decimated to keep files small.
void write_line_chart_svg(std::ostream& os, const std::string& title,
                          const std::vector<PlotSeries>& series);

}  // namespace lfc
