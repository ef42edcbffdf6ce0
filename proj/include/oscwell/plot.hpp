#pragma once

#include <string>
#include <vector>

namespace oscwell {

/// Minimal CSV table: one header row, numeric cells.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws MissingArtifact
  std::vector<double> values(const std::string& name) const;
};

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
CsvTable read_csv(const std::string& path);  // throws MissingArtifact when absent/empty

/// Deterministic SVG line plot; one polyline per y-series over the common xs.
std::string svg_line_plot(const std::string& title, const std::vector<double>& xs,
                          const std::vector<std::pair<std::string, std::vector<double>>>& series);

/// Deterministic SVG heatmap of z(i, j) on a uniform grid.
std::string svg_heatmap(const std::string& title, std::size_t nx, std::size_t ny,
                        const std::vector<double>& z);

/// Renders every known plot from the CSV artifacts in `artifact_dir`:
/// lambda1.svg, rates.svg, delta.svg, survival.svg, pi_heatmap.svg.
/// Returns the file names written. Missing inputs throw MissingArtifact.
std::vector<std::string> render_plots(const std::string& artifact_dir);

}  // namespace oscwell
