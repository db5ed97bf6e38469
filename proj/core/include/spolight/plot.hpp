#pragma once
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <spolight/io.hpp>

namespace spolight::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = false;
  int width = 720;
  int height = 480;
};

/// Deterministic SVG line plot: one polyline per series (a circle marker for
/// single-point series), labeled linear or log-10 x axis. Identical input
/// produces byte-identical output.
std::string render_line_svg(std::span<const Series> series, const PlotSpec& spec);

/// Column selection turning a parsed CSV table into plot series: y vs x,
/// optionally grouped into one series per distinct value of series_column.
struct PlotSelection {
  std::string x_column;
  std::string y_column;
  std::optional<std::string> series_column;
  bool log_x = false;
  std::string title;
};

/// Renders the selected table columns; rows with non-finite y are skipped.
/// Throws on an empty table or unknown column names.
std::string render_plot(const io::Table& table, const PlotSelection& sel);

}  // namespace spolight::plot
