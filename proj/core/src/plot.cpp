#include <spolight/plot.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace spolight::plot {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Extent {
  double lo = 0.0, hi = 1.0;
};

Extent extent_of(std::span<const Series> series, bool use_x, bool log_x) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Series& s : series) {
    const auto& v = use_x ? s.x : s.y;
    for (double value : v) {
      if (!std::isfinite(value)) continue;
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("render_line_svg: no finite data to plot");
  if (use_x && log_x && lo <= 0)
    throw std::invalid_argument("render_line_svg: log x axis needs positive x values");
  if (lo == hi) {  // widen a degenerate extent
    const double pad = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.5;
    lo -= log_x && use_x ? 0 : pad;
    hi += pad;
    if (use_x && log_x && lo <= 0) lo = hi / 10.0;
  }
  return {lo, hi};
}

std::string svg_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_svg(std::span<const Series> series, const PlotSpec& spec) {
  if (series.empty()) throw std::invalid_argument("render_line_svg: empty series selection");
  for (const Series& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("render_line_svg: series x/y length mismatch");
    if (s.x.empty()) throw std::invalid_argument("render_line_svg: empty series");
  }

  const Extent ex = extent_of(series, true, spec.log_x);
  const Extent ey = extent_of(series, false, false);
  const double margin_l = 64, margin_r = 16, margin_t = spec.title.empty() ? 16 : 32;
  const double margin_b = 48;
  const double plot_w = spec.width - margin_l - margin_r;
  const double plot_h = spec.height - margin_t - margin_b;

  const auto x_pos = [&](double x) {
    const double t = spec.log_x ? (std::log10(x) - std::log10(ex.lo))
                                      / (std::log10(ex.hi) - std::log10(ex.lo))
                                : (x - ex.lo) / (ex.hi - ex.lo);
    return margin_l + t * plot_w;
  };
  const auto y_pos = [&](double y) {
    return margin_t + (1.0 - (y - ey.lo) / (ey.hi - ey.lo)) * plot_h;
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\">\n",
      spec.width, spec.height, spec.width, spec.height);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", spec.width,
                     spec.height);
  if (!spec.title.empty())
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
        "text-anchor=\"middle\">{}</text>\n",
        margin_l + plot_w / 2, svg_escape(spec.title));

  // axes
  svg += fmt::format(
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
      margin_l, margin_t, margin_t + plot_h);
  svg += fmt::format(
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
      margin_l, margin_t + plot_h, margin_l + plot_w, margin_t + plot_h);

  // ticks
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double xv = spec.log_x
                          ? std::pow(10.0, std::log10(ex.lo) + f * (std::log10(ex.hi)
                                                                    - std::log10(ex.lo)))
                          : ex.lo + f * (ex.hi - ex.lo);
    const double yv = ey.lo + f * (ey.hi - ey.lo);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"middle\">{:.6g}</text>\n",
        x_pos(xv), margin_t + plot_h + 16, xv);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"end\">{:.6g}</text>\n",
        margin_l - 6, y_pos(yv) + 4, yv);
  }
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\">{}</text>\n",
      margin_l + plot_w / 2, margin_t + plot_h + 36, svg_escape(spec.x_label));
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" "
      "text-anchor=\"middle\" transform=\"rotate(-90 {:.2f} {:.2f})\">{}</text>\n",
      16.0, margin_t + plot_h / 2, 16.0, margin_t + plot_h / 2, svg_escape(spec.y_label));

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    if (s.x.size() == 1) {
      svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n",
                         x_pos(s.x[0]), y_pos(s.y[0]), color);
    } else {
      std::string points;
      for (std::size_t i = 0; i < s.x.size(); ++i)
        points += fmt::format("{:.2f},{:.2f} ", x_pos(s.x[i]), y_pos(s.y[i]));
      points.pop_back();
      svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
                         "points=\"{}\"/>\n",
                         color, points);
    }
    if (!s.label.empty())
      svg += fmt::format(
          "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
          "fill=\"{}\">{}</text>\n",
          margin_l + plot_w - 120, margin_t + 14 + 14 * static_cast<double>(si), color,
          svg_escape(s.label));
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_plot(const io::Table& table, const PlotSelection& sel) {
  const int xi = table.column_index(sel.x_column);
  const int yi = table.column_index(sel.y_column);
  if (xi < 0 || yi < 0)
    throw std::invalid_argument(fmt::format("render_plot: unknown column '{}'",
                                            xi < 0 ? sel.x_column : sel.y_column));
  int gi = -1;
  if (sel.series_column) {
    gi = table.column_index(*sel.series_column);
    if (gi < 0)
      throw std::invalid_argument(
          fmt::format("render_plot: unknown column '{}'", *sel.series_column));
  }

  std::vector<Series> series;
  std::vector<double> keys;
  for (const auto& row : table.rows) {
    if (!std::isfinite(row[yi])) continue;
    std::size_t idx = 0;
    if (gi >= 0) {
      const double key = row[gi];
      auto it = std::find(keys.begin(), keys.end(), key);
      if (it == keys.end()) {
        keys.push_back(key);
        series.push_back({fmt::format("{}={:.6g}", *sel.series_column, key), {}, {}});
        idx = series.size() - 1;
      } else {
        idx = static_cast<std::size_t>(it - keys.begin());
      }
    } else {
      if (series.empty()) series.push_back({sel.y_column, {}, {}});
    }
    series[idx].x.push_back(row[xi]);
    series[idx].y.push_back(row[yi]);
  }
  if (series.empty()) throw std::invalid_argument("render_plot: no plottable rows");

  PlotSpec spec;
  spec.title = sel.title;
  spec.x_label = sel.x_column;
  spec.y_label = sel.y_column;
  spec.log_x = sel.log_x;
  return render_line_svg(series, spec);
}

}  // namespace spolight::plot
