#include "courtrel/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "courtrel/errors.hpp"
#include "courtrel/util.hpp"

namespace courtrel {

std::string mi_csv(const ContingencyTable& table, const PmiMatrix& matrix) {
  std::string out = "relation,kappa,count,mi\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      out += csv_row({std::string(to_string(static_cast<RelationType>(r))),
                      std::string(1, to_char(static_cast<Kappa>(c))),
                      std::to_string(table.at(r, c)),
                      format_double(matrix.values[r][c])});
    }
  }
  return out;
}

std::string marginals_csv(const ContingencyTable& table) {
  std::string out = "axis,key,count\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    out += csv_row({"relation", std::string(to_string(static_cast<RelationType>(r))),
                    std::to_string(table.row_total(r))});
  }
  for (std::size_t c = 0; c < table.cols(); ++c) {
    out += csv_row({"kappa", std::string(1, to_char(static_cast<Kappa>(c))),
                    std::to_string(table.col_total(c))});
  }
  out += csv_row({"total", "N", std::to_string(table.grand_total())});
  return out;
}

namespace {

struct SeriesStyle {
  const char* color;
  const char* shape;  // circle | square | tri-left | tri-right
};

constexpr SeriesStyle kSeries[4] = {
    {"#1f77b4", "circle"},     // A
    {"#d62728", "square"},     // B
    {"#2ca02c", "tri-left"},   // C
    {"#e6b400", "tri-right"},  // D
};

double nice_step(double span) {
  if (span <= 0) return 1.0;
  double raw = span / 4.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double frac = raw / mag;
  double nice = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

std::string marker_shape(const SeriesStyle& style) {
  // Drawn around the local origin; position comes from the group transform.
  if (std::string_view(style.shape) == "circle") {
    return std::string("<circle r=\"5\" fill=\"") + style.color + "\"/>";
  }
  if (std::string_view(style.shape) == "square") {
    return std::string("<rect x=\"-4.5\" y=\"-4.5\" width=\"9\" height=\"9\" fill=\"") +
           style.color + "\"/>";
  }
  if (std::string_view(style.shape) == "tri-left") {
    return std::string("<path d=\"M -6 0 L 5 -5.5 L 5 5.5 Z\" fill=\"") + style.color +
           "\"/>";
  }
  return std::string("<path d=\"M 6 0 L -5 -5.5 L -5 5.5 Z\" fill=\"") + style.color +
         "\"/>";
}

std::string down_arrow(const char* color) {
  return std::string("<path d=\"M 0 -7 L 0 3 M -4 -1 L 0 3 L 4 -1\" stroke=\"") + color +
         "\" stroke-width=\"2\" fill=\"none\"/>";
}

}  // namespace

std::string render_mi_chart(const PmiMatrix& matrix) {
  const double width = 760, height = 440;
  const double left = 72, right = 24, top = 48, bottom = 72;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const std::size_t n_rel = matrix.rows();
  const std::size_t n_pools = matrix.cols();

  double vmin = 0.0, vmax = 0.0;
  bool any_finite = false;
  bool any_neg_inf = false;
  for (const auto& row : matrix.values) {
    for (double v : row) {
      if (std::isinf(v)) {
        any_neg_inf = any_neg_inf || v < 0;
        continue;
      }
      if (!any_finite) {
        vmin = vmax = v;
        any_finite = true;
      } else {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }
  }
  vmin = std::min(vmin, 0.0);
  vmax = std::max(vmax, 0.0);
  if (vmax - vmin < 1e-9) {
    vmin -= 1.0;
    vmax += 1.0;
  }
  double pad = (vmax - vmin) * 0.08;
  vmin -= pad;
  vmax += pad;

  auto y_of = [&](double v) {
    return top + (vmax - v) / (vmax - vmin) * plot_h;
  };
  auto x_of = [&](std::size_t rel, std::size_t pool) {
    double center = left + (static_cast<double>(rel) + 0.5) * plot_w /
                               static_cast<double>(n_rel ? n_rel : 1);
    double offset = (static_cast<double>(pool) - (static_cast<double>(n_pools) - 1.0) / 2.0) * 11.0;
    return center + offset;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
         "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " +
         format_double(width) + " " + format_double(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + format_double(left) + "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"15\" fill=\"#222\">MI(R, kappa) by relation and conversation group"
         "</text>\n";

  // Axes.
  svg += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top) +
         "\" x2=\"" + format_double(left) + "\" y2=\"" + format_double(top + plot_h) +
         "\" stroke=\"#444\"/>\n";
  svg += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(top + plot_h) +
         "\" x2=\"" + format_double(left + plot_w) + "\" y2=\"" +
         format_double(top + plot_h) + "\" stroke=\"#444\"/>\n";

  // Y ticks and zero line.
  double step = nice_step(vmax - vmin);
  double first_tick = std::ceil(vmin / step) * step;
  for (double tick = first_tick; tick <= vmax + 1e-12; tick += step) {
    double y = y_of(tick);
    svg += "<line x1=\"" + format_double(left - 4) + "\" y1=\"" + format_double(y) +
           "\" x2=\"" + format_double(left) + "\" y2=\"" + format_double(y) +
           "\" stroke=\"#444\"/>\n";
    svg += "<text x=\"" + format_double(left - 8) + "\" y=\"" + format_double(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\" "
           "text-anchor=\"end\">" + format_double(std::abs(tick) < step * 1e-9 ? 0.0 : tick) +
           "</text>\n";
  }
  if (vmin < 0.0 && vmax > 0.0) {
    svg += "<line x1=\"" + format_double(left) + "\" y1=\"" + format_double(y_of(0)) +
           "\" x2=\"" + format_double(left + plot_w) + "\" y2=\"" +
           format_double(y_of(0)) + "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }

  // X labels.
  for (std::size_t r = 0; r < n_rel; ++r) {
    double cx = left + (static_cast<double>(r) + 0.5) * plot_w / static_cast<double>(n_rel);
    svg += "<text x=\"" + format_double(cx) + "\" y=\"" + format_double(top + plot_h + 20) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
           "text-anchor=\"middle\">" +
           std::string(to_string(static_cast<RelationType>(r))) + "</text>\n";
  }

  // Legend.
  for (std::size_t p = 0; p < n_pools && p < 4; ++p) {
    double lx = left + plot_w - 160 + static_cast<double>(p) * 42;
    svg += "<g transform=\"translate(" + format_double(lx) + ",34)\">" +
           marker_shape(kSeries[p]) + "</g>\n";
    svg += "<text x=\"" + format_double(lx + 9) + "\" y=\"38\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#222\">" + std::string(1, to_char(static_cast<Kappa>(p))) +
           "</text>\n";
  }

  // Markers. -infinity cells render as a down arrow pinned under the floor.
  for (std::size_t r = 0; r < n_rel; ++r) {
    for (std::size_t p = 0; p < n_pools && p < 4; ++p) {
      double v = matrix.values[r][p];
      std::string id = "m-" + std::string(to_string(static_cast<RelationType>(r))) + "-" +
                       to_char(static_cast<Kappa>(p));
      double x = x_of(r, p);
      if (std::isinf(v) && v < 0) {
        svg += "<g id=\"" + id + "\" data-mi=\"-inf\" transform=\"translate(" +
               format_double(x) + "," + format_double(top + plot_h + 34) + ")\">" +
               down_arrow(kSeries[p].color) + "</g>\n";
      } else {
        double y = y_of(v);
        svg += "<g id=\"" + id + "\" data-mi=\"" + format_double(v) + "\" data-y=\"" +
               format_double(y) + "\" transform=\"translate(" + format_double(x) + "," +
               format_double(y) + ")\">" + marker_shape(kSeries[p]) + "</g>\n";
      }
    }
  }
  if (any_neg_inf) {
    svg += "<text x=\"" + format_double(left) + "\" y=\"" +
           format_double(top + plot_h + 44) +
           "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#666\">down arrow: "
           "MI = -inf (zero count)</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace courtrel
