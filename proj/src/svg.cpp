#include "scfem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "scfem/errors.hpp"

namespace scfem {

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;
const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

}  // namespace

void write_loglog_svg(std::ostream& os, const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series) {
  double lx_min = 0.0, lx_max = 0.0, ly_min = 0.0, ly_max = 0.0;
  bool any = false;
  for (const PlotSeries& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      const double lx = std::log10(x), ly = std::log10(y);
      if (!any) {
        lx_min = lx_max = lx;
        ly_min = ly_max = ly;
        any = true;
      } else {
        lx_min = std::min(lx_min, lx);
        lx_max = std::max(lx_max, lx);
        ly_min = std::min(ly_min, ly);
        ly_max = std::max(ly_max, ly);
      }
    }
  if (!any) throw ConfigError("svg plot: no positive data points");
  if (lx_max - lx_min < 1e-9) lx_max = lx_min + 1.0;
  if (ly_max - ly_min < 1e-9) ly_max = ly_min + 1.0;

  const double px = (kWidth - kLeft - kRight) / (lx_max - lx_min);
  const double py = (kHeight - kTop - kBottom) / (ly_max - ly_min);
  auto sx = [&](double x) { return kLeft + (std::log10(x) - lx_min) * px; };
  auto sy = [&](double y) { return kHeight - kBottom - (std::log10(y) - ly_min) * py; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
     << "\" height=\"" << kHeight - kTop - kBottom
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (int e = static_cast<int>(std::ceil(lx_min)); e <= static_cast<int>(std::floor(lx_max));
       ++e) {
    const double x = sx(std::pow(10.0, e));
    os << "<line x1=\"" << x << "\" y1=\"" << kTop << "\" x2=\"" << x << "\" y2=\""
       << kHeight - kBottom << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 18
       << "\" text-anchor=\"middle\" font-size=\"12\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ly_min)); e <= static_cast<int>(std::floor(ly_max));
       ++e) {
    const double y = sy(std::pow(10.0, e));
    os << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kWidth - kRight << "\" y2=\""
       << y << "\" stroke=\"#dddddd\"/>\n"
       << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4
       << "\" text-anchor=\"end\" font-size=\"12\">1e" << e << "</text>\n";
  }
  os << "<text x=\"" << kLeft + (kWidth - kLeft - kRight) / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n"
     << "<text x=\"16\" y=\"" << kTop + (kHeight - kTop - kBottom) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << kTop + (kHeight - kTop - kBottom) / 2 << ")\">" << y_label << "</text>\n";

  int color = 0;
  double legend_y = kTop + 16.0;
  for (const PlotSeries& s : series) {
    const char* c = kColors[color++ % 6];
    os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points)
      if (x > 0.0 && y > 0.0) os << sx(x) << "," << sy(y) << " ";
    os << "\"/>\n";
    for (const auto& [x, y] : s.points)
      if (x > 0.0 && y > 0.0)
        os << "<circle cx=\"" << sx(x) << "\" cy=\"" << sy(y) << "\" r=\"2.5\" fill=\"" << c
           << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight - 8 << "\" y=\"" << legend_y
       << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << c << "\">" << s.label
       << "</text>\n";
    legend_y += 16.0;
  }
  os << "</svg>\n";
}

}  // namespace scfem
