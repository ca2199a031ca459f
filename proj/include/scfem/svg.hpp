#ifndef SCFEM_SVG_HPP
#define SCFEM_SVG_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace scfem {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), both positive
};

// Static log-log line plot with decade ticks. Non-positive points are skipped.
void write_loglog_svg(std::ostream& os, const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

}  // namespace scfem

#endif
