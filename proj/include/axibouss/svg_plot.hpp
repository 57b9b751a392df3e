#pragma once

#include <string>
#include <vector>

namespace axibouss {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Standalone log-log SVG plot (polylines, decade ticks, legend, optional
// fitted-slope annotation per series).
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<PlotSeries>& series,
                      const std::vector<double>& slopes = {});

}  // namespace axibouss
