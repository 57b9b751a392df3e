#include "axibouss/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace axibouss {

namespace {

constexpr int kWidth = 720, kHeight = 520;
constexpr int kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;

const char* kColors[] = {"#1f6feb", "#d1242f", "#1a7f37",
                         "#8250df", "#bf8700", "#0d7d8f"};

struct LogRange {
  double lo = 0.0, hi = 1.0;  // log10 bounds
  double map(double v, double pix_lo, double pix_hi) const {
    const double u = (std::log10(v) - lo) / (hi - lo);
    return pix_lo + u * (pix_hi - pix_lo);
  }
};

LogRange make_range(double vmin, double vmax) {
  LogRange r;
  r.lo = std::floor(std::log10(vmin) - 0.02);
  r.hi = std::ceil(std::log10(vmax) + 0.02);
  if (r.hi <= r.lo) r.hi = r.lo + 1.0;
  return r;
}

}  // namespace

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& xlabel, const std::string& ylabel,
                      const std::vector<PlotSeries>& series,
                      const std::vector<double>& slopes) {
  double xmin = 1e300, xmax = 1e-300, ymin = 1e300, ymax = 1e-300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0))
        throw std::invalid_argument("write_loglog_svg: positive data only");
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (series.empty() || !(xmin <= xmax))
    throw std::invalid_argument("write_loglog_svg: no data");

  const LogRange xr = make_range(xmin, xmax), yr = make_range(ymin, ymax);
  auto px = [&](double v) {
    return xr.map(v, kLeft, kWidth - kRight);
  };
  auto py = [&](double v) {
    return yr.map(v, kHeight - kBottom, kTop);
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write svg: " + path);
  char buf[512];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"24\" font-size=\"16\" font-family=\"sans-serif\""
                " text-anchor=\"middle\">%s</text>\n",
                kWidth / 2, title.c_str());
  out << buf;

  // decade grid and tick labels
  for (int d = static_cast<int>(xr.lo); d <= static_cast<int>(xr.hi); ++d) {
    const double x = px(std::pow(10.0, d));
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.1f\" y1=\"%d\" x2=\"%.1f\" y2=\"%d\" "
                  "stroke=\"#dddddd\"/>\n",
                  x, kTop, x, kHeight - kBottom);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%d\" font-size=\"12\" "
                  "font-family=\"sans-serif\" text-anchor=\"middle\">1e%d</text>\n",
                  x, kHeight - kBottom + 18, d);
    out << buf;
  }
  for (int d = static_cast<int>(yr.lo); d <= static_cast<int>(yr.hi); ++d) {
    const double y = py(std::pow(10.0, d));
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%d\" y1=\"%.1f\" x2=\"%d\" y2=\"%.1f\" "
                  "stroke=\"#dddddd\"/>\n",
                  kLeft, y, kWidth - kRight, y);
    out << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%.1f\" font-size=\"12\" "
                  "font-family=\"sans-serif\" text-anchor=\"end\">1e%d</text>\n",
                  kLeft - 6, y + 4, d);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" "
                "stroke=\"#333333\"/>\n",
                kLeft, kTop, kWidth - kLeft - kRight,
                kHeight - kTop - kBottom);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-size=\"13\" "
                "font-family=\"sans-serif\" text-anchor=\"middle\">%s</text>\n",
                kWidth / 2, kHeight - 16, xlabel.c_str());
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"18\" y=\"%d\" font-size=\"13\" font-family=\"sans-serif\""
                " text-anchor=\"middle\" transform=\"rotate(-90 18 %d)\">%s</text>\n",
                kHeight / 2, kHeight / 2, ylabel.c_str());
  out << buf;

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 6];
    std::string pts;
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", px(series[s].x[i]),
                    py(series[s].y[i]));
      pts += buf;
    }
    out << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      std::snprintf(buf, sizeof(buf),
                    "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"2.5\" fill=\"%s\"/>\n",
                    px(series[s].x[i]), py(series[s].y[i]), color);
      out << buf;
    }
    std::string label = series[s].name;
    if (s < slopes.size()) {
      std::snprintf(buf, sizeof(buf), " (slope %.3f)", slopes[s]);
      label += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"12\" "
                  "font-family=\"sans-serif\" fill=\"%s\">%s</text>\n",
                  kLeft + 10, kTop + 18 + static_cast<int>(s) * 16, color,
                  label.c_str());
    out << buf;
  }
  out << "</svg>\n";
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace axibouss
