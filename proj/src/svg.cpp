#include "codesign/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace codesign::svg {

namespace {

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", v);
  return buffer;
}

std::string tick_label(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4g", v);
  return buffer;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo <= 0.0) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad;
      hi += pad;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::string render_plot(const std::vector<Series>& series, const PlotOptions& o) {
  const double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = o.width - left - right;
  const double ph = o.height - top - bottom;

  Range xr, yr;
  for (const Series& s : series) {
    for (const auto& p : s.points) {
      if (std::isfinite(p[0]) && std::isfinite(p[1])) {
        xr.include(p[0]);
        yr.include(p[1]);
      }
    }
  }
  xr.finish();
  yr.finish();
  auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\""
      << o.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << escape(o.title) << "</text>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = xr.lo + (xr.hi - xr.lo) * i / ticks;
    const double yv = yr.lo + (yr.hi - yr.lo) * i / ticks;
    out << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(top + ph) << "\" x2=\""
        << num(sx(xv)) << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(top + ph + 18)
        << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
    out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(sy(yv)) << "\" x2=\""
        << num(left) << "\" y2=\"" << num(sy(yv)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << tick_label(yv) << "</text>\n";
  }
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(o.height - 15)
      << "\" text-anchor=\"middle\">" << escape(o.x_label) << "</text>\n";
  out << "<text transform=\"translate(18," << num(top + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(o.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& p : s.points) {
        if (std::isfinite(p[0]) && std::isfinite(p[1])) out << num(sx(p[0])) << ',' << num(sy(p[1])) << ' ';
      }
      out << "\"/>\n";
    } else {
      for (const auto& p : s.points) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
        out << "<circle cx=\"" << num(sx(p[0])) << "\" cy=\"" << num(sy(p[1]))
            << "\" r=\"3.5\" fill=\"" << s.color << "\" fill-opacity=\"0.8\"/>\n";
      }
    }
    const double ly = top + 10 + 20.0 * k;
    out << "<rect x=\"" << num(left + pw + 15) << "\" y=\"" << num(ly - 8)
        << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
    out << "<text x=\"" << num(left + pw + 30) << "\" y=\"" << num(ly + 1) << "\">"
        << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace codesign::svg
