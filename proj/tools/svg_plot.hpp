#pragma once

// Standalone SVG line plot (1000 x 600 viewport) for the four state series.
// No plotting dependency: axes, ticks, polylines and a legend are emitted
// directly.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace svgplot {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> t;
  std::vector<double> value;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// round the raw tick spacing to 1/2/5 times a power of ten
inline double nice_step(double span, int ticks) {
  const double raw = span / ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  const double nice = frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0;
  return nice * mag;
}

} // namespace detail

inline void write_line_plot(const std::string &path, const std::string &title,
                            const std::vector<Series> &series) {
  const double width = 1000, height = 600;
  const double left = 70, right = 850, top = 45, bottom = 555;

  double t_min = 0, t_max = 1, v_min = 0, v_max = 1;
  bool first = true;
  for (const auto &s : series) {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (first) {
        t_min = t_max = s.t[i];
        v_min = v_max = s.value[i];
        first = false;
      }
      t_min = std::min(t_min, s.t[i]);
      t_max = std::max(t_max, s.t[i]);
      v_min = std::min(v_min, s.value[i]);
      v_max = std::max(v_max, s.value[i]);
    }
  }
  if (t_max <= t_min) t_max = t_min + 1;
  if (v_max <= v_min) v_max = v_min + 1;
  v_min = std::min(0.0, v_min);
  v_max += 0.05 * (v_max - v_min);

  auto sx = [&](double t) { return left + (t - t_min) / (t_max - t_min) * (right - left); };
  auto sy = [&](double v) { return bottom - (v - v_min) / (v_max - v_min) * (bottom - top); };

  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
      << "\" width=\"" << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

  // gridlines and tick labels
  const double vt = detail::nice_step(v_max - v_min, 6);
  for (double v = std::ceil(v_min / vt) * vt; v <= v_max + 1e-12; v += vt) {
    out << "<line x1=\"" << left << "\" y1=\"" << sy(v) << "\" x2=\"" << right << "\" y2=\""
        << sy(v) << "\" stroke=\"#dddddd\"/>\n";
    out << "<text x=\"" << left - 8 << "\" y=\"" << sy(v) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::fmt(v) << "</text>\n";
  }
  const double tt = detail::nice_step(t_max - t_min, 8);
  for (double t = std::ceil(t_min / tt) * tt; t <= t_max + 1e-12; t += tt) {
    out << "<line x1=\"" << sx(t) << "\" y1=\"" << bottom << "\" x2=\"" << sx(t) << "\" y2=\""
        << bottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(t) << "\" y=\"" << bottom + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << detail::fmt(t) << "</text>\n";
  }

  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">t</text>\n";

  for (const auto &s : series) {
    // cap the emitted points; the plot stays faithful at screen resolution
    const std::size_t stride = std::max<std::size_t>(1, s.t.size() / 1200);
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.t.size(); i += stride)
      out << detail::fmt(sx(s.t[i])) << "," << detail::fmt(sy(s.value[i])) << " ";
    if (!s.t.empty())
      out << detail::fmt(sx(s.t.back())) << "," << detail::fmt(sy(s.value.back()));
    out << "\"/>\n";
  }

  double ly = top + 10;
  for (const auto &s : series) {
    out << "<line x1=\"" << right + 15 << "\" y1=\"" << ly << "\" x2=\"" << right + 45
        << "\" y2=\"" << ly << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << right + 52 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << s.label << "</text>\n";
    ly += 22;
  }
  out << "</svg>\n";
}

} // namespace svgplot
