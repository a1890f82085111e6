#include "boxlat/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "boxlat/box.hpp"
#include "boxlat/error.hpp"

namespace boxlat {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

}  // namespace

std::string render_svg(const Model& model, int size_px) {
  if (model.dimension() != 2) throw InvalidArgument("plotting needs a 2-D model");
  const auto& m = model.measure();
  const double x0 = m.lower(0), x1 = m.upper(0), y0 = m.lower(1), y1 = m.upper(1);
  if (!std::isfinite(x1) || !std::isfinite(y1)) throw InvalidArgument("plotting needs a bounded support");
  const double margin = 20.0;
  const double side = static_cast<double>(size_px);
  auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * side; };
  auto sy = [&](double y) { return margin + (y1 - y) / (y1 - y0) * side; };

  std::vector<double> marginals;
  for (const auto& b : model.boxes()) marginals.push_back(volume(LatticeElement(b), m));
  const double top_p = marginals.empty() ? 1.0 : *std::max_element(marginals.begin(), marginals.end());

  const std::string total = num(side + 2 * margin);
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + total + "\" height=\"" + total +
                    "\" viewBox=\"0 0 " + total + " " + total + "\">\n";
  out += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" + num(side) + "\" height=\"" +
         num(side) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (std::size_t c = 0; c < model.size(); ++c) {
    const Box& b = model.box(c);
    // Golden-angle hues keep neighbouring concepts apart.
    const int hue = static_cast<int>(std::fmod(static_cast<double>(c) * 137.508, 360.0));
    const double opacity = top_p > 0.0 ? marginals[c] / top_p : 0.0;
    const double left = sx(b.min(0)), right = sx(b.max(0));
    const double upper = sy(b.max(1)), lower = sy(b.min(1));
    out += "<rect x=\"" + num(left) + "\" y=\"" + num(upper) + "\" width=\"" + num(right - left) + "\" height=\"" +
           num(lower - upper) + "\" fill=\"hsl(" + std::to_string(hue) + ",70%,50%)\" fill-opacity=\"" +
           num(opacity) + "\" stroke=\"hsl(" + std::to_string(hue) + ",70%,30%)\"/>\n";
    out += "<text x=\"" + num(left + 2) + "\" y=\"" + num(upper + 12) + "\" font-size=\"10\">" +
           escape(model.vocabulary().id(c)) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace boxlat
