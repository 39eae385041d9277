#include "expsamp/svg_plot.hpp"

#include "expsamp/common.hpp"
#include "expsamp/report_io.hpp"

#include <array>
#include <charconv>
#include <sstream>

namespace expsamp {

namespace {

constexpr std::array<const char*, 8> kPalette{"#000000", "#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string fixed2(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  if (ec != std::errc()) throw Error("svg: conversion failed");
  return {buf, ptr};
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

} // namespace

std::string render_svg(const std::vector<Curve>& curves, const PlotStyle& style) {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& c : curves) {
    if (c.x.size() != c.y.size()) throw Error("svg: curve '" + c.label + "' has mismatched sizes");
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      x0 = std::min(x0, c.x[i]);
      x1 = std::max(x1, c.x[i]);
      y0 = std::min(y0, c.y[i]);
      y1 = std::max(y1, c.y[i]);
    }
  }
  if (!(x0 <= x1)) { x0 = 0.0; x1 = 1.0; y0 = 0.0; y1 = 1.0; }
  if (x0 == x1) { x0 -= 0.5; x1 += 0.5; }
  if (y0 == y1) { y0 -= 0.5; y1 += 0.5; }

  const double W = style.width, H = style.height, M = style.margin;
  const auto px = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
  const auto py = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
     << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty())
    os << "<text x=\"" << fixed2(W / 2) << "\" y=\"" << fixed2(M / 2)
       << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(style.title) << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << fixed2(M) << "\" y1=\"" << fixed2(H - M) << "\" x2=\"" << fixed2(W - M)
     << "\" y2=\"" << fixed2(H - M) << "\"/>\n"
     << "<line x1=\"" << fixed2(M) << "\" y1=\"" << fixed2(M) << "\" x2=\"" << fixed2(M)
     << "\" y2=\"" << fixed2(H - M) << "\"/>\n</g>\n";

  os << "<g font-size=\"10\">\n";
  const int nt = std::max(2, style.ticks);
  for (int i = 0; i < nt; ++i) {
    const double xv = x0 + (x1 - x0) * i / (nt - 1);
    const double yv = y0 + (y1 - y0) * i / (nt - 1);
    os << "<text x=\"" << fixed2(px(xv)) << "\" y=\"" << fixed2(H - M + 15)
       << "\" text-anchor=\"middle\">" << format_g6(xv) << "</text>\n";
    os << "<text x=\"" << fixed2(M - 5) << "\" y=\"" << fixed2(py(yv) + 3)
       << "\" text-anchor=\"end\">" << format_g6(yv) << "</text>\n";
  }
  os << "</g>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const auto& c = curves[ci];
    os << "<polyline fill=\"none\" stroke=\"" << kPalette[ci % kPalette.size()]
       << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
      if (!first) os << ' ';
      os << fixed2(px(c.x[i])) << ',' << fixed2(py(c.y[i]));
      first = false;
    }
    os << "\"/>\n";
  }

  os << "<g font-size=\"11\">\n";
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const double ly = M + 15.0 * static_cast<double>(ci) + 10.0;
    const double lx = W - M - 150.0;
    os << "<line x1=\"" << fixed2(lx) << "\" y1=\"" << fixed2(ly) << "\" x2=\"" << fixed2(lx + 20)
       << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << kPalette[ci % kPalette.size()]
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed2(lx + 25) << "\" y=\"" << fixed2(ly + 4) << "\">"
       << escape(curves[ci].label) << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

} // namespace expsamp
