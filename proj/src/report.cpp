#include "nearsphere/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nsph {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  std::string cell;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) cell += ';';
      cell += j[i].is_number() ? format_number(j[i].get<double>()) : j[i].dump();
    }
  } else if (j.is_number_integer()) {
    cell = j.dump();
  } else if (j.is_number()) {
    cell = format_number(j.get<double>());
  } else if (j.is_boolean()) {
    cell = j.get<bool>() ? "1" : "0";
  } else if (j.is_null()) {
    cell = "";
  } else {
    cell = j.get<std::string>();
  }
  if (cell.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : cell) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    cell = q + "\"";
  }
  out.emplace_back(prefix, cell);
}

std::string xml_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << x;
  return s.str();
}

std::string stamp_comment(bool on) {
  if (!on) return "";
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return std::string("<!-- generated ") + buf + " -->\n";
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

// "Nice" ticks: steps of 1, 2 or 5 times a power of ten.
std::vector<double> ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  const double raw = span / target;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  double step = p;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * p >= raw) {
      step = m * p;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

}  // namespace

std::string records_to_csv(const std::vector<Json>& records) {
  std::string out;
  std::vector<std::string> header;
  for (std::size_t r = 0; r < records.size(); ++r) {
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(records[r], "", cells);
    if (r == 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        header.push_back(cells[i].first);
        out += (i ? "," : "") + cells[i].first;
      }
      out += "\n";
    } else {
      bool same = cells.size() == header.size();
      for (std::size_t i = 0; same && i < cells.size(); ++i) same = cells[i].first == header[i];
      if (!same) throw std::invalid_argument("records_to_csv: record " + std::to_string(r) + " has different columns");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i].second;
    out += "\n";
  }
  return out;
}

std::string render_svg(const Chart& c) {
  const double W = c.width, H = c.height, ml = 78, mr = 150, mt = 36, mb = 52;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto tx = [&](double v) { return c.logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return c.logy ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!c.logx || x > 0) && (!c.logy || y > 0);
  };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : c.series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
      if (usable(s.x[i], s.y[i])) {
        x0 = std::min(x0, tx(s.x[i])), x1 = std::max(x1, tx(s.x[i]));
        y0 = std::min(y0, ty(s.y[i])), y1 = std::max(y1, ty(s.y[i]));
      }
  for (double h : c.hlines)
    if (!c.logy || h > 0) y0 = std::min(y0, ty(h)), y1 = std::max(y1, ty(h));
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (c.include_origin) {
    if (!c.logx) x0 = std::min(x0, 0.0), x1 = std::max(x1, 0.0);
    if (!c.logy) y0 = std::min(y0, 0.0), y1 = std::max(y1, 0.0);
  }
  if (x1 - x0 <= 0) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 <= 0) y0 -= 0.5, y1 += 0.5;
  const double padx = 0.04 * (x1 - x0), pady = 0.06 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  auto X = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto Y = [&](double v) { return mt + (y1 - v) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << stamp_comment(c.timestamp);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(c.title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(x0, x1)) {
    o << "<line x1=\"" << fmt(X(t), 6) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(X(t), 6) << "\" y2=\"" << mt + ph + 4
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fmt(X(t), 6) << "\" y=\"" << mt + ph + 16 << "\" text-anchor=\"middle\">"
      << (c.logx ? "1e" + fmt(t, 3) : fmt(t)) << "</text>\n";
  }
  for (double t : ticks(y0, y1)) {
    o << "<line x1=\"" << ml - 4 << "\" y1=\"" << fmt(Y(t), 6) << "\" x2=\"" << ml << "\" y2=\"" << fmt(Y(t), 6)
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(Y(t) + 4, 6) << "\" text-anchor=\"end\">"
      << (c.logy ? "1e" + fmt(t, 3) : fmt(t)) << "</text>\n";
  }
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xml_escape(c.xlabel)
    << "</text>\n";
  o << "<text transform=\"translate(16," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(c.ylabel) << "</text>\n";
  for (double h : c.hlines) {
    if (c.logy && h <= 0) continue;
    o << "<line x1=\"" << ml << "\" y1=\"" << fmt(Y(ty(h)), 6) << "\" x2=\"" << ml + pw << "\" y2=\"" << fmt(Y(ty(h)), 6)
      << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const Series& s = c.series[k];
    const std::string col = s.color.empty() ? kPalette[k % 7] : s.color;
    std::ostringstream pts;
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const double px = X(tx(s.x[i])), py = Y(ty(s.y[i]));
      if (s.points)
        o << "<circle cx=\"" << fmt(px, 6) << "\" cy=\"" << fmt(py, 6) << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
      else
        pts << fmt(px, 6) << "," << fmt(py, 6) << " ";
    }
    if (!s.points) o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    const double ly = mt + 14 + 16 * double(k);
    o << "<rect x=\"" << ml + pw + 10 << "\" y=\"" << ly - 8 << "\" width=\"10\" height=\"10\" fill=\"" << col << "\"/>\n";
    o << "<text x=\"" << ml + pw + 24 << "\" y=\"" << ly << "\">" << xml_escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string render_polygons_svg(const std::vector<PolygonLayer>& layers, const std::string& title, bool timestamp) {
  if (layers.empty()) throw std::invalid_argument("render_polygons_svg: nothing to draw");
  Eigen::Vector2d lo = layers[0].poly.v.rowwise().minCoeff(), hi = layers[0].poly.v.rowwise().maxCoeff();
  for (const auto& l : layers) {
    lo = lo.cwiseMin(l.poly.v.rowwise().minCoeff());
    hi = hi.cwiseMax(l.poly.v.rowwise().maxCoeff());
  }
  const double S = 420, pad = 20, span = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  const double k = (S - 2 * pad) / span;
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n" << stamp_comment(timestamp);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << S + 140 << "\" height=\"" << S + 30
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << S / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    o << "<polygon fill=\"" << (l.fill.empty() ? "none" : l.fill) << "\" fill-opacity=\"0.3\" stroke=\""
      << (l.stroke.empty() ? kPalette[i % 7] : l.stroke) << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index j = 0; j < l.poly.size(); ++j)
      o << fmt(pad + (l.poly.v(0, j) - lo.x()) * k, 6) << "," << fmt(30 + pad + (hi.y() - l.poly.v(1, j)) * k, 6) << " ";
    o << "\"/>\n";
    o << "<text x=\"" << S + 10 << "\" y=\"" << 50 + 16 * double(i) << "\" fill=\""
      << (l.stroke.empty() ? kPalette[i % 7] : l.stroke) << "\">" << xml_escape(l.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace nsph
