#pragma once

// Tabular and graphical output. CSV columns are the flattened keys of the JSON
// records ("a.b" for nested objects, arrays joined by ';'), so one schema
// describes both. SVG output is plain SVG 1.1 with no external references.

#include "nearsphere/io.hpp"

#include <string>
#include <vector>

namespace nsph {

/// Shortest text that round-trips the double; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);

/// One CSV row per record; every record must flatten to the same keys.
std::string records_to_csv(const std::vector<Json>& records);

struct Series {
  std::string name;
  std::vector<double> x, y;
  bool points = false;  // scatter instead of polyline
  std::string color;    // empty: palette
};

struct Chart {
  std::string title, xlabel, ylabel;
  std::vector<Series> series;
  bool logx = false, logy = false;
  bool include_origin = false;  // force 0 into both axis ranges
  std::vector<double> hlines;   // horizontal reference lines
  bool timestamp = false;       // adds a generation-time comment
  int width = 640, height = 420;
};

std::string render_svg(const Chart& c);

struct PolygonLayer {
  Polygon poly;
  std::string stroke, fill;
  std::string label;
};

/// Overlay of polygons with equal aspect ratio.
std::string render_polygons_svg(const std::vector<PolygonLayer>& layers, const std::string& title,
                                bool timestamp = false);

}  // namespace nsph
