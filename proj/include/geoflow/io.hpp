#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace geoflow {

// 17 significant digits, enough for a lossless double round-trip.
std::string csv_number(double v);
// RFC-4180 quoting when the field holds a comma, quote, or line break.
std::string csv_field(const std::string& s);

// Minimal SVG plot in data coordinates: polylines, markers, and axis annotations.
class SvgPlot {
 public:
  SvgPlot(double xmin, double xmax, double ymin, double ymax, std::string xlabel, std::string ylabel);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double width = 1.5);
  void marker(double x, double y, const std::string& color, const std::string& title = {});
  void write(std::ostream& os) const;

 private:
  double xmin_, xmax_, ymin_, ymax_;
  std::string xlabel_, ylabel_;
  std::vector<std::string> items_;
};

struct Mesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Plain-text mesh:
//   # geoflow mesh v1
//   vertices N
//   j1 j2 z        (N lines)
//   triangles M
//   a b c          (M lines, zero-based vertex indices)
void write_mesh(std::ostream& os, const Mesh& m);

}  // namespace geoflow
