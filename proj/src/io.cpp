#include "geoflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace geoflow {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '&': r += "&amp;"; break;
      case '"': r += "&quot;"; break;
      default: r += c;
    }
  }
  return r;
}

}  // namespace

SvgPlot::SvgPlot(double xmin, double xmax, double ymin, double ymax, std::string xlabel, std::string ylabel)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

// Data y is flipped by a scale(1,-1) group, so stored coordinates stay in data units.
void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color, double width) {
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
     << "\" vector-effect=\"non-scaling-stroke\" points=\"";
  for (const auto& [x, y] : pts) os << csv_number(x) << ',' << csv_number(y) << ' ';
  os << "\"/>";
  items_.push_back(os.str());
}

void SvgPlot::marker(double x, double y, const std::string& color, const std::string& title) {
  const double r = 0.012 * std::max(xmax_ - xmin_, ymax_ - ymin_);
  std::ostringstream os;
  os << "<circle cx=\"" << csv_number(x) << "\" cy=\"" << csv_number(y) << "\" r=\"" << r << "\" fill=\"" << color
     << "\">";
  if (!title.empty()) os << "<title>" << xml_escape(title) << "</title>";
  os << "</circle>";
  items_.push_back(os.str());
}

void SvgPlot::write(std::ostream& os) const {
  const double w = xmax_ - xmin_, h = ymax_ - ymin_;
  const double pad = 0.12 * std::max(w, h);
  const double font = 0.04 * std::max(w, h);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"" << static_cast<int>(640 * (h + 2 * pad) / (w + 2 * pad))
     << "\" viewBox=\"" << xmin_ - pad << ' ' << -ymax_ - pad << ' ' << w + 2 * pad << ' ' << h + 2 * pad << "\">\n";
  os << "<g transform=\"scale(1,-1)\">\n";
  const std::string axis = "stroke=\"#888\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"";
  if (ymin_ <= 0 && ymax_ >= 0)
    os << "<line x1=\"" << xmin_ << "\" y1=\"0\" x2=\"" << xmax_ << "\" y2=\"0\" " << axis << "/>\n";
  if (xmin_ <= 0 && xmax_ >= 0)
    os << "<line x1=\"0\" y1=\"" << ymin_ << "\" x2=\"0\" y2=\"" << ymax_ << "\" " << axis << "/>\n";
  os << "<rect x=\"" << xmin_ << "\" y=\"" << ymin_ << "\" width=\"" << w << "\" height=\"" << h
     << "\" fill=\"none\" " << axis << "/>\n";
  for (const auto& it : items_) os << it << '\n';
  os << "</g>\n";
  os << "<g font-family=\"sans-serif\" font-size=\"" << font << "\">\n";
  os << "<text x=\"" << xmax_ << "\" y=\"" << -ymin_ + 1.6 * font << "\" text-anchor=\"end\">" << xml_escape(xlabel_)
     << "</text>\n";
  os << "<text x=\"" << xmin_ << "\" y=\"" << -ymax_ - 0.5 * font << "\">" << xml_escape(ylabel_) << "</text>\n";
  os << "<text x=\"" << xmin_ << "\" y=\"" << -ymin_ + 1.6 * font << "\">" << csv_number(xmin_) << "</text>\n";
  os << "<text x=\"" << xmin_ - 0.2 * font << "\" y=\"" << -ymin_ << "\" text-anchor=\"end\">" << csv_number(ymin_)
     << "</text>\n";
  os << "<text x=\"" << xmin_ - 0.2 * font << "\" y=\"" << -ymax_ + font << "\" text-anchor=\"end\">"
     << csv_number(ymax_) << "</text>\n";
  os << "</g>\n</svg>\n";
}

void write_mesh(std::ostream& os, const Mesh& m) {
  os << "# geoflow mesh v1\n";
  os << "vertices " << m.vertices.size() << '\n';
  for (const auto& v : m.vertices) os << csv_number(v[0]) << ' ' << csv_number(v[1]) << ' ' << csv_number(v[2]) << '\n';
  os << "triangles " << m.triangles.size() << '\n';
  for (const auto& t : m.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

}  // namespace geoflow
