#include <algorithm>
#include <limits>
#include <sstream>

#include "nodetrix/scene.hpp"

namespace nodetrix {

namespace {

std::string num(double v) { return format_fixed(v, 4); }

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Bounds {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(Vec2 p, double pad = 0.0) {
    x0 = std::min(x0, p.x - pad);
    y0 = std::min(y0, p.y - pad);
    x1 = std::max(x1, p.x + pad);
    y1 = std::max(y1, p.y + pad);
  }
  bool valid() const { return x0 <= x1 && y0 <= y1; }
};

void rect_element(std::ostringstream& out, const Rect& r, const std::string& fill, const char* extra = "") {
  out << "<rect x=\"" << num(r.x) << "\" y=\"" << num(r.y) << "\" width=\"" << num(r.w) << "\" height=\""
      << num(r.h) << "\" fill=\"" << fill << "\"" << extra << "/>\n";
}

}  // namespace

std::string render_svg(const Scene& scene, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0)) throw InputError("canvas size must be positive");
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\"";

  Bounds b;
  for (const auto& e : scene.edges)
    for (Vec2 p : e.points) b.add(p, 0.5 * e.width);
  for (const auto& n : scene.nodes) b.add(n.center, n.radius);
  for (const auto& m : scene.matrices) {
    b.add({m.frame.left(), m.frame.top()});
    b.add({m.frame.right(), m.frame.bottom()});
  }
  for (const auto& l : scene.labels) b.add(l.position, l.size * (0.3 * static_cast<double>(l.text.size()) + 1.0));
  if (!b.valid()) {
    out << "/>\n";
    return out.str();
  }
  const double margin = 0.05 * std::max({b.x1 - b.x0, b.y1 - b.y0, 1e-9});
  out << " viewBox=\"" << num(b.x0 - margin) << " " << num(b.y0 - margin) << " " << num(b.x1 - b.x0 + 2 * margin)
      << " " << num(b.y1 - b.y0 + 2 * margin) << "\">\n";

  for (const auto& e : scene.edges) {
    if (e.points.size() < 2) continue;
    out << "<path class=\"" << (e.band ? "band" : "link") << "\" d=\"M" << num(e.points[0].x) << " "
        << num(e.points[0].y);
    if (e.shape == PathShape::quadratic && e.points.size() == 3) {
      out << " Q" << num(e.points[1].x) << " " << num(e.points[1].y) << " " << num(e.points[2].x) << " "
          << num(e.points[2].y);
    } else {
      for (std::size_t i = 1; i < e.points.size(); ++i) out << " L" << num(e.points[i].x) << " " << num(e.points[i].y);
    }
    out << "\" fill=\"none\" stroke=\"" << e.color << "\" stroke-width=\"" << num(e.width) << "\" stroke-opacity=\""
        << num(e.opacity) << "\"/>\n";
  }

  for (const auto& n : scene.nodes) {
    out << "<circle data-group=\"" << value(n.group) << "\" cx=\"" << num(n.center.x) << "\" cy=\""
        << num(n.center.y) << "\" r=\"" << num(n.radius) << "\" fill=\"" << n.fill << "\" stroke=\"" << n.border
        << "\" stroke-width=\"" << num(0.15 * n.radius) << "\" opacity=\"" << num(n.opacity) << "\"/>\n";
  }

  for (const auto& m : scene.matrices) {
    out << "<g class=\"matrix\" data-group=\"" << value(m.group) << "\" opacity=\"" << num(m.opacity) << "\">\n";
    const std::string stroke = " stroke=\"" + m.border + "\" stroke-width=\"" + num(0.1 * m.cell) + "\"";
    rect_element(out, m.frame, m.background, stroke.c_str());
    for (const auto& a : m.axis) {
      if (a.row_box.w <= 0.0) continue;
      rect_element(out, a.row_box, a.fill);
      rect_element(out, a.col_box, a.fill);
      if (!m.axis_labels) continue;
      const Vec2 r = a.row_box.center();
      const Vec2 c = a.col_box.center();
      out << "<text x=\"" << num(r.x) << "\" y=\"" << num(r.y) << "\" font-size=\"" << num(m.axis_label_size)
          << "\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << escape(a.label) << "</text>\n";
      out << "<text x=\"" << num(c.x) << "\" y=\"" << num(c.y) << "\" font-size=\"" << num(m.axis_label_size)
          << "\" text-anchor=\"middle\" dominant-baseline=\"middle\" transform=\"rotate(-90 " << num(c.x) << " "
          << num(c.y) << ")\">" << escape(a.label) << "</text>\n";
    }
    for (const auto& cell : m.cells) {
      if (cell.multiplicity == 0 && !cell.diagonal) continue;
      const Rect r{m.grid.x + static_cast<double>(cell.col) * m.cell, m.grid.y + static_cast<double>(cell.row) * m.cell,
                   m.cell, m.cell};
      const std::string extra = " opacity=\"" + num(cell.opacity) + "\"";
      rect_element(out, r, cell.fill, extra.c_str());
      if (cell.diagonal && cell.multiplicity == 0) {
        out << "<line x1=\"" << num(r.left()) << "\" y1=\"" << num(r.bottom()) << "\" x2=\"" << num(r.right())
            << "\" y2=\"" << num(r.top()) << "\" stroke=\"#bdbdbd\" stroke-width=\"" << num(0.05 * m.cell)
            << "\"/>\n";
      }
    }
    out << "</g>\n";
  }

  for (const auto& l : scene.labels) {
    out << "<text class=\"group-label\" x=\"" << num(l.position.x) << "\" y=\"" << num(l.position.y)
        << "\" font-size=\"" << num(l.size) << "\" text-anchor=\"middle\" opacity=\"" << num(l.opacity) << "\">"
        << escape(l.text) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace nodetrix
