#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "quadrose/approx.hpp"
#include "quadrose/cli.hpp"

namespace quadrose {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

const char* petal_color(int petal) {
  int i = petal <= 0 ? 0 : (petal - 1) % 8;
  return kPalette[i];
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// world box -> a 600-wide screen panel at vertical offset `top`, y flipped
struct Panel {
  BBox box;
  double scale = 1.0;
  double ox = 0.0, oy = 0.0;
  double height = 0.0;

  void fit(double top, double margin) {
    double w = std::max(box.hi.x - box.lo.x, 1e-9);
    double h = std::max(box.hi.y - box.lo.y, 1e-9);
    scale = std::min(600.0 / w, 600.0 / h);
    ox = margin - box.lo.x * scale;
    oy = top + box.hi.y * scale;
    height = h * scale;
  }
  double X(double x) const { return ox + x * scale; }
  double Y(double y) const { return oy - y * scale; }
};

void add_polyline(std::string& out, const Panel& p, const Polyline& poly,
                  const char* cls, const char* color) {
  out += "<polyline class=\"";
  out += cls;
  out += "\" fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (i) out += ' ';
    out += fmt6(p.X(poly[i].x)) + ',' + fmt6(p.Y(poly[i].y));
  }
  out += "\"/>\n";
}

// one arrowhead at the arclength midpoint, pointing along the traversal
void add_arrow(std::string& out, const Panel& p, const Polyline& poly,
               const char* color) {
  if (poly.size() < 2) return;
  double total = 0;
  for (std::size_t i = 1; i < poly.size(); ++i)
    total += dist(poly[i - 1], poly[i]);
  double want = total / 2, run = 0;
  Vec2 at = poly[0], dir{1, 0};
  for (std::size_t i = 1; i < poly.size(); ++i) {
    double seg = dist(poly[i - 1], poly[i]);
    if (run + seg >= want && seg > 0) {
      double u = (want - run) / seg;
      at = {poly[i - 1].x + u * (poly[i].x - poly[i - 1].x),
            poly[i - 1].y + u * (poly[i].y - poly[i - 1].y)};
      dir = {poly[i].x - poly[i - 1].x, poly[i].y - poly[i - 1].y};
      break;
    }
    run += seg;
  }
  double sx = p.X(at.x), sy = p.Y(at.y);
  double dx = dir.x * p.scale, dy = -dir.y * p.scale;
  double n = std::hypot(dx, dy);
  if (n < 1e-12) return;
  dx /= n;
  dy /= n;
  const double L = 7, W = 3.2;
  double tipx = sx + dx * L / 2, tipy = sy + dy * L / 2;
  double bx = sx - dx * L / 2, by = sy - dy * L / 2;
  out += "<path class=\"arrow\" fill=\"" + std::string(color) + "\" d=\"M " +
         fmt6(tipx) + ' ' + fmt6(tipy) + " L " + fmt6(bx - dy * W) + ' ' +
         fmt6(by + dx * W) + " L " + fmt6(bx + dy * W) + ' ' +
         fmt6(by - dx * W) + " Z\"/>\n";
}

BBox graph_box(const HalfEdgeGraph& g) {
  BBox b;
  for (const Vertex& v : g.vertices) b.add(v.pos);
  for (const Edge& e : g.edges)
    for (Vec2 p : e.poly) b.add(p);
  return b;
}

std::string render_svg(const Quadruple& q, const HalfEdgeGraph& g,
                       VertexId base, Report* err) {
  for (const Edge& e : g.edges)
    if (e.poly.size() < 2) {
      if (err) err->add("render-geometry", "an edge has no drawn polyline");
      return "";
    }

  Panel rose;
  rose.box.add(q.rose.center);
  for (const Petal& p : q.rose.petals)
    for (Vec2 v : p.loop) rose.box.add(v);
  for (const MarkedPoint& m : q.marked.points) rose.box.add(m.pos);
  rose.fit(20, 20);

  Panel graph;
  graph.box = graph_box(g);
  graph.fit(20 + rose.height + 60, 20);

  const double width = 640;
  const double height = graph.oy - graph.box.lo.y * graph.scale + 20;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt6(width) +
         "\" height=\"" + fmt6(height) + "\" viewBox=\"0 0 " + fmt6(width) +
         ' ' + fmt6(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  out += "<g id=\"rose\">\n";
  for (std::size_t j = 0; j < q.rose.petals.size(); ++j) {
    const char* color = petal_color(static_cast<int>(j + 1));
    add_polyline(out, rose, q.rose.petals[j].loop, "petal", color);
    add_arrow(out, rose, q.rose.petals[j].loop, color);
  }
  out += "<circle class=\"center\" cx=\"" + fmt6(rose.X(q.rose.center.x)) +
         "\" cy=\"" + fmt6(rose.Y(q.rose.center.y)) +
         "\" r=\"3\" fill=\"#000000\"/>\n";
  for (const MarkedPoint& m : q.marked.points) {
    out += "<rect class=\"marked\" x=\"" + fmt6(rose.X(m.pos.x) - 3.5) +
           "\" y=\"" + fmt6(rose.Y(m.pos.y) - 3.5) +
           "\" width=\"7\" height=\"7\" fill=\"#222222\"/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"graph\">\n";
  for (const Edge& e : g.edges) {
    const char* color = petal_color(e.petal);
    add_polyline(out, graph, e.poly, "edge", color);
    add_arrow(out, graph, e.poly, color);
  }
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    out += "<circle class=\"vertex\" cx=\"" + fmt6(graph.X(g.vertices[i].pos.x)) +
           "\" cy=\"" + fmt6(graph.Y(g.vertices[i].pos.y)) +
           "\" r=\"2.5\" fill=\"#000000\"/>\n";
    if (static_cast<VertexId>(i) == base)
      out += "<circle class=\"basepoint\" cx=\"" +
             fmt6(graph.X(g.vertices[i].pos.x)) + "\" cy=\"" +
             fmt6(graph.Y(g.vertices[i].pos.y)) +
             "\" r=\"5.5\" fill=\"none\" stroke=\"#000000\"/>\n";
  }
  out += "</g>\n";
  out += "</svg>\n";
  return out;
}

std::string render_dot(const Quadruple& q, const HalfEdgeGraph& g,
                       VertexId base) {
  std::string out = "digraph quadruple {\n";
  for (std::size_t j = 0; j < q.rose.petals.size(); ++j)
    out += "  // petal " + std::to_string(j + 1) + " surrounds marked " +
           std::to_string(q.rose.petals[j].marked) + "\n";
  out += "  node [shape=circle];\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    out += "  v" + std::to_string(i) + " [label=\"" + std::to_string(i) + '"';
    if (static_cast<VertexId>(i) == base) out += ", peripheries=2";
    out += "];\n";
  }
  for (const Edge& e : g.edges) {
    out += "  v" + std::to_string(e.from) + " -> v" + std::to_string(e.to) +
           " [label=\"" + std::to_string(e.petal) + "\", color=\"" +
           petal_color(e.petal) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace

std::optional<std::string> render_quad(const Quadruple& q,
                                       std::string_view format,
                                       int ball_radius, Report* err) {
  if (format != "svg" && format != "dot") {
    if (err)
      err->add("render-format", "unknown format '" + std::string(format) + "'");
    return std::nullopt;
  }
  const HalfEdgeGraph* g = nullptr;
  VertexId base = q.basepoint;
  Ball b;
  if (has_generator(q)) {
    b = ball(generator(q), std::max(ball_radius, 0), q.basepoint);
    g = &b.graph;
    base = 0;
  } else {
    g = &finite_graph(q);
  }
  if (format == "dot") return render_dot(q, *g, base);
  std::string svg = render_svg(q, *g, base, err);
  if (svg.empty()) return std::nullopt;
  return svg;
}

}  // namespace quadrose
