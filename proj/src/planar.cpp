#include "quadrose/planar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quadrose {

namespace {

constexpr double kAreaTol = 1e-9;
constexpr double kPosTol = 1e-9;

std::string half_str(const HalfEdgeGraph& g, HalfId h) {
  return "e" + std::to_string(edge_of(h)) + (is_forward(h) ? "+" : "-") +
         " at v" + std::to_string(g.origin(h));
}

}  // namespace

Polyline HalfEdgeGraph::half_poly(HalfId h) const {
  const Polyline& p = edges[edge_of(h)].poly;
  return is_forward(h) ? p : reversed(p);
}

Vec2 HalfEdgeGraph::out_dir(HalfId h) const {
  const Polyline& p = edges[edge_of(h)].poly;
  if (is_forward(h)) return p[1] - p[0];
  return p[p.size() - 2] - p[p.size() - 1];
}

std::uint32_t HalfEdgeGraph::rot_index(HalfId h) const {
  const auto& rot = vertices[origin(h)].rot;
  for (std::uint32_t i = 0; i < rot.size(); ++i)
    if (rot[i] == h) return i;
  return kNone;
}

HalfId HalfEdgeGraph::rot_next(HalfId h) const {
  const auto& rot = vertices[origin(h)].rot;
  const std::uint32_t i = rot_index(h);
  return rot[(i + 1) % rot.size()];
}

HalfId HalfEdgeGraph::rot_prev(HalfId h) const {
  const auto& rot = vertices[origin(h)].rot;
  const std::uint32_t i = rot_index(h);
  return rot[(i + rot.size() - 1) % rot.size()];
}

VertexId HalfEdgeGraph::add_vertex(Vec2 pos) {
  vertices.push_back({pos, {}});
  return VertexId(vertices.size() - 1);
}

EdgeId HalfEdgeGraph::add_edge(VertexId from, VertexId to, int petal,
                               Polyline poly) {
  const EdgeId e = EdgeId(edges.size());
  edges.push_back({from, to, petal, std::move(poly)});
  vertices[from].rot.push_back(forward_half(e));
  vertices[to].rot.push_back(backward_half(e));
  return e;
}

void HalfEdgeGraph::sort_rotations_by_angle() {
  for (auto& v : vertices)
    std::sort(v.rot.begin(), v.rot.end(), [&](HalfId a, HalfId b) {
      return heading(out_dir(a)) < heading(out_dir(b));
    });
}

FaceSet trace_faces(const HalfEdgeGraph& g, Report* err) {
  FaceSet fs;
  fs.face_of.assign(2 * g.edges.size(), kNone);

  for (HalfId start = 0; start < 2 * g.edges.size(); ++start) {
    if (fs.face_of[start] != kNone) continue;
    Face f;
    HalfId h = start;
    do {
      fs.face_of[h] = FaceId(fs.faces.size());
      f.walk.push_back(h);
      Polyline part = g.half_poly(h);
      f.outline.insert(f.outline.end(), part.begin(), part.end() - 1);
      h = g.face_next(h);
    } while (h != start);
    f.area = signed_area(f.outline);
    f.bounded = f.area > kAreaTol;
    fs.faces.push_back(std::move(f));
  }

  // The unbounded face is walked clockwise and encloses everything, so it
  // carries the most negative area.
  double best = -kAreaTol;
  for (FaceId i = 0; i < fs.faces.size(); ++i)
    if (fs.faces[i].area < best) {
      best = fs.faces[i].area;
      fs.unbounded = i;
    }

  if (fs.unbounded == kNone && !fs.faces.empty()) {
    // Tree-like graph: every walk has zero area. Fall back to walk length.
    std::size_t longest = 0, ties = 0;
    for (FaceId i = 0; i < fs.faces.size(); ++i) {
      if (fs.faces[i].walk.size() > longest) {
        longest = fs.faces[i].walk.size();
        fs.unbounded = i;
        ties = 1;
      } else if (fs.faces[i].walk.size() == longest) {
        ++ties;
      }
    }
    if (ties != 1 && fs.faces.size() > 1 && err)
      err->add("ambiguous-unbounded-face",
               "all face walks have zero area and the longest is not unique");
  }
  if (fs.unbounded != kNone) fs.faces[fs.unbounded].bounded = false;
  return fs;
}

FaceId locate_point(const FaceSet& fs, Vec2 z) {
  for (FaceId i = 0; i < fs.faces.size(); ++i) {
    if (!fs.faces[i].bounded) continue;
    if (winding_number(fs.faces[i].outline, z) != 0) return i;
  }
  return fs.unbounded;
}

Report validate_embedding(const HalfEdgeGraph& g) {
  Report rep;

  for (EdgeId e = 0; e < g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    const std::string tag = "e" + std::to_string(e);
    if (ed.from >= g.vertices.size() || ed.to >= g.vertices.size()) {
      rep.add("bad-endpoint", tag + " references a missing vertex");
      continue;
    }
    if (ed.poly.size() < 2) {
      rep.add("short-polyline", tag + " needs at least two points");
      continue;
    }
    if (ed.from == ed.to && ed.poly.size() < 3)
      rep.add("short-polyline", tag + " is a loop and needs an interior point");
    if (dist(ed.poly.front(), g.vertices[ed.from].pos) > kPosTol)
      rep.add("detached-polyline", tag + " does not start at v" +
                                       std::to_string(ed.from));
    if (dist(ed.poly.back(), g.vertices[ed.to].pos) > kPosTol)
      rep.add("detached-polyline", tag + " does not end at v" +
                                       std::to_string(ed.to));
    for (std::size_t i = 0; i + 1 < ed.poly.size(); ++i)
      if (dist(ed.poly[i], ed.poly[i + 1]) <= kPosTol) {
        rep.add("degenerate-segment", tag + " repeats a point");
        break;
      }
  }
  if (!rep.ok()) return rep;  // later checks assume sane polylines

  // Rotation lists must be permutations of the incident halves.
  {
    std::vector<int> seen(2 * g.edges.size(), 0);
    for (VertexId v = 0; v < g.vertices.size(); ++v)
      for (HalfId h : g.vertices[v].rot) {
        if (h >= 2 * g.edges.size()) {
          rep.add("bad-rotation", "v" + std::to_string(v) +
                                      " lists a missing half-edge");
          continue;
        }
        ++seen[h];
        if (g.origin(h) != v)
          rep.add("bad-rotation",
                  half_str(g, h) + " listed at v" + std::to_string(v));
      }
    for (HalfId h = 0; h < seen.size(); ++h)
      if (seen[h] != 1)
        rep.add("bad-rotation", half_str(g, h) + " appears " +
                                    std::to_string(seen[h]) + " times");
  }
  if (!rep.ok()) return rep;

  // Rotation order must match the drawn tangent directions.
  for (VertexId v = 0; v < g.vertices.size(); ++v) {
    const auto& rot = g.vertices[v].rot;
    if (rot.size() < 2) continue;
    std::vector<double> ang(rot.size());
    for (std::size_t i = 0; i < rot.size(); ++i)
      ang[i] = heading(g.out_dir(rot[i]));
    std::size_t lo = std::size_t(
        std::min_element(ang.begin(), ang.end()) - ang.begin());
    for (std::size_t i = 0; i + 1 < rot.size(); ++i) {
      const double a = ang[(lo + i) % rot.size()];
      const double b = ang[(lo + i + 1) % rot.size()];
      if (!(a < b)) {
        rep.add("rotation-mismatch",
                "v" + std::to_string(v) +
                    ": listed order disagrees with drawn tangent order");
        break;
      }
    }
  }

  // Distinct edges may meet only at shared endpoint vertices.
  auto shared_vertex_point = [&](EdgeId e1, EdgeId e2, Vec2 p) {
    auto touches = [&](EdgeId e, VertexId v) {
      return g.edges[e].from == v || g.edges[e].to == v;
    };
    for (VertexId v : {g.edges[e1].from, g.edges[e1].to})
      if (touches(e2, v) && dist(g.vertices[v].pos, p) <= kPosTol) return true;
    return false;
  };
  for (EdgeId e1 = 0; e1 < g.edges.size(); ++e1) {
    const Polyline& p1 = g.edges[e1].poly;
    for (EdgeId e2 = e1; e2 < g.edges.size(); ++e2) {
      const Polyline& p2 = g.edges[e2].poly;
      for (std::size_t i = 0; i + 1 < p1.size(); ++i) {
        const std::size_t jstart = (e1 == e2) ? i + 1 : 0;
        for (std::size_t j = jstart; j + 1 < p2.size(); ++j) {
          const Vec2 a = p1[i], b = p1[i + 1], c = p2[j], d = p2[j + 1];
          if (e1 == e2 && j == i + 1) {
            // Consecutive segments share exactly one point by construction;
            // a collinear backtrack shows up as a proper overlap.
            if (segment_intersection(a, b, c, d) == SegCross::proper)
              rep.add("self-intersection",
                      "e" + std::to_string(e1) + " backtracks");
            continue;
          }
          const bool loop_seam = e1 == e2 && g.edges[e1].from == g.edges[e1].to &&
                                 i == 0 && j + 2 == p2.size();
          const SegCross k = segment_intersection(a, b, c, d);
          if (k == SegCross::none) continue;
          if (k == SegCross::proper) {
            rep.add(e1 == e2 ? "self-intersection" : "edge-crossing",
                    "e" + std::to_string(e1) + " and e" + std::to_string(e2) +
                        " cross");
            continue;
          }
          // Endpoint touch. Fine at the seam of a loop or at a vertex the
          // two edges share; anything else is a T-junction.
          if (loop_seam) continue;
          if (e1 != e2) {
            bool ok = false;
            for (Vec2 p : {a, b})
              if ((dist(p, c) <= kPosTol || dist(p, d) <= kPosTol) &&
                  shared_vertex_point(e1, e2, p))
                ok = true;
            if (ok) continue;
          }
          rep.add(e1 == e2 ? "self-intersection" : "edge-touch",
                  "e" + std::to_string(e1) + " touches e" +
                      std::to_string(e2) + " away from a shared vertex");
        }
      }
    }
  }
  if (!rep.ok()) return rep;

  // Connectivity (isolated vertices also land here).
  if (!g.vertices.empty()) {
    std::vector<char> vis(g.vertices.size(), 0);
    std::vector<VertexId> stack{0};
    vis[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (HalfId h : g.vertices[v].rot) {
        VertexId w = g.head(h);
        if (!vis[w]) {
          vis[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    if (count != g.vertices.size())
      rep.add("disconnected", "graph has more than one component");
  }
  if (!rep.ok()) return rep;

  FaceSet fs = trace_faces(g, &rep);
  std::size_t negatives = 0;
  for (const Face& f : fs.faces)
    if (f.area < -kAreaTol) ++negatives;
  if (negatives > 1)
    rep.add("several-unbounded-faces",
            std::to_string(negatives) + " clockwise face walks");
  // Euler characteristic: a plane embedding of a connected graph satisfies
  // V - E + F = 2. A rotation system of higher genus fails this even when
  // no drawn segments cross.
  if (!g.vertices.empty()) {
    const long euler = long(g.vertices.size()) - long(g.edges.size()) +
                       long(fs.faces.size());
    if (euler != 2)
      rep.add("not-planar", "Euler characteristic " + std::to_string(euler));
  }
  return rep;
}

}  // namespace quadrose
