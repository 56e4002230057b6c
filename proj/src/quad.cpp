#include "quadrose/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <tuple>

namespace quadrose {

namespace {

constexpr double kPointTol = 1e-9;
constexpr double kSepTol = 1e-7;  // clearance between marked points and edges

// census geometry: walk faces seeded from the innermost reps inside a
// window wide enough that every face type closes or repeats first
constexpr std::uint32_t kCensusWindow = 6;
constexpr std::uint32_t kCensusSeed = 2;

std::string vstr(std::uint32_t v) { return std::to_string(v); }

int petal_of(const HalfEdgeGraph& g, HalfId h) {
  return static_cast<int>(g.edges[edge_of(h)].petal);
}

void check_marked(const MarkedSet& marked, Report& rep) {
  if (marked.size() == 0) {
    rep.add("empty-marked", "no marked points");
    return;
  }
  for (std::size_t i = 0; i < marked.size(); ++i)
    for (std::size_t j = i + 1; j < marked.size(); ++j)
      if (dist(marked.points[i].pos, marked.points[j].pos) <= kPointTol)
        rep.add("marked-duplicate",
                "marked " + std::to_string(i) + " and " + std::to_string(j));
}

// shared endpoint of two segments, if any, else nullopt
std::optional<Vec2> touch_point(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  for (Vec2 p : {a, b})
    if (point_segment_dist(p, c, d) <= kPointTol) return p;
  for (Vec2 p : {c, d})
    if (point_segment_dist(p, a, b) <= kPointTol) return p;
  return std::nullopt;
}

void check_rose(const MarkedSet& marked, const Rose& rose, Report& rep) {
  const std::size_t m = rose.size();
  if (m == 0) {
    rep.add("empty-rose", "no petals");
    return;
  }
  if (m != marked.size())
    rep.add("petal-assignment", "petal count differs from marked count");
  std::vector<int> hit(marked.size(), 0);
  for (std::size_t j = 0; j < m; ++j) {
    const Petal& p = rose.petals[j];
    const std::string tag = "petal " + std::to_string(j + 1);
    if (p.marked >= marked.size()) {
      rep.add("petal-assignment", tag + ": bad marked id");
      continue;
    }
    ++hit[p.marked];
    if (p.loop.size() < 4 || dist(p.loop.front(), rose.center) > kPointTol ||
        dist(p.loop.back(), rose.center) > kPointTol) {
      rep.add("petal-shape", tag + ": loop must start and end at the center");
      continue;
    }
    if (signed_area(p.loop) <= 0)
      rep.add("petal-orientation", tag + ": loop is not counterclockwise");
    for (std::size_t i = 0; i < marked.size(); ++i) {
      int w = winding_number(p.loop, marked.points[i].pos);
      int want = (i == p.marked) ? 1 : 0;
      if (w != want)
        rep.add("petal-content", tag + ": winding " + std::to_string(w) +
                                     " around marked " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (hit[i] != 1)
      rep.add("petal-assignment",
              "marked " + std::to_string(i) + " assigned to " +
                  std::to_string(hit[i]) + " petals");
    if (dist(marked.points[i].pos, rose.center) <= kPointTol)
      rep.add("center-on-marked", "marked " + std::to_string(i));
  }
  if (!rep.ok()) return;

  // simple loops, pairwise disjoint except at the shared center
  for (std::size_t j1 = 0; j1 < m; ++j1) {
    const Polyline& l1 = rose.petals[j1].loop;
    for (std::size_t j2 = j1; j2 < m; ++j2) {
      const Polyline& l2 = rose.petals[j2].loop;
      for (std::size_t i = 0; i + 1 < l1.size(); ++i) {
        std::size_t i2start = (j1 == j2) ? i + 1 : 0;
        for (std::size_t i2 = i2start; i2 + 1 < l2.size(); ++i2) {
          if (j1 == j2) {
            if (i2 == i + 1) continue;  // consecutive
            if (i == 0 && i2 + 2 == l1.size()) continue;  // seam at center
          }
          SegCross k = segment_intersection(l1[i], l1[i + 1], l2[i2], l2[i2 + 1]);
          if (k == SegCross::none) continue;
          if (k == SegCross::endpoint && j1 != j2) {
            auto t = touch_point(l1[i], l1[i + 1], l2[i2], l2[i2 + 1]);
            if (t && dist(*t, rose.center) <= kPointTol) continue;
          }
          rep.add("petal-crossing", "petals " + std::to_string(j1 + 1) +
                                        " and " + std::to_string(j2 + 1));
          i = l1.size();  // report each pair once
          break;
        }
      }
    }
  }

  // counterclockwise petal order by initial tangent
  std::vector<double> ang(m);
  for (std::size_t j = 0; j < m; ++j)
    ang[j] = heading(rose.petals[j].loop[1] - rose.center);
  std::size_t lo = 0;
  for (std::size_t j = 1; j < m; ++j)
    if (ang[j] < ang[lo]) lo = j;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    double a = ang[(lo + k) % m], b = ang[(lo + k + 1) % m];
    if (!(a < b)) {
      rep.add("petal-order", "petals are not in counterclockwise order");
      break;
    }
  }
}

bool covering_ok(const HalfEdgeGraph& g, VertexId v, std::size_t m,
                 Report& rep) {
  std::vector<int> out(m + 1, 0), in(m + 1, 0);
  for (HalfId h : g.vertices[v].rot) {
    int j = petal_of(g, h);
    if (j < 1 || j > static_cast<int>(m)) continue;  // reported elsewhere
    (is_forward(h) ? out[j] : in[j])++;
  }
  bool ok = true;
  for (std::size_t j = 1; j <= m; ++j) {
    if (out[j] != 1 || in[j] != 1) {
      rep.add("covering-determinism",
              "vertex " + vstr(v) + ": petal " + std::to_string(j) + " has " +
                  std::to_string(out[j]) + " out, " + std::to_string(in[j]) +
                  " in");
      ok = false;
    }
  }
  return ok;
}

void check_slot_pattern(const HalfEdgeGraph& g, VertexId v, std::size_t m,
                        Report& rep) {
  const auto& rot = g.vertices[v].rot;
  if (rot.size() != 2 * m) return;  // covering determinism already failed
  std::size_t p0 = rot.size();
  for (std::size_t i = 0; i < rot.size(); ++i)
    if (petal_of(g, rot[i]) == 1 && is_forward(rot[i])) p0 = i;
  if (p0 == rot.size()) return;
  for (std::size_t k = 0; k < 2 * m; ++k) {
    HalfId h = rot[(p0 + k) % (2 * m)];
    int want = static_cast<int>(k / 2) + 1;
    bool fwd = (k % 2 == 0);
    if (petal_of(g, h) != want || is_forward(h) != fwd) {
      rep.add("slot-order", "vertex " + vstr(v) +
                                ": rotation is not out/in by petal");
      return;
    }
  }
}

std::size_t distinct_origins(const HalfEdgeGraph& g,
                             const std::vector<HalfId>& walk) {
  std::vector<VertexId> vs;
  vs.reserve(walk.size());
  for (HalfId h : walk) vs.push_back(g.origin(h));
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs.size();
}

void check_labels_in_range(const Quadruple& q, Report& rep) {
  const int m = static_cast<int>(q.rose.size());
  auto bad = [&](int petal) { return petal < 1 || petal > m; };
  if (!has_generator(q)) {
    const auto& g = finite_graph(q);
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (bad(g.edges[e].petal))
        rep.add("bad-petal-label", "edge " + std::to_string(e));
  } else {
    const auto& gen = generator(q);
    for (std::size_t e = 0; e < gen.core_edges.size(); ++e)
      if (bad(gen.core_edges[e].petal))
        rep.add("bad-petal-label", "core edge " + std::to_string(e));
    for (const GenCell& c : gen.cells)
      for (std::size_t e = 0; e < c.edges.size(); ++e)
        if (bad(c.edges[e].petal))
          rep.add("bad-petal-label", c.name + " edge " + std::to_string(e));
  }
}

void finite_graph_checks(const Quadruple& q, Report& rep) {
  const HalfEdgeGraph& g = finite_graph(q);
  const std::size_t m = q.rose.size();
  rep.merge(validate_embedding(g));
  check_labels_in_range(q, rep);
  if (!rep.ok()) return;

  bool deterministic = true;
  for (VertexId v = 0; v < g.vertices.size(); ++v)
    deterministic &= covering_ok(g, v, m, rep);
  if (!deterministic) return;
  if (m >= 2)
    for (VertexId v = 0; v < g.vertices.size(); ++v)
      check_slot_pattern(g, v, m, rep);

  FaceSet fs = trace_faces(g, &rep);
  if (!rep.ok()) return;
  std::vector<int> labels = label_faces(g, fs);
  for (std::size_t f = 0; f < fs.faces.size(); ++f)
    if (labels[f] == 0 && fs.faces[f].bounded)
      rep.add("p-infinity-bounded",
              "bounded face with an inconsistent boundary word");
  if (m >= 2) {
    for (HalfId h = 0; h < 2 * g.edges.size(); ++h) {
      int lab = labels[fs.face_of[h]];
      if (is_forward(h) && lab != petal_of(g, h))
        rep.add("petal-face-adjacency",
                "forward half of edge " + std::to_string(edge_of(h)) +
                    " does not border its petal face");
      else if (!is_forward(h) && lab != 0)
        rep.add("petal-face-adjacency",
                "backward half of edge " + std::to_string(edge_of(h)) +
                    " does not border the unlabeled face");
    }
  }
}

void generator_graph_checks(const Quadruple& q, Report& rep) {
  const GraphGenerator& gen = generator(q);
  const std::size_t m = q.rose.size();
  rep.merge(validate_generator(gen));
  check_labels_in_range(q, rep);
  if (!rep.ok()) return;

  FaceCensus census = face_census(gen, &rep);
  if (!rep.ok()) return;
  const HalfEdgeGraph& g = census.ex.g;

  bool deterministic = true;
  std::vector<VertexId> inner;
  for (VertexId v = 0; v < g.vertices.size(); ++v)
    if (census.ex.vertex_rep[v] <= 1) inner.push_back(v);
  for (VertexId v : inner) deterministic &= covering_ok(g, v, m, rep);
  if (!deterministic) return;
  if (m >= 2)
    for (VertexId v : inner) check_slot_pattern(g, v, m, rep);

  for (const FaceClass& fc : census.faces)
    if (!fc.unbounded && fc.label == 0)
      rep.add("p-infinity-bounded",
              "closed face with an inconsistent boundary word");
  if (m >= 2) {
    for (VertexId v : inner) {
      for (HalfId h : g.vertices[v].rot) {
        std::uint32_t cls = census.class_of[h];
        if (cls == kNone) {
          rep.add("census-window", "unclassified half at vertex " + vstr(v));
          continue;
        }
        int lab = census.faces[cls].label;
        if (is_forward(h) && lab != petal_of(g, h))
          rep.add("petal-face-adjacency",
                  "forward half at vertex " + vstr(v) +
                      " does not border its petal face");
        else if (!is_forward(h) && lab != 0)
          rep.add("petal-face-adjacency",
                  "backward half at vertex " + vstr(v) +
                      " does not border the unlabeled face");
      }
    }
  }
}

// bounded faces of a generated graph repeat along their cell displacement;
// find which instance (class, shift) of a closed face holds z, if any
struct FaceInstance {
  std::uint32_t cls = kNone;
  int shift = 0;
};

std::optional<FaceInstance> locate_in_census(const GraphGenerator& gen,
                                             const FaceCensus& census,
                                             Vec2 z) {
  for (std::uint32_t i = 0; i < census.faces.size(); ++i) {
    const FaceClass& fc = census.faces[i];
    if (fc.unbounded) continue;
    if (winding_number(fc.outline, z) != 0) return FaceInstance{i, 0};
    // translates: only when the whole walk lives in one cell
    std::uint32_t cell = kNone;
    bool uniform = true;
    for (HalfId h : fc.walk) {
      std::uint32_t c = census.ex.edge_cell[edge_of(h)];
      if (c == kNone || (cell != kNone && c != cell)) uniform = false;
      cell = c;
    }
    if (!uniform || cell == kNone) continue;
    Vec2 disp = gen.cells[cell].disp;
    for (int k = 1; k <= static_cast<int>(kCensusWindow); ++k) {
      Polyline moved = fc.outline;
      for (Vec2& p : moved) p = p + static_cast<double>(k) * disp;
      if (winding_number(moved, z) != 0) return FaceInstance{i, k};
    }
  }
  return std::nullopt;
}

}  // namespace

Rose build_rose(const MarkedSet& marked, Vec2 center,
                std::vector<Polyline> loops, Report* err) {
  Report local;
  Report& rep = err ? *err : local;
  Rose rose;
  rose.center = center;
  if (loops.size() != marked.size()) {
    rep.add("petal-assignment", "loop count differs from marked count");
    return rose;
  }
  for (Polyline& loop : loops) {
    Petal p;
    if (loop.size() < 4) {
      rep.add("petal-shape", "loop has too few points");
      return rose;
    }
    if (signed_area(loop) < 0) loop = reversed(loop);
    p.loop = std::move(loop);
    for (std::size_t i = 0; i < marked.size(); ++i)
      if (winding_number(p.loop, marked.points[i].pos) != 0) {
        if (p.marked != kNone) {
          rep.add("petal-content", "loop surrounds several marked points");
          break;
        }
        p.marked = static_cast<std::uint32_t>(i);
      }
    if (p.marked == kNone)
      rep.add("petal-content", "loop surrounds no marked point");
    rose.petals.push_back(std::move(p));
  }
  std::sort(rose.petals.begin(), rose.petals.end(),
            [&](const Petal& a, const Petal& b) {
              return heading(a.loop[1] - center) < heading(b.loop[1] - center);
            });
  check_rose(marked, rose, rep);
  return rose;
}

Polyline lasso(Vec2 base, Vec2 target, double r, int ring_nodes) {
  constexpr double kSpread = 0.35;  // stem half-angle at the ring, radians
  const double theta = heading(base - target);
  Polyline loop;
  loop.push_back(base);
  const double step = (2.0 * M_PI - 2.0 * kSpread) / ring_nodes;
  for (int k = 0; k <= ring_nodes; ++k) {
    double a = theta + kSpread + k * step;
    loop.push_back(target + Vec2{r * std::cos(a), r * std::sin(a)});
  }
  loop.push_back(base);
  return loop;
}

Rose auto_rose(const MarkedSet& marked, Vec2 center, Report* err) {
  double dmin = std::numeric_limits<double>::infinity();
  std::vector<Vec2> pts;
  for (const MarkedPoint& p : marked.points) pts.push_back(p.pos);
  pts.push_back(center);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      dmin = std::min(dmin, dist(pts[i], pts[j]));
  std::vector<Polyline> loops;
  for (const MarkedPoint& p : marked.points)
    loops.push_back(lasso(center, p.pos, dmin / 3.0));
  return build_rose(marked, center, std::move(loops), err);
}

std::vector<int> label_faces(const HalfEdgeGraph& g, const FaceSet& fs) {
  std::vector<int> labels(fs.faces.size(), 0);
  for (std::size_t f = 0; f < fs.faces.size(); ++f) {
    int lab = -1;
    for (HalfId h : fs.faces[f].walk) {
      if (!is_forward(h)) {
        lab = 0;
        break;
      }
      int j = petal_of(g, h);
      if (lab == -1) lab = j;
      if (lab != j) {
        lab = 0;
        break;
      }
    }
    labels[f] = (lab == -1) ? 0 : lab;
  }
  return labels;
}

FaceCensus face_census(const GraphGenerator& gen, Report* err) {
  Report local;
  Report& rep = err ? *err : local;
  FaceCensus c;
  c.ex = gen.expand(kCensusWindow);
  const HalfEdgeGraph& g = c.ex.g;
  const HalfId nh = static_cast<HalfId>(2 * g.edges.size());
  c.class_of.assign(nh, kNone);

  using Sig = std::tuple<std::uint32_t, std::uint32_t, bool>;
  auto sig = [&](HalfId h) {
    EdgeId e = edge_of(h);
    return Sig{c.ex.edge_cell[e], c.ex.edge_index[e], is_forward(h)};
  };

  for (HalfId seed = 0; seed < nh; ++seed) {
    if (c.class_of[seed] != kNone) continue;
    if (c.ex.edge_rep[edge_of(seed)] > kCensusSeed) continue;

    const std::uint32_t cls = static_cast<std::uint32_t>(c.faces.size());
    std::vector<HalfId> walk;
    std::map<Sig, std::uint32_t> seen;
    int label = -1;  // -1 undecided, 0 inconsistent, j pure petal
    bool closed = false;
    bool periodic = false;
    std::size_t period_len = 0;
    HalfId h = seed;
    while (true) {
      if (c.class_of[h] != kNone) {
        // ran into a face discovered earlier: same face, merge into it
        std::uint32_t tgt = c.class_of[h];
        for (HalfId x : walk) c.class_of[x] = tgt;
        FaceClass& t = c.faces[tgt];
        if (!t.unbounded)
          rep.add("census-window", "closed face re-entered; malformed cells");
        if (label == 0 || (label > 0 && t.label != label)) t.label = 0;
        walk.clear();
        break;
      }
      c.class_of[h] = cls;
      walk.push_back(h);
      if (!is_forward(h) || (label >= 0 && label != petal_of(g, h)))
        label = 0;
      else if (label == -1)
        label = petal_of(g, h);

      if (!periodic) {
        auto [it, fresh] = seen.try_emplace(sig(h), c.ex.edge_rep[edge_of(h)]);
        if (!fresh && it->second != c.ex.edge_rep[edge_of(h)]) {
          // reached a translate of an earlier half: periodic face. Keep
          // marching to mark the halves ahead so no seed rediscovers this
          // face further out; the tail ends at the window frontier.
          periodic = true;
          period_len = walk.size();
        }
      }
      VertexId nv = g.head(h);
      if (!c.ex.complete[nv]) {
        if (!periodic)
          rep.add("census-window",
                  "face walk left the expansion window at vertex " + vstr(nv));
        break;
      }
      h = g.face_next(h);
      if (h == seed) {
        closed = true;
        break;
      }
    }
    if (walk.empty()) continue;  // merged
    if (closed) periodic = false;  // a long walk may revisit a signature

    FaceClass fc;
    fc.label = (label <= 0) ? 0 : label;
    fc.walk = std::move(walk);
    if (periodic) fc.walk.resize(period_len);
    if (closed) {
      fc.unbounded = false;
      fc.vcount = distinct_origins(g, fc.walk);
      for (HalfId x : fc.walk) {
        Polyline part = g.half_poly(x);
        fc.outline.insert(fc.outline.end(), part.begin(), part.end() - 1);
      }
      if (signed_area(fc.outline) <= 0)
        rep.add("census-window", "closed face walk is not counterclockwise");
    } else {
      fc.unbounded = true;
    }
    c.faces.push_back(std::move(fc));
  }
  return c;
}

Report validate_admissible(const Quadruple& q) {
  Report rep;
  check_marked(q.marked, rep);
  check_rose(q.marked, q.rose, rep);
  if (!rep.ok()) return rep;
  if (has_generator(q))
    generator_graph_checks(q, rep);
  else
    finite_graph_checks(q, rep);
  return rep;
}

Report validate_dynamic(const Quadruple& q) {
  Report rep = validate_admissible(q);
  if (!rep.ok()) return rep;

  if (!has_generator(q)) {
    const HalfEdgeGraph& g = finite_graph(q);
    for (std::size_t i = 0; i < q.marked.size(); ++i) {
      Vec2 z = q.marked.points[i].pos;
      for (const Edge& e : g.edges)
        if (point_polyline_dist(z, e.poly) <= kSepTol) {
          rep.add("marked-on-graph", "marked " + std::to_string(i));
          break;
        }
    }
    if (!rep.ok()) return rep;
    FaceSet fs = trace_faces(g, nullptr);
    std::vector<int> count(fs.faces.size(), 0);
    for (std::size_t i = 0; i < q.marked.size(); ++i) {
      FaceId f = locate_point(fs, q.marked.points[i].pos);
      if (!fs.faces[f].bounded) {
        rep.add("marked-in-unbounded-face", "marked " + std::to_string(i));
        continue;
      }
      if (++count[f] > 1)
        rep.add("marked-shared-face", "marked " + std::to_string(i));
    }
  } else {
    if (!q.declared_parabolic)
      rep.add("parabolicity-undeclared",
              "infinite graphs need the declared flag and a reason");
    const GraphGenerator& gen = generator(q);
    FaceCensus census = face_census(gen, nullptr);
    for (std::size_t i = 0; i < q.marked.size(); ++i) {
      Vec2 z = q.marked.points[i].pos;
      for (const Edge& e : census.ex.g.edges)
        if (point_polyline_dist(z, e.poly) <= kSepTol) {
          rep.add("marked-on-graph", "marked " + std::to_string(i));
          break;
        }
    }
    if (!rep.ok()) return rep;
    std::map<std::pair<std::uint32_t, int>, int> count;
    for (std::size_t i = 0; i < q.marked.size(); ++i) {
      auto inst = locate_in_census(gen, census, q.marked.points[i].pos);
      if (!inst) {
        rep.add("marked-in-unbounded-face", "marked " + std::to_string(i));
        continue;
      }
      if (++count[{inst->cls, inst->shift}] > 1)
        rep.add("marked-shared-face", "marked " + std::to_string(i));
    }
  }
  return rep;
}

std::optional<Portrait> portrait(const Quadruple& q, Report* err) {
  Report rep = validate_dynamic(q);
  if (!rep.ok()) {
    if (err) err->merge(rep);
    return std::nullopt;
  }
  const std::size_t m = q.rose.size();
  Portrait p;
  p.nodes.resize(q.marked.size());
  std::vector<bool> petal_singular(m + 1, false);

  if (!has_generator(q)) {
    const HalfEdgeGraph& g = finite_graph(q);
    FaceSet fs = trace_faces(g, nullptr);
    std::vector<int> labels = label_faces(g, fs);
    for (std::size_t i = 0; i < q.marked.size(); ++i) {
      FaceId f = locate_point(fs, q.marked.points[i].pos);
      int j = labels[f];
      p.nodes[i].target = q.rose.petals[j - 1].marked;
      p.nodes[i].weight = distinct_origins(g, fs.faces[f].walk);
    }
    for (std::size_t f = 0; f < fs.faces.size(); ++f) {
      int j = labels[f];
      if (j > 0 && (!fs.faces[f].bounded ||
                    distinct_origins(g, fs.faces[f].walk) > 1))
        petal_singular[j] = true;
    }
  } else {
    const GraphGenerator& gen = generator(q);
    FaceCensus census = face_census(gen, nullptr);
    for (std::size_t i = 0; i < q.marked.size(); ++i) {
      auto inst = locate_in_census(gen, census, q.marked.points[i].pos);
      const FaceClass& fc = census.faces[inst->cls];
      p.nodes[i].target = q.rose.petals[fc.label - 1].marked;
      p.nodes[i].weight = fc.vcount;
    }
    for (const FaceClass& fc : census.faces)
      if (fc.label > 0 && (fc.unbounded || fc.vcount > 1))
        petal_singular[fc.label] = true;
  }
  for (std::size_t j = 1; j <= m; ++j)
    if (petal_singular[j]) p.nodes[q.rose.petals[j - 1].marked].singular = true;
  return p;
}

std::optional<std::size_t> degree(const Quadruple& q) {
  if (has_generator(q)) return std::nullopt;
  return finite_graph(q).vertices.size();
}

std::optional<SinglePetalClass> classify_single_petal(const Quadruple& q,
                                                      Report* err) {
  if (q.rose.size() != 1) {
    if (err) err->add("not-single-petal", "rose has several petals");
    return std::nullopt;
  }
  // admissibility is enough: the chain shape never places its marked point
  Report rep = validate_admissible(q);
  if (!rep.ok()) {
    if (err) err->merge(rep);
    return std::nullopt;
  }
  SinglePetalClass c;
  c.power_map = !has_generator(q);
  c.deg = c.power_map ? finite_graph(q).vertices.size() : 0;
  return c;
}

namespace {

HalfId find_slot(const HalfEdgeGraph& g, VertexId v, int petal, bool fwd) {
  for (HalfId h : g.vertices[v].rot)
    if (petal_of(g, h) == petal && is_forward(h) == fwd) return h;
  return kNone;
}

// pattern rotation entries, mapped into the host, must keep cyclic order
bool cyclic_suborder_ok(const std::vector<std::size_t>& idx) {
  if (idx.size() < 3) return true;
  std::size_t descents = 0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[(i + 1) % idx.size()] < idx[i]) ++descents;
  return descents <= 1;
}

}  // namespace

RootedMatch match_rooted(const HalfEdgeGraph& pat, VertexId pat_root,
                         const HalfEdgeGraph& host, VertexId host_root,
                         bool require_onto) {
  RootedMatch r;
  r.map.assign(pat.vertices.size(), kNone);
  if (pat_root >= pat.vertices.size() || host_root >= host.vertices.size()) {
    r.conflict = "root vertex out of range";
    return r;
  }
  std::vector<VertexId> rmap(host.vertices.size(), kNone);
  r.map[pat_root] = host_root;
  rmap[host_root] = pat_root;
  std::queue<VertexId> bfs;
  bfs.push(pat_root);
  while (!bfs.empty()) {
    VertexId v1 = bfs.front();
    bfs.pop();
    VertexId v2 = r.map[v1];
    std::vector<std::size_t> host_pos;
    for (HalfId h1 : pat.vertices[v1].rot) {
      int petal = petal_of(pat, h1);
      bool fwd = is_forward(h1);
      HalfId h2 = find_slot(host, v2, petal, fwd);
      if (h2 == kNone) {
        r.conflict = "vertex " + vstr(v1) + ": host vertex " + vstr(v2) +
                     " lacks a petal-" + std::to_string(petal) +
                     (fwd ? " outgoing" : " incoming") + " slot";
        return r;
      }
      host_pos.push_back(host.rot_index(h2));
      VertexId u1 = pat.head(h1), u2 = host.head(h2);
      if (r.map[u1] == kNone && rmap[u2] == kNone) {
        r.map[u1] = u2;
        rmap[u2] = u1;
        bfs.push(u1);
      } else if (r.map[u1] != u2 || rmap[u2] != u1) {
        r.conflict = "edge from vertex " + vstr(v1) + " sends vertex " +
                     vstr(u1) + " to " + vstr(u2) + ", conflicting";
        return r;
      }
    }
    if (!cyclic_suborder_ok(host_pos)) {
      r.conflict = "vertex " + vstr(v1) + ": rotation order differs at host " +
                   vstr(v2);
      return r;
    }
    if (require_onto &&
        pat.vertices[v1].rot.size() != host.vertices[v2].rot.size()) {
      r.conflict = "vertex " + vstr(v1) + ": degree differs at host " + vstr(v2);
      return r;
    }
  }
  for (VertexId v = 0; v < pat.vertices.size(); ++v)
    if (r.map[v] == kNone) {
      r.conflict = "vertex " + vstr(v) + " unreachable from the root";
      return r;
    }
  if (require_onto) {
    for (VertexId v = 0; v < host.vertices.size(); ++v)
      if (rmap[v] == kNone) {
        r.conflict = "host vertex " + vstr(v) + " is not covered";
        return r;
      }
    if (pat.edges.size() != host.edges.size()) {
      r.conflict = "edge counts differ";
      return r;
    }
  }
  r.found = true;
  return r;
}

bool dyn_equivalent(const Quadruple& q1, const Quadruple& q2, Report* why) {
  auto fail = [&](const std::string& code, const std::string& detail) {
    if (why) why->add(code, detail);
    return false;
  };
  if (has_generator(q1) || has_generator(q2))
    return fail("not-finite", "equivalence compares finite graphs only");
  Report r1 = validate_dynamic(q1);
  if (!r1.ok()) return fail("first-not-dynamic", r1.str());
  Report r2 = validate_dynamic(q2);
  if (!r2.ok()) return fail("second-not-dynamic", r2.str());

  const std::size_t n = q1.marked.size();
  if (n != q2.marked.size())
    return fail("marked-mismatch", "marked sets differ in size");
  for (std::size_t i = 0; i < n; ++i)
    if (dist(q1.marked.points[i].pos, q2.marked.points[i].pos) > kPointTol)
      return fail("marked-mismatch", "marked " + std::to_string(i));
  const std::size_t m = q1.rose.size();
  if (m != q2.rose.size())
    return fail("rose-mismatch", "petal counts differ");

  const HalfEdgeGraph& g1 = finite_graph(q1);
  const HalfEdgeGraph& g2 = finite_graph(q2);
  if (g1.vertices.size() != g2.vertices.size() ||
      g1.edges.size() != g2.edges.size())
    return fail("graph-mismatch", "vertex or edge counts differ");

  FaceSet fs1 = trace_faces(g1, nullptr);
  FaceSet fs2 = trace_faces(g2, nullptr);

  for (std::size_t s = 0; s < m; ++s) {
    bool compatible = true;
    for (std::size_t i = 0; i < m && compatible; ++i)
      compatible = (q1.rose.petals[i].marked == q2.rose.petals[(i + s) % m].marked);
    if (!compatible) continue;

    // petal j of q1 plays the role of petal ((j-1+s) mod m)+1 in q2
    HalfEdgeGraph g2s = g2;
    for (Edge& e : g2s.edges) {
      std::size_t j2 = static_cast<std::size_t>(e.petal - 1);  // 0-based in q2
      e.petal = static_cast<int>((j2 + m - s) % m) + 1;
    }

    for (VertexId root2 = 0; root2 < g2s.vertices.size(); ++root2) {
      RootedMatch mr = match_rooted(g1, 0, g2s, root2, true);
      if (!mr.found) continue;
      bool faces_ok = true;
      for (std::size_t i = 0; i < n && faces_ok; ++i) {
        FaceId f1 = locate_point(fs1, q1.marked.points[i].pos);
        HalfId h1 = fs1.faces[f1].walk[0];
        HalfId h2 = find_slot(g2s, mr.map[g1.origin(h1)], petal_of(g1, h1),
                              is_forward(h1));
        FaceId f2 = fs2.face_of[h2];
        faces_ok = (locate_point(fs2, q2.marked.points[i].pos) == f2);
      }
      if (faces_ok) return true;
    }
  }
  return fail("no-isomorphism", "no rooted match preserves the marked faces");
}

}  // namespace quadrose
