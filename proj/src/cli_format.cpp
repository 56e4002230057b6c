#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "quadrose/cli.hpp"

namespace quadrose {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string ref_str(const GenHalfRef& r) {
  std::string out;
  if (r.kind == GenHalfRef::Kind::core) {
    out = "core:" + std::to_string(r.edge);
  } else {
    // cell == kNone inside a cell block points back at that same cell
    out = "cell:";
    out += r.cell == kNone ? "self" : std::to_string(r.cell);
    out += ':' + std::to_string(r.edge);
  }
  out += r.forward ? ":f:" : ":b:";
  out += std::to_string(r.rep_delta);
  return out;
}

std::string end_str(const GenEnd& e) {
  return e.prev ? "prev:" + std::to_string(e.v) : std::to_string(e.v);
}

void append_poly(std::string& out, const Polyline& poly) {
  for (Vec2 p : poly) {
    out += ' ';
    out += fmt_g(p.x);
    out += ' ';
    out += fmt_g(p.y);
  }
}

void append_graph_lines(std::string& out, const std::vector<GenVertex>& verts,
                        bool core, const std::vector<Edge>& core_edges,
                        const std::vector<GenEdge>& cell_edges) {
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out += "VERTEX " + std::to_string(i) + ' ' + fmt_g(verts[i].pos.x) + ' ' +
           fmt_g(verts[i].pos.y) + '\n';
  }
  const std::size_t ecount = core ? core_edges.size() : cell_edges.size();
  for (std::size_t e = 0; e < ecount; ++e) {
    out += "EDGE " + std::to_string(e) + ' ';
    if (core) {
      out += std::to_string(core_edges[e].from) + ' ' +
             std::to_string(core_edges[e].to) + ' ' +
             std::to_string(core_edges[e].petal);
      append_poly(out, core_edges[e].poly);
    } else {
      out += end_str(cell_edges[e].from) + ' ' + end_str(cell_edges[e].to) +
             ' ' + std::to_string(cell_edges[e].petal);
      append_poly(out, cell_edges[e].poly);
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    out += "ROT " + std::to_string(i);
    for (const GenHalfRef& r : verts[i].rot) out += ' ' + ref_str(r);
    out += '\n';
  }
}

}  // namespace

std::string serialize_quad(const Quadruple& q) {
  std::string out;
  out += "MARKED\n";
  for (std::size_t i = 0; i < q.marked.points.size(); ++i) {
    const MarkedPoint& mp = q.marked.points[i];
    out += std::to_string(i) + ' ' + fmt_g(mp.pos.x) + ' ' + fmt_g(mp.pos.y);
    if (!mp.name.empty()) out += ' ' + mp.name;
    out += '\n';
  }
  out += "ROSE\n";
  out += "center " + fmt_g(q.rose.center.x) + ' ' + fmt_g(q.rose.center.y) + '\n';
  for (std::size_t j = 0; j < q.rose.petals.size(); ++j) {
    out += "PETAL " + std::to_string(j + 1) + ' ' +
           std::to_string(q.rose.petals[j].marked);
    append_poly(out, q.rose.petals[j].loop);
    out += '\n';
  }
  if (has_generator(q)) {
    const GraphGenerator& gen = generator(q);
    out += "GENERATOR\n";
    out += "CORE\n";
    append_graph_lines(out, gen.core_vertices, true, gen.core_edges, {});
    for (std::size_t c = 0; c < gen.cells.size(); ++c) {
      const GenCell& cell = gen.cells[c];
      out += "CELL " + cell.name + ' ' + fmt_g(cell.disp.x) + ' ' +
             fmt_g(cell.disp.y) + '\n';
      append_graph_lines(out, cell.vertices, false, {}, cell.edges);
      out += "GLUE";
      for (std::uint32_t b : cell.prev_binding)
        out += b == kNone ? std::string(" -") : ' ' + std::to_string(b);
      out += '\n';
    }
    out += "BASEPOINT " + std::to_string(q.basepoint) + '\n';
  } else {
    const HalfEdgeGraph& g = finite_graph(q);
    out += "GRAPH\n";
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
      out += "VERTEX " + std::to_string(i) + ' ' + fmt_g(g.vertices[i].pos.x) +
             ' ' + fmt_g(g.vertices[i].pos.y) + '\n';
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      out += "EDGE " + std::to_string(e) + ' ' + std::to_string(g.edges[e].from) +
             ' ' + std::to_string(g.edges[e].to) + ' ' +
             std::to_string(g.edges[e].petal);
      append_poly(out, g.edges[e].poly);
      out += '\n';
    }
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
      out += "ROT " + std::to_string(i);
      for (HalfId h : g.vertices[i].rot) out += ' ' + std::to_string(h);
      out += '\n';
    }
    out += "BASEPOINT " + std::to_string(q.basepoint) + '\n';
  }
  out += "META\n";
  out += "parabolic ";
  out += q.declared_parabolic ? '1' : '0';
  out += '\n';
  if (!q.parabolic_note.empty()) out += "note " + q.parabolic_note + '\n';
  return out;
}

namespace {

// one tokenized input line
struct Line {
  std::size_t no = 0;
  std::vector<std::string> tok;
};

struct Parser {
  Report* err;
  bool bad = false;

  void fail(std::size_t line, const std::string& what) {
    if (!bad && err)
      err->add("quad-parse", "line " + std::to_string(line) + ": " + what);
    bad = true;
  }

  std::optional<double> num(const Line& l, std::size_t i) {
    if (i >= l.tok.size()) {
      fail(l.no, "missing number");
      return std::nullopt;
    }
    const char* s = l.tok[i].c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end != s + l.tok[i].size()) {
      fail(l.no, "bad number '" + l.tok[i] + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<long> integer(const Line& l, std::size_t i) {
    if (i >= l.tok.size()) {
      fail(l.no, "missing integer");
      return std::nullopt;
    }
    const char* s = l.tok[i].c_str();
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s + l.tok[i].size()) {
      fail(l.no, "bad integer '" + l.tok[i] + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<Polyline> poly_tail(const Line& l, std::size_t from) {
    Polyline poly;
    if (from >= l.tok.size()) return poly;  // empty tail is allowed
    if ((l.tok.size() - from) % 2 != 0) {
      fail(l.no, "odd coordinate count");
      return std::nullopt;
    }
    for (std::size_t i = from; i + 1 < l.tok.size(); i += 2) {
      auto x = num(l, i);
      auto y = num(l, i + 1);
      if (!x || !y) return std::nullopt;
      poly.push_back({*x, *y});
    }
    if (poly.size() == 1) {
      fail(l.no, "a polyline needs at least two points");
      return std::nullopt;
    }
    return poly;
  }
};

struct RawEdge {
  std::size_t line = 0;
  long id = 0, from = 0, to = 0;
  int petal = 0;
  Polyline poly;
};

struct RawRot {
  std::size_t line = 0;
  long vertex = 0;
  std::vector<long> halves;
};

bool parse_gen_end(const std::string& tok, GenEnd* out) {
  std::string body = tok;
  out->prev = false;
  if (body.rfind("prev:", 0) == 0) {
    out->prev = true;
    body = body.substr(5);
  }
  if (body.empty()) return false;
  char* end = nullptr;
  long v = std::strtol(body.c_str(), &end, 10);
  if (end != body.c_str() + body.size() || v < 0) return false;
  out->v = static_cast<std::uint32_t>(v);
  return true;
}

bool parse_gen_ref(const std::string& tok, GenHalfRef* out) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = tok.find(':', start);
    parts.push_back(tok.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto to_long = [](const std::string& s, long* v) {
    char* end = nullptr;
    *v = std::strtol(s.c_str(), &end, 10);
    return !s.empty() && end == s.c_str() + s.size();
  };
  long a = 0, b = 0, d = 0;
  if (parts.size() == 4 && parts[0] == "core") {
    if (!to_long(parts[1], &a) || a < 0) return false;
    if (parts[2] != "f" && parts[2] != "b") return false;
    if (!to_long(parts[3], &d)) return false;
    out->kind = GenHalfRef::Kind::core;
    out->cell = kNone;
    out->edge = static_cast<std::uint32_t>(a);
    out->forward = parts[2] == "f";
    out->rep_delta = static_cast<int>(d);
    return true;
  }
  if (parts.size() == 5 && parts[0] == "cell") {
    if (parts[1] == "self")
      a = static_cast<long>(kNone);
    else if (!to_long(parts[1], &a) || a < 0)
      return false;
    if (!to_long(parts[2], &b) || b < 0) return false;
    if (parts[3] != "f" && parts[3] != "b") return false;
    if (!to_long(parts[4], &d)) return false;
    out->kind = GenHalfRef::Kind::cell;
    out->cell = static_cast<std::uint32_t>(a);
    out->edge = static_cast<std::uint32_t>(b);
    out->forward = parts[3] == "f";
    out->rep_delta = static_cast<int>(d);
    return true;
  }
  return false;
}

}  // namespace

std::optional<Quadruple> parse_quad_text(std::string_view text, Report* err) {
  Parser P{err};

  // section payloads in raw (file-id) form
  struct RawMarked {
    std::size_t line;
    long id;
    Vec2 pos;
    std::string name;
  };
  struct RawPetal {
    std::size_t line;
    long j, marked;
    Polyline loop;
  };
  struct RawVertex {
    std::size_t line;
    long id;
    Vec2 pos;
  };
  struct RawCell {
    std::size_t header_line = 0;
    std::string name;
    Vec2 disp;
    std::vector<RawVertex> verts;
    std::vector<std::pair<std::size_t, GenEdge>> edges;  // line, payload
    std::vector<std::pair<std::size_t, std::vector<GenHalfRef>>> rots;
    std::vector<long> rot_vertex;
    std::vector<std::uint32_t> glue;
    bool has_glue = false;
    std::size_t glue_line = 0;
  };

  std::vector<RawMarked> marked;
  bool has_rose = false, has_center = false;
  Vec2 center{};
  std::vector<RawPetal> petals;
  bool has_graph = false, has_generator = false, has_meta = false;
  std::vector<RawVertex> gverts;
  std::vector<RawEdge> gedges;
  std::vector<RawRot> grots;
  bool has_basepoint = false;
  long basepoint = 0;
  std::size_t basepoint_line = 0;
  // generator payload: block -1 = core, otherwise cells[block]
  std::vector<RawVertex> core_verts;
  std::vector<std::pair<std::size_t, Edge>> core_edges;
  std::vector<std::pair<std::size_t, std::vector<GenHalfRef>>> core_rots;
  std::vector<long> core_rot_vertex;
  std::vector<RawCell> cells;
  bool in_core = false;
  bool parabolic = false;
  std::string note;

  enum class Sec { none, marked, rose, graph, gen, meta };
  Sec sec = Sec::none;
  bool seen[6] = {};

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < text.size() && !P.bad) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string raw(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++lineno;

    Line l;
    l.no = lineno;
    std::istringstream ss(raw);
    for (std::string t; ss >> t;) l.tok.push_back(t);
    if (l.tok.empty() || l.tok[0][0] == '#') continue;
    const std::string& kw = l.tok[0];

    auto open_section = [&](Sec s) {
      if (seen[static_cast<int>(s)]) P.fail(l.no, "duplicate section " + kw);
      seen[static_cast<int>(s)] = true;
      sec = s;
    };

    if (kw == "MARKED") {
      open_section(Sec::marked);
    } else if (kw == "ROSE") {
      open_section(Sec::rose);
      has_rose = true;
    } else if (kw == "GRAPH") {
      open_section(Sec::graph);
      has_graph = true;
    } else if (kw == "GENERATOR") {
      open_section(Sec::gen);
      has_generator = true;
    } else if (kw == "META") {
      open_section(Sec::meta);
      has_meta = true;
    } else if (sec == Sec::marked) {
      auto id = P.integer(l, 0);
      auto x = P.num(l, 1);
      auto y = P.num(l, 2);
      if (!id || !x || !y) break;
      std::string name;
      for (std::size_t i = 3; i < l.tok.size(); ++i) {
        if (!name.empty()) name += ' ';
        name += l.tok[i];
      }
      marked.push_back({l.no, *id, {*x, *y}, name});
    } else if (sec == Sec::rose) {
      if (kw == "center") {
        if (has_center) {
          P.fail(l.no, "duplicate center");
          break;
        }
        auto x = P.num(l, 1);
        auto y = P.num(l, 2);
        if (!x || !y) break;
        center = {*x, *y};
        has_center = true;
      } else if (kw == "PETAL") {
        auto j = P.integer(l, 1);
        auto m = P.integer(l, 2);
        if (!j || !m) break;
        auto loop = P.poly_tail(l, 3);
        if (!loop) break;
        if (loop->size() < 3) {
          P.fail(l.no, "a petal loop needs at least three points");
          break;
        }
        petals.push_back({l.no, *j, *m, std::move(*loop)});
      } else {
        P.fail(l.no, "unknown ROSE line '" + kw + "'");
      }
    } else if (sec == Sec::graph) {
      if (kw == "VERTEX") {
        auto id = P.integer(l, 1);
        auto x = P.num(l, 2);
        auto y = P.num(l, 3);
        if (!id || !x || !y) break;
        gverts.push_back({l.no, *id, {*x, *y}});
      } else if (kw == "EDGE") {
        auto id = P.integer(l, 1);
        auto from = P.integer(l, 2);
        auto to = P.integer(l, 3);
        auto petal = P.integer(l, 4);
        if (!id || !from || !to || !petal) break;
        auto poly = P.poly_tail(l, 5);
        if (!poly) break;
        gedges.push_back(
            {l.no, *id, *from, *to, static_cast<int>(*petal), std::move(*poly)});
      } else if (kw == "ROT") {
        auto v = P.integer(l, 1);
        if (!v) break;
        RawRot r;
        r.line = l.no;
        r.vertex = *v;
        for (std::size_t i = 2; i < l.tok.size(); ++i) {
          auto h = P.integer(l, i);
          if (!h) break;
          r.halves.push_back(*h);
        }
        if (P.bad) break;
        grots.push_back(std::move(r));
      } else if (kw == "BASEPOINT") {
        auto b = P.integer(l, 1);
        if (!b) break;
        basepoint = *b;
        has_basepoint = true;
        basepoint_line = l.no;
      } else {
        P.fail(l.no, "unknown GRAPH line '" + kw + "'");
      }
    } else if (sec == Sec::gen) {
      if (kw == "CORE") {
        in_core = true;
      } else if (kw == "CELL") {
        if (l.tok.size() < 4) {
          P.fail(l.no, "CELL wants a name and a displacement");
          break;
        }
        auto dx = P.num(l, 2);
        auto dy = P.num(l, 3);
        if (!dx || !dy) break;
        in_core = false;
        RawCell c;
        c.header_line = l.no;
        c.name = l.tok[1];
        c.disp = {*dx, *dy};
        cells.push_back(std::move(c));
      } else if (kw == "VERTEX") {
        auto id = P.integer(l, 1);
        auto x = P.num(l, 2);
        auto y = P.num(l, 3);
        if (!id || !x || !y) break;
        RawVertex v{l.no, *id, {*x, *y}};
        if (in_core) {
          core_verts.push_back(v);
        } else if (!cells.empty()) {
          cells.back().verts.push_back(v);
        } else {
          P.fail(l.no, "VERTEX outside CORE or CELL");
        }
      } else if (kw == "EDGE") {
        auto id = P.integer(l, 1);
        if (!id) break;
        if (in_core) {
          auto from = P.integer(l, 2);
          auto to = P.integer(l, 3);
          auto petal = P.integer(l, 4);
          if (!from || !to || !petal) break;
          auto poly = P.poly_tail(l, 5);
          if (!poly) break;
          Edge e;
          e.from = static_cast<VertexId>(*from);
          e.to = static_cast<VertexId>(*to);
          e.petal = static_cast<int>(*petal);
          e.poly = std::move(*poly);
          core_edges.emplace_back(l.no, std::move(e));
        } else if (!cells.empty()) {
          if (l.tok.size() < 5) {
            P.fail(l.no, "cell EDGE wants endpoints and a petal");
            break;
          }
          GenEdge e;
          if (!parse_gen_end(l.tok[2], &e.from) ||
              !parse_gen_end(l.tok[3], &e.to)) {
            P.fail(l.no, "bad cell endpoint");
            break;
          }
          auto petal = P.integer(l, 4);
          if (!petal) break;
          e.petal = static_cast<int>(*petal);
          auto poly = P.poly_tail(l, 5);
          if (!poly) break;
          e.poly = std::move(*poly);
          cells.back().edges.emplace_back(l.no, std::move(e));
        } else {
          P.fail(l.no, "EDGE outside CORE or CELL");
        }
      } else if (kw == "ROT") {
        auto v = P.integer(l, 1);
        if (!v) break;
        std::vector<GenHalfRef> refs;
        bool ok = true;
        for (std::size_t i = 2; i < l.tok.size(); ++i) {
          GenHalfRef r;
          if (!parse_gen_ref(l.tok[i], &r)) {
            P.fail(l.no, "bad rotation entry '" + l.tok[i] + "'");
            ok = false;
            break;
          }
          refs.push_back(r);
        }
        if (!ok) break;
        if (in_core) {
          core_rots.emplace_back(l.no, std::move(refs));
          core_rot_vertex.push_back(*v);
        } else if (!cells.empty()) {
          cells.back().rots.emplace_back(l.no, std::move(refs));
          cells.back().rot_vertex.push_back(*v);
        } else {
          P.fail(l.no, "ROT outside CORE or CELL");
        }
      } else if (kw == "GLUE") {
        if (cells.empty()) {
          P.fail(l.no, "GLUE outside a CELL");
          break;
        }
        RawCell& c = cells.back();
        if (c.has_glue) {
          P.fail(l.no, "duplicate GLUE");
          break;
        }
        for (std::size_t i = 1; i < l.tok.size(); ++i) {
          if (l.tok[i] == "-") {
            c.glue.push_back(kNone);
          } else {
            auto b = P.integer(l, i);
            if (!b || *b < 0) {
              P.fail(l.no, "bad GLUE entry");
              break;
            }
            c.glue.push_back(static_cast<std::uint32_t>(*b));
          }
        }
        if (P.bad) break;
        c.has_glue = true;
        c.glue_line = l.no;
      } else if (kw == "BASEPOINT") {
        auto b = P.integer(l, 1);
        if (!b) break;
        basepoint = *b;
        has_basepoint = true;
        basepoint_line = l.no;
      } else {
        P.fail(l.no, "unknown GENERATOR line '" + kw + "'");
      }
    } else if (sec == Sec::meta) {
      if (kw == "parabolic") {
        auto v = P.integer(l, 1);
        if (!v) break;
        parabolic = *v != 0;
      } else if (kw == "note") {
        for (std::size_t i = 1; i < l.tok.size(); ++i) {
          if (!note.empty()) note += ' ';
          note += l.tok[i];
        }
      } else {
        P.fail(l.no, "unknown META line '" + kw + "'");
      }
    } else {
      P.fail(l.no, "unknown section '" + kw + "'");
    }
  }
  (void)has_meta;
  if (P.bad) return std::nullopt;

  // cross-reference checks, first error wins
  if (marked.empty()) {
    P.fail(1, "no MARKED section or it is empty");
    return std::nullopt;
  }
  if (!has_rose || !has_center) {
    P.fail(1, "missing ROSE section with a center");
    return std::nullopt;
  }
  if (has_graph == has_generator) {
    P.fail(1, has_graph ? "both GRAPH and GENERATOR present"
                        : "need a GRAPH or GENERATOR section");
    return std::nullopt;
  }
  if (!has_basepoint) {
    P.fail(1, "missing BASEPOINT");
    return std::nullopt;
  }

  std::map<long, std::uint32_t> marked_ix;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (!marked_ix.emplace(marked[i].id, i).second) {
      P.fail(marked[i].line, "duplicate marked id");
      return std::nullopt;
    }
  }

  Quadruple q;
  for (const auto& m : marked) q.marked.points.push_back({m.pos, m.name});

  q.rose.center = center;
  q.rose.petals.resize(petals.size());
  std::vector<char> petal_seen(petals.size(), 0);
  for (auto& p : petals) {
    if (p.j < 1 || p.j > static_cast<long>(petals.size())) {
      P.fail(p.line, "petal index out of range");
      return std::nullopt;
    }
    if (petal_seen[p.j - 1]) {
      P.fail(p.line, "duplicate petal " + std::to_string(p.j));
      return std::nullopt;
    }
    petal_seen[p.j - 1] = 1;
    auto it = marked_ix.find(p.marked);
    if (it == marked_ix.end()) {
      P.fail(p.line, "petal references unknown marked id " +
                         std::to_string(p.marked));
      return std::nullopt;
    }
    q.rose.petals[p.j - 1] = {std::move(p.loop), it->second};
  }

  if (has_graph) {
    std::map<long, VertexId> vix;
    for (std::size_t i = 0; i < gverts.size(); ++i) {
      if (!vix.emplace(gverts[i].id, static_cast<VertexId>(i)).second) {
        P.fail(gverts[i].line, "duplicate vertex id");
        return std::nullopt;
      }
    }
    std::map<long, EdgeId> eix;
    for (std::size_t e = 0; e < gedges.size(); ++e) {
      if (!eix.emplace(gedges[e].id, static_cast<EdgeId>(e)).second) {
        P.fail(gedges[e].line, "duplicate edge id");
        return std::nullopt;
      }
    }
    HalfEdgeGraph g;
    for (const auto& v : gverts) g.add_vertex(v.pos);
    for (auto& e : gedges) {
      auto f = vix.find(e.from);
      auto t = vix.find(e.to);
      if (f == vix.end() || t == vix.end()) {
        P.fail(e.line, "edge references unknown vertex " +
                           std::to_string(f == vix.end() ? e.from : e.to));
        return std::nullopt;
      }
      Polyline poly = std::move(e.poly);
      if (poly.empty())
        poly = {g.vertices[f->second].pos, g.vertices[t->second].pos};
      g.add_edge(f->second, t->second, e.petal, std::move(poly));
    }
    for (const auto& r : grots) {
      auto v = vix.find(r.vertex);
      if (v == vix.end()) {
        P.fail(r.line, "rotation for unknown vertex " + std::to_string(r.vertex));
        return std::nullopt;
      }
      std::vector<HalfId> rot;
      for (long h : r.halves) {
        if (h < 0) {
          P.fail(r.line, "negative half id");
          return std::nullopt;
        }
        auto ei = eix.find(h / 2);
        if (ei == eix.end()) {
          P.fail(r.line, "rotation references unknown edge " +
                             std::to_string(h / 2));
          return std::nullopt;
        }
        rot.push_back(2 * ei->second + static_cast<HalfId>(h % 2));
      }
      g.vertices[v->second].rot = std::move(rot);
    }
    auto b = vix.find(basepoint);
    if (b == vix.end()) {
      P.fail(basepoint_line, "basepoint references unknown vertex " +
                                 std::to_string(basepoint));
      return std::nullopt;
    }
    q.basepoint = b->second;
    q.graph = std::move(g);
  } else {
    GraphGenerator gen;
    // id remapping inside generator blocks: ids must be dense and in order,
    // matching the template's positional references
    auto check_dense = [&](const std::vector<RawVertex>& vs) -> bool {
      for (std::size_t i = 0; i < vs.size(); ++i)
        if (vs[i].id != static_cast<long>(i)) {
          P.fail(vs[i].line, "generator vertex ids must be dense from 0");
          return false;
        }
      return true;
    };
    if (!check_dense(core_verts)) return std::nullopt;
    for (const auto& v : core_verts) {
      GenVertex gv;
      gv.pos = v.pos;
      gen.core_vertices.push_back(std::move(gv));
    }
    for (auto& [line, e] : core_edges) {
      if (e.from >= core_verts.size() || e.to >= core_verts.size()) {
        P.fail(line, "core edge references unknown vertex");
        return std::nullopt;
      }
      if (e.poly.empty())
        e.poly = {core_verts[e.from].pos, core_verts[e.to].pos};
      gen.core_edges.push_back(std::move(e));
    }
    std::vector<std::size_t> core_rot_line(gen.core_vertices.size(), 1);
    for (std::size_t r = 0; r < core_rots.size(); ++r) {
      long v = core_rot_vertex[r];
      if (v < 0 || v >= static_cast<long>(gen.core_vertices.size())) {
        P.fail(core_rots[r].first, "rotation for unknown core vertex");
        return std::nullopt;
      }
      gen.core_vertices[v].rot = std::move(core_rots[r].second);
      core_rot_line[v] = core_rots[r].first;
    }
    std::vector<std::vector<std::size_t>> cell_rot_line;
    for (auto& rc : cells) {
      GenCell cell;
      cell.name = rc.name;
      cell.disp = rc.disp;
      if (!check_dense(rc.verts)) return std::nullopt;
      for (const auto& v : rc.verts) {
        GenVertex gv;
        gv.pos = v.pos;
        cell.vertices.push_back(std::move(gv));
      }
      for (auto& [line, e] : rc.edges) {
        if (e.from.v >= cell.vertices.size() || e.to.v >= cell.vertices.size()) {
          P.fail(line, "cell edge references unknown vertex");
          return std::nullopt;
        }
        if (e.poly.empty()) {
          P.fail(line, "cell edges need explicit polylines");
          return std::nullopt;
        }
        cell.edges.push_back(std::move(e));
      }
      std::vector<std::size_t> rot_line(cell.vertices.size(), rc.header_line);
      for (std::size_t r = 0; r < rc.rots.size(); ++r) {
        long v = rc.rot_vertex[r];
        if (v < 0 || v >= static_cast<long>(cell.vertices.size())) {
          P.fail(rc.rots[r].first, "rotation for unknown cell vertex");
          return std::nullopt;
        }
        cell.vertices[v].rot = std::move(rc.rots[r].second);
        rot_line[v] = rc.rots[r].first;
      }
      cell_rot_line.push_back(std::move(rot_line));
      if (!rc.has_glue || rc.glue.size() != cell.vertices.size()) {
        P.fail(rc.has_glue ? rc.glue_line : rc.header_line,
               "GLUE wants one entry per cell vertex");
        return std::nullopt;
      }
      for (std::uint32_t b : rc.glue) {
        if (b != kNone && b >= gen.core_vertices.size()) {
          P.fail(rc.glue_line, "GLUE references unknown core vertex");
          return std::nullopt;
        }
      }
      cell.prev_binding = rc.glue;
      gen.cells.push_back(std::move(cell));
    }
    // rotation references resolve once every cell is in; cell:self is only
    // meaningful inside a cell block
    auto check_refs = [&](const std::vector<GenVertex>& vs,
                          std::uint32_t self_cell,
                          const std::vector<std::size_t>& lines) -> bool {
      for (std::size_t i = 0; i < vs.size(); ++i)
        for (const GenHalfRef& r : vs[i].rot) {
          if (r.kind == GenHalfRef::Kind::core) {
            if (r.edge >= gen.core_edges.size()) {
              P.fail(lines[i], "rotation references unknown core edge");
              return false;
            }
          } else {
            const std::uint32_t c = r.cell == kNone ? self_cell : r.cell;
            if (c >= gen.cells.size() || r.edge >= gen.cells[c].edges.size()) {
              P.fail(lines[i], "rotation references unknown cell edge");
              return false;
            }
          }
        }
      return true;
    };
    if (!check_refs(gen.core_vertices, kNone, core_rot_line))
      return std::nullopt;
    for (std::size_t c = 0; c < gen.cells.size(); ++c)
      if (!check_refs(gen.cells[c].vertices, static_cast<std::uint32_t>(c),
                      cell_rot_line[c]))
        return std::nullopt;
    if (basepoint < 0 ||
        basepoint >= static_cast<long>(gen.core_vertices.size())) {
      P.fail(basepoint_line, "basepoint must be a core vertex");
      return std::nullopt;
    }
    q.basepoint = static_cast<VertexId>(basepoint);
    q.graph = std::move(gen);
  }

  q.declared_parabolic = parabolic;
  q.parabolic_note = note;
  return q;
}

std::optional<Quadruple> parse_quad(const std::string& path, Report* err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (err) err->add("quad-io", "cannot read " + path);
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_quad_text(buf.str(), err);
}

bool write_quad(const Quadruple& q, const std::string& path, Report* err) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    if (err) err->add("quad-io", "cannot write " + path);
    return false;
  }
  out << serialize_quad(q);
  out.flush();
  if (!out) {
    if (err) err->add("quad-io", "short write to " + path);
    return false;
  }
  return true;
}

}  // namespace quadrose
