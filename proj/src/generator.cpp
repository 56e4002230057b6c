#include "quadrose/generator.hpp"

#include <string>

namespace quadrose {

namespace {

std::uint32_t per_rep_vertices(const GraphGenerator& g) {
  std::uint32_t n = 0;
  for (const auto& c : g.cells) n += std::uint32_t(c.vertices.size());
  return n;
}

std::uint32_t per_rep_edges(const GraphGenerator& g) {
  std::uint32_t n = 0;
  for (const auto& c : g.cells) n += std::uint32_t(c.edges.size());
  return n;
}

}  // namespace

std::uint32_t GraphGenerator::cell_index(const std::string& name) const {
  for (std::uint32_t i = 0; i < cells.size(); ++i)
    if (cells[i].name == name) return i;
  return kNone;
}

VertexId GraphGenerator::vertex_id(std::uint32_t rep, std::uint32_t cell,
                                   std::uint32_t index) const {
  if (rep == 0) return index;
  std::uint32_t off = std::uint32_t(core_vertices.size()) +
                      (rep - 1) * per_rep_vertices(*this);
  for (std::uint32_t c = 0; c < cell; ++c)
    off += std::uint32_t(cells[c].vertices.size());
  return off + index;
}

EdgeId GraphGenerator::edge_id(std::uint32_t rep, std::uint32_t cell,
                               std::uint32_t index) const {
  if (rep == 0) return index;
  std::uint32_t off = std::uint32_t(core_edges.size()) +
                      (rep - 1) * per_rep_edges(*this);
  for (std::uint32_t c = 0; c < cell; ++c)
    off += std::uint32_t(cells[c].edges.size());
  return off + index;
}

Expansion GraphGenerator::expand(std::uint32_t reps) const {
  Expansion ex;
  ex.reps = reps;

  for (const auto& v : core_vertices) {
    ex.g.vertices.push_back({v.pos, {}});
    ex.vertex_rep.push_back(0);
    ex.vertex_cell.push_back(kNone);
    ex.vertex_index.push_back(VertexId(ex.vertex_rep.size() - 1));
  }
  for (std::uint32_t r = 1; r <= reps; ++r)
    for (std::uint32_t c = 0; c < cells.size(); ++c) {
      const Vec2 shift = double(r - 1) * cells[c].disp;
      for (std::uint32_t i = 0; i < cells[c].vertices.size(); ++i) {
        ex.g.vertices.push_back({cells[c].vertices[i].pos + shift, {}});
        ex.vertex_rep.push_back(r);
        ex.vertex_cell.push_back(c);
        ex.vertex_index.push_back(i);
      }
    }

  for (std::uint32_t e = 0; e < core_edges.size(); ++e) {
    ex.g.edges.push_back(core_edges[e]);
    ex.edge_rep.push_back(0);
    ex.edge_cell.push_back(kNone);
    ex.edge_index.push_back(e);
  }
  for (std::uint32_t r = 1; r <= reps; ++r)
    for (std::uint32_t c = 0; c < cells.size(); ++c) {
      const Vec2 shift = double(r - 1) * cells[c].disp;
      for (std::uint32_t k = 0; k < cells[c].edges.size(); ++k) {
        const GenEdge& ge = cells[c].edges[k];
        auto resolve = [&](GenEnd end) -> VertexId {
          if (!end.prev) return vertex_id(r, c, end.v);
          if (r == 1) return cells[c].prev_binding[end.v];
          return vertex_id(r - 1, c, end.v);
        };
        Edge ed;
        ed.from = resolve(ge.from);
        ed.to = resolve(ge.to);
        ed.petal = ge.petal;
        ed.poly = ge.poly;
        for (Vec2& p : ed.poly) p = p + shift;
        ex.g.edges.push_back(std::move(ed));
        ex.edge_rep.push_back(r);
        ex.edge_cell.push_back(c);
        ex.edge_index.push_back(k);
      }
    }

  // Rotation lists from the templates. Entries that point past the last
  // repetition are dropped and mark the vertex as a frontier vertex.
  ex.complete.assign(ex.g.vertices.size(), 1);
  for (VertexId v = 0; v < ex.g.vertices.size(); ++v) {
    const std::uint32_t r = ex.vertex_rep[v];
    const GenVertex& tmpl = r == 0
                                ? core_vertices[v]
                                : cells[ex.vertex_cell[v]]
                                      .vertices[ex.vertex_index[v]];
    for (const GenHalfRef& ref : tmpl.rot) {
      if (ref.kind == GenHalfRef::Kind::core) {
        ex.g.vertices[v].rot.push_back(2 * ref.edge + (ref.forward ? 0 : 1));
        continue;
      }
      const std::uint32_t target_rep = r + std::uint32_t(ref.rep_delta);
      const std::uint32_t target_cell =
          r == 0 ? ref.cell : ex.vertex_cell[v];
      if (target_rep > reps) {
        ex.complete[v] = 0;
        continue;
      }
      const EdgeId e = edge_id(target_rep, target_cell, ref.edge);
      ex.g.vertices[v].rot.push_back(2 * e + (ref.forward ? 0 : 1));
    }
  }
  return ex;
}

Report validate_generator(const GraphGenerator& gen) {
  Report rep;
  if (gen.cells.empty()) {
    rep.add("no-cells", "a generator needs at least one repeating cell");
    return rep;
  }
  for (std::uint32_t c = 0; c < gen.cells.size(); ++c) {
    const GenCell& cell = gen.cells[c];
    const std::string tag = "cell " + cell.name;
    if (cell.name.empty()) rep.add("unnamed-cell", "cell " + std::to_string(c));
    for (std::uint32_t c2 = 0; c2 < c; ++c2)
      if (gen.cells[c2].name == cell.name)
        rep.add("duplicate-cell", tag);
    if (norm(cell.disp) <= 1e-9)
      rep.add("zero-displacement", tag + " would stack repetitions");
    if (cell.prev_binding.size() != cell.vertices.size())
      rep.add("bad-binding", tag + " binding table has the wrong size");
    for (std::uint32_t k = 0; k < cell.edges.size(); ++k) {
      const GenEdge& e = cell.edges[k];
      const std::string etag = tag + " edge " + std::to_string(k);
      if (e.from.prev && e.to.prev)
        rep.add("edge-between-previous",
                etag + " belongs to the earlier repetition");
      for (GenEnd end : {e.from, e.to}) {
        if (end.v >= cell.vertices.size()) {
          rep.add("bad-endpoint", etag);
          continue;
        }
        if (end.prev && end.v < cell.prev_binding.size() &&
            cell.prev_binding[end.v] >= gen.core_vertices.size())
          rep.add("bad-binding",
                  etag + " needs a core binding for vertex " +
                      std::to_string(end.v));
      }
    }
    for (std::uint32_t i = 0; i < cell.vertices.size(); ++i)
      for (const GenHalfRef& ref : cell.vertices[i].rot) {
        const std::string vtag = tag + " vertex " + std::to_string(i);
        if (ref.kind == GenHalfRef::Kind::core) {
          rep.add("bad-rotation-ref", vtag + " lists a core edge");
          continue;
        }
        if (ref.cell != kNone && ref.cell != c)
          rep.add("bad-rotation-ref", vtag + " lists another cell's edge");
        if (ref.edge >= cell.edges.size())
          rep.add("bad-rotation-ref", vtag + " lists a missing edge");
        if (ref.rep_delta != 0 && ref.rep_delta != 1)
          rep.add("bad-rotation-ref", vtag + " repetition offset not 0 or 1");
      }
  }
  for (std::uint32_t v = 0; v < gen.core_vertices.size(); ++v)
    for (const GenHalfRef& ref : gen.core_vertices[v].rot) {
      const std::string vtag = "core vertex " + std::to_string(v);
      if (ref.kind == GenHalfRef::Kind::core) {
        if (ref.edge >= gen.core_edges.size())
          rep.add("bad-rotation-ref", vtag + " lists a missing edge");
        continue;
      }
      if (ref.cell >= gen.cells.size() ||
          ref.edge >= gen.cells[ref.cell].edges.size())
        rep.add("bad-rotation-ref", vtag + " lists a missing cell edge");
      if (ref.rep_delta != 1)
        rep.add("bad-rotation-ref",
                vtag + " must reference the first repetition");
    }
  if (!rep.ok()) return rep;

  // A modest expansion exercises every gluing seam twice; its embedding
  // check covers half-edge bookkeeping and the drawn geometry at once.
  Report emb = validate_embedding(gen.expand(3).g);
  rep.merge(emb);
  return rep;
}

}  // namespace quadrose
