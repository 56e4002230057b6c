#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadrose/planar.hpp"
#include "quadrose/report.hpp"

namespace quadrose {

/// Rotation entry of a generator description. Refers either to a core edge
/// or to an edge of a cell repetition relative to the vertex that lists it:
/// rep_delta 0 is the vertex's own repetition, +1 the next one. Entries at
/// core vertices always target repetition 1, so they carry rep_delta +1.
struct GenHalfRef {
  enum class Kind { core, cell };
  Kind kind = Kind::core;
  std::uint32_t cell = kNone;
  std::uint32_t edge = 0;
  bool forward = true;
  int rep_delta = 0;
};

struct GenVertex {
  Vec2 pos;
  std::vector<GenHalfRef> rot;
};

/// Endpoint of a cell edge: vertex `v` of this repetition, or of the
/// previous one (the core, at repetition 1, via prev_binding).
struct GenEnd {
  bool prev = false;
  std::uint32_t v = 0;
};

struct GenEdge {
  GenEnd from, to;
  int petal = 0;
  Polyline poly;  // repetition 1 coordinates
};

/// One periodically repeated block. Repetition r is the repetition 1
/// data translated by (r-1) * disp.
struct GenCell {
  std::string name;
  Vec2 disp;
  std::vector<GenVertex> vertices;  // repetition 1 positions
  std::vector<GenEdge> edges;
  std::vector<std::uint32_t> prev_binding;  // cell vertex -> core vertex
};

/// Finite truncation of a generated graph. Vertex and edge ids are stable
/// across depths: expand(n) is an id-prefix of expand(n+1), only the
/// frontier rotation lists grow.
struct Expansion {
  HalfEdgeGraph g;
  std::vector<char> complete;  // star fully present (not a frontier vertex)
  std::uint32_t reps = 0;

  // provenance, indexed by vertex / edge id
  std::vector<std::uint32_t> vertex_rep, vertex_cell, vertex_index;
  std::vector<std::uint32_t> edge_rep, edge_cell, edge_index;
};

/// Finitely described infinite plane graph: a core plus translated cell
/// repetitions glued in sequence.
struct GraphGenerator {
  std::vector<GenVertex> core_vertices;
  std::vector<Edge> core_edges;
  std::vector<GenCell> cells;

  std::uint32_t cell_index(const std::string& name) const;

  /// Ids in expand(n) for any n large enough. rep 0 addresses the core.
  VertexId vertex_id(std::uint32_t rep, std::uint32_t cell,
                     std::uint32_t index) const;
  EdgeId edge_id(std::uint32_t rep, std::uint32_t cell,
                 std::uint32_t index) const;

  Expansion expand(std::uint32_t reps) const;
};

/// Template well-formedness plus geometric validity of a small expansion:
/// every half-edge of the expanded graph must be claimed by exactly one
/// rotation entry, bindings must exist, and expand(3) must embed cleanly.
Report validate_generator(const GraphGenerator& gen);

}  // namespace quadrose
