#pragma once

#include <cstdint>
#include <vector>

#include "quadrose/geom.hpp"
#include "quadrose/report.hpp"

namespace quadrose {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Half-edge id. Edge e owns halves 2e (forward, based at `from`) and
/// 2e+1 (backward, based at `to`). twin(h) == h^1.
using HalfId = std::uint32_t;

constexpr std::uint32_t kNone = 0xffffffffu;

inline HalfId forward_half(EdgeId e) { return 2 * e; }
inline HalfId backward_half(EdgeId e) { return 2 * e + 1; }
inline EdgeId edge_of(HalfId h) { return h >> 1; }
inline bool is_forward(HalfId h) { return (h & 1u) == 0; }
inline HalfId twin(HalfId h) { return h ^ 1u; }

struct Vertex {
  Vec2 pos;
  std::vector<HalfId> rot;  // outgoing halves in counterclockwise order
};

struct Edge {
  VertexId from = kNone;
  VertexId to = kNone;
  int petal = 0;       // 1-based petal label, 0 when unlabeled
  Polyline poly;       // drawn from `from` to `to`, endpoints included
};

/// Plane graph with an explicit rotation system. Loops and parallel edges
/// are allowed; every edge carries its own polyline, so the two halves of a
/// loop are distinguished by the two ends of that polyline.
struct HalfEdgeGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  VertexId origin(HalfId h) const {
    const Edge& e = edges[edge_of(h)];
    return is_forward(h) ? e.from : e.to;
  }
  VertexId head(HalfId h) const { return origin(twin(h)); }

  /// Polyline of h oriented away from origin(h).
  Polyline half_poly(HalfId h) const;

  /// Direction h leaves its origin in (first polyline segment).
  Vec2 out_dir(HalfId h) const;

  /// Position of h in origin(h)'s rotation list, kNone if absent.
  std::uint32_t rot_index(HalfId h) const;

  /// Next / previous outgoing half counterclockwise around origin(h).
  HalfId rot_next(HalfId h) const;
  HalfId rot_prev(HalfId h) const;

  /// Successor along the face walk that keeps the face on the left: after
  /// arriving at head(h), depart along the ray one step clockwise from the
  /// reversed arrival direction. (rot_next would walk faces on the right.)
  HalfId face_next(HalfId h) const { return rot_prev(twin(h)); }
  HalfId face_prev(HalfId h) const { return twin(rot_next(h)); }

  VertexId add_vertex(Vec2 pos);
  EdgeId add_edge(VertexId from, VertexId to, int petal, Polyline poly);

  /// Rebuild every rotation list by sorting outgoing directions
  /// counterclockwise. Only valid when tangent angles at each vertex are
  /// pairwise distinct.
  void sort_rotations_by_angle();
};

using FaceId = std::uint32_t;

struct Face {
  std::vector<HalfId> walk;  // face kept on the left of every half
  double area = 0.0;
  bool bounded = false;
  Polyline outline;          // concatenated half polylines
};

struct FaceSet {
  std::vector<Face> faces;
  std::vector<FaceId> face_of;  // indexed by HalfId
  FaceId unbounded = kNone;

  FaceId at(HalfId h) const { return face_of[h]; }
};

/// Orbit decomposition of face_next. Bounded faces come out with
/// counterclockwise walks (positive area), the single unbounded one
/// clockwise. For graphs whose faces all have zero area (trees), the
/// longest walk is declared unbounded; a tie is reported via `err`.
FaceSet trace_faces(const HalfEdgeGraph& g, Report* err = nullptr);

/// Face containing z. z must not lie on the graph.
FaceId locate_point(const FaceSet& fs, Vec2 z);

/// Structural and geometric consistency of the embedding: rotation lists
/// are permutations of the incident halves and match the drawn tangent
/// order, polylines start and end at their vertices, distinct edges meet
/// only at shared endpoints, and exactly one face is unbounded.
Report validate_embedding(const HalfEdgeGraph& g);

}  // namespace quadrose
