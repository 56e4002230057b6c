#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quadrose/generator.hpp"
#include "quadrose/planar.hpp"
#include "quadrose/report.hpp"

namespace quadrose {

struct MarkedPoint {
  Vec2 pos;
  std::string name;
};

struct MarkedSet {
  std::vector<MarkedPoint> points;  // marked-id = index
  std::size_t size() const { return points.size(); }
};

/// Petal j of the rose is petals[j-1]: a simple counterclockwise loop based
/// at the center whose bounded face holds exactly the assigned marked point.
struct Petal {
  Polyline loop;
  std::uint32_t marked = kNone;
};

struct Rose {
  Vec2 center;
  std::vector<Petal> petals;  // counterclockwise by initial tangent
  std::size_t size() const { return petals.size(); }
};

/// The quadruple (marked set, rose, labeled plane graph, covering data).
/// Edge petal labels plus edge directions encode the covering onto the
/// rose; the graph is finite or generator-backed (infinite).
struct Quadruple {
  MarkedSet marked;
  Rose rose;
  std::variant<HalfEdgeGraph, GraphGenerator> graph;
  bool declared_parabolic = false;
  std::string parabolic_note;
  VertexId basepoint = kNone;
};

inline bool has_generator(const Quadruple& q) {
  return std::holds_alternative<GraphGenerator>(q.graph);
}
inline const GraphGenerator& generator(const Quadruple& q) {
  return std::get<GraphGenerator>(q.graph);
}
inline const HalfEdgeGraph& finite_graph(const Quadruple& q) {
  return std::get<HalfEdgeGraph>(q.graph);
}

/// Rose construction from raw loops: orients every loop counterclockwise,
/// sorts petals counterclockwise by initial tangent at the center, and
/// assigns each petal the marked point its bounded face surrounds.
Rose build_rose(const MarkedSet& marked, Vec2 center,
                std::vector<Polyline> loops, Report* err);

/// Simple counterclockwise loop from `base`: two straight stems to a small
/// ring of radius `r` around `target`, swept the long way around. Needs
/// r < |base - target|.
Polyline lasso(Vec2 base, Vec2 target, double r, int ring_nodes = 10);

/// Rose with one lasso petal per marked point; the ring radius is a third
/// of the smallest pairwise distance among the marked points and center.
Rose auto_rose(const MarkedSet& marked, Vec2 center, Report* err = nullptr);

/// Per-face labels: petal index j when every half of the boundary walk is
/// the forward half of a petal-j edge, otherwise 0 (the unlabeled class).
/// Edge direction matters: a backward half maps to the petal run backwards,
/// which no labeled rose face supports.
std::vector<int> label_faces(const HalfEdgeGraph& g, const FaceSet& fs);

/// One face of the (possibly infinite) graph, as discovered by walking.
/// Periodic faces are the unbounded ones of a generator-backed graph: the
/// walk returned to a translate of its starting half.
struct FaceClass {
  int label = 0;               // petal index or 0
  bool unbounded = false;
  std::size_t vcount = 0;      // distinct boundary vertices (bounded faces)
  std::vector<HalfId> walk;    // representative, in census-expansion ids
  Polyline outline;            // bounded faces only
};

struct FaceCensus {
  std::vector<FaceClass> faces;
  std::vector<std::uint32_t> class_of;  // half id -> face class, kNone unknown
  Expansion ex;                         // the window the walks live in
};

/// Classifies every face type of a generated graph by walking face orbits
/// from all halves of the innermost repetitions. Census.ex holds the
/// expansion window the representative walks refer to.
FaceCensus face_census(const GraphGenerator& gen, Report* err);

Report validate_admissible(const Quadruple& q);
Report validate_dynamic(const Quadruple& q);

struct Portrait {
  struct Node {
    std::uint32_t target = kNone;
    std::size_t weight = 0;
    bool singular = false;
    bool operator==(const Node&) const = default;
  };
  std::vector<Node> nodes;  // by marked-id
  bool operator==(const Portrait&) const = default;
};

/// Requires validate_dynamic to pass; `err` receives the reason otherwise.
std::optional<Portrait> portrait(const Quadruple& q, Report* err = nullptr);

/// Vertex count for finite graphs; nullopt means transcendental.
std::optional<std::size_t> degree(const Quadruple& q);

struct SinglePetalClass {
  bool power_map = false;  // otherwise the infinite chain case
  std::size_t deg = 0;
};
std::optional<SinglePetalClass> classify_single_petal(const Quadruple& q,
                                                      Report* err = nullptr);

/// Deterministic traversal from a root pair matching petal labels and
/// directions slot by slot. Covers every vertex of `pat` reachable from its
/// root. With require_onto, also demands a bijection onto `host`.
struct RootedMatch {
  bool found = false;
  std::vector<VertexId> map;  // pat vertex -> host vertex
  std::string conflict;       // first mismatch witness when !found
};
RootedMatch match_rooted(const HalfEdgeGraph& pat, VertexId pat_root,
                         const HalfEdgeGraph& host, VertexId host_root,
                         bool require_onto);

/// Dynamical equivalence of finite quadruples: a rooted label/rotation
/// preserving graph isomorphism exists (some root choice) and matches up
/// the faces containing each marked point.
bool dyn_equivalent(const Quadruple& q1, const Quadruple& q2,
                    Report* why = nullptr);

}  // namespace quadrose
