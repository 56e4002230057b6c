#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadrose/generator.hpp"
#include "quadrose/lift.hpp"
#include "quadrose/quad.hpp"

namespace quadrose {

/// Combinatorial ball of an expansion: the subgraph induced by the vertices
/// at hop distance <= radius from the basepoint. Vertices are ordered by
/// (distance, window id) and edges by (far endpoint distance, window id), so
/// the radius-n ball is literally a prefix of the radius-(n+1) ball. Vertex 0
/// is the basepoint.
struct Ball {
  HalfEdgeGraph graph;
  int radius = 0;
  Expansion window;  // expand(radius + 2), wide enough to see every exit
  std::vector<VertexId> vmap;       // ball vertex -> window vertex
  std::vector<EdgeId> emap;         // ball edge -> window edge
  std::vector<VertexId> vback;      // window vertex -> ball vertex or kNone
  std::vector<EdgeId> eback;        // window edge -> ball edge or kNone
  std::vector<std::uint32_t> dist;  // ball vertex -> hop distance
};

/// base must be a core vertex, so hop distance bounds the repetition a walk
/// can reach and every ball vertex is complete in the window.
Ball ball(const GraphGenerator& gen, int radius, VertexId base);

/// Maximal run of a bounded-label face walk through the ball. The walk
/// enters at u over exit_u, runs the chain edges to v, and leaves over
/// exit_v; a face touching the ball in a single vertex has u == v and no
/// edges. All ids are window ids. slot_u / slot_v are the rotation slots the
/// closing edge takes over.
struct PartialFaceChain {
  int petal = 0;
  HalfId seed = kNone;  // first walk half in the ball, or the exit at a touch
  std::vector<VertexId> verts;  // u first, v last
  std::vector<EdgeId> edges;
  EdgeId exit_u = kNone;
  EdgeId exit_v = kNone;
  HalfId slot_u = kNone;
  HalfId slot_v = kNone;
};

/// Boundary chains of all partially-included bounded-label faces, ordered by
/// seed. Faces whose boundary lies entirely inside the ball are skipped, and
/// faces labeled P_infinity are never closed. nullopt with err when a face
/// meets the ball in more than one chain, which a valid covering generator
/// cannot produce.
std::optional<std::vector<PartialFaceChain>> partial_faces(
    const GraphGenerator& gen, const Ball& k, Report* err = nullptr);

/// One new edge per chain, drawn from v back to u through the open side of
/// the face, turning every partial face into a closed disk. Marked points of
/// `keep` that lie in a chain's face are swept around so they stay inside
/// the new face; other chains hug their chain at a tenth of the local edge
/// length.
HalfEdgeGraph close(const Ball& k, const std::vector<PartialFaceChain>& chains,
                    const MarkedSet* keep = nullptr, Report* err = nullptr);

/// One face of an approximant paired with the host face it came from.
struct DegreeRow {
  FaceId face = 0;  // face id in the approximant's trace_faces order
  int petal = 0;
  std::size_t verts = 0;                  // boundary vertices here
  std::optional<std::size_t> host_verts;  // in the limit; nullopt = tract
  int kind = 1;  // 1: host face is finite, 2: host is an unbounded tract
};

struct ApproxReport {
  int n = 0;
  Quadruple quad;
  bool dynamic = false;  // validate_dynamic verdict for quad
  Report dyn_why;
  std::vector<DegreeRow> degrees;
};

/// The finite admissible quadruple carved from the radius-n ball: marked set
/// and rose are inherited, the graph is the closed ball, and the basepoint
/// maps to vertex 0. q must be admissible and generator-backed with a core
/// basepoint. Sub-threshold approximants that are not yet dynamically
/// admissible are reported, not rejected.
std::optional<ApproxReport> approximate(const Quadruple& q, int n,
                                        Report* err = nullptr);

/// Label-, direction-, and rotation-order-preserving embedding of `pattern`
/// into `host` matching the roots. vmap[p] is the host vertex of p.
struct Embedding {
  std::vector<VertexId> vmap;
};

std::optional<Embedding> rooted_embed(const HalfEdgeGraph& pattern,
                                      VertexId pattern_root,
                                      const HalfEdgeGraph& host,
                                      VertexId host_root,
                                      Report* why = nullptr);

struct ConvergenceReport {
  bool pass = false;
  std::size_t threshold = 0;  // least index agreeing from there onwards
  Word witness;               // failing word when pass is false
  std::string detail;
};

/// Combinatorial convergence of a quadruple sequence toward a limit, checked
/// to the given radius: membership in the covering subgroups stabilizes on
/// every word of length <= radius, and every loop of every radius-k
/// truncation of the limit (k <= radius) eventually lifts closed with the
/// limit's homotopy class, conjugated by the connecting word. `connect`
/// carries one dual word per sequence entry; empty means all trivial.
ConvergenceReport check_comb_convergence(
    const Quadruple& limit, const std::vector<const Quadruple*>& seq,
    int radius, const std::vector<Word>& connect = {}, Report* err = nullptr);

/// Degree table of an approximant against its limit: one row per
/// bounded-label face. qn must be an output of approximate(limit, n) for
/// some n, which is recovered; a finite limit must match qn itself.
std::optional<std::vector<DegreeRow>> degree_report(const Quadruple& limit,
                                                    const Quadruple& qn,
                                                    Report* err = nullptr);

}  // namespace quadrose
