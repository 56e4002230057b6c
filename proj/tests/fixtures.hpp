#pragma once

#include "quadrose/quad.hpp"

namespace fixtures {

// Two vertices, a petal-1 bigon between them, a petal-2 loop at each.
// Smallest graph with two petals; the A-loop holds the second marked point,
// the B-loop disk stays empty.
inline quadrose::Quadruple flower_pair() {
  using namespace quadrose;
  Quadruple q;
  q.marked.points = {{{0, 0}, "c"}, {{-1.2, 1}, "p"}};
  HalfEdgeGraph g;
  g.add_vertex({-1, 0});
  g.add_vertex({1, 0});
  g.add_edge(0, 1, 1, {{-1, 0}, {0, -0.5}, {1, 0}});
  g.add_edge(1, 0, 1, {{1, 0}, {0, 0.5}, {-1, 0}});
  g.add_edge(0, 0, 2, lasso({-1, 0}, {-1.2, 1}, 0.3));
  g.add_edge(1, 1, 2, lasso({1, 0}, {1.2, -1}, 0.3));
  g.sort_rotations_by_angle();
  q.graph = std::move(g);
  q.rose = auto_rose(q.marked, {4, 2});
  q.basepoint = 0;
  return q;
}

// The rose covering itself: one vertex, one loop per petal. Petal order
// and marked order agree, so petal j lifts to the loop around marked j-1.
inline quadrose::Quadruple rose_cover() {
  using namespace quadrose;
  Quadruple q;
  q.marked.points = {{{2, 1.5}, "a"}, {{-2, 1.5}, "b"}};
  HalfEdgeGraph g;
  g.add_vertex({0, 0});
  g.add_edge(0, 0, 1, lasso({0, 0}, {2, 1.5}, 0.5));
  g.add_edge(0, 0, 2, lasso({0, 0}, {-2, 1.5}, 0.5));
  g.sort_rotations_by_angle();
  q.graph = std::move(g);
  q.rose = auto_rose(q.marked, {0, -2.5});
  q.basepoint = 0;
  return q;
}

}  // namespace fixtures
