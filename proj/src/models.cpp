#include "quadrose/models.hpp"

#include <cmath>

namespace quadrose::models {

namespace {

GenHalfRef core_ref(std::uint32_t edge, bool forward) {
  GenHalfRef r;
  r.kind = GenHalfRef::Kind::core;
  r.edge = edge;
  r.forward = forward;
  return r;
}

GenHalfRef cell_ref(std::uint32_t edge, bool forward, int delta,
                    std::uint32_t cell = kNone) {
  GenHalfRef r;
  r.kind = GenHalfRef::Kind::cell;
  r.cell = cell;
  r.edge = edge;
  r.forward = forward;
  r.rep_delta = delta;
  return r;
}

}  // namespace

Quadruple cycle(std::size_t d) {
  Quadruple q;
  q.marked.points.push_back({{0.05, 0.0}, "0"});
  HalfEdgeGraph g;
  const double R = 1.5;
  for (std::size_t k = 0; k < d; ++k) {
    double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(d);
    g.add_vertex({R * std::cos(a), R * std::sin(a)});
  }
  if (d == 1) {
    g.add_edge(0, 0, 1, {{R, 0}, {0, R}, {-R, 0}, {0, -R}, {R, 0}});
  } else if (d == 2) {
    // parallel edges have to bow apart
    g.add_edge(0, 1, 1, {{R, 0}, {0, 0.8}, {-R, 0}});
    g.add_edge(1, 0, 1, {{-R, 0}, {0, -0.8}, {R, 0}});
  } else {
    for (std::size_t k = 0; k < d; ++k) {
      VertexId a = static_cast<VertexId>(k);
      VertexId b = static_cast<VertexId>((k + 1) % d);
      g.add_edge(a, b, 1, {g.vertices[a].pos, g.vertices[b].pos});
    }
  }
  g.sort_rotations_by_angle();
  q.graph = std::move(g);
  q.rose = auto_rose(q.marked, {2.6, 0.9});
  q.basepoint = 0;
  return q;
}

Quadruple exp_chain() {
  Quadruple q;
  q.marked.points.push_back({{-0.9, 0.3}, "0"});

  GraphGenerator gen;
  GenVertex v0;
  v0.pos = {0, 0};
  v0.rot = {cell_ref(0, false, 1, 1),   // arriving from below
            cell_ref(0, true, 1, 0)};   // leaving upward
  gen.core_vertices = {v0};

  GenCell up;
  up.name = "up";
  up.disp = {0, 2};
  GenVertex uv;
  uv.pos = {0, 2};
  uv.rot = {cell_ref(0, false, 0), cell_ref(0, true, 1)};
  up.vertices = {uv};
  up.edges = {{{true, 0}, {false, 0}, 1, {{0, 0}, {0, 2}}}};
  up.prev_binding = {0};

  GenCell down;
  down.name = "down";
  down.disp = {0, -2};
  GenVertex dv;
  dv.pos = {0, -2};
  dv.rot = {cell_ref(0, false, 1), cell_ref(0, true, 0)};
  down.vertices = {dv};
  down.edges = {{{false, 0}, {true, 0}, 1, {{0, -2}, {0, 0}}}};
  down.prev_binding = {0};

  gen.cells = {up, down};
  q.graph = std::move(gen);
  q.rose = auto_rose(q.marked, {1.6, 0.4});
  q.basepoint = 0;
  q.declared_parabolic = true;
  q.parabolic_note = "chain model of the exponential: one tract per side";
  return q;
}

Quadruple cosine() {
  Quadruple q;
  q.marked.points = {{{-0.55, -0.8}, "-pi/2"},
                     {{0.05, 0.0}, "0"},
                     {{0.55, 0.8}, "pi/2"}};

  GraphGenerator gen;
  // Coordinates are dyadic so block translates of a shared endpoint agree
  // bit for bit; the embedding check compares points exactly.
  const Vec2 vm{-0.625, 0}, vp{0.625, 0};
  // loop targets mirror the covered points: marked at the core, congruent
  // phantom positions in the cells
  const Vec2 down_off{0.075, -0.8}, up_off{-0.075, 0.8};
  const std::uint32_t kR = 0, kL = 1;

  // core edges: petal-3 bigon between vm and vp, one petal-2 loop each
  gen.core_edges = {
      {1, 0, 3, {{0.625, 0}, {0, 0.3125}, {-0.625, 0}}},
      {0, 1, 3, {{-0.625, 0}, {0, -0.3125}, {0.625, 0}}},
      {0, 0, 2, lasso(vm, vm + down_off, 0.2)},
      {1, 1, 2, lasso(vp, vp + up_off, 0.2)},
  };

  GenVertex cvm;  // loop below, petal-1 bigon off to the left
  cvm.pos = vm;
  cvm.rot = {
      cell_ref(0, true, 1, kL),   // out 1 at 153
      cell_ref(1, false, 1, kL),  // in 1 at 207
      core_ref(2, true),          // out 2 at 267
      core_ref(2, false),         // in 2 at 280
      core_ref(1, true),          // out 3 at 333
      core_ref(0, false),         // in 3 at 27
  };
  GenVertex cvp;  // loop above, petal-1 bigon off to the right
  cvp.pos = vp;
  cvp.rot = {
      cell_ref(1, true, 1, kR),   // out 1 at 333
      cell_ref(0, false, 1, kR),  // in 1 at 27
      core_ref(3, true),          // out 2 at 87
      core_ref(3, false),         // in 2 at 100
      core_ref(0, true),          // out 3 at 153
      core_ref(1, false),         // in 3 at 207
  };
  gen.core_vertices = {cvm, cvp};

  GenCell right;
  right.name = "right";
  right.disp = {2.5, 0};
  {
    GenVertex n0, n1;
    n0.pos = {1.875, 0};
    n1.pos = {3.125, 0};
    n0.rot = {
        cell_ref(0, true, 0),  cell_ref(1, false, 0),  // petal 1, toward vp
        cell_ref(4, true, 0),  cell_ref(4, false, 0),  // loop below
        cell_ref(2, true, 0),  cell_ref(3, false, 0),  // petal 3, toward n1
    };
    n1.rot = {
        cell_ref(1, true, 1),  cell_ref(0, false, 1),  // petal 1, next block
        cell_ref(5, true, 0),  cell_ref(5, false, 0),  // loop above
        cell_ref(3, true, 0),  cell_ref(2, false, 0),  // petal 3, toward n0
    };
    right.vertices = {n0, n1};
    right.edges = {
        {{false, 0}, {true, 1}, 1, {{1.875, 0}, {1.25, 0.3125}, {0.625, 0}}},
        {{true, 1}, {false, 0}, 1, {{0.625, 0}, {1.25, -0.3125}, {1.875, 0}}},
        {{false, 0}, {false, 1}, 3, {{1.875, 0}, {2.5, -0.3125}, {3.125, 0}}},
        {{false, 1}, {false, 0}, 3, {{3.125, 0}, {2.5, 0.3125}, {1.875, 0}}},
        {{false, 0}, {false, 0}, 2, lasso(n0.pos, n0.pos + down_off, 0.2)},
        {{false, 1}, {false, 1}, 2, lasso(n1.pos, n1.pos + up_off, 0.2)},
    };
    right.prev_binding = {kNone, 1};
  }

  GenCell left;
  left.name = "left";
  left.disp = {-2.5, 0};
  {
    GenVertex m0, m1;
    m0.pos = {-1.875, 0};
    m1.pos = {-3.125, 0};
    m0.rot = {
        cell_ref(1, true, 0),  cell_ref(0, false, 0),  // petal 1, toward vm
        cell_ref(4, true, 0),  cell_ref(4, false, 0),  // loop above
        cell_ref(2, true, 0),  cell_ref(3, false, 0),  // petal 3, toward m1
    };
    m1.rot = {
        cell_ref(0, true, 1),  cell_ref(1, false, 1),  // petal 1, next block
        cell_ref(5, true, 0),  cell_ref(5, false, 0),  // loop below
        cell_ref(3, true, 0),  cell_ref(2, false, 0),  // petal 3, toward m0
    };
    left.vertices = {m0, m1};
    left.edges = {
        {{true, 1}, {false, 0}, 1, {{-0.625, 0}, {-1.25, 0.3125}, {-1.875, 0}}},
        {{false, 0}, {true, 1}, 1, {{-1.875, 0}, {-1.25, -0.3125}, {-0.625, 0}}},
        {{false, 0}, {false, 1}, 3, {{-1.875, 0}, {-2.5, 0.3125}, {-3.125, 0}}},
        {{false, 1}, {false, 0}, 3, {{-3.125, 0}, {-2.5, -0.3125}, {-1.875, 0}}},
        {{false, 0}, {false, 0}, 2, lasso(m0.pos, m0.pos + up_off, 0.2)},
        {{false, 1}, {false, 1}, 2, lasso(m1.pos, m1.pos + down_off, 0.2)},
    };
    left.prev_binding = {kNone, 0};
  }

  gen.cells = {right, left};
  q.graph = std::move(gen);
  q.rose = auto_rose(q.marked, {-7, 1.4});
  q.basepoint = 1;
  q.declared_parabolic = true;
  q.parabolic_note = "two-ended bigon chain: no tracts, order-one growth";
  return q;
}

Quadruple exp_square() {
  Quadruple q;
  q.marked.points = {{{-0.41, -0.65}, "-sqrt(ln2)"},
                     {{0.0, 0.0}, "0"},
                     {{0.41, 0.65}, "sqrt(ln2)"}};

  GraphGenerator gen;
  // Dyadic coordinates again: block translates of shared chain endpoints
  // must agree exactly.
  const Vec2 v0R{1.25, 0}, v0L{-1.25, 0}, vm1R{3.0, -1.75}, vm1L{-3.0, 1.75};
  const std::uint32_t kNE = 0, kSE = 1, kSW = 2, kNW = 3;

  gen.core_edges = {
      // petal-2 bigon around the central marked point
      {0, 1, 2, {{1.25, 0}, {0.1, 0.46}, {-1.25, 0}}},
      {1, 0, 2, {{-1.25, 0}, {-0.1, -0.46}, {1.25, 0}}},
      // the two chain crossovers, over and under the bigon
      {3, 0, 3,
       {{-3.0, 1.75}, {-2.25, 1.8}, {-0.5, 1.3}, {0.55, 1.05}, {1.05, 0.5},
        {1.25, 0}}},
      {2, 1, 3,
       {{3.0, -1.75}, {2.25, -1.8}, {0.5, -1.3}, {-0.55, -1.05}, {-1.05, -0.5},
        {-1.25, 0}}},
      // petal-1 loops; the level-0 ones surround marked points
      {0, 0, 1, lasso(v0R, {0.41, 0.65}, 0.2)},
      {1, 1, 1, lasso(v0L, {-0.41, -0.65}, 0.2)},
      {2, 2, 1, lasso(vm1R, vm1R + Vec2{-0.25, 0.75}, 0.2)},
      {3, 3, 1, lasso(vm1L, vm1L + Vec2{0.25, -0.75}, 0.2)},
      // petal-2 loops exist everywhere except at the bigon pair
      {2, 2, 2, lasso(vm1R, vm1R + Vec2{-0.8, 0.35}, 0.2)},
      {3, 3, 2, lasso(vm1L, vm1L + Vec2{0.8, -0.35}, 0.2)},
  };

  GenVertex a;
  a.pos = v0R;
  a.rot = {
      cell_ref(0, true, 1, kNE),  // out 3 at 45
      core_ref(2, false),         // in 3 at 112
      core_ref(4, true),          // out 1 at 138
      core_ref(4, false),         // in 1 at 147
      core_ref(0, true),          // out 2 at 158
      core_ref(1, false),         // in 2 at 199
  };
  GenVertex b;
  b.pos = v0L;
  b.rot = {
      core_ref(0, false),         // in 2 at 19
      cell_ref(0, true, 1, kSW),  // out 3 at 225
      core_ref(3, false),         // in 3 at 292
      core_ref(5, true),          // out 1 at 317
      core_ref(5, false),         // in 1 at 328
      core_ref(1, true),          // out 2 at 338
  };
  GenVertex cr;
  cr.pos = vm1R;
  cr.rot = {
      core_ref(6, true),           // out 1 at 102
      core_ref(6, false),          // in 1 at 115
      core_ref(8, true),           // out 2 at 151
      core_ref(8, false),          // in 2 at 162
      core_ref(3, true),           // out 3 at 184
      cell_ref(0, false, 1, kSE),  // in 3 at 315
  };
  GenVertex cl;
  cl.pos = vm1L;
  cl.rot = {
      core_ref(2, true),           // out 3 at 4
      cell_ref(0, false, 1, kNW),  // in 3 at 135
      core_ref(7, true),           // out 1 at 282
      core_ref(7, false),          // in 1 at 295
      core_ref(9, true),           // out 2 at 331
      core_ref(9, false),          // in 2 at 342
  };
  gen.core_vertices = {a, b, cr, cl};

  GenCell ne;
  ne.name = "ne";
  ne.disp = {1.75, 1.75};
  {
    GenVertex u;
    u.pos = {3.0, 1.75};
    u.rot = {
        cell_ref(0, true, 1),   // out 3 at 45: next block's chain edge
        cell_ref(0, false, 0),  // in 3 at 225
        cell_ref(1, true, 0),   cell_ref(1, false, 0),  // petal 1 at 282/295
        cell_ref(2, true, 0),   cell_ref(2, false, 0),  // petal 2 at 331/342
    };
    ne.vertices = {u};
    ne.edges = {
        {{true, 0}, {false, 0}, 3, {{1.25, 0}, {3.0, 1.75}}},
        {{false, 0}, {false, 0}, 1, lasso(u.pos, u.pos + Vec2{0.25, -0.75}, 0.2)},
        {{false, 0}, {false, 0}, 2, lasso(u.pos, u.pos + Vec2{0.8, -0.35}, 0.2)},
    };
    ne.prev_binding = {0};
  }

  GenCell se;  // chain edges run inward, toward level -1
  se.name = "se";
  se.disp = {1.75, -1.75};
  {
    GenVertex u;
    u.pos = {4.75, -3.5};
    u.rot = {
        cell_ref(2, true, 0),   cell_ref(2, false, 0),  // petal 2 at 61/72
        cell_ref(0, true, 0),   // out 3 at 135: own chain edge
        cell_ref(0, false, 1),  // in 3 at 315: next block's chain edge
        cell_ref(1, true, 0),   cell_ref(1, false, 0),  // petal 1 at 335/348
    };
    se.vertices = {u};
    se.edges = {
        {{false, 0}, {true, 0}, 3, {{4.75, -3.5}, {3.0, -1.75}}},
        {{false, 0}, {false, 0}, 1, lasso(u.pos, u.pos + Vec2{0.75, -0.25}, 0.2)},
        {{false, 0}, {false, 0}, 2, lasso(u.pos, u.pos + Vec2{0.35, 0.8}, 0.2)},
    };
    se.prev_binding = {2};
  }

  GenCell sw;
  sw.name = "sw";
  sw.disp = {-1.75, -1.75};
  {
    GenVertex u;
    u.pos = {-3.0, -1.75};
    u.rot = {
        cell_ref(0, false, 0),  // in 3 at 45
        cell_ref(1, true, 0),   cell_ref(1, false, 0),  // petal 1 at 102/115
        cell_ref(2, true, 0),   cell_ref(2, false, 0),  // petal 2 at 151/162
        cell_ref(0, true, 1),   // out 3 at 225: next block's chain edge
    };
    sw.vertices = {u};
    sw.edges = {
        {{true, 0}, {false, 0}, 3, {{-1.25, 0}, {-3.0, -1.75}}},
        {{false, 0}, {false, 0}, 1, lasso(u.pos, u.pos + Vec2{-0.25, 0.75}, 0.2)},
        {{false, 0}, {false, 0}, 2, lasso(u.pos, u.pos + Vec2{-0.8, 0.35}, 0.2)},
    };
    sw.prev_binding = {1};
  }

  GenCell nw;  // chain edges run inward, like se
  nw.name = "nw";
  nw.disp = {-1.75, 1.75};
  {
    GenVertex u;
    u.pos = {-4.75, 3.5};
    u.rot = {
        cell_ref(0, false, 1),  // in 3 at 135
        cell_ref(1, true, 0),   cell_ref(1, false, 0),  // petal 1 at 155/168
        cell_ref(2, true, 0),   cell_ref(2, false, 0),  // petal 2 at 241/252
        cell_ref(0, true, 0),   // out 3 at 315: own chain edge
    };
    nw.vertices = {u};
    nw.edges = {
        {{false, 0}, {true, 0}, 3, {{-4.75, 3.5}, {-3.0, 1.75}}},
        {{false, 0}, {false, 0}, 1, lasso(u.pos, u.pos + Vec2{-0.75, 0.25}, 0.2)},
        {{false, 0}, {false, 0}, 2, lasso(u.pos, u.pos + Vec2{-0.35, -0.8}, 0.2)},
    };
    nw.prev_binding = {3};
  }

  gen.cells = {ne, se, sw, nw};
  q.graph = std::move(gen);
  q.rose = auto_rose(q.marked, {-6, 0});
  q.basepoint = 0;
  q.declared_parabolic = true;
  q.parabolic_note = "crossover chain model: two asymptotic tracts, up and down";
  return q;
}

}  // namespace quadrose::models
