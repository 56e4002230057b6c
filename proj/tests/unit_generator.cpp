#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quadrose/generator.hpp"

using namespace quadrose;

namespace {

GenHalfRef cell_ref(std::uint32_t edge, bool forward, int delta,
                    std::uint32_t cell = kNone) {
  return {GenHalfRef::Kind::cell, cell, edge, forward, delta};
}

// Bi-infinite vertical line through the origin, one vertex every 2 units,
// all edges directed upward. Two cells: one growing up, one growing down.
GraphGenerator vertical_chain() {
  GraphGenerator gen;
  gen.core_vertices.push_back(
      {{0, 0}, {cell_ref(0, false, 1, 1), cell_ref(0, true, 1, 0)}});

  GenCell up;
  up.name = "up";
  up.disp = {0, 2};
  up.vertices.push_back(
      {{0, 2}, {cell_ref(0, false, 0), cell_ref(0, true, 1)}});
  up.edges.push_back({{true, 0}, {false, 0}, 1, {{0, 0}, {0, 2}}});
  up.prev_binding = {0};
  gen.cells.push_back(up);

  GenCell down;
  down.name = "down";
  down.disp = {0, -2};
  down.vertices.push_back(
      {{0, -2}, {cell_ref(0, false, 1), cell_ref(0, true, 0)}});
  down.edges.push_back({{false, 0}, {true, 0}, 1, {{0, -2}, {0, 0}}});
  down.prev_binding = {0};
  gen.cells.push_back(down);
  return gen;
}

// Horizontal chain where every repetition hangs a small loop on its vertex.
GraphGenerator bead_chain() {
  GraphGenerator gen;
  gen.core_vertices.push_back({{0, 0}, {cell_ref(0, true, 1, 0)}});

  GenCell bead;
  bead.name = "bead";
  bead.disp = {2, 0};
  bead.vertices.push_back({{2, 0},
                           {cell_ref(0, true, 1), cell_ref(1, true, 0),
                            cell_ref(1, false, 0), cell_ref(0, false, 0)}});
  bead.edges.push_back({{true, 0}, {false, 0}, 1, {{0, 0}, {2, 0}}});
  bead.edges.push_back({{false, 0},
                        {false, 0},
                        2,
                        {{2, 0}, {2.4, 0.6}, {1.6, 0.6}, {2, 0}}});
  bead.prev_binding = {0};
  gen.cells.push_back(bead);
  return gen;
}

}  // namespace

TEST_CASE("vertical chain expansion") {
  GraphGenerator gen = vertical_chain();
  CHECK(validate_generator(gen).ok());

  Expansion ex = gen.expand(2);
  REQUIRE(ex.g.vertices.size() == 5);
  REQUIRE(ex.g.edges.size() == 4);
  CHECK(validate_embedding(ex.g).ok());

  // v0 core, then repetition blocks in declaration order.
  CHECK(ex.g.vertices[gen.vertex_id(1, 0, 0)].pos.y == doctest::Approx(2));
  CHECK(ex.g.vertices[gen.vertex_id(1, 1, 0)].pos.y == doctest::Approx(-2));
  CHECK(ex.g.vertices[gen.vertex_id(2, 0, 0)].pos.y == doctest::Approx(4));
  CHECK(ex.g.vertices[gen.vertex_id(2, 1, 0)].pos.y == doctest::Approx(-4));

  // Edges all point upward.
  for (const Edge& e : ex.g.edges)
    CHECK(ex.g.vertices[e.to].pos.y > ex.g.vertices[e.from].pos.y);

  // A straight line is tree-like: one face, unbounded.
  FaceSet fs = trace_faces(ex.g);
  REQUIRE(fs.faces.size() == 1);
  CHECK_FALSE(fs.faces[0].bounded);

  // Frontier flags sit exactly on the outermost repetition.
  CHECK(ex.complete[0] == 1);
  CHECK(ex.complete[gen.vertex_id(1, 0, 0)] == 1);
  CHECK(ex.complete[gen.vertex_id(2, 0, 0)] == 0);
  CHECK(ex.complete[gen.vertex_id(2, 1, 0)] == 0);
}

TEST_CASE("expansions nest with stable ids") {
  GraphGenerator gen = vertical_chain();
  Expansion small = gen.expand(1);
  Expansion big = gen.expand(3);
  REQUIRE(small.g.vertices.size() < big.g.vertices.size());
  for (VertexId v = 0; v < small.g.vertices.size(); ++v) {
    CHECK(small.g.vertices[v].pos.x == big.g.vertices[v].pos.x);
    CHECK(small.g.vertices[v].pos.y == big.g.vertices[v].pos.y);
  }
  for (EdgeId e = 0; e < small.g.edges.size(); ++e) {
    CHECK(small.g.edges[e].from == big.g.edges[e].from);
    CHECK(small.g.edges[e].to == big.g.edges[e].to);
    CHECK(small.g.edges[e].petal == big.g.edges[e].petal);
  }
}

TEST_CASE("bead chain carries its loops along") {
  GraphGenerator gen = bead_chain();
  CHECK(validate_generator(gen).ok());

  Expansion ex = gen.expand(3);
  REQUIRE(ex.g.vertices.size() == 4);
  REQUIRE(ex.g.edges.size() == 6);
  CHECK(validate_embedding(ex.g).ok());

  FaceSet fs = trace_faces(ex.g);
  REQUIRE(fs.faces.size() == 4);  // three loop disks plus the outside

  // Each translate of the loop bounds its own disk.
  FaceId d1 = locate_point(fs, {2.0, 0.3});
  FaceId d2 = locate_point(fs, {4.0, 0.3});
  FaceId d3 = locate_point(fs, {6.0, 0.3});
  CHECK(fs.faces[d1].bounded);
  CHECK(fs.faces[d2].bounded);
  CHECK(fs.faces[d3].bounded);
  CHECK(d1 != d2);
  CHECK(d2 != d3);
  CHECK(locate_point(fs, {3.0, 0.3}) == fs.unbounded);
}

TEST_CASE("generator validation failures") {
  GraphGenerator gen = bead_chain();
  gen.cells[0].disp = {0, 0};
  Report r1 = validate_generator(gen);
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.violations[0].code == "zero-displacement");

  gen = bead_chain();
  gen.cells[0].prev_binding = {kNone};
  Report r2 = validate_generator(gen);
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.violations[0].code == "bad-binding");

  gen = bead_chain();
  gen.cells[0].vertices[0].rot[0].rep_delta = 0;  // chain half aimed at itself
  CHECK_FALSE(validate_generator(gen).ok());
}
