#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quadrose/geom.hpp"
#include "quadrose/planar.hpp"

using namespace quadrose;

namespace {

Polyline seg(Vec2 a, Vec2 b) { return {a, b}; }

HalfEdgeGraph ccw_triangle() {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({1, 0});
  VertexId c = g.add_vertex({0.5, 1});
  g.add_edge(a, b, 1, seg({0, 0}, {1, 0}));
  g.add_edge(b, c, 1, seg({1, 0}, {0.5, 1}));
  g.add_edge(c, a, 1, seg({0.5, 1}, {0, 0}));
  g.sort_rotations_by_angle();
  return g;
}

}  // namespace

TEST_CASE("area and winding basics") {
  Polyline sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(signed_area(sq) == doctest::Approx(1.0));
  CHECK(signed_area(reversed(sq)) == doctest::Approx(-1.0));
  CHECK(winding_number(sq, {0.5, 0.5}) == 1);
  CHECK(winding_number(sq, {1.5, 0.5}) == 0);
  CHECK(winding_number(reversed(sq), {0.5, 0.5}) == -1);

  // Crossing sign follows the x direction of travel.
  CHECK(down_ray_crossing({-1, -1}, {1, -1}, 0, 0) == 1);
  CHECK(down_ray_crossing({1, -1}, {-1, -1}, 0, 0) == -1);
  CHECK(down_ray_crossing({-1, 1}, {1, 1}, 0, 0) == 0);
}

TEST_CASE("segment intersection kinds") {
  CHECK(segment_intersection({0, 0}, {2, 2}, {0, 2}, {2, 0}) ==
        SegCross::proper);
  CHECK(segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}) ==
        SegCross::none);
  CHECK(segment_intersection({0, 0}, {1, 0}, {1, 0}, {2, 1}) ==
        SegCross::endpoint);
  // T junction: endpoint in the middle of the other segment.
  CHECK(segment_intersection({0, 0}, {2, 0}, {1, 0}, {1, 1}) ==
        SegCross::endpoint);
  // Collinear overlap is as bad as a crossing.
  CHECK(segment_intersection({0, 0}, {2, 0}, {1, 0}, {3, 0}) ==
        SegCross::proper);
}

TEST_CASE("triangle faces") {
  HalfEdgeGraph g = ccw_triangle();
  CHECK(validate_embedding(g).ok());

  FaceSet fs = trace_faces(g);
  REQUIRE(fs.faces.size() == 2);

  FaceId inner = fs.at(forward_half(0));
  FaceId outer = fs.at(backward_half(0));
  CHECK(inner != outer);
  CHECK(fs.faces[inner].bounded);
  CHECK(fs.faces[inner].area == doctest::Approx(0.5));
  CHECK(fs.faces[inner].walk.size() == 3);
  CHECK_FALSE(fs.faces[outer].bounded);
  CHECK(fs.faces[outer].area == doctest::Approx(-0.5));
  CHECK(fs.unbounded == outer);

  // The counterclockwise walk keeps the bounded face on the left, so the
  // three forward halves all border it.
  CHECK(fs.at(forward_half(1)) == inner);
  CHECK(fs.at(forward_half(2)) == inner);

  CHECK(locate_point(fs, {0.5, 0.3}) == inner);
  CHECK(locate_point(fs, {5, 5}) == outer);
}

TEST_CASE("single loop") {
  HalfEdgeGraph g;
  VertexId v = g.add_vertex({1, 0});
  g.add_edge(v, v, 1,
             {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}});
  CHECK(validate_embedding(g).ok());

  FaceSet fs = trace_faces(g);
  REQUIRE(fs.faces.size() == 2);
  FaceId disk = fs.at(forward_half(0));
  CHECK(fs.faces[disk].bounded);
  CHECK(fs.faces[disk].walk.size() == 1);
  CHECK(locate_point(fs, {0, 0}) == disk);
  CHECK(locate_point(fs, {2, 2}) == fs.unbounded);
}

TEST_CASE("theta graph") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({-1, 0});
  VertexId b = g.add_vertex({1, 0});
  g.add_edge(a, b, 1, {{-1, 0}, {0, 0.8}, {1, 0}});
  g.add_edge(a, b, 1, seg({-1, 0}, {1, 0}));
  g.add_edge(a, b, 1, {{-1, 0}, {0, -0.8}, {1, 0}});
  g.sort_rotations_by_angle();
  CHECK(validate_embedding(g).ok());

  FaceSet fs = trace_faces(g);
  CHECK(fs.faces.size() == 3);
  FaceId top = locate_point(fs, {0, 0.4});
  FaceId bottom = locate_point(fs, {0, -0.4});
  CHECK(top != bottom);
  CHECK(fs.faces[top].bounded);
  CHECK(fs.faces[bottom].bounded);
  CHECK(locate_point(fs, {0, 2}) == fs.unbounded);
}

TEST_CASE("tree fallback") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({1, 0});
  VertexId c = g.add_vertex({2, 0});
  g.add_edge(a, b, 1, seg({0, 0}, {1, 0}));
  g.add_edge(b, c, 1, seg({1, 0}, {2, 0}));
  g.sort_rotations_by_angle();
  CHECK(validate_embedding(g).ok());

  FaceSet fs = trace_faces(g);
  REQUIRE(fs.faces.size() == 1);
  CHECK_FALSE(fs.faces[0].bounded);
  CHECK(fs.faces[0].walk.size() == 4);
  CHECK(locate_point(fs, {0.5, 0.5}) == fs.unbounded);
}

TEST_CASE("pendant edge inside a face") {
  HalfEdgeGraph g = ccw_triangle();
  VertexId d = g.add_vertex({0.5, 0.4});
  VertexId e = g.add_vertex({0.5, 0.7});
  g.add_edge(d, e, 1, seg({0.5, 0.4}, {0.5, 0.7}));
  // Connect the pendant to the triangle so the graph stays connected.
  g.add_edge(VertexId(0), d, 1, seg({0, 0}, {0.5, 0.4}));
  g.sort_rotations_by_angle();
  CHECK(validate_embedding(g).ok());

  FaceSet fs = trace_faces(g);
  REQUIRE(fs.faces.size() == 2);
  FaceId inner = locate_point(fs, {0.52, 0.55});
  CHECK(fs.faces[inner].bounded);
  // The pendant edges appear twice in the bounded walk: 3 + 2*2.
  CHECK(fs.faces[inner].walk.size() == 7);
  CHECK(fs.faces[inner].area == doctest::Approx(0.5));
}

TEST_CASE("validation rejects a crossing") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({2, 0});
  VertexId c = g.add_vertex({2, 2});
  VertexId d = g.add_vertex({0, 2});
  g.add_edge(a, b, 1, seg({0, 0}, {2, 0}));
  g.add_edge(b, c, 1, seg({2, 0}, {2, 2}));
  g.add_edge(c, d, 1, seg({2, 2}, {0, 2}));
  g.add_edge(d, a, 1, seg({0, 2}, {0, 0}));
  g.add_edge(a, c, 1, seg({0, 0}, {2, 2}));
  g.add_edge(b, d, 1, seg({2, 0}, {0, 2}));
  g.sort_rotations_by_angle();
  Report rep = validate_embedding(g);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].code == "edge-crossing");
}

TEST_CASE("validation rejects a listed order that disagrees with the drawing") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({2, 0});
  VertexId c = g.add_vertex({2, 2});
  VertexId d = g.add_vertex({0, 2});
  g.add_edge(a, b, 1, seg({0, 0}, {2, 0}));
  g.add_edge(b, c, 1, seg({2, 0}, {2, 2}));
  g.add_edge(c, d, 1, seg({2, 2}, {0, 2}));
  g.add_edge(d, a, 1, seg({0, 2}, {0, 0}));
  g.add_edge(a, c, 1, seg({0, 0}, {2, 2}));
  g.sort_rotations_by_angle();
  CHECK(validate_embedding(g).ok());

  std::swap(g.vertices[a].rot[0], g.vertices[a].rot[1]);
  Report rep = validate_embedding(g);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].code == "rotation-mismatch");
}

TEST_CASE("validation rejects a T junction") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({2, 0});
  VertexId c = g.add_vertex({1, 1});
  VertexId d = g.add_vertex({1, 0});
  g.add_edge(a, b, 1, seg({0, 0}, {2, 0}));
  g.add_edge(c, d, 1, seg({1, 1}, {1, 0}));
  g.add_edge(a, c, 1, seg({0, 0}, {1, 1}));
  g.sort_rotations_by_angle();
  Report rep = validate_embedding(g);
  REQUIRE_FALSE(rep.ok());
  bool saw = false;
  for (const auto& v : rep.violations) saw |= v.code == "edge-touch";
  CHECK(saw);
}

TEST_CASE("validation rejects a detached polyline") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({1, 0});
  g.add_edge(a, b, 1, seg({0, 0.2}, {1, 0}));
  Report rep = validate_embedding(g);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].code == "detached-polyline");
}

TEST_CASE("validation rejects a disconnected graph") {
  HalfEdgeGraph g;
  VertexId a = g.add_vertex({0, 0});
  VertexId b = g.add_vertex({1, 0});
  VertexId c = g.add_vertex({0, 2});
  VertexId d = g.add_vertex({1, 2});
  g.add_edge(a, b, 1, seg({0, 0}, {1, 0}));
  g.add_edge(c, d, 1, seg({0, 2}, {1, 2}));
  Report rep = validate_embedding(g);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations[0].code == "disconnected");
}
