#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "fixtures.hpp"
#include "quadrose/models.hpp"
#include "quadrose/quad.hpp"

using namespace quadrose;
using fixtures::flower_pair;

namespace {

// Same vertex pair, but the petal-2 arcs nest inside the petal-1 bigon.
// Locally every vertex looks fine; the lens faces between the petals are
// bounded yet carry no petal label.
Quadruple nested_bigons() {
  Quadruple q;
  q.marked.points = {{{5, 0}, "c"}, {{6, 0}, "p"}};
  HalfEdgeGraph g;
  g.add_vertex({0, 0});
  g.add_vertex({1, 0});
  g.add_edge(0, 1, 1, {{0, 0}, {0.5, 0.2}, {1, 0}});
  g.add_edge(1, 0, 1, {{1, 0}, {0.5, -0.2}, {0, 0}});
  g.add_edge(1, 0, 2, {{1, 0}, {0.5, 0.1}, {0, 0}});
  g.add_edge(0, 1, 2, {{0, 0}, {0.5, -0.1}, {1, 0}});
  g.sort_rotations_by_angle();
  q.graph = std::move(g);
  q.rose = auto_rose(q.marked, {7, 1.2});
  q.basepoint = 0;
  return q;
}

// Swap an edge end to end: endpoints, polyline, and the two halves in the
// rotation lists. The drawing is untouched, only the direction flips.
void reverse_edge(HalfEdgeGraph& g, EdgeId e) {
  Edge& ed = g.edges[e];
  std::swap(ed.from, ed.to);
  std::reverse(ed.poly.begin(), ed.poly.end());
  for (auto& v : g.vertices)
    for (auto& h : v.rot)
      if (edge_of(h) == e) h = twin(h);
}

Quadruple shifted_petals(const Quadruple& base, std::size_t s) {
  Quadruple q = base;
  const std::size_t m = q.rose.petals.size();
  std::rotate(q.rose.petals.begin(), q.rose.petals.begin() + s,
              q.rose.petals.end());
  auto relabel = [&](int petal) {
    return static_cast<int>((static_cast<std::size_t>(petal - 1) + m - s) % m) +
           1;
  };
  HalfEdgeGraph g = finite_graph(q);
  for (auto& e : g.edges) e.petal = relabel(e.petal);
  q.graph = std::move(g);
  return q;
}

}  // namespace

TEST_CASE("lasso loops close up around their target") {
  Polyline loop = lasso({0, 0}, {2, 1}, 0.4);
  REQUIRE(loop.size() >= 4);
  CHECK(loop.front().x == 0);
  CHECK(loop.front().y == 0);
  CHECK(loop.back().x == 0);
  CHECK(loop.back().y == 0);
  CHECK(winding_number(loop, {2, 1}) == 1);
  CHECK(signed_area(loop) > 0);
  CHECK(winding_number(loop, {-1, -1}) == 0);
}

TEST_CASE("auto rose assigns every marked point a petal") {
  MarkedSet marked;
  marked.points = {{{0, 0}, "a"}, {{2, 0}, "b"}, {{1, 2}, "c"}};
  Rose rose = auto_rose(marked, {4, 4});
  REQUIRE(rose.petals.size() == 3);
  std::set<std::uint32_t> ids;
  for (const Petal& p : rose.petals) {
    ids.insert(p.marked);
    REQUIRE(p.loop.size() >= 4);
    CHECK(winding_number(p.loop, marked.points[p.marked].pos) == 1);
    for (std::uint32_t other = 0; other < 3; ++other)
      if (other != p.marked)
        CHECK(winding_number(p.loop, marked.points[other].pos) == 0);
  }
  CHECK(ids == std::set<std::uint32_t>{0, 1, 2});
}

TEST_CASE("model quadruples pass both validators") {
  for (std::size_t d = 1; d <= 5; ++d) {
    CAPTURE(d);
    Quadruple q = models::cycle(d);
    CHECK(validate_admissible(q).ok());
    CHECK(validate_dynamic(q).ok());
  }
  CHECK(validate_admissible(models::cosine()).ok());
  CHECK(validate_dynamic(models::cosine()).ok());
  CHECK(validate_admissible(models::exp_square()).ok());
  CHECK(validate_dynamic(models::exp_square()).ok());
  CHECK(validate_admissible(flower_pair()).ok());
  CHECK(validate_dynamic(flower_pair()).ok());
}

TEST_CASE("chain model is admissible but parabolic") {
  Quadruple q = models::exp_chain();
  CHECK(validate_admissible(q).ok());
  Report d = validate_dynamic(q);
  REQUIRE_FALSE(d.ok());
  CHECK(d.str().find("marked-in-unbounded-face") != std::string::npos);
}

TEST_CASE("portraits match the model maps") {
  for (std::size_t d = 1; d <= 5; ++d) {
    CAPTURE(d);
    auto p = portrait(models::cycle(d));
    REQUIRE(p);
    Portrait want;
    want.nodes = {{0, d, d >= 2}};
    CHECK(*p == want);
  }

  // cosine: the critical values sit at the half-integer lattice, both hit
  // the origin, the origin hits the right one back with local degree two
  auto pc = portrait(models::cosine());
  REQUIRE(pc);
  Portrait want_cos;
  want_cos.nodes = {{1, 1, true}, {2, 2, false}, {1, 1, true}};
  CHECK(*pc == want_cos);

  // the squared-exponential: 0 is a double fixed point, the other two
  // collapse onto the negative root; 0 and the positive root are singular
  auto pe = portrait(models::exp_square());
  REQUIRE(pe);
  Portrait want_sq;
  want_sq.nodes = {{0, 1, false}, {1, 2, true}, {0, 1, true}};
  CHECK(*pe == want_sq);
}

TEST_CASE("degree counts vertices of finite graphs only") {
  for (std::size_t d = 1; d <= 5; ++d) CHECK(degree(models::cycle(d)) == d);
  CHECK(degree(flower_pair()) == 2);
  CHECK_FALSE(degree(models::cosine()).has_value());
  CHECK_FALSE(degree(models::exp_chain()).has_value());
}

TEST_CASE("single petal classification") {
  auto c4 = classify_single_petal(models::cycle(4));
  REQUIRE(c4);
  CHECK(c4->power_map);
  CHECK(c4->deg == 4);

  auto ch = classify_single_petal(models::exp_chain());
  REQUIRE(ch);
  CHECK_FALSE(ch->power_map);

  Report err;
  CHECK_FALSE(classify_single_petal(models::cosine(), &err));
  CHECK(err.str().find("not-single-petal") != std::string::npos);
}

TEST_CASE("face census separates tracts from outer faces") {
  Report err;

  FaceCensus chain = face_census(generator(models::exp_chain()), &err);
  REQUIRE(err.ok());
  std::multiset<int> chain_unb;
  for (const FaceClass& f : chain.faces)
    if (f.unbounded) chain_unb.insert(f.label);
  CHECK(chain_unb == std::multiset<int>{0, 1});

  FaceCensus cos = face_census(generator(models::cosine()), &err);
  REQUIRE(err.ok());
  std::multiset<int> cos_unb;
  std::set<int> cos_bounded_labels;
  for (const FaceClass& f : cos.faces) {
    if (f.unbounded)
      cos_unb.insert(f.label);
    else
      cos_bounded_labels.insert(f.label);
  }
  CHECK(cos_unb == std::multiset<int>{0, 0});
  CHECK(cos_bounded_labels == std::set<int>{1, 2, 3});

  FaceCensus sq = face_census(generator(models::exp_square()), &err);
  REQUIRE(err.ok());
  std::multiset<int> sq_unb;
  std::set<int> sq_bounded_labels;
  for (const FaceClass& f : sq.faces) {
    if (f.unbounded)
      sq_unb.insert(f.label);
    else
      sq_bounded_labels.insert(f.label);
  }
  // two anonymous outer faces plus the two petal-3 tracts
  CHECK(sq_unb == std::multiset<int>{0, 0, 3, 3});
  CHECK(sq_bounded_labels == std::set<int>{1, 2});
}

TEST_CASE("face labels pair every edge with an unlabeled face") {
  auto check_pairing = [](const Quadruple& q) {
    const HalfEdgeGraph& g = finite_graph(q);
    FaceSet fs = trace_faces(g);
    std::vector<int> lab = label_faces(g, fs);
    for (EdgeId e = 0; e < g.edges.size(); ++e) {
      CHECK(lab[fs.at(forward_half(e))] == g.edges[e].petal);
      CHECK(lab[fs.at(backward_half(e))] == 0);
    }
  };
  for (std::size_t d = 1; d <= 5; ++d) {
    CAPTURE(d);
    check_pairing(models::cycle(d));
  }
  check_pairing(flower_pair());
}

TEST_CASE("finite fixtures satisfy the vertex count face sum") {
  // sum of (boundary vertices - 1) over bounded faces = |V| - 1
  auto face_sum = [](const Quadruple& q) {
    const HalfEdgeGraph& g = finite_graph(q);
    FaceSet fs = trace_faces(g);
    std::size_t sum = 0;
    for (const Face& f : fs.faces) {
      if (!f.bounded) continue;
      std::set<VertexId> verts;
      for (HalfId h : f.walk) verts.insert(g.origin(h));
      sum += verts.size() - 1;
    }
    return sum;
  };
  for (std::size_t d = 1; d <= 5; ++d) {
    CAPTURE(d);
    Quadruple q = models::cycle(d);
    CHECK(face_sum(q) == finite_graph(q).vertices.size() - 1);
  }
  Quadruple f = flower_pair();
  CHECK(face_sum(f) == finite_graph(f).vertices.size() - 1);
}

TEST_CASE("reversed and relabeled edges are rejected") {
  SUBCASE("reversed chord breaks covering determinism") {
    Quadruple q = models::cycle(3);
    HalfEdgeGraph g = finite_graph(q);
    reverse_edge(g, 0);
    q.graph = std::move(g);
    Report r = validate_admissible(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("covering-determinism") != std::string::npos);
  }
  SUBCASE("out of range petal label") {
    Quadruple q = models::cycle(3);
    HalfEdgeGraph g = finite_graph(q);
    g.edges[1].petal = 2;
    q.graph = std::move(g);
    Report r = validate_admissible(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("bad-petal-label") != std::string::npos);
  }
  SUBCASE("reversed loop turns the disk into a bounded unlabeled face") {
    Quadruple q = models::cycle(1);
    HalfEdgeGraph g = finite_graph(q);
    reverse_edge(g, 0);
    q.graph = std::move(g);
    Report r = validate_admissible(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("p-infinity-bounded") != std::string::npos);
  }
  SUBCASE("reversed loop at a two petal vertex breaks the slot pattern") {
    Quadruple q = flower_pair();
    HalfEdgeGraph g = finite_graph(q);
    reverse_edge(g, 2);
    q.graph = std::move(g);
    Report r = validate_admissible(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("slot-order") != std::string::npos);
  }
  SUBCASE("nested petals leave bounded unlabeled lenses") {
    Report r = validate_admissible(nested_bigons());
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("p-infinity-bounded") != std::string::npos);
  }
}

TEST_CASE("marked point placement violations") {
  SUBCASE("marked point in the unbounded face") {
    Quadruple q = models::cycle(3);
    q.marked.points[0].pos = {5, 5};
    q.rose = auto_rose(q.marked, {2.6, 0.9});
    REQUIRE(validate_admissible(q).ok());
    Report r = validate_dynamic(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("marked-in-unbounded-face") != std::string::npos);
  }
  SUBCASE("two marked points share a face") {
    Quadruple q = flower_pair();
    q.marked.points[1].pos = {0.3, 0};
    q.rose = auto_rose(q.marked, {4, 2});
    REQUIRE(validate_admissible(q).ok());
    Report r = validate_dynamic(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("marked-shared-face") != std::string::npos);
  }
  SUBCASE("marked point on the graph") {
    Quadruple q = models::cycle(3);
    q.marked.points[0].pos = {-0.75, 0};
    Report r = validate_dynamic(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("marked-on-graph") != std::string::npos);
  }
  SUBCASE("undeclared parabolicity") {
    Quadruple q = models::cosine();
    q.declared_parabolic = false;
    Report r = validate_dynamic(q);
    REQUIRE_FALSE(r.ok());
    CHECK(r.str().find("parabolicity-undeclared") != std::string::npos);
  }
}

TEST_CASE("rooted matching follows slots") {
  Quadruple q3 = models::cycle(3), q4 = models::cycle(4);
  const HalfEdgeGraph& c3 = finite_graph(q3);
  const HalfEdgeGraph& c4 = finite_graph(q4);

  RootedMatch turn = match_rooted(c3, 0, c3, 1, true);
  CHECK(turn.found);

  CHECK_FALSE(match_rooted(c3, 0, c4, 0, true).found);
  // even without the onto requirement the walk closes at the wrong vertex
  CHECK_FALSE(match_rooted(c3, 0, c4, 0, false).found);
  CHECK_FALSE(match_rooted(c4, 0, c3, 0, false).found);
}

TEST_CASE("equivalence of quadruples") {
  SUBCASE("reflexive") {
    for (std::size_t d = 2; d <= 4; ++d) {
      CAPTURE(d);
      CHECK(dyn_equivalent(models::cycle(d), models::cycle(d)));
    }
    CHECK(dyn_equivalent(flower_pair(), flower_pair()));
  }
  SUBCASE("vertex order does not matter") {
    Quadruple a = models::cycle(3);
    Quadruple b = a;
    HalfEdgeGraph g;
    const HalfEdgeGraph& old = finite_graph(a);
    // list the vertices rotated by one; the drawing is the same
    for (std::size_t k = 0; k < 3; ++k)
      g.add_vertex(old.vertices[(k + 1) % 3].pos);
    auto perm = [](VertexId v) { return static_cast<VertexId>((v + 2) % 3); };
    for (const Edge& e : old.edges)
      g.add_edge(perm(e.from), perm(e.to), e.petal, e.poly);
    g.sort_rotations_by_angle();
    b.graph = std::move(g);
    REQUIRE(validate_dynamic(b).ok());
    CHECK(dyn_equivalent(a, b));
  }
  SUBCASE("different degrees differ") {
    Report why;
    CHECK_FALSE(dyn_equivalent(models::cycle(2), models::cycle(3), &why));
    CHECK(why.str().find("graph-mismatch") != std::string::npos);
  }
  SUBCASE("petal relabeling up to cyclic shift") {
    Quadruple base = flower_pair();
    Quadruple turned = shifted_petals(base, 1);
    REQUIRE(validate_dynamic(turned).ok());
    CHECK(dyn_equivalent(base, turned));
  }
  SUBCASE("generator graphs are out of scope") {
    Report why;
    CHECK_FALSE(dyn_equivalent(models::cosine(), models::cosine(), &why));
    CHECK(why.str().find("not-finite") != std::string::npos);
  }
}
