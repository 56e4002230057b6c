#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <vector>

#include "quadrose/models.hpp"
#include "quadrose/numlift.hpp"
#include "quadrose/quad.hpp"

using namespace quadrose;

namespace {

using Cpx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

NumericMap binomial_map(long n) {
  return pow(map_const(1.0) + map_z() / map_const(static_cast<double>(n)), n);
}

// (pi/2) cos(a z + b) with a, b chosen so the map fixes the value 1 and has
// derivative 1 there, keeping its singular values at +-pi/2
NumericMap normalized_cosine() {
  const double b = std::acos(2.0 / kPi);
  const double a = -2.0 / std::sqrt(kPi * kPi - 4.0);
  return map_const(kPi / 2.0) * cos(map_const(a) * map_z() + map_const(b));
}

std::size_t face_vertex_count(const HalfEdgeGraph& g, const FaceSet& fs, Vec2 z) {
  const FaceId f = locate_point(fs, z);
  REQUIRE(f != kNone);
  std::set<VertexId> seen;
  for (HalfId h : fs.faces[f].walk) seen.insert(g.origin(h));
  return seen.size();
}

}  // namespace

TEST_CASE("numeric maps evaluate, differentiate, and round-trip through text") {
  const NumericMap z = map_z();

  SUBCASE("evaluation") {
    const NumericMap f = pow(z, 2) + map_const(1.0);
    CHECK(std::abs(evaluate(f, 2.0) - Cpx(5.0)) < 1e-15);
    CHECK(std::abs(evaluate(exp(z), Cpx(0, kPi)) - Cpx(-1.0)) < 1e-14);
    const NumericMap g = binomial_map(8);
    CHECK(std::abs(evaluate(g, 0.0) - Cpx(1.0)) < 1e-15);
    CHECK(std::abs(evaluate(g, 8.0 * (std::polar(1.0, kPi / 4) - 1.0)) -
                   std::polar(1.0, 2.0 * kPi)) < 1e-12);
  }

  SUBCASE("structural derivative agrees with finite differences") {
    const std::vector<NumericMap> maps = {
        exp(z),
        binomial_map(8),
        pow(z, 3) + map_const(-3.0) * z,
        normalized_cosine(),
        sin(z) / (z + map_const(2.0)),
    };
    const std::vector<Cpx> points = {0.3, Cpx(0.1, -0.7), Cpx(-1.2, 0.4)};
    const double h = 1e-6;
    for (const NumericMap& f : maps) {
      const NumericMap fp = derivative(f);
      for (Cpx p : points) {
        const Cpx fd = (evaluate(f, p + h) - evaluate(f, p)) / h;
        const Cpx ex = evaluate(fp, p);
        CHECK(std::abs(fd - ex) < 1e-4 * std::max(1.0, std::abs(ex)));
      }
    }
    CHECK(std::abs(evaluate(derivative(binomial_map(8)), 0.0) - Cpx(1.0)) < 1e-15);
  }

  SUBCASE("printing and parsing invert each other") {
    const NumericMap f = pow(map_const(1.0) + z / map_const(8.0), 8);
    const std::string text = map_str(f);
    auto back = parse_map(text);
    REQUIRE(back);
    CHECK(map_str(*back) == text);
    for (Cpx p : {Cpx(0.5, 0.25), Cpx(-2, 1)})
      CHECK(std::abs(evaluate(f, p) - evaluate(*back, p)) < 1e-14);
  }

  SUBCASE("the documented descriptor spellings parse") {
    auto f = parse_map("pow(add(1, div(z, 8)), 8)");
    REQUIRE(f);
    CHECK(std::abs(evaluate(*f, 0.0) - Cpx(1.0)) < 1e-15);
    auto g = parse_map("exp(z)");
    REQUIRE(g);
    CHECK(std::abs(evaluate(*g, 1.0) - Cpx(std::exp(1.0))) < 1e-14);
    auto h = parse_map("scale(1.5707963, cos(z))");
    REQUIRE(h);
    CHECK(std::abs(evaluate(*h, 0.0) - Cpx(1.5707963)) < 1e-14);
    auto k = parse_map(" mul( i , z ) ");
    REQUIRE(k);
    CHECK(std::abs(evaluate(*k, 2.0) - Cpx(0, 2)) < 1e-15);
    auto s = parse_map("sub(pow(z, 3), mul(3, z))");
    REQUIRE(s);
    CHECK(std::abs(evaluate(*s, 2.0) - Cpx(2.0)) < 1e-14);
  }

  SUBCASE("malformed descriptors are rejected with a position") {
    for (const char* bad : {"pow(z, 2.5)", "pow(z, -1)", "z + 1", "foo(z)",
                            "add(z)", "div(z)", "exp(z", ""}) {
      Report err;
      CHECK_FALSE(parse_map(bad, &err));
      CHECK_FALSE(err.ok());
    }
  }
}

TEST_CASE("polynomial coefficient extraction and root solving") {
  const NumericMap z = map_z();

  SUBCASE("binomial expansion") {
    auto c = poly_coeffs(binomial_map(8));
    REQUIRE(c);
    REQUIRE(c->size() == 9);
    CHECK(std::abs((*c)[0] - Cpx(1.0)) < 1e-15);
    CHECK(std::abs((*c)[1] - Cpx(1.0)) < 1e-15);
    CHECK(std::abs((*c)[2] - Cpx(7.0 / 16.0)) < 1e-15);
    CHECK(std::abs((*c)[8] - Cpx(1.0 / 16777216.0)) < 1e-22);
  }

  SUBCASE("transcendental parts refuse to expand") {
    CHECK_FALSE(poly_coeffs(exp(z)));
    CHECK_FALSE(poly_coeffs(map_const(1.0) / z));
    CHECK_FALSE(poly_coeffs(pow(z, 4), 3));
  }

  SUBCASE("cube roots of unity") {
    auto roots = poly_roots({-1.0, 0.0, 0.0, 1.0});
    REQUIRE(roots);
    REQUIRE(roots->size() == 3);
    for (Cpx r : *roots) {
      CHECK(std::abs(std::abs(r) - 1.0) < 1e-10);
      CHECK(std::abs(r * r * r - Cpx(1.0)) < 1e-9);
    }
  }

  SUBCASE("degenerate inputs") {
    Report err;
    CHECK_FALSE(poly_roots({}, &err));
    CHECK_FALSE(poly_roots({0.0, 0.0}, &err));
    auto none = poly_roots({3.0});
    REQUIRE(none);
    CHECK(none->empty());
  }

  SUBCASE("a double root lands as a tight cluster") {
    auto roots = poly_roots({1.0, -2.0, 1.0});
    REQUIRE(roots);
    REQUIRE(roots->size() == 2);
    for (Cpx r : *roots) CHECK(std::abs(r - Cpx(1.0)) < 1e-6);
  }
}

TEST_CASE("path lifting follows covering branches") {
  const NumericPath circle = circle_loop(0.0, 1.0);

  SUBCASE("the exponential lifts the unit circle to a vertical segment") {
    auto lift = lift_path_numeric(exp(map_z()), circle, 0.0);
    REQUIRE(lift);
    CHECK(std::abs(lift->z.front()) < 1e-12);
    CHECK(std::abs(lift->z.back() - Cpx(0, 2 * kPi)) < 1e-8);
    CHECK_FALSE(lift->closed);
    for (std::size_t i = 0; i < lift->z.size(); ++i)
      CHECK(std::abs(std::exp(lift->z[i]) - path_point(circle, lift->t[i])) < 1e-8);
  }

  SUBCASE("binomial approximants land near the exponential endpoint") {
    auto lift = lift_path_numeric(binomial_map(100), circle, 0.0);
    REQUIRE(lift);
    const Cpx predicted = 100.0 * (std::polar(1.0, 2 * kPi / 100) - 1.0);
    CHECK(std::abs(lift->z.back() - predicted) < 1e-8);
    const double gap = std::abs(lift->z.back() - Cpx(0, 2 * kPi));
    CHECK(gap > 0.19);
    CHECK(gap < 0.21);
  }

  SUBCASE("a constant loop lifts to a constant path") {
    NumericPath still;
    still.t = {0.0, 1.0};
    still.z = {1.0, 1.0};
    still.closed = true;
    auto lift = lift_path_numeric(exp(map_z()), still, 0.0);
    REQUIRE(lift);
    CHECK(lift->closed);
    CHECK(std::abs(lift->z.back() - lift->z.front()) < 1e-12);
  }

  SUBCASE("halving the base step barely moves the endpoint") {
    ContinuationOptions fine;
    fine.base_step = 1.0 / 512;
    auto a = lift_path_numeric(binomial_map(16), circle, 0.0);
    auto b = lift_path_numeric(binomial_map(16), circle, 0.0, fine);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(std::abs(a->z.back() - b->z.back()) < 1e-9);
  }

  SUBCASE("a basepoint off the fiber is refused") {
    Report err;
    CHECK_FALSE(lift_path_numeric(pow(map_z(), 2), circle, 0.0, {}, &err));
    CHECK_FALSE(err.ok());
    CHECK(err.str().find("lift-basepoint") != std::string::npos);
  }

  SUBCASE("a locally constant map is refused") {
    NumericPath still;
    still.t = {0.0, 1.0};
    still.z = {1.0, 1.0};
    auto lift = lift_path_numeric(map_const(1.0), still, 0.0);
    CHECK_FALSE(lift);
  }

  SUBCASE("a path through a branch point fails loudly") {
    const NumericPath through = circle_loop(0.5, 0.5);
    Report err;
    CHECK_FALSE(lift_path_numeric(pow(map_z(), 2), through, 1.0, {}, &err));
    CHECK_FALSE(err.ok());
  }
}

TEST_CASE("closure degree counts loop traversals") {
  const NumericPath circle = circle_loop(0.0, 1.0);

  SUBCASE("pure powers close at their degree") {
    auto d = closure_degree(pow(map_z(), 3), circle, 1.0, 10);
    REQUIRE(d);
    CHECK(d->degree == 3);
    CHECK_FALSE(d->exceeded);
  }

  SUBCASE("binomial approximants close at their degree") {
    for (int n : {2, 3, 5, 7, 12, 16, 33, 64}) {
      auto d = closure_degree(binomial_map(n), circle, 0.0, 70);
      REQUIRE(d);
      CHECK(d->degree == n);
      CHECK_FALSE(d->exceeded);
    }
  }

  SUBCASE("the exponential never closes and translates by 2 pi i") {
    auto d = closure_degree(exp(map_z()), circle, 0.0, 50);
    REQUIRE(d);
    CHECK(d->exceeded);
    CHECK(d->degree == 50);
    Cpx cur = 0.0;
    for (int k = 1; k <= 5; ++k) {
      auto lift = lift_path_numeric(exp(map_z()), circle, cur);
      REQUIRE(lift);
      cur = lift->z.back();
      CHECK(std::abs(cur - Cpx(0, 2 * kPi * k)) < 1e-6);
    }
  }
}

TEST_CASE("quadruple reconstruction from a polynomial map") {
  SUBCASE("the squaring map yields the 2-cycle") {
    MarkedSet marked;
    marked.points = {{{0.0, 0.0}, "0"}};
    const Rose rose = auto_rose(marked, {1.0, 0.0});
    BBox window;
    window.add({-2.0, -2.0});
    window.add({2.0, 2.0});
    Report err;
    auto q = build_quadruple_numeric(pow(map_z(), 2), marked, rose, window, {}, &err);
    REQUIRE_MESSAGE(q, err.str());
    CHECK(finite_graph(*q).vertices.size() == 2);
    CHECK(finite_graph(*q).edges.size() == 2);
    CHECK(std::abs(finite_graph(*q).vertices[0].pos.x + 1.0) < 1e-9);
    CHECK(std::abs(finite_graph(*q).vertices[1].pos.x - 1.0) < 1e-9);
    const Quadruple cyc = models::cycle(2);
    CHECK(match_rooted(finite_graph(*q), q->basepoint, finite_graph(cyc), cyc.basepoint, true).found);
    const auto pq = portrait(*q);
    REQUIRE(pq);
    REQUIRE(pq->nodes.size() == 1);
    CHECK(pq->nodes[0].weight == 2);
    CHECK(pq->nodes[0].singular);
  }

  SUBCASE("a cubic with two critical values") {
    MarkedSet marked;
    marked.points = {{{-2.0, 0.0}, "-2"}, {{2.0, 0.0}, "2"}};
    const Rose rose = auto_rose(marked, {0.0, 0.0});
    BBox window;
    window.add({-3.0, -3.0});
    window.add({3.0, 3.0});
    const NumericMap f = pow(map_z(), 3) + map_const(-3.0) * map_z();
    Report err;
    auto q = build_quadruple_numeric(f, marked, rose, window, {}, &err);
    REQUIRE_MESSAGE(q, err.str());
    REQUIRE(finite_graph(*q).vertices.size() == 3);
    CHECK(finite_graph(*q).edges.size() == 6);
    for (const Vertex& v : finite_graph(*q).vertices) CHECK(v.rot.size() == 4);
    const double r3 = std::sqrt(3.0);
    CHECK(std::abs(finite_graph(*q).vertices[0].pos.x + r3) < 1e-9);
    CHECK(std::abs(finite_graph(*q).vertices[1].pos.x) < 1e-9);
    CHECK(std::abs(finite_graph(*q).vertices[2].pos.x - r3) < 1e-9);

    // local degree 2 at the critical points +-1, so those faces see two
    // distinct boundary vertices; the regular faces at the marked points
    // see one
    const FaceSet fs = trace_faces(finite_graph(*q));
    CHECK(face_vertex_count(finite_graph(*q), fs, {1.0, 0.0}) == 2);
    CHECK(face_vertex_count(finite_graph(*q), fs, {-1.0, 0.0}) == 2);
  }

  SUBCASE("the degree-8 binomial matches the 8-cycle") {
    MarkedSet marked;
    marked.points = {{{0.0, 0.0}, "0"}};
    const Rose rose = auto_rose(marked, {2.0, 0.0});
    BBox window;
    window.add({-17.5, -9.5});
    window.add({1.5, 9.5});
    Report err;
    auto q = build_quadruple_numeric(binomial_map(8), marked, rose, window, {}, &err);
    REQUIRE_MESSAGE(q, err.str());
    CHECK(finite_graph(*q).vertices.size() == 8);
    CHECK(finite_graph(*q).edges.size() == 8);
    const Quadruple cyc = models::cycle(8);
    CHECK(match_rooted(finite_graph(*q), q->basepoint, finite_graph(cyc), cyc.basepoint, true).found);
    const FaceSet fs = trace_faces(finite_graph(*q));
    CHECK(face_vertex_count(finite_graph(*q), fs, {-8.0, 0.0}) == 8);
  }

  SUBCASE("a transcendental map is refused") {
    MarkedSet marked;
    marked.points = {{{0.0, 0.0}, "0"}};
    const Rose rose = auto_rose(marked, {1.0, 0.0});
    BBox window;
    window.add({-2.0, -2.0});
    window.add({2.0, 2.0});
    Report err;
    CHECK_FALSE(build_quadruple_numeric(exp(map_z()), marked, rose, window, {}, &err));
    CHECK(err.str().find("build-not-polynomial") != std::string::npos);
  }

  SUBCASE("an unmarked critical value is refused") {
    MarkedSet marked;
    marked.points = {{{1.0, 0.0}, "1"}};
    const Rose rose = auto_rose(marked, {2.0, 0.0});
    BBox window;
    window.add({-3.0, -3.0});
    window.add({3.0, 3.0});
    Report err;
    CHECK_FALSE(build_quadruple_numeric(pow(map_z(), 2), marked, rose, window, {}, &err));
    CHECK(err.str().find("build-singular-not-marked") != std::string::npos);
  }

  SUBCASE("a center too close to a critical value is refused") {
    MarkedSet marked;
    marked.points = {{{1.0, 0.0}, "1"}};
    const Rose rose = auto_rose(marked, {1e-18, 0.0});
    BBox window;
    window.add({-3.0, -3.0});
    window.add({3.0, 3.0});
    Report err;
    CHECK_FALSE(build_quadruple_numeric(pow(map_z(), 2), marked, rose, window, {}, &err));
    CHECK(err.str().find("build-root-clustering") != std::string::npos);
  }

  SUBCASE("a petal hugging a critical value is refused") {
    MarkedSet marked;
    marked.points = {{{0.0, 0.0}, "0"}};
    const Rose rose = auto_rose(marked, {0.002, 0.0});
    BBox window;
    window.add({-2.0, -2.0});
    window.add({2.0, 2.0});
    Report err;
    CHECK_FALSE(build_quadruple_numeric(pow(map_z(), 2), marked, rose, window, {}, &err));
    CHECK(err.str().find("build-singular-margin") != std::string::npos);
  }

  SUBCASE("vertices outside the window are refused") {
    MarkedSet marked;
    marked.points = {{{0.0, 0.0}, "0"}};
    const Rose rose = auto_rose(marked, {1.0, 0.0});
    BBox window;
    window.add({-0.5, -0.5});
    window.add({0.5, 0.5});
    Report err;
    CHECK_FALSE(build_quadruple_numeric(pow(map_z(), 2), marked, rose, window, {}, &err));
    CHECK(err.str().find("build-window") != std::string::npos);
  }
}

TEST_CASE("numeric convergence verdicts") {
  const std::vector<NumericPath> petals = {circle_loop(0.0, 1.0)};
  const NumericMap target = exp(map_z());

  SUBCASE("binomial approximants converge to the exponential") {
    std::vector<NumericMap> seq = {binomial_map(16), binomial_map(32), binomial_map(64)};
    auto rep = verify_numeric_convergence(seq, target, petals, 0.0, 1.0, 6, 1e-3);
    REQUIRE(rep);
    CHECK(rep->pass);
    CHECK(rep->threshold == 0);
    CHECK(rep->witness.empty());
    const double ns[] = {16, 32, 64};
    for (std::size_t k = 0; k < seq.size(); ++k) {
      CHECK(rep->deriv_gap[k] < 1e-12);
      CHECK(rep->sup_gap[k] < 25.0 / ns[k]);
    }
    CHECK(rep->sup_gap[2] < rep->sup_gap[1]);
    CHECK(rep->sup_gap[1] < rep->sup_gap[0]);
  }

  SUBCASE("a constant sequence is immediately stable") {
    std::vector<NumericMap> seq = {target, target, target};
    auto rep = verify_numeric_convergence(seq, target, petals, 0.0, 1.0, 4, 1e-3);
    REQUIRE(rep);
    CHECK(rep->pass);
    CHECK(rep->threshold == 0);
    for (double g : rep->sup_gap) CHECK(g < 1e-8);
  }

  SUBCASE("the binomials do not converge to a normalized cosine") {
    std::vector<NumericMap> seq = {binomial_map(8), binomial_map(16)};
    auto rep = verify_numeric_convergence(seq, normalized_cosine(), petals, 0.0, 1.0,
                                          3, 1e-3);
    REQUIRE(rep);
    CHECK_FALSE(rep->pass);
    CHECK(rep->witness == "x1");
  }

  SUBCASE("a derivative gap that persists fails with the derivative witness") {
    std::vector<NumericMap> seq = {map_const(3.0) * map_z() + map_const(1.0)};
    auto rep = verify_numeric_convergence(seq, target, petals, 0.0, 1.0, 2, 1e-3);
    REQUIRE(rep);
    CHECK_FALSE(rep->pass);
    CHECK(rep->witness == "derivative");
  }

  SUBCASE("a target that misses the shared value is a precondition error") {
    std::vector<NumericMap> seq = {binomial_map(8)};
    const NumericMap literal = map_const(kPi / 2.0) * cos(map_z());
    Report err;
    CHECK_FALSE(verify_numeric_convergence(seq, literal, petals, 0.0, 1.0, 2, 1e-3,
                                           {}, &err));
    CHECK(err.str().find("verify-precondition") != std::string::npos);
  }

  SUBCASE("radius zero checks only the analytic data") {
    std::vector<NumericMap> seq = {binomial_map(16)};
    auto rep = verify_numeric_convergence(seq, target, petals, 0.0, 1.0, 0, 1e-3);
    REQUIRE(rep);
    CHECK(rep->pass);
  }
}

TEST_CASE("teichmuller distance bound") {
  auto v = teich_bound(1.0, 2.0);
  REQUIRE(v);
  CHECK(std::abs(*v - std::log(3.0)) < 1e-12);
  auto tiny = teich_bound(1e-9, 1.0);
  REQUIRE(tiny);
  CHECK(std::abs(*tiny - 2e-9) < 1e-17);
  CHECK_FALSE(teich_bound(2.0, 2.0));
  CHECK_FALSE(teich_bound(3.0, 2.0));
  CHECK_FALSE(teich_bound(0.0, 1.0));
  CHECK_FALSE(teich_bound(-1.0, 5.0));
}
