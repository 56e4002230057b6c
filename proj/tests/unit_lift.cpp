#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "quadrose/lift.hpp"
#include "quadrose/models.hpp"

using namespace quadrose;
using fixtures::flower_pair;
using fixtures::rose_cover;

namespace {

Word power(int k) {
  Word w;
  for (int i = 0; i < std::abs(k); ++i) w.push_back({1, k > 0 ? +1 : -1});
  return w;
}

Word random_word(std::mt19937& rng, int m, int maxlen) {
  std::uniform_int_distribution<int> len(0, maxlen);
  std::uniform_int_distribution<int> gen(1, m);
  std::uniform_int_distribution<int> coin(0, 1);
  Word w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) w.push_back({gen(rng), coin(rng) ? +1 : -1});
  return w;
}

}  // namespace

TEST_CASE("words reduce freely and print round trip") {
  CHECK(reduce(Word{{1, +1}, {1, -1}}) == Word{});
  CHECK(reduce(Word{{1, +1}, {2, +1}, {2, -1}, {1, +1}}) ==
        Word{{1, +1}, {1, +1}});
  const Word already{{2, +1}, {1, -1}};
  CHECK(reduce(already) == already);

  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_word(rng, 3, 12);
    const Word r = reduce(w);
    CHECK(reduce(r) == r);
    for (std::size_t i = 0; i + 1 < r.size(); ++i)
      CHECK(!(r[i].index == r[i + 1].index && r[i].sign == -r[i + 1].sign));
  }

  CHECK(word_str(Word{{1, +1}, {2, -1}, {1, +1}}) == "x1 x2^-1 x1");
  CHECK(word_str(Word{{1, -1}, {3, +1}}, 'y') == "y1^-1 y3");
  CHECK(word_str(Word{}) == "1");
  CHECK(parse_word("x1 x2^-1 x1") == Word{{1, +1}, {2, -1}, {1, +1}});
  CHECK(parse_word("y1^-1 y3") == Word{{1, -1}, {3, +1}});
  CHECK(parse_word("1") == Word{});
  CHECK(parse_word("   ") == Word{});
  CHECK(!parse_word("x0").has_value());
  CHECK(!parse_word("x1 y2").has_value());
  CHECK(!parse_word("x1^2").has_value());
  CHECK(!parse_word("q").has_value());

  std::mt19937 rng2(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Word w = random_word(rng2, 4, 9);
    CHECK(parse_word(word_str(w)) == w);
  }
}

TEST_CASE("lifting walks the covering labels") {
  const Quadruple chain = models::exp_chain();
  auto up = lift_word(chain, 0, Word{{1, +1}});
  REQUIRE(up.has_value());
  CHECK(!up->closed);
  CHECK(up->terminal == 1);  // repetition-1 vertex of the up cell
  auto down = lift_word(chain, 0, Word{{1, -1}});
  REQUIRE(down.has_value());
  CHECK(down->terminal == 2);
  auto back = lift_word(chain, 0, Word{{1, +1}, {1, -1}});
  REQUIRE(back.has_value());
  CHECK(back->closed);  // unreduced input walks up and straight back

  const Quadruple c3 = models::cycle(3);
  auto around = lift_word(c3, 0, power(3));
  REQUIRE(around.has_value());
  CHECK(around->closed);
  CHECK(around->vertices == std::vector<VertexId>{0, 1, 2, 0});
  auto third = lift_word(c3, 0, power(1));
  REQUIRE(third.has_value());
  CHECK(!third->closed);

  Report err;
  CHECK(!lift_word(c3, 0, Word{{2, +1}}, &err).has_value());
  CHECK(err.violations[0].code == "bad-letter");
  Report err2;
  CHECK(!lift_word(c3, 99, power(1), &err2).has_value());
  CHECK(err2.violations[0].code == "vertex-unknown");
}

TEST_CASE("lifts concatenate") {
  std::vector<Quadruple> fixtures;
  fixtures.push_back(models::cycle(3));
  fixtures.push_back(flower_pair());
  fixtures.push_back(models::exp_square());
  std::mt19937 rng(23);
  for (const Quadruple& q : fixtures) {
    const int m = int(q.rose.size());
    for (int trial = 0; trial < 120; ++trial) {
      const Word w1 = random_word(rng, m, 6);
      const Word w2 = random_word(rng, m, 6);
      auto la = lift_word(q, q.basepoint, w1);
      REQUIRE(la.has_value());
      auto lb = lift_word(q, la->terminal, w2);
      REQUIRE(lb.has_value());
      Word w12 = w1;
      w12.insert(w12.end(), w2.begin(), w2.end());
      auto lc = lift_word(q, q.basepoint, w12);
      REQUIRE(lc.has_value());
      CHECK(lc->terminal == lb->terminal);
      CHECK(lc->closed == (lb->terminal == q.basepoint));
      std::vector<VertexId> glued = la->vertices;
      glued.insert(glued.end(), lb->vertices.begin() + 1, lb->vertices.end());
      CHECK(lc->vertices == glued);
      auto edges = la->edges;
      edges.insert(edges.end(), lb->edges.begin(), lb->edges.end());
      CHECK(lc->edges == edges);
    }
  }
}

TEST_CASE("membership matches divisibility on cycles") {
  for (const std::size_t d : {2u, 3u, 5u, 7u}) {
    const Quadruple q = models::cycle(d);
    for (int k = -12; k <= 12; ++k)
      CHECK(member(q, 0, power(k)) ==
            (k % int(d) == 0));
  }
  const Quadruple chain = models::exp_chain();
  CHECK(member(chain, 0, Word{}));
  for (int k = -10; k <= 10; ++k) {
    if (k == 0) continue;
    CHECK(!member(chain, 0, power(k)));
  }
}

TEST_CASE("membership is reduction invariant") {
  std::vector<Quadruple> fixtures;
  fixtures.push_back(models::cycle(4));
  fixtures.push_back(flower_pair());
  fixtures.push_back(models::exp_chain());
  std::mt19937 rng(31);
  for (const Quadruple& q : fixtures) {
    const int m = int(q.rose.size());
    for (int trial = 0; trial < 200; ++trial) {
      const Word w = random_word(rng, m, 10);
      CHECK(member(q, q.basepoint, w) == member(q, q.basepoint, reduce(w)));
    }
  }
}

TEST_CASE("spanning tree basis") {
  auto b3 = subgroup_basis(models::cycle(3), 0);
  REQUIRE(b3.has_value());
  CHECK(*b3 == std::vector<Word>{power(3)});

  auto br = subgroup_basis(rose_cover(), 0);
  REQUIRE(br.has_value());
  CHECK(*br == std::vector<Word>{Word{{1, +1}}, Word{{2, +1}}});

  const Quadruple fp = flower_pair();
  auto bf = subgroup_basis(fp, 0);
  REQUIRE(bf.has_value());
  // rank |E| - |V| + 1, deterministic breadth-first order
  CHECK(*bf == std::vector<Word>{Word{{1, +1}, {1, +1}}, Word{{2, +1}},
                                 Word{{1, +1}, {2, +1}, {1, -1}}});
  for (const Word& w : *bf) CHECK(member(fp, 0, w));

  Report err;
  CHECK(!subgroup_basis(models::exp_chain(), 0, &err).has_value());
  CHECK(err.violations[0].code == "infinite-graph");
}

// Independent route: a length-L closed walk crosses at most L non-tree
// edges, so membership of short words is decidable by brute-forcing short
// products of basis words in the abstract free group.
TEST_CASE("membership agrees with free-group products of the basis") {
  std::vector<Quadruple> fixtures;
  fixtures.push_back(models::cycle(2));
  fixtures.push_back(flower_pair());
  for (const Quadruple& q : fixtures) {
    const int m = int(q.rose.size());
    const auto basis = subgroup_basis(q, q.basepoint);
    REQUIRE(basis.has_value());

    std::vector<Word> factors;
    for (const Word& w : *basis) {
      factors.push_back(w);
      factors.push_back(inverse(w));
    }
    std::set<std::string> products{word_str(Word{})};
    std::vector<Word> frontier{Word{}};
    for (int round = 0; round < 6; ++round) {
      std::vector<Word> next;
      for (const Word& p : frontier)
        for (const Word& f : factors) {
          Word pf = p;
          pf.insert(pf.end(), f.begin(), f.end());
          pf = reduce(pf);
          if (products.insert(word_str(pf)).second) next.push_back(pf);
        }
      frontier = std::move(next);
    }

    // every reduced word of length <= 6, depth first
    std::vector<Word> ball;
    Word stack;
    auto walk = [&](auto&& self) -> void {
      if (stack.size() == 6) return;
      for (int j = 1; j <= m; ++j)
        for (const int s : {+1, -1}) {
          if (!stack.empty() && stack.back().index == j &&
              stack.back().sign == -s)
            continue;
          stack.push_back({j, s});
          ball.push_back(stack);
          self(self);
          stack.pop_back();
        }
    };
    walk(walk);

    for (const Word& w : ball)
      CHECK(member(q, q.basepoint, w) == (products.count(word_str(w)) > 0));
  }
}

TEST_CASE("crossing words of closed lifts") {
  CHECK(lift_class(models::cycle(2), 0, power(2)) == Word{{1, +1}});
  CHECK(lift_class(models::cycle(3), 0, power(3)) == Word{{1, +1}});
  CHECK(lift_class(models::cycle(5), 0, power(5)) == Word{{1, +1}});

  const Quadruple fp = flower_pair();
  CHECK(lift_class(fp, 0, Word{{2, +1}}) == Word{{2, +1}});
  CHECK(lift_class(fp, 0, power(2)) == Word{{1, +1}});
  // out along the bigon, around the empty loop, back the same way
  CHECK(lift_class(fp, 0, Word{{1, +1}, {2, +1}, {1, -1}}) == Word{});

  const Quadruple rc = rose_cover();
  CHECK(lift_class(rc, 0, Word{{1, +1}}) == Word{{1, +1}});
  CHECK(lift_class(rc, 0, Word{{2, +1}}) == Word{{2, +1}});

  // closed lift inside a generator-backed graph: the core bigon winds once
  // around the middle marked point but dips under the third one's ray, so
  // the class comes out conjugated
  CHECK(lift_class(models::exp_square(), 0, Word{{2, +1}, {2, +1}}) ==
        Word{{3, -1}, {2, +1}, {3, +1}});

  Report err;
  CHECK(!lift_class(models::exp_chain(), 0, power(1), &err).has_value());
  CHECK(err.violations[0].code == "lift-open");
}

TEST_CASE("crossing words are homomorphic on closed lifts") {
  std::vector<Quadruple> fixtures;
  fixtures.push_back(models::cycle(3));
  fixtures.push_back(flower_pair());
  std::mt19937 rng(43);
  for (const Quadruple& q : fixtures) {
    const auto basis = subgroup_basis(q, q.basepoint);
    REQUIRE(basis.has_value());
    std::uniform_int_distribution<int> pick(0, int(basis->size()) - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    auto random_member = [&](int factors) {
      Word w;
      for (int i = 0; i < factors; ++i) {
        const Word& b = (*basis)[std::size_t(pick(rng))];
        const Word f = coin(rng) ? b : inverse(b);
        w.insert(w.end(), f.begin(), f.end());
      }
      return reduce(w);
    };
    for (int trial = 0; trial < 100; ++trial) {
      const Word w1 = random_member(2);
      const Word w2 = random_member(2);
      Word w12 = w1;
      w12.insert(w12.end(), w2.begin(), w2.end());
      const auto c1 = lift_class(q, q.basepoint, w1);
      const auto c2 = lift_class(q, q.basepoint, w2);
      const auto c12 = lift_class(q, q.basepoint, w12);
      REQUIRE(c1.has_value());
      REQUIRE(c2.has_value());
      REQUIRE(c12.has_value());
      Word glued = *c1;
      glued.insert(glued.end(), c2->begin(), c2->end());
      CHECK(*c12 == reduce(glued));
    }
  }
}

TEST_CASE("rose petals align with their duals") {
  std::vector<Quadruple> fixtures;
  for (const std::size_t d : {2u, 3u, 4u, 5u}) fixtures.push_back(models::cycle(d));
  fixtures.push_back(flower_pair());
  fixtures.push_back(rose_cover());
  fixtures.push_back(models::exp_chain());
  fixtures.push_back(models::cosine());
  fixtures.push_back(models::exp_square());
  for (const Quadruple& q : fixtures) {
    const Report rep = check_rose_alignment(q);
    INFO(rep.str());
    CHECK(rep.ok());
    for (int j = 1; std::size_t(j) <= q.rose.size(); ++j)
      CHECK(rose_class(q, j) ==
            Word{{int(q.rose.petals[j - 1].marked) + 1, +1}});
  }
}

TEST_CASE("isotopy is decided by subgroups and crossing words") {
  const Quadruple fp = flower_pair();
  const Quadruple c2 = models::cycle(2);
  const Quadruple c3 = models::cycle(3);

  CHECK(isotopic(fp, fp, 0, 0) == std::optional<bool>(true));
  CHECK(isotopic(c3, c3, 0, 0) == std::optional<bool>(true));
  CHECK(isotopic(rose_cover(), rose_cover(), 0, 0) == std::optional<bool>(true));
  CHECK(isotopic(c3, c3, 0, 1) == std::optional<bool>(true));

  Report why;
  CHECK(isotopic(c2, c3, 0, 0, {}, &why) == std::optional<bool>(false));
  CHECK(why.violations[0].code == "subgroup-mismatch");

  // same graph and rose shape, but the first marked point now sits in the
  // other loop disk; subgroups agree, crossing words do not
  Quadruple moved = flower_pair();
  moved.marked.points[0].pos = {1.2, -1};
  moved.rose = auto_rose(moved.marked, {4, 2});
  REQUIRE(validate_dynamic(moved).ok());
  REQUIRE(moved.rose.petals[0].marked == fp.rose.petals[0].marked);
  REQUIRE(moved.rose.petals[1].marked == fp.rose.petals[1].marked);
  Report why2;
  CHECK(isotopic(fp, moved, 0, 0, {}, &why2) == std::optional<bool>(false));
  CHECK(why2.violations[0].code == "class-mismatch");
  CHECK(isotopic(moved, fp, 0, 0) == std::optional<bool>(false));

  // a wrong connecting word conjugates the classes apart
  CHECK(isotopic(fp, fp, 0, 0, Word{{1, +1}}) == std::optional<bool>(false));

  Report why3;
  CHECK(!isotopic(models::exp_chain(), c2, 0, 0, {}, &why3).has_value());
  CHECK(why3.violations[0].code == "not-finite");
}

TEST_CASE("subgroup balls find the agreement threshold") {
  std::vector<Quadruple> cycles;
  for (const std::size_t d : {1u, 3u, 5u, 7u, 9u}) cycles.push_back(models::cycle(d));
  std::vector<const Quadruple*> seq;
  for (const Quadruple& q : cycles) seq.push_back(&q);

  const Quadruple chain = models::exp_chain();
  const BallCompare bc = group_ball_compare(seq, chain, 5);
  CHECK(bc.agree == std::vector<char>{0, 0, 0, 1, 1});
  REQUIRE(bc.threshold.has_value());
  CHECK(*bc.threshold == 3);  // first n with 2n+1 > 5
  CHECK(bc.witness_at == 2);
  CHECK(bc.witness == power(5));

  const Quadruple c3 = models::cycle(3);
  std::vector<const Quadruple*> constant{&c3, &c3, &c3};
  const BallCompare same = group_ball_compare(constant, c3, 6);
  CHECK(same.agree == std::vector<char>{1, 1, 1});
  CHECK(same.threshold == std::optional<std::size_t>(0));

  const Quadruple c2 = models::cycle(2);
  std::vector<const Quadruple*> bad{&c3, &c2};
  const BallCompare fail = group_ball_compare(bad, c3, 4);
  CHECK(!fail.threshold.has_value());
  CHECK(fail.witness_at == 1);
  CHECK(fail.witness == power(2));
}

TEST_CASE("expansion ids stay stable across depths") {
  const Quadruple q = models::exp_square();
  const GraphGenerator& gen = generator(q);
  const Expansion small = gen.expand(2);
  const Expansion big = gen.expand(4);
  REQUIRE(small.g.vertices.size() <= big.g.vertices.size());
  REQUIRE(small.g.edges.size() <= big.g.edges.size());
  for (std::size_t v = 0; v < small.g.vertices.size(); ++v) {
    CHECK(small.g.vertices[v].pos.x == big.g.vertices[v].pos.x);
    CHECK(small.g.vertices[v].pos.y == big.g.vertices[v].pos.y);
    if (small.complete[v]) CHECK(small.g.vertices[v].rot == big.g.vertices[v].rot);
  }
  for (std::size_t e = 0; e < small.g.edges.size(); ++e) {
    CHECK(small.g.edges[e].from == big.g.edges[e].from);
    CHECK(small.g.edges[e].to == big.g.edges[e].to);
    CHECK(small.g.edges[e].petal == big.g.edges[e].petal);
  }
}
