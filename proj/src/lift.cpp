#include "quadrose/lift.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>

#include "quadrose/geom.hpp"

namespace quadrose {

Word reduce(Word w) {
  Word out;
  for (const Letter& l : w) {
    if (!out.empty() && out.back().index == l.index &&
        out.back().sign == -l.sign) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inv(*it));
  return out;
}

std::string word_str(const Word& w, char symbol) {
  if (w.empty()) return "1";
  std::string out;
  for (const Letter& l : w) {
    if (!out.empty()) out += ' ';
    out += symbol;
    out += std::to_string(l.index);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

std::optional<Word> parse_word(std::string_view text, Report* err) {
  auto fail = [&](const std::string& detail) -> std::optional<Word> {
    if (err) err->add("word-syntax", detail);
    return std::nullopt;
  };
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    tokens.push_back(text.substr(start, i - start));
  }
  if (tokens.size() == 1 && tokens[0] == "1") return Word{};

  Word w;
  char symbol = 0;
  for (const std::string_view tok : tokens) {
    const char c = tok[0];
    if (c < 'a' || c > 'z')
      return fail("bad generator symbol in '" + std::string(tok) + "'");
    if (symbol == 0) symbol = c;
    if (c != symbol) return fail("mixed generator symbols");
    std::size_t j = 1;
    while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j])))
      ++j;
    if (j == 1) return fail("missing index in '" + std::string(tok) + "'");
    const int index = std::atoi(std::string(tok.substr(1, j - 1)).c_str());
    if (index < 1)
      return fail("index must be positive in '" + std::string(tok) + "'");
    int sign = +1;
    if (j < tok.size()) {
      if (tok.substr(j) != "^-1")
        return fail("bad exponent in '" + std::string(tok) + "'");
      sign = -1;
    }
    w.push_back({index, sign});
  }
  return w;
}

namespace {

// The unique out/in edge per (vertex, petal); kNone where the labeling is
// silent (frontier vertices of an expansion, or an invalid covering).
struct WalkTable {
  std::size_t m = 0;
  std::vector<EdgeId> out, in;

  EdgeId at(VertexId v, Letter l) const {
    const auto& tab = l.sign > 0 ? out : in;
    return tab[std::size_t(v) * m + std::size_t(l.index - 1)];
  }
};

WalkTable make_table(const HalfEdgeGraph& g, std::size_t m) {
  WalkTable t;
  t.m = m;
  t.out.assign(g.vertices.size() * m, kNone);
  t.in.assign(g.vertices.size() * m, kNone);
  for (EdgeId e = 0; e < g.edges.size(); ++e) {
    const Edge& ed = g.edges[e];
    if (ed.petal < 1 || std::size_t(ed.petal) > m) continue;
    t.out[std::size_t(ed.from) * m + std::size_t(ed.petal - 1)] = e;
    t.in[std::size_t(ed.to) * m + std::size_t(ed.petal - 1)] = e;
  }
  return t;
}

// Repetitions needed to hold vertex v plus `len` more steps of walking,
// with a spare ring so every visited vertex keeps its full star.
std::uint32_t reps_for(const GraphGenerator& gen, VertexId v,
                       std::size_t len) {
  const std::size_t core = gen.core_vertices.size();
  std::size_t per = 0;
  for (const GenCell& c : gen.cells) per += c.vertices.size();
  std::uint32_t r0 = 0;
  if (v >= core && per > 0) r0 = 1 + std::uint32_t((v - core) / per);
  return r0 + std::uint32_t(len) + 2;
}

// A walkable view of the quadruple's graph; owns the expansion when the
// graph is generator-backed. Expansion ids are stable across depths, so
// results speak the generator's global ids. The expansion sits behind a
// unique_ptr so moving a Resolved keeps `g` valid.
struct Resolved {
  std::unique_ptr<Expansion> ex;
  const HalfEdgeGraph* g = nullptr;
};

Resolved resolve(const Quadruple& q, VertexId v, std::size_t len) {
  Resolved r;
  if (has_generator(q)) {
    r.ex = std::make_unique<Expansion>(
        generator(q).expand(reps_for(generator(q), v, len)));
    r.g = &r.ex->g;
  } else {
    r.g = &finite_graph(q);
  }
  return r;
}

std::optional<LiftResult> lift_on(const HalfEdgeGraph& g, std::size_t m,
                                  VertexId v, const Word& w, Report* err) {
  if (v >= g.vertices.size()) {
    if (err) err->add("vertex-unknown", "no vertex " + std::to_string(v));
    return std::nullopt;
  }
  const WalkTable table = make_table(g, m);
  LiftResult lr;
  lr.vertices.push_back(v);
  VertexId cur = v;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Letter& l = w[i];
    if (l.index < 1 || std::size_t(l.index) > m) {
      if (err)
        err->add("bad-letter",
                 "letter " + std::to_string(i + 1) + " indexes petal " +
                     std::to_string(l.index) + " of " + std::to_string(m));
      return std::nullopt;
    }
    const EdgeId e = table.at(cur, l);
    if (e == kNone) {
      if (err)
        err->add("covering-undefined",
                 "no petal-" + std::to_string(l.index) +
                     (l.sign > 0 ? " outgoing" : " incoming") +
                     " edge at vertex " + std::to_string(cur));
      return std::nullopt;
    }
    cur = l.sign > 0 ? g.edges[e].to : g.edges[e].from;
    lr.edges.push_back({e, l.sign});
    lr.vertices.push_back(cur);
  }
  lr.terminal = cur;
  lr.closed = (cur == v);
  return lr;
}

// Signed crossings of a closed polyline with the downward rays of the
// marked points, in path order. A ray whose line passes within eps of a
// polyline node, another marked point, or a grazing crossing is nudged
// right in steps of 3 * eps until clean.
std::optional<Word> crossing_word(const Polyline& loop, const MarkedSet& a,
                                  Report* err) {
  if (loop.size() < 2) return Word{};
  BBox box;
  box.add(loop);
  for (const MarkedPoint& p : a.points) box.add(p.pos);
  const double eps = 1e-9 * box.width();
  if (eps <= 0.0) {
    if (err) err->add("ray-degenerate", "zero-width configuration");
    return std::nullopt;
  }

  struct Hit {
    std::size_t seg;
    double t;
    Letter letter;
  };
  std::vector<Hit> hits;

  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 mp = a.points[i].pos;
    bool placed = false;
    for (int shift = 0; shift <= 64 && !placed; ++shift) {
      const double rx = mp.x + 3.0 * eps * shift;
      bool degen = false;
      for (const Vec2& node : loop)
        if (std::abs(node.x - rx) <= eps) {
          degen = true;
          break;
        }
      for (std::size_t k = 0; k < a.size() && !degen; ++k)
        if (k != i && std::abs(a.points[k].pos.x - rx) <= eps) degen = true;
      if (degen) continue;
      std::vector<Hit> mine;
      for (std::size_t s = 0; s + 1 < loop.size(); ++s) {
        double t = 0.0;
        const int c = down_ray_crossing(loop[s], loop[s + 1], rx, mp.y, &t);
        if (c == 0) continue;
        const double y = loop[s].y + t * (loop[s + 1].y - loop[s].y);
        if (std::abs(y - mp.y) <= eps) {
          degen = true;  // grazes the marked point itself
          break;
        }
        mine.push_back({s, t, {int(i) + 1, c}});
      }
      if (degen) continue;
      hits.insert(hits.end(), mine.begin(), mine.end());
      placed = true;
    }
    if (!placed) {
      if (err)
        err->add("ray-degenerate",
                 "no clean ray position near marked point " +
                     std::to_string(i) + "; perturb the geometry");
      return std::nullopt;
    }
  }

  std::sort(hits.begin(), hits.end(), [](const Hit& ha, const Hit& hb) {
    if (ha.seg != hb.seg) return ha.seg < hb.seg;
    return ha.t < hb.t;
  });
  Word w;
  for (const Hit& h : hits) w.push_back(h.letter);
  return reduce(w);
}

}  // namespace

std::optional<LiftResult> lift_word(const Quadruple& q, VertexId v,
                                    const Word& w, Report* err) {
  const Resolved r = resolve(q, v, w.size());
  return lift_on(*r.g, q.rose.size(), v, w, err);
}

bool member(const Quadruple& q, VertexId v, const Word& w, Report* err) {
  const auto lr = lift_word(q, v, w, err);
  return lr && lr->closed;
}

std::optional<std::vector<Word>> subgroup_basis(const Quadruple& q, VertexId v,
                                                Report* err) {
  if (has_generator(q)) {
    if (err) err->add("infinite-graph", "spanning trees need a finite graph");
    return std::nullopt;
  }
  const HalfEdgeGraph& g = finite_graph(q);
  if (v >= g.vertices.size()) {
    if (err) err->add("vertex-unknown", "no vertex " + std::to_string(v));
    return std::nullopt;
  }

  std::vector<char> seen(g.vertices.size(), 0);
  std::vector<char> in_tree(g.edges.size(), 0);
  std::vector<HalfId> parent(g.vertices.size(), kNone);  // arriving half
  std::vector<VertexId> queue{v};
  seen[v] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId u = queue[head];
    for (const HalfId h : g.vertices[u].rot) {
      const VertexId next = g.head(h);
      if (seen[next]) continue;
      seen[next] = 1;
      parent[next] = h;
      in_tree[edge_of(h)] = 1;
      queue.push_back(next);
    }
  }

  auto path_word = [&](VertexId u) {
    Word pw;
    while (u != v) {
      const HalfId h = parent[u];
      const Edge& e = g.edges[edge_of(h)];
      pw.push_back({e.petal, is_forward(h) ? +1 : -1});
      u = g.origin(h);
    }
    std::reverse(pw.begin(), pw.end());
    return pw;
  };

  std::vector<Word> basis;
  for (EdgeId e = 0; e < g.edges.size(); ++e) {
    if (in_tree[e]) continue;
    const Edge& ed = g.edges[e];
    if (!seen[ed.from] || !seen[ed.to]) {
      if (err)
        err->add("not-connected", "edge " + std::to_string(e) +
                                      " is unreachable from " +
                                      std::to_string(v));
      return std::nullopt;
    }
    Word w = path_word(ed.from);
    w.push_back({ed.petal, +1});
    const Word back = inverse(path_word(ed.to));
    w.insert(w.end(), back.begin(), back.end());
    basis.push_back(reduce(w));
  }
  return basis;
}

std::optional<Word> lift_class(const Quadruple& q, VertexId v, const Word& w,
                               Report* err) {
  const Resolved r = resolve(q, v, w.size());
  const auto lr = lift_on(*r.g, q.rose.size(), v, w, err);
  if (!lr) return std::nullopt;
  if (!lr->closed) {
    if (err)
      err->add("lift-open", "lift ends at vertex " +
                                std::to_string(lr->terminal) + ", not " +
                                std::to_string(v));
    return std::nullopt;
  }
  Polyline loop;
  for (const auto& [e, s] : lr->edges) {
    const Polyline piece =
        s > 0 ? r.g->edges[e].poly : reversed(r.g->edges[e].poly);
    if (loop.empty())
      loop = piece;
    else
      loop.insert(loop.end(), piece.begin() + 1, piece.end());
  }
  return crossing_word(loop, q.marked, err);
}

Word rose_class(const Quadruple& q, int j, Report* err) {
  if (j < 1 || std::size_t(j) > q.rose.size()) {
    if (err) err->add("bad-petal", "no petal " + std::to_string(j));
    return {};
  }
  const auto w = crossing_word(q.rose.petals[j - 1].loop, q.marked, err);
  return w ? *w : Word{};
}

Report check_rose_alignment(const Quadruple& q) {
  Report rep;
  for (int j = 1; std::size_t(j) <= q.rose.size(); ++j) {
    const Petal& petal = q.rose.petals[j - 1];
    if (petal.marked == kNone) {
      rep.add("petal-unassigned", "petal " + std::to_string(j) +
                                      " surrounds no marked point");
      continue;
    }
    Report sub;
    const Word got = rose_class(q, j, &sub);
    rep.merge(sub);
    if (!sub.ok()) continue;
    const Word want{{int(petal.marked) + 1, +1}};
    if (got != want)
      rep.add("petal-dual-mismatch",
              "petal " + std::to_string(j) + " crosses as " +
                  word_str(got, 'y') + ", expected " + word_str(want, 'y'));
  }
  return rep;
}

std::optional<bool> isotopic(const Quadruple& q1, const Quadruple& q2,
                             VertexId b1, VertexId b2, const Word& p,
                             Report* why) {
  auto bail = [&](const std::string& code,
                  const std::string& detail) -> std::optional<bool> {
    if (why) why->add(code, detail);
    return std::nullopt;
  };
  if (has_generator(q1) || has_generator(q2))
    return bail("not-finite", "isotopy needs finite graphs on both sides");
  const Report d1 = validate_dynamic(q1);
  if (!d1.ok()) return bail("first-not-dynamic", d1.violations[0].code);
  const Report d2 = validate_dynamic(q2);
  if (!d2.ok()) return bail("second-not-dynamic", d2.violations[0].code);
  if (q1.marked.size() != q2.marked.size())
    return bail("marked-mismatch", "different marked counts");
  if (q1.rose.size() != q2.rose.size())
    return bail("rose-mismatch", "different petal counts");
  for (std::size_t i = 0; i < q1.rose.size(); ++i)
    if (q1.rose.petals[i].marked != q2.rose.petals[i].marked)
      return bail("rose-mismatch", "petal " + std::to_string(i + 1) +
                                       " surrounds different marked ids");
  for (const Letter& l : p)
    if (l.index < 1 || std::size_t(l.index) > q1.marked.size())
      return bail("bad-letter", "connecting word indexes marked point " +
                                    std::to_string(l.index));
  const Report a1 = check_rose_alignment(q1);
  if (!a1.ok()) return bail("alignment", a1.violations[0].detail);
  const Report a2 = check_rose_alignment(q2);
  if (!a2.ok()) return bail("alignment", a2.violations[0].detail);

  Report sub;
  const auto basis1 = subgroup_basis(q1, b1, &sub);
  const auto basis2 = subgroup_basis(q2, b2, &sub);
  if (!basis1 || !basis2) {
    if (why) why->merge(sub);
    return std::nullopt;
  }
  for (const Word& w : *basis1)
    if (!member(q2, b2, w)) {
      if (why) why->add("subgroup-mismatch", word_str(w) + " escapes q2");
      return false;
    }
  for (const Word& w : *basis2)
    if (!member(q1, b1, w)) {
      if (why) why->add("subgroup-mismatch", word_str(w) + " escapes q1");
      return false;
    }

  const Word pinv = inverse(p);
  for (const Word& w : *basis1) {
    Report cerr;
    const auto c1 = lift_class(q1, b1, w, &cerr);
    const auto c2 = lift_class(q2, b2, w, &cerr);
    if (!c1 || !c2) {
      if (why) why->merge(cerr);
      return std::nullopt;
    }
    Word rhs = p;
    rhs.insert(rhs.end(), c2->begin(), c2->end());
    rhs.insert(rhs.end(), pinv.begin(), pinv.end());
    rhs = reduce(rhs);
    if (*c1 != rhs) {
      if (why)
        why->add("class-mismatch", word_str(w) + " lifts to " +
                                       word_str(*c1, 'y') + " vs " +
                                       word_str(rhs, 'y'));
      return false;
    }
  }
  return true;
}

BallCompare group_ball_compare(const std::vector<const Quadruple*>& seq,
                               const Quadruple& limit, int radius) {
  BallCompare rep;
  rep.radius = radius;
  rep.agree.assign(seq.size(), 1);
  const std::size_t m = limit.rose.size();
  const std::size_t n = seq.size();

  // Entry n is the limit; walking state lives in per-depth rows so the
  // depth-first scan over reduced words costs one lookup per letter.
  std::vector<Resolved> res;
  std::vector<WalkTable> tables;
  std::vector<VertexId> base(n + 1, kNone);
  std::vector<char> usable(n + 1, 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const Quadruple& q = i < n ? *seq[i] : limit;
    res.push_back(resolve(q, q.basepoint, std::size_t(radius)));
    tables.push_back(make_table(*res[i].g, m));
    base[i] = q.basepoint;
    if (q.rose.size() != m || q.basepoint >= res[i].g->vertices.size())
      usable[i] = 0;
  }
  std::size_t live = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable[i] || !usable[n]) rep.agree[i] = 0;
    if (rep.agree[i]) ++live;
  }

  std::vector<Word> first_bad(n);
  std::vector<std::vector<VertexId>> cur(std::size_t(radius) + 1,
                                         std::vector<VertexId>(n + 1));
  cur[0] = base;
  Word stack;

  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == radius || live == 0) return;
    for (int j = 1; j <= int(m); ++j)
      for (const int s : {+1, -1}) {
        if (!stack.empty() && stack.back().index == j &&
            stack.back().sign == -s)
          continue;
        bool defined = true;
        for (std::size_t i = 0; i <= n; ++i) {
          if (i < n && !rep.agree[i]) continue;
          const EdgeId e = tables[i].at(cur[depth][i], {j, s});
          if (e == kNone) {
            defined = false;  // off the expansion: cannot happen when the
            break;            // inputs are valid coverings
          }
          cur[depth + 1][i] =
              s > 0 ? res[i].g->edges[e].to : res[i].g->edges[e].from;
        }
        if (!defined) continue;
        stack.push_back({j, s});
        const bool vlimit = cur[depth + 1][n] == base[n];
        for (std::size_t i = 0; i < n; ++i) {
          if (!rep.agree[i]) continue;
          if ((cur[depth + 1][i] == base[i]) != vlimit) {
            rep.agree[i] = 0;
            first_bad[i] = stack;
            --live;
          }
        }
        self(self, depth + 1);
        stack.pop_back();
      }
  };
  rec(rec, 0);

  std::size_t last_bad = n;  // sentinel: none
  for (std::size_t i = 0; i < n; ++i)
    if (!rep.agree[i]) last_bad = i;
  if (last_bad < n) {
    rep.witness = first_bad[last_bad];
    rep.witness_at = last_bad;
    if (rep.agree.back()) rep.threshold = last_bad + 1;
  } else {
    rep.threshold = 0;
  }
  return rep;
}

}  // namespace quadrose
