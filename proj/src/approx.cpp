#include "quadrose/approx.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>

namespace quadrose {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

Vec2 unit(double a) { return {std::cos(a), std::sin(a)}; }
Vec2 rot90ccw(Vec2 d) { return {-d.y, d.x}; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

Vec2 normalize(Vec2 d) {
  const double n = norm(d);
  return n > 0 ? (1.0 / n) * d : Vec2{1.0, 0.0};
}

/// Counterclockwise angle from one heading to another, in (0, tau].
double ccw_delta(double from, double to) {
  double d = to - from;
  while (d <= 0) d += kTau;
  while (d > kTau) d -= kTau;
  return d;
}

double poly_len(const Polyline& p) {
  double len = 0;
  for (std::size_t i = 1; i < p.size(); ++i) len += dist(p[i - 1], p[i]);
  return len;
}

std::size_t distinct_origins(const HalfEdgeGraph& g,
                             const std::vector<HalfId>& walk) {
  std::set<VertexId> seen;
  for (HalfId h : walk) seen.insert(g.origin(h));
  return seen.size();
}

bool same_structure(const HalfEdgeGraph& a, const HalfEdgeGraph& b) {
  if (a.vertices.size() != b.vertices.size() ||
      a.edges.size() != b.edges.size())
    return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i].from != b.edges[i].from || a.edges[i].to != b.edges[i].to ||
        a.edges[i].petal != b.edges[i].petal)
      return false;
  for (std::size_t i = 0; i < a.vertices.size(); ++i)
    if (a.vertices[i].rot != b.vertices[i].rot) return false;
  return true;
}

/// Closing polyline for one chain, drawn from v back to u through the open
/// side of the face. `kept` lists marked points the new face must enclose.
Polyline chain_route(const HalfEdgeGraph& w, const PartialFaceChain& c,
                     const std::vector<Vec2>& kept) {
  const Vec2 pu = w.vertices[c.verts.front()].pos;
  const Vec2 pv = w.vertices[c.verts.back()].pos;

  // walk samples from u to v
  Polyline samples;
  if (c.edges.empty()) {
    samples.push_back(pu);
  } else {
    for (std::size_t i = 0; i < c.edges.size(); ++i) {
      const Polyline& p = w.edges[c.edges[i]].poly;
      for (std::size_t j = (i == 0 ? 0 : 1); j < p.size(); ++j)
        samples.push_back(p[j]);
    }
  }

  // The face wedge at v opens counterclockwise from the departing slot to
  // the walk's reversed arrival; leave inside the first third of it, and
  // come back into u through the last third of the wedge there. That keeps
  // the drawn tangents consistent with the inherited rotation slots.
  const HalfId after_v =
      c.edges.empty() ? c.slot_u : backward_half(c.edges.back());
  const HalfId before_u =
      c.edges.empty() ? c.slot_v : forward_half(c.edges.front());
  const double av = heading(w.out_dir(c.slot_v));
  const double au = heading(w.out_dir(c.slot_u));
  const double wedge_v = ccw_delta(av, heading(w.out_dir(after_v)));
  const double wedge_u = ccw_delta(heading(w.out_dir(before_u)), au);
  const double theta_v = av + wedge_v / 3;
  const double theta_u = au - wedge_u / 3;

  // frame: chain direction and the face-side normal
  Vec2 that, nhat;
  const Vec2 d = pv - pu;
  if (norm(d) > 1e-9) {
    that = normalize(d);
    nhat = rot90ccw(that);
  } else {
    nhat = unit(av + wedge_v / 2);
    that = {nhat.y, -nhat.x};
  }
  const auto lat = [&](Vec2 p) { return dot(p - pu, that); };
  const auto depth = [&](Vec2 p) { return dot(p - pu, nhat); };

  double minlen = w.edges[c.exit_u].poly.empty()
                      ? 1.0
                      : poly_len(w.edges[c.exit_u].poly);
  minlen = std::min(minlen, poly_len(w.edges[c.exit_v].poly));
  for (EdgeId e : c.edges) minlen = std::min(minlen, poly_len(w.edges[e].poly));

  Polyline route;
  route.push_back(pv);
  if (!kept.empty()) {
    // sweep a box past the kept marked points so they land inside
    double mu = minlen;
    for (Vec2 z : kept) {
      mu = std::min(mu, point_polyline_dist(z, samples));
      mu = std::min(mu, point_polyline_dist(z, w.edges[c.exit_u].poly));
      mu = std::min(mu, point_polyline_dist(z, w.edges[c.exit_v].poly));
    }
    mu *= 0.25;
    const double r = std::min(0.25 * minlen, mu);
    const Vec2 a = pv + r * unit(theta_v);
    const Vec2 b = pu + r * unit(theta_u);
    double dmax = std::max(depth(a), depth(b));
    double lhi = std::max(lat(a), lat(b));
    double llo = std::min(lat(a), lat(b));
    for (Vec2 p : samples) dmax = std::max(dmax, depth(p));
    for (Vec2 z : kept) {
      dmax = std::max(dmax, depth(z));
      lhi = std::max(lhi, lat(z));
      llo = std::min(llo, lat(z));
    }
    dmax += mu;
    lhi += mu;
    llo -= mu;
    route.push_back(a);
    route.push_back(pu + lhi * that + dmax * nhat);
    route.push_back(pu + llo * that + dmax * nhat);
    route.push_back(b);
  } else {
    // hug the chain at a tenth of the local edge length
    const double delta = 0.1 * minlen;
    const Vec2 a = pv + delta * unit(theta_v);
    const Vec2 b = pu + delta * unit(theta_u);
    route.push_back(a);
    if (samples.size() >= 3) {
      std::vector<double> arc(samples.size(), 0.0);
      for (std::size_t i = 1; i < samples.size(); ++i)
        arc[i] = arc[i - 1] + dist(samples[i - 1], samples[i]);
      for (std::size_t i = samples.size() - 2; i >= 1; --i) {
        if (std::min(arc[i], arc.back() - arc[i]) < 2 * delta) continue;
        const Vec2 din = samples[i] - samples[i - 1];
        const Vec2 dout = samples[i + 1] - samples[i];
        if (norm(din) < 1e-12 || norm(dout) < 1e-12) continue;
        // averaged segment normals bisect the face-side wedge even at
        // sharp corners, where the chord normal can cross the chain
        const Vec2 nsum = rot90ccw(normalize(din)) + rot90ccw(normalize(dout));
        if (norm(nsum) < 1e-9) continue;
        route.push_back(samples[i] + delta * normalize(nsum));
      }
    }
    if (route.size() == 2) {
      // short chain: bow out once near the middle
      if (c.edges.empty())
        route.push_back(pu + 1.5 * delta * unit(av + wedge_v / 2));
      else
        route.push_back(0.5 * (pu + pv) + delta * nhat);
    }
    route.push_back(b);
  }
  route.push_back(pu);

  Polyline clean;
  for (Vec2 p : route)
    if (clean.empty() || dist(clean.back(), p) > 1e-12) clean.push_back(p);
  if (clean.size() == 1) clean.push_back(pu);
  return clean;
}

/// One row per bounded-label face of the closed graph g, paired with the
/// window face it came from.
std::vector<DegreeRow> degree_rows(const HalfEdgeGraph& g, const Ball& k,
                                   const std::vector<PartialFaceChain>& chains,
                                   Report* err) {
  std::vector<DegreeRow> rows;
  Report ferr;
  const FaceSet fs = trace_faces(g, &ferr);
  if (!ferr.ok()) {
    if (err) err->merge(ferr);
    return rows;
  }
  const std::vector<int> labels = label_faces(g, fs);
  Report werr;
  const FaceSet wfs = trace_faces(k.window.g, &werr);
  const std::size_t nk = k.emap.size();

  for (FaceId f = 0; f < fs.faces.size(); ++f) {
    if (labels[f] == 0) continue;
    DegreeRow row;
    row.face = f;
    row.petal = labels[f];
    row.verts = distinct_origins(g, fs.faces[f].walk);

    // host handle: the chain's face for closed-up faces, the same face for
    // faces that were already complete inside the ball
    HalfId wseed = kNone;
    for (HalfId h : fs.faces[f].walk)
      if (edge_of(h) >= nk && edge_of(h) - nk < chains.size()) {
        wseed = chains[edge_of(h) - nk].seed;
        break;
      }
    if (wseed == kNone) {
      const HalfId h0 = fs.faces[f].walk.front();
      wseed = 2 * k.emap[edge_of(h0)] + (h0 & 1u);
    }
    row.kind = 2;
    if (werr.ok()) {
      const Face& host = wfs.faces[wfs.face_of[wseed]];
      bool finite = true;
      for (HalfId h : host.walk)
        if (!k.window.complete[k.window.g.origin(h)]) {
          finite = false;
          break;
        }
      if (finite) {
        row.host_verts = distinct_origins(k.window.g, host.walk);
        row.kind = 1;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Ball ball(const GraphGenerator& gen, int radius, VertexId base) {
  assert(radius >= 0);
  assert(base < gen.core_vertices.size());
  Ball b;
  b.radius = radius;
  b.window = gen.expand(std::uint32_t(radius) + 2);
  const HalfEdgeGraph& w = b.window.g;

  // hop distances over the edge list; frontier rotation lists are partial,
  // the edge list is not
  const std::uint32_t far = kNone;
  std::vector<std::uint32_t> dist(w.vertices.size(), far);
  std::vector<std::vector<VertexId>> adj(w.vertices.size());
  for (const Edge& e : w.edges) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::deque<VertexId> queue{base};
  dist[base] = 0;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (dist[v] >= std::uint32_t(radius)) continue;
    for (VertexId u : adj[v])
      if (dist[u] == far) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
  }

  for (VertexId v = 0; v < w.vertices.size(); ++v)
    if (dist[v] <= std::uint32_t(radius)) b.vmap.push_back(v);
  std::stable_sort(b.vmap.begin(), b.vmap.end(),
                   [&](VertexId x, VertexId y) { return dist[x] < dist[y]; });
  b.vback.assign(w.vertices.size(), kNone);
  for (VertexId i = 0; i < b.vmap.size(); ++i) {
    b.vback[b.vmap[i]] = i;
    b.dist.push_back(dist[b.vmap[i]]);
    assert(b.window.complete[b.vmap[i]]);
  }

  for (EdgeId e = 0; e < w.edges.size(); ++e)
    if (b.vback[w.edges[e].from] != kNone && b.vback[w.edges[e].to] != kNone)
      b.emap.push_back(e);
  std::stable_sort(b.emap.begin(), b.emap.end(), [&](EdgeId x, EdgeId y) {
    const auto rank = [&](EdgeId e) {
      return std::max(dist[w.edges[e].from], dist[w.edges[e].to]);
    };
    return rank(x) < rank(y);
  });
  b.eback.assign(w.edges.size(), kNone);
  for (EdgeId i = 0; i < b.emap.size(); ++i) b.eback[b.emap[i]] = i;

  for (VertexId i = 0; i < b.vmap.size(); ++i) {
    Vertex v;
    v.pos = w.vertices[b.vmap[i]].pos;
    for (HalfId h : w.vertices[b.vmap[i]].rot) {
      const EdgeId de = b.eback[edge_of(h)];
      if (de != kNone) v.rot.push_back(2 * de + (h & 1u));
    }
    b.graph.vertices.push_back(std::move(v));
  }
  for (EdgeId i = 0; i < b.emap.size(); ++i) {
    const Edge& we = w.edges[b.emap[i]];
    Edge e;
    e.from = b.vback[we.from];
    e.to = b.vback[we.to];
    e.petal = we.petal;
    e.poly = we.poly;
    b.graph.edges.push_back(std::move(e));
  }
  return b;
}

std::optional<std::vector<PartialFaceChain>> partial_faces(
    const GraphGenerator& gen, const Ball& k, Report* err) {
  (void)gen;  // the ball carries its own window
  const HalfEdgeGraph& w = k.window.g;
  const auto edge_in = [&](EdgeId e) { return k.eback[e] != kNone; };
  const auto vert_in = [&](VertexId v) { return k.vback[v] != kNone; };
  const auto complete = [&](VertexId v) { return k.window.complete[v] != 0; };

  Report local;
  // The rest of the face walk between its exit and its re-entry must stay
  // off the ball; a second contact means the face meets the ball in more
  // than one chain, which a valid covering generator cannot produce.
  const auto claim_ok = [&](HalfId start, HalfId stop) {
    HalfId cur = start;
    std::size_t budget = 4 * w.edges.size() + 8;
    while (budget--) {
      if (!complete(w.head(cur))) return true;  // leaves the window
      const HalfId nxt = w.face_next(cur);
      if (nxt == stop) return true;
      if (vert_in(w.head(cur))) {
        local.add("face-chain", "face meets the ball again at vertex " +
                                    std::to_string(w.head(cur)));
        return false;
      }
      cur = nxt;
    }
    local.add("face-chain", "face walk does not close in the window");
    return false;
  };

  std::vector<PartialFaceChain> out;
  std::vector<char> edge_done(w.edges.size(), 0);

  // runs of ball edges along bounded-label face walks
  for (EdgeId de = 0; de < k.emap.size(); ++de) {
    const EdgeId we = k.emap[de];
    if (edge_done[we]) continue;
    const HalfId seed = forward_half(we);
    std::vector<HalfId> run{seed};
    bool closed_inside = false;
    for (HalfId cur = seed;;) {
      const HalfId nxt = w.face_next(cur);
      if (nxt == seed) {
        closed_inside = true;
        break;
      }
      if (!is_forward(nxt) || !edge_in(edge_of(nxt))) break;
      run.push_back(nxt);
      cur = nxt;
    }
    if (!closed_inside)
      for (HalfId cur = seed;;) {
        const HalfId prv = w.face_prev(cur);
        if (!is_forward(prv) || !edge_in(edge_of(prv))) break;
        run.insert(run.begin(), prv);
        cur = prv;
      }
    for (HalfId h : run) edge_done[edge_of(h)] = 1;
    if (closed_inside) continue;  // face fully inside the ball

    const HalfId h_in = w.face_prev(run.front());
    const HalfId h_out = w.face_next(run.back());
    if (!is_forward(h_in) || !is_forward(h_out)) continue;  // P_inf side
    const int petal = w.edges[edge_of(run.front())].petal;
    bool labeled = w.edges[edge_of(h_in)].petal == petal &&
                   w.edges[edge_of(h_out)].petal == petal;
    for (HalfId h : run)
      labeled = labeled && w.edges[edge_of(h)].petal == petal;
    if (!labeled) {
      local.add("face-chain", "petal labels change along a face chain");
      if (err) err->merge(local);
      return std::nullopt;
    }
    if (!claim_ok(h_out, run.front())) {
      if (err) err->merge(local);
      return std::nullopt;
    }

    PartialFaceChain c;
    c.petal = petal;
    c.seed = run.front();
    c.verts.push_back(w.origin(run.front()));
    for (HalfId h : run) c.verts.push_back(w.head(h));
    for (HalfId h : run) c.edges.push_back(edge_of(h));
    c.exit_u = edge_of(h_in);
    c.exit_v = edge_of(h_out);
    c.slot_u = twin(h_in);
    c.slot_v = h_out;
    out.push_back(std::move(c));
  }

  // faces that touch the ball in a single vertex
  for (VertexId dv = 0; dv < k.vmap.size(); ++dv) {
    const VertexId wv = k.vmap[dv];
    for (HalfId x : w.vertices[wv].rot) {
      if (!is_forward(x) || edge_in(edge_of(x))) continue;
      const HalfId arrive = w.face_prev(x);
      if (!is_forward(arrive) || edge_in(edge_of(arrive))) continue;
      if (w.edges[edge_of(arrive)].petal != w.edges[edge_of(x)].petal) {
        local.add("face-chain", "petal labels change across a face touch");
        if (err) err->merge(local);
        return std::nullopt;
      }
      if (!claim_ok(x, x)) {
        if (err) err->merge(local);
        return std::nullopt;
      }
      PartialFaceChain c;
      c.petal = w.edges[edge_of(x)].petal;
      c.seed = x;
      c.verts.push_back(wv);
      c.exit_u = edge_of(arrive);
      c.exit_v = edge_of(x);
      c.slot_u = twin(arrive);
      c.slot_v = x;
      out.push_back(std::move(c));
    }
  }

  std::sort(out.begin(), out.end(),
            [](const PartialFaceChain& a, const PartialFaceChain& b) {
              return a.seed < b.seed;
            });
  return out;
}

HalfEdgeGraph close(const Ball& k, const std::vector<PartialFaceChain>& chains,
                    const MarkedSet* keep, Report* err) {
  const HalfEdgeGraph& w = k.window.g;
  HalfEdgeGraph g = k.graph;

  // which kept marked point sits in which window face
  FaceSet wfs;
  std::vector<FaceId> marked_face;
  bool have_faces = false;
  if (keep && !keep->points.empty() && !chains.empty()) {
    Report ferr;
    wfs = trace_faces(w, &ferr);
    have_faces = ferr.ok();
    if (have_faces)
      for (const MarkedPoint& mp : keep->points)
        marked_face.push_back(locate_point(wfs, mp.pos));
  }

  std::map<HalfId, HalfId> slots;  // window slot -> closing half
  for (const PartialFaceChain& c : chains) {
    if (slots.count(c.slot_v) || slots.count(c.slot_u)) {
      if (err)
        err->add("slot-conflict",
                 "two chains claim one rotation slot at the ball boundary");
      continue;
    }
    std::vector<Vec2> kept;
    if (have_faces) {
      const FaceId host = wfs.face_of[c.seed];
      for (std::size_t i = 0; i < marked_face.size(); ++i)
        if (marked_face[i] == host) kept.push_back(keep->points[i].pos);
    }
    const EdgeId id = EdgeId(g.edges.size());
    Edge e;
    e.from = k.vback[c.verts.back()];
    e.to = k.vback[c.verts.front()];
    e.petal = c.petal;
    e.poly = chain_route(w, c, kept);
    g.edges.push_back(std::move(e));
    slots[c.slot_v] = forward_half(id);
    slots[c.slot_u] = backward_half(id);
  }

  // rebuild rotations: ball halves keep their slots, chain exits become the
  // closing halves, all other exits drop away with the tails
  for (std::size_t i = 0; i < k.vmap.size(); ++i) {
    std::vector<HalfId> rot;
    for (HalfId h : w.vertices[k.vmap[i]].rot) {
      const EdgeId de = k.eback[edge_of(h)];
      if (de != kNone)
        rot.push_back(2 * de + (h & 1u));
      else if (const auto it = slots.find(h); it != slots.end())
        rot.push_back(it->second);
    }
    g.vertices[i].rot = std::move(rot);
  }
  return g;
}

std::optional<ApproxReport> approximate(const Quadruple& q, int n,
                                        Report* err) {
  if (n < 0) {
    if (err) err->add("bad-radius", "negative ball radius");
    return std::nullopt;
  }
  if (!has_generator(q)) {
    if (err) err->add("not-generator", "approximation needs a generated graph");
    return std::nullopt;
  }
  const Report adm = validate_admissible(q);
  if (!adm.ok()) {
    if (err) {
      err->add("not-admissible", "the quadruple is not admissible");
      err->merge(adm);
    }
    return std::nullopt;
  }
  const GraphGenerator& gen = generator(q);
  if (q.basepoint == kNone || q.basepoint >= gen.core_vertices.size()) {
    if (err) err->add("bad-basepoint", "basepoint must be a core vertex");
    return std::nullopt;
  }

  const Ball k = ball(gen, n, q.basepoint);
  const auto chains = partial_faces(gen, k, err);
  if (!chains) return std::nullopt;

  ApproxReport rep;
  rep.n = n;
  rep.quad.marked = q.marked;
  rep.quad.rose = q.rose;
  rep.quad.graph = close(k, *chains, &q.marked, err);
  rep.quad.declared_parabolic = false;
  rep.quad.basepoint = 0;
  rep.dyn_why = validate_dynamic(rep.quad);
  rep.dynamic = rep.dyn_why.ok();
  rep.degrees = degree_rows(finite_graph(rep.quad), k, *chains, err);
  return rep;
}

std::optional<Embedding> rooted_embed(const HalfEdgeGraph& pattern,
                                      VertexId pattern_root,
                                      const HalfEdgeGraph& host,
                                      VertexId host_root, Report* why) {
  RootedMatch m = match_rooted(pattern, pattern_root, host, host_root, false);
  if (!m.found) {
    if (why) why->add("no-embedding", m.conflict);
    return std::nullopt;
  }
  // the traversal yields a label morphism; an embedding must not wrap
  std::vector<VertexId> hit;
  for (VertexId v : m.map)
    if (v != kNone) hit.push_back(v);
  std::sort(hit.begin(), hit.end());
  if (std::adjacent_find(hit.begin(), hit.end()) != hit.end()) {
    if (why)
      why->add("no-embedding",
               "pattern wraps: host vertex " +
                   std::to_string(*std::adjacent_find(hit.begin(), hit.end())) +
                   " is covered twice");
    return std::nullopt;
  }
  return Embedding{std::move(m.map)};
}

ConvergenceReport check_comb_convergence(const Quadruple& limit,
                                         const std::vector<const Quadruple*>& seq,
                                         int radius,
                                         const std::vector<Word>& connect,
                                         Report* err) {
  ConvergenceReport rep;
  if (seq.empty()) {
    if (err) err->add("empty-sequence", "nothing to compare");
    rep.detail = "empty sequence";
    return rep;
  }
  if (!connect.empty() && connect.size() != seq.size()) {
    if (err) err->add("bad-connectors", "one connecting word per entry");
    rep.detail = "connector count mismatch";
    return rep;
  }
  for (const Quadruple* q : seq)
    if (q->rose.size() != limit.rose.size() ||
        q->marked.size() != limit.marked.size()) {
      if (err) err->add("sequence-mismatch", "rose or marked set differs");
      rep.detail = "rose or marked set differs";
      return rep;
    }
  if (radius <= 0) {
    rep.pass = true;
    rep.detail = "radius 0: nothing to compare";
    return rep;
  }

  const BallCompare bc = group_ball_compare(seq, limit, radius);
  if (!bc.threshold) {
    rep.witness = bc.witness;
    rep.detail = "membership of " + word_str(bc.witness) +
                 " never stabilizes (entry " + std::to_string(bc.witness_at) +
                 " still disagrees)";
    return rep;
  }
  std::size_t stable = *bc.threshold;

  // every loop of every truncation of the limit must eventually lift closed
  // with the limit's class
  std::vector<Word> words;
  std::set<std::string> seen;
  const auto add_basis = [&](const Quadruple& q, VertexId at) {
    Report berr;
    const auto basis = subgroup_basis(q, at, &berr);
    if (!basis) {
      if (err) err->merge(berr);
      return false;
    }
    for (const Word& w : *basis)
      if (seen.insert(word_str(w)).second) words.push_back(w);
    return true;
  };
  if (has_generator(limit)) {
    const GraphGenerator& gen = generator(limit);
    if (limit.basepoint == kNone ||
        limit.basepoint >= gen.core_vertices.size()) {
      if (err) err->add("bad-basepoint", "limit basepoint must be core");
      rep.detail = "limit basepoint must be core";
      return rep;
    }
    for (int k = 0; k <= radius; ++k) {
      Quadruple trunc;
      trunc.marked = limit.marked;
      trunc.rose = limit.rose;
      trunc.graph = ball(gen, k, limit.basepoint).graph;
      trunc.basepoint = 0;
      if (!add_basis(trunc, 0)) {
        rep.detail = "truncation basis unavailable";
        return rep;
      }
    }
  } else if (!add_basis(limit, limit.basepoint)) {
    rep.detail = "limit basis unavailable";
    return rep;
  }

  for (const Word& w : words) {
    Report cerr;
    const auto want0 = lift_class(limit, limit.basepoint, w, &cerr);
    if (!want0) {
      if (err) err->merge(cerr);
      rep.detail = "limit class unavailable for " + word_str(w);
      return rep;
    }
    std::size_t i0 = seq.size();
    for (std::size_t i = seq.size(); i-- > 0;) {
      const Quadruple& qi = *seq[i];
      bool matched = false;
      const auto lw = lift_word(qi, qi.basepoint, w);
      if (lw && lw->closed) {
        const auto ci = lift_class(qi, qi.basepoint, w);
        if (ci) {
          Word want = *want0;
          if (!connect.empty()) {
            Word t = connect[i];
            t.insert(t.end(), want.begin(), want.end());
            const Word pinv = inverse(connect[i]);
            t.insert(t.end(), pinv.begin(), pinv.end());
            want = reduce(std::move(t));
          }
          matched = *ci == want;
        }
      }
      if (!matched) break;
      i0 = i;
    }
    if (i0 == seq.size()) {
      rep.witness = w;
      rep.detail = "homotopy class of " + word_str(w) + " never stabilizes";
      return rep;
    }
    stable = std::max(stable, i0);
  }

  rep.pass = true;
  rep.threshold = stable;
  rep.detail = "stable from entry " + std::to_string(stable) + " on";
  return rep;
}

std::optional<std::vector<DegreeRow>> degree_report(const Quadruple& limit,
                                                    const Quadruple& qn,
                                                    Report* err) {
  if (has_generator(qn)) {
    if (err) err->add("not-finite", "the approximant must be a finite graph");
    return std::nullopt;
  }
  const HalfEdgeGraph& g = finite_graph(qn);

  if (!has_generator(limit)) {
    // a finite limit is its own best approximation: qn must match it
    const HalfEdgeGraph& lg = finite_graph(limit);
    if (qn.basepoint >= g.vertices.size() ||
        limit.basepoint >= lg.vertices.size()) {
      if (err) err->add("bad-basepoint", "both basepoints must be set");
      return std::nullopt;
    }
    const RootedMatch m =
        match_rooted(g, qn.basepoint, lg, limit.basepoint, true);
    if (!m.found) {
      if (err) err->add("provenance-mismatch", m.conflict);
      return std::nullopt;
    }
    Report ferr;
    const FaceSet fs = trace_faces(g, &ferr);
    const FaceSet lfs = trace_faces(lg, &ferr);
    if (!ferr.ok()) {
      if (err) err->merge(ferr);
      return std::nullopt;
    }
    const std::vector<int> labels = label_faces(g, fs);
    std::vector<DegreeRow> rows;
    for (FaceId f = 0; f < fs.faces.size(); ++f) {
      if (labels[f] == 0) continue;
      DegreeRow row;
      row.face = f;
      row.petal = labels[f];
      row.verts = distinct_origins(g, fs.faces[f].walk);
      const HalfId h0 = fs.faces[f].walk.front();
      const VertexId at = m.map[g.origin(h0)];
      for (HalfId hh : lg.vertices[at].rot)
        if (is_forward(hh) == is_forward(h0) &&
            lg.edges[edge_of(hh)].petal == labels[f]) {
          row.host_verts =
              distinct_origins(lg, lfs.faces[lfs.face_of[hh]].walk);
          break;
        }
      row.kind = 1;
      rows.push_back(row);
    }
    return rows;
  }

  const GraphGenerator& gen = generator(limit);
  if (limit.basepoint == kNone ||
      limit.basepoint >= gen.core_vertices.size()) {
    if (err) err->add("bad-basepoint", "limit basepoint must be core");
    return std::nullopt;
  }
  for (std::uint32_t guess = 0;; ++guess) {
    const Ball k = ball(gen, int(guess), limit.basepoint);
    if (k.graph.vertices.size() > g.vertices.size() ||
        guess > g.vertices.size() + 2) {
      if (err)
        err->add("provenance-mismatch",
                 "no ball radius reproduces the given approximant");
      return std::nullopt;
    }
    const auto chains = partial_faces(gen, k, err);
    if (!chains) return std::nullopt;
    const HalfEdgeGraph built = close(k, *chains, &limit.marked, err);
    if (same_structure(built, g)) return degree_rows(g, k, *chains, err);
  }
}

}  // namespace quadrose
