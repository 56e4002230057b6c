#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quadrose/approx.hpp"
#include "quadrose/cli.hpp"
#include "quadrose/lift.hpp"
#include "quadrose/numlift.hpp"

namespace quadrose {

namespace {

using Cpx = std::complex<double>;

void emit(std::ostream& os, const Report& r) {
  for (const Violation& v : r.violations)
    os << "violation: " << v.code << " " << v.detail << "\n";
}

std::optional<Quadruple> load(const std::string& path, std::ostream& diag) {
  Report err;
  auto q = parse_quad(path, &err);
  if (!q) emit(diag, err);
  return q;
}

std::optional<Cpx> parse_complex(const std::string& text) {
  const std::size_t comma = text.find(',');
  auto to_d = [](const std::string& s, double* v) {
    char* end = nullptr;
    *v = std::strtod(s.c_str(), &end);
    return !s.empty() && end == s.c_str() + s.size();
  };
  double re = 0, im = 0;
  if (comma == std::string::npos) {
    if (!to_d(text, &re)) return std::nullopt;
    return Cpx(re, 0);
  }
  if (!to_d(text.substr(0, comma), &re) || !to_d(text.substr(comma + 1), &im))
    return std::nullopt;
  return Cpx(re, im);
}

// exp.quad -> exp<suffix>.quad
std::string derived_path(const std::string& path, const std::string& suffix) {
  const std::string ext = ".quad";
  if (path.size() > ext.size() &&
      path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + suffix;
  return path + suffix;
}

std::size_t walk_vcount(const HalfEdgeGraph& g, const std::vector<HalfId>& walk) {
  std::set<VertexId> seen;
  for (HalfId h : walk) seen.insert(g.origin(h));
  return seen.size();
}

int do_validate(const std::string& path, std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  const Report ra = validate_admissible(*q);
  const Report rd = validate_dynamic(*q);
  out << "file: " << path << "\n";
  out << "admissible: " << (ra.ok() ? "pass" : "fail") << "\n";
  emit(out, ra);
  out << "dynamic: " << (rd.ok() ? "pass" : "fail") << "\n";
  emit(out, rd);
  return ra.ok() && rd.ok() ? 0 : 1;
}

int do_faces(const std::string& path, std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  if (has_generator(*q)) {
    Report err;
    const FaceCensus census = face_census(generator(*q), &err);
    if (!err.ok()) {
      emit(diag, err);
      return 1;
    }
    out << "faces: " << census.faces.size() << "\n";
    for (std::size_t i = 0; i < census.faces.size(); ++i) {
      const FaceClass& f = census.faces[i];
      out << "face: " << i << " label=" << f.label
          << " bounded=" << (f.unbounded ? 0 : 1) << " verts=" << f.vcount
          << "\n";
    }
    return 0;
  }
  const HalfEdgeGraph& g = finite_graph(*q);
  const FaceSet fs = trace_faces(g);
  const std::vector<int> labels = label_faces(g, fs);
  out << "faces: " << fs.faces.size() << "\n";
  for (std::size_t i = 0; i < fs.faces.size(); ++i) {
    out << "face: " << i << " label=" << labels[i]
        << " bounded=" << (fs.faces[i].bounded ? 1 : 0)
        << " verts=" << walk_vcount(g, fs.faces[i].walk) << "\n";
  }
  return 0;
}

int do_portrait(const std::string& path, std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  Report err;
  auto p = portrait(*q, &err);
  if (!p) {
    emit(diag, err);
    return 1;
  }
  out << "nodes: " << p->nodes.size() << "\n";
  for (std::size_t i = 0; i < p->nodes.size(); ++i) {
    out << "node: " << i << " name=" << q->marked.points[i].name
        << " target=" << p->nodes[i].target << " weight=" << p->nodes[i].weight
        << " singular=" << (p->nodes[i].singular ? 1 : 0) << "\n";
  }
  return 0;
}

int do_degree(const std::vector<std::string>& files, std::ostream& out,
              std::ostream& diag) {
  auto q = load(files[0], diag);
  if (!q) return 1;
  if (files.size() == 1) {
    auto d = degree(*q);
    if (d)
      out << "degree: " << *d << "\n";
    else
      out << "degree: transcendental\n";
    return 0;
  }
  auto qn = load(files[1], diag);
  if (!qn) return 1;
  Report err;
  auto rows = degree_report(*q, *qn, &err);
  if (!rows) {
    emit(diag, err);
    return 1;
  }
  out << "rows: " << rows->size() << "\n";
  for (const DegreeRow& r : *rows) {
    out << "row: face=" << r.face << " petal=" << r.petal
        << " verts=" << r.verts << " host=";
    if (r.host_verts)
      out << *r.host_verts;
    else
      out << "tract";
    out << " kind=" << r.kind << "\n";
  }
  return 0;
}

int do_approx(const std::string& path, int n, std::string out_path,
              std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  Report err;
  auto rep = approximate(*q, n, &err);
  if (!rep) {
    emit(diag, err);
    return 1;
  }
  if (out_path.empty())
    out_path = derived_path(path, ".n" + std::to_string(n) + ".quad");
  Report werr;
  if (!write_quad(rep->quad, out_path, &werr)) {
    emit(diag, werr);
    return 1;
  }
  out << "n: " << rep->n << "\n";
  out << "degree: " << degree(rep->quad).value_or(0) << "\n";
  out << "dynamic: " << (rep->dynamic ? 1 : 0) << "\n";
  out << "out: " << out_path << "\n";
  for (const DegreeRow& r : rep->degrees) {
    out << "row: face=" << r.face << " petal=" << r.petal
        << " verts=" << r.verts << " host=";
    if (r.host_verts)
      out << *r.host_verts;
    else
      out << "tract";
    out << " kind=" << r.kind << "\n";
  }
  return 0;
}

int do_embed(const std::string& pat_path, const std::string& host_path,
             std::ostream& out, std::ostream& diag) {
  auto pat = load(pat_path, diag);
  auto host = pat ? load(host_path, diag) : std::nullopt;
  if (!pat || !host) return 1;
  if (has_generator(*pat) || has_generator(*host)) {
    diag << "violation: embed-input generator-backed graphs cannot be "
            "embedded directly; approximate first\n";
    return 1;
  }
  Report why;
  auto emb = rooted_embed(finite_graph(*pat), pat->basepoint,
                          finite_graph(*host), host->basepoint, &why);
  if (!emb) {
    out << "embedded: 0\n";
    emit(out, why);
    return 1;
  }
  out << "embedded: 1\n";
  for (std::size_t i = 0; i < emb->vmap.size(); ++i)
    out << "vmap: " << i << " -> " << emb->vmap[i] << "\n";
  return 0;
}

int do_converge(const std::vector<std::string>& files, int radius,
                std::ostream& out, std::ostream& diag) {
  auto limit = load(files[0], diag);
  if (!limit) return 1;
  std::vector<Quadruple> seq;
  for (std::size_t i = 1; i < files.size(); ++i) {
    auto q = load(files[i], diag);
    if (!q) return 1;
    seq.push_back(std::move(*q));
  }
  std::vector<const Quadruple*> ptrs;
  for (const Quadruple& q : seq) ptrs.push_back(&q);
  Report err;
  const ConvergenceReport rep =
      check_comb_convergence(*limit, ptrs, radius, {}, &err);
  emit(diag, err);
  out << "pass: " << (rep.pass ? 1 : 0) << "\n";
  out << "threshold: " << rep.threshold << "\n";
  if (!rep.pass) out << "witness: " << word_str(rep.witness) << "\n";
  if (!rep.detail.empty()) out << "detail: " << rep.detail << "\n";
  return rep.pass ? 0 : 1;
}

int do_member(const std::string& path, const std::string& word_text, long root,
              std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  Report werr;
  auto w = parse_word(word_text, &werr);
  if (!w) {
    emit(diag, werr);
    return 2;
  }
  const VertexId v = root < 0 ? q->basepoint : static_cast<VertexId>(root);
  Report err;
  const bool in = member(*q, v, *w, &err);
  if (!err.ok()) {
    emit(diag, err);
    return 1;
  }
  out << "word: " << word_str(*w) << "\n";
  out << "member: " << (in ? 1 : 0) << "\n";
  return in ? 0 : 1;
}

int do_lift(const std::string& path, const std::string& word_text, long root,
            std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  Report werr;
  auto w = parse_word(word_text, &werr);
  if (!w) {
    emit(diag, werr);
    return 2;
  }
  const VertexId v = root < 0 ? q->basepoint : static_cast<VertexId>(root);
  Report err;
  auto res = lift_word(*q, v, *w, &err);
  if (!res) {
    emit(diag, err);
    return 1;
  }
  out << "word: " << word_str(*w) << "\n";
  out << "terminal: " << res->terminal << "\n";
  out << "closed: " << (res->closed ? 1 : 0) << "\n";
  out << "vertices:";
  for (VertexId u : res->vertices) out << " " << u;
  out << "\n";
  return 0;
}

int do_class(const std::string& path, const std::string& word_text, long root,
             std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  Report werr;
  auto w = parse_word(word_text, &werr);
  if (!w) {
    emit(diag, werr);
    return 2;
  }
  const VertexId v = root < 0 ? q->basepoint : static_cast<VertexId>(root);
  Report err;
  auto cls = lift_class(*q, v, *w, &err);
  if (!cls) {
    emit(diag, err);
    return 1;
  }
  out << "word: " << word_str(*w) << "\n";
  out << "class: " << word_str(*cls, 'y') << "\n";
  return 0;
}

int do_isotopic(const std::string& path_a, const std::string& path_b,
                const std::string& word_text, std::ostream& out,
                std::ostream& diag) {
  auto qa = load(path_a, diag);
  auto qb = qa ? load(path_b, diag) : std::nullopt;
  if (!qa || !qb) return 1;
  Word p;
  if (!word_text.empty()) {
    Report werr;
    auto w = parse_word(word_text, &werr);
    if (!w) {
      emit(diag, werr);
      return 2;
    }
    p = *w;
  }
  Report why;
  auto verdict = isotopic(*qa, *qb, qa->basepoint, qb->basepoint, p, &why);
  if (!verdict) {
    emit(diag, why);
    return 1;
  }
  out << "isotopic: " << (*verdict ? 1 : 0) << "\n";
  emit(out, why);
  return *verdict ? 0 : 1;
}

int do_numlift(const std::string& map_text, const std::string& root_text,
               double radius, int max_k, std::ostream& out,
               std::ostream& diag) {
  Report merr;
  auto f = parse_map(map_text, &merr);
  if (!f) {
    emit(diag, merr);
    return 2;
  }
  auto z0 = parse_complex(root_text);
  if (!z0) {
    diag << "violation: cli-root bad complex number '" << root_text << "'\n";
    return 2;
  }
  const Cpx w0 = evaluate(*f, *z0);
  if (std::abs(std::abs(w0) - radius) > 1e-3 * std::max(1.0, radius)) {
    diag << "violation: numlift-loop f(z0) does not lie on the circle of "
            "radius "
         << radius << "\n";
    return 1;
  }
  const NumericPath loop = circle_loop(0.0, radius, 64, std::arg(w0));
  Report err;
  auto lift = lift_path_numeric(*f, loop, *z0, {}, &err);
  if (!lift) {
    emit(diag, err);
    return 1;
  }
  out << std::setprecision(12) << "endpoint: " << lift->z.back().real() << " "
      << lift->z.back().imag() << "\n";
  out << "closed: " << (lift->closed ? 1 : 0) << "\n";
  auto cd = closure_degree(*f, loop, *z0, max_k, {}, &err);
  if (!cd) {
    emit(diag, err);
    return 1;
  }
  if (cd->exceeded)
    out << "closure: exceeded " << max_k << "\n";
  else
    out << "closure: " << cd->degree << "\n";
  return 0;
}

int do_reconstruct(const std::string& map_text, const std::string& path,
                   std::string out_path, std::ostream& out,
                   std::ostream& diag) {
  Report merr;
  auto f = parse_map(map_text, &merr);
  if (!f) {
    emit(diag, merr);
    return 2;
  }
  auto q = load(path, diag);
  if (!q) return 1;

  auto coeffs = poly_coeffs(*f);
  if (!coeffs) {
    diag << "violation: build-not-polynomial map does not expand to a "
            "polynomial\n";
    return 1;
  }
  (*coeffs)[0] -= Cpx(q->rose.center.x, q->rose.center.y);
  Report rerr;
  auto roots = poly_roots(*coeffs, &rerr);
  if (!roots) {
    emit(diag, rerr);
    return 1;
  }
  BBox window;
  window.add(q->rose.center);
  for (const MarkedPoint& m : q->marked.points) window.add(m.pos);
  for (Cpx r : *roots) window.add({r.real(), r.imag()});
  const double pad = 1.0 + 0.1 * std::max(window.width(), window.height());
  window.add({window.lo.x - pad, window.lo.y - pad});
  window.add({window.hi.x + pad, window.hi.y + pad});

  Report err;
  auto built = build_quadruple_numeric(*f, q->marked, q->rose, window, {}, &err);
  if (!built) {
    emit(diag, err);
    return 1;
  }
  if (out_path.empty()) out_path = derived_path(path, ".rec.quad");
  Report werr;
  if (!write_quad(*built, out_path, &werr)) {
    emit(diag, werr);
    return 1;
  }
  out << "vertices: " << finite_graph(*built).vertices.size() << "\n";
  out << "edges: " << finite_graph(*built).edges.size() << "\n";
  out << "out: " << out_path << "\n";
  return 0;
}

int do_verify_num(const std::vector<std::string>& maps,
                  const std::string& root_text, int radius, double tol,
                  std::ostream& out, std::ostream& diag) {
  Report merr;
  auto target = parse_map(maps[0], &merr);
  if (!target) {
    emit(diag, merr);
    return 2;
  }
  std::vector<NumericMap> seq;
  for (std::size_t i = 1; i < maps.size(); ++i) {
    auto m = parse_map(maps[i], &merr);
    if (!m) {
      emit(diag, merr);
      return 2;
    }
    seq.push_back(std::move(*m));
  }
  auto z0 = parse_complex(root_text);
  if (!z0) {
    diag << "violation: cli-root bad complex number '" << root_text << "'\n";
    return 2;
  }
  const Cpx w0 = evaluate(*target, *z0);
  const std::vector<NumericPath> petals = {circle_loop(w0 - 1.0, 1.0, 64, 0.0)};
  Report err;
  auto rep =
      verify_numeric_convergence(seq, *target, petals, *z0, w0, radius, tol,
                                 {}, &err);
  if (!rep) {
    emit(diag, err);
    return 1;
  }
  out << std::setprecision(12);
  for (std::size_t k = 0; k < rep->deriv_gap.size(); ++k)
    out << "entry: " << k << " deriv_gap=" << rep->deriv_gap[k]
        << " sup_gap=" << rep->sup_gap[k] << "\n";
  out << "pass: " << (rep->pass ? 1 : 0) << "\n";
  out << "threshold: " << rep->threshold << "\n";
  if (!rep->witness.empty()) out << "witness: " << rep->witness << "\n";
  if (!rep->detail.empty()) out << "detail: " << rep->detail << "\n";
  return rep->pass ? 0 : 1;
}

int do_teich(double r, double R, std::ostream& out, std::ostream& diag) {
  auto b = teich_bound(r, R);
  if (!b) {
    diag << "violation: teich-domain wants 0 < r < R\n";
    return 1;
  }
  out << std::setprecision(12) << "bound: " << *b << "\n";
  return 0;
}

int do_render(const std::string& path, std::string out_path, int ball_radius,
              std::ostream& out, std::ostream& diag) {
  auto q = load(path, diag);
  if (!q) return 1;
  if (out_path.empty()) out_path = derived_path(path, ".svg");
  const std::size_t dot = out_path.rfind('.');
  const std::string format =
      dot == std::string::npos ? "" : out_path.substr(dot + 1);
  Report err;
  auto bytes = render_quad(*q, format, ball_radius, &err);
  if (!bytes) {
    emit(diag, err);
    return format != "svg" && format != "dot" ? 2 : 1;
  }
  std::ofstream file(out_path, std::ios::binary);
  file << *bytes;
  file.flush();
  if (!file) {
    diag << "violation: quad-io cannot write " << out_path << "\n";
    return 1;
  }
  out << "out: " << out_path << "\n";
  out << "bytes: " << bytes->size() << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& diag) {
  CLI::App app{"admissible quadruple toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  std::string file_a, file_b, out_path, word_text, map_text;
  std::string root_text = "0";
  long root_vertex = -1;
  std::vector<std::string> files, maps;
  int approx_n = 0, radius = 4, ball_n = 2, max_k = 50;
  double tol = 1e-3, loop_radius = 1.0, tr = 0, tR = 0;

  auto* validate = app.add_subcommand("validate", "check a .quad file");
  validate->add_option("file", file_a)->required();
  validate->callback([&] { rc = do_validate(file_a, out, diag); });

  auto* faces = app.add_subcommand("faces", "face census of a .quad file");
  faces->add_option("file", file_a)->required();
  faces->callback([&] { rc = do_faces(file_a, out, diag); });

  auto* portrait_cmd =
      app.add_subcommand("portrait", "singular portrait of a .quad file");
  portrait_cmd->add_option("file", file_a)->required();
  portrait_cmd->callback([&] { rc = do_portrait(file_a, out, diag); });

  auto* degree_cmd = app.add_subcommand(
      "degree", "vertex-count degree, or the face table against a limit");
  degree_cmd->add_option("files", files)->expected(1, 2)->required();
  degree_cmd->callback([&] { rc = do_degree(files, out, diag); });

  auto* approx = app.add_subcommand("approx", "radius-n ball approximant");
  approx->add_option("--n", approx_n)->required();
  approx->add_option("file", file_a)->required();
  approx->add_option("--out", out_path);
  approx->callback([&] { rc = do_approx(file_a, approx_n, out_path, out, diag); });

  auto* embed = app.add_subcommand("embed", "rooted embedding pattern -> host");
  embed->add_option("pattern", file_a)->required();
  embed->add_option("host", file_b)->required();
  embed->callback([&] { rc = do_embed(file_a, file_b, out, diag); });

  auto* converge = app.add_subcommand(
      "converge", "combinatorial convergence of a sequence toward a limit");
  converge->add_option("--radius", radius);
  converge->add_option("files", files)->expected(-2)->required();
  converge->callback([&] { rc = do_converge(files, radius, out, diag); });

  auto* member_cmd =
      app.add_subcommand("member", "covering subgroup membership of a word");
  member_cmd->add_option("--word", word_text)->required();
  member_cmd->add_option("--root", root_vertex);
  member_cmd->add_option("file", file_a)->required();
  member_cmd->callback(
      [&] { rc = do_member(file_a, word_text, root_vertex, out, diag); });

  auto* lift_cmd = app.add_subcommand("lift", "lift a word through the labels");
  lift_cmd->add_option("--word", word_text)->required();
  lift_cmd->add_option("--root", root_vertex);
  lift_cmd->add_option("file", file_a)->required();
  lift_cmd->callback(
      [&] { rc = do_lift(file_a, word_text, root_vertex, out, diag); });

  auto* class_cmd =
      app.add_subcommand("class", "homotopy class of a closed lift");
  class_cmd->add_option("--word", word_text)->required();
  class_cmd->add_option("--root", root_vertex);
  class_cmd->add_option("file", file_a)->required();
  class_cmd->callback(
      [&] { rc = do_class(file_a, word_text, root_vertex, out, diag); });

  auto* isotopic_cmd =
      app.add_subcommand("isotopic", "isotopy of two encoded coverings");
  isotopic_cmd->add_option("a", file_a)->required();
  isotopic_cmd->add_option("b", file_b)->required();
  isotopic_cmd->add_option("--word", word_text);
  isotopic_cmd->callback(
      [&] { rc = do_isotopic(file_a, file_b, word_text, out, diag); });

  auto* numlift_cmd =
      app.add_subcommand("numlift", "lift a circle loop under a map");
  numlift_cmd->add_option("map", map_text)->required();
  numlift_cmd->add_option("--root", root_text);
  numlift_cmd->add_option("--radius", loop_radius);
  numlift_cmd->add_option("--n", max_k);
  numlift_cmd->callback(
      [&] { rc = do_numlift(map_text, root_text, loop_radius, max_k, out, diag); });

  auto* reconstruct = app.add_subcommand(
      "reconstruct", "rebuild the preimage quadruple of a polynomial map");
  reconstruct->add_option("map", map_text)->required();
  reconstruct->add_option("file", file_a)->required();
  reconstruct->add_option("--out", out_path);
  reconstruct->callback(
      [&] { rc = do_reconstruct(map_text, file_a, out_path, out, diag); });

  auto* verify = app.add_subcommand(
      "verify-num", "numeric convergence of map descriptors toward a target");
  verify->add_option("maps", maps)->expected(-2)->required();
  verify->add_option("--radius", radius);
  verify->add_option("--tol", tol);
  verify->add_option("--root", root_text);
  verify->callback(
      [&] { rc = do_verify_num(maps, root_text, radius, tol, out, diag); });

  auto* teich = app.add_subcommand(
      "teich-bound", "distance bound from nested disk radii");
  teich->add_option("r", tr)->required();
  teich->add_option("R", tR)->required();
  teich->callback([&] { rc = do_teich(tr, tR, out, diag); });

  auto* render = app.add_subcommand("render", "draw a .quad file (svg or dot)");
  render->add_option("file", file_a)->required();
  render->add_option("--out", out_path);
  render->add_option("--n", ball_n);
  render->callback([&] { rc = do_render(file_a, out_path, ball_n, out, diag); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    diag << "error: " << e.what() << "\n";
    diag << app.help();
    return 2;
  }
  return rc;
}

}  // namespace quadrose
