#include "quadrose/numlift.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

#include "quadrose/lift.hpp"

namespace quadrose {

namespace {

using Cpx = std::complex<double>;
using Kind = NumericMap::Kind;
using NodePtr = std::shared_ptr<const NumericMap::Node>;

Vec2 to_vec(Cpx z) { return {z.real(), z.imag()}; }
Cpx to_cpx(Vec2 v) { return {v.x, v.y}; }

bool finite_c(Cpx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

Cpx pow_int(Cpx base, long k) {
  Cpx r = 1.0;
  while (k > 0) {
    if (k & 1) r *= base;
    base *= base;
    k >>= 1;
  }
  return r;
}

NumericMap make_node(Kind kind, Cpx value, long exponent, NodePtr a, NodePtr b) {
  auto n = std::make_shared<NumericMap::Node>();
  n->kind = kind;
  n->value = value;
  n->exponent = exponent;
  n->a = std::move(a);
  n->b = std::move(b);
  return NumericMap{std::move(n)};
}

NumericMap wrap(NodePtr n) { return NumericMap{std::move(n)}; }

bool const_value(const NumericMap& m, Cpx* out) {
  if (m.root && m.root->kind == Kind::constant) {
    *out = m.root->value;
    return true;
  }
  return false;
}

}  // namespace

NumericMap map_const(Cpx c) { return make_node(Kind::constant, c, 0, nullptr, nullptr); }
NumericMap map_z() { return make_node(Kind::variable, 0.0, 0, nullptr, nullptr); }

NumericMap operator+(const NumericMap& a, const NumericMap& b) {
  Cpx ca, cb;
  bool ka = const_value(a, &ca), kb = const_value(b, &cb);
  if (ka && kb) return map_const(ca + cb);
  if (ka && ca == 0.0) return b;
  if (kb && cb == 0.0) return a;
  return make_node(Kind::add, 0.0, 0, a.root, b.root);
}

NumericMap operator*(const NumericMap& a, const NumericMap& b) {
  Cpx ca, cb;
  bool ka = const_value(a, &ca), kb = const_value(b, &cb);
  if (ka && kb) return map_const(ca * cb);
  if (ka && ca == 0.0) return map_const(0.0);
  if (kb && cb == 0.0) return map_const(0.0);
  if (ka && ca == 1.0) return b;
  if (kb && cb == 1.0) return a;
  return make_node(Kind::mul, 0.0, 0, a.root, b.root);
}

NumericMap operator-(const NumericMap& a, const NumericMap& b) {
  Cpx cb;
  if (const_value(b, &cb)) return a + map_const(-cb);
  return a + map_const(-1.0) * b;
}

NumericMap operator/(const NumericMap& a, const NumericMap& b) {
  Cpx ca, cb;
  bool ka = const_value(a, &ca), kb = const_value(b, &cb);
  if (kb && cb == 1.0) return a;
  if (ka && kb && cb != 0.0) return map_const(ca / cb);
  if (ka && ca == 0.0) return map_const(0.0);
  return make_node(Kind::divide, 0.0, 0, a.root, b.root);
}

NumericMap pow(const NumericMap& a, long k) {
  if (k < 0) return map_const(1.0) / pow(a, -k);
  if (k == 0) return map_const(1.0);
  if (k == 1) return a;
  Cpx ca;
  if (const_value(a, &ca)) return map_const(pow_int(ca, k));
  return make_node(Kind::power, 0.0, k, a.root, nullptr);
}

NumericMap exp(const NumericMap& a) {
  Cpx ca;
  if (const_value(a, &ca)) return map_const(std::exp(ca));
  return make_node(Kind::exponential, 0.0, 0, a.root, nullptr);
}

NumericMap cos(const NumericMap& a) {
  Cpx ca;
  if (const_value(a, &ca)) return map_const(std::cos(ca));
  return make_node(Kind::cosine, 0.0, 0, a.root, nullptr);
}

NumericMap sin(const NumericMap& a) {
  Cpx ca;
  if (const_value(a, &ca)) return map_const(std::sin(ca));
  return make_node(Kind::sine, 0.0, 0, a.root, nullptr);
}

namespace {

Cpx eval_node(const NumericMap::Node* n, Cpx z) {
  switch (n->kind) {
    case Kind::constant: return n->value;
    case Kind::variable: return z;
    case Kind::add: return eval_node(n->a.get(), z) + eval_node(n->b.get(), z);
    case Kind::mul: return eval_node(n->a.get(), z) * eval_node(n->b.get(), z);
    case Kind::divide: return eval_node(n->a.get(), z) / eval_node(n->b.get(), z);
    case Kind::power: return pow_int(eval_node(n->a.get(), z), n->exponent);
    case Kind::exponential: return std::exp(eval_node(n->a.get(), z));
    case Kind::cosine: return std::cos(eval_node(n->a.get(), z));
    case Kind::sine: return std::sin(eval_node(n->a.get(), z));
  }
  return 0.0;
}

}  // namespace

std::complex<double> evaluate(const NumericMap& f, std::complex<double> z) {
  if (!f.valid()) return std::numeric_limits<double>::quiet_NaN();
  return eval_node(f.root.get(), z);
}

NumericMap derivative(const NumericMap& f) {
  if (!f.valid()) return {};
  const NumericMap::Node* n = f.root.get();
  switch (n->kind) {
    case Kind::constant: return map_const(0.0);
    case Kind::variable: return map_const(1.0);
    case Kind::add: return derivative(wrap(n->a)) + derivative(wrap(n->b));
    case Kind::mul:
      return derivative(wrap(n->a)) * wrap(n->b) + wrap(n->a) * derivative(wrap(n->b));
    case Kind::divide:
      return (derivative(wrap(n->a)) * wrap(n->b) - wrap(n->a) * derivative(wrap(n->b))) /
             pow(wrap(n->b), 2);
    case Kind::power:
      return map_const(static_cast<double>(n->exponent)) *
             pow(wrap(n->a), n->exponent - 1) * derivative(wrap(n->a));
    case Kind::exponential: return exp(wrap(n->a)) * derivative(wrap(n->a));
    case Kind::cosine:
      return map_const(-1.0) * sin(wrap(n->a)) * derivative(wrap(n->a));
    case Kind::sine: return cos(wrap(n->a)) * derivative(wrap(n->a));
  }
  return {};
}

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void str_node(const NumericMap::Node* n, std::string& out) {
  switch (n->kind) {
    case Kind::constant:
      if (n->value.imag() == 0.0) {
        out += fmt_g(n->value.real());
      } else {
        out += "complex(";
        out += fmt_g(n->value.real());
        out += ", ";
        out += fmt_g(n->value.imag());
        out += ")";
      }
      return;
    case Kind::variable: out += "z"; return;
    case Kind::add:
    case Kind::mul:
    case Kind::divide:
      out += n->kind == Kind::add ? "add(" : n->kind == Kind::mul ? "mul(" : "div(";
      str_node(n->a.get(), out);
      out += ", ";
      str_node(n->b.get(), out);
      out += ")";
      return;
    case Kind::power:
      out += "pow(";
      str_node(n->a.get(), out);
      out += ", ";
      out += std::to_string(n->exponent);
      out += ")";
      return;
    case Kind::exponential:
    case Kind::cosine:
    case Kind::sine:
      out += n->kind == Kind::exponential ? "exp(" : n->kind == Kind::cosine ? "cos(" : "sin(";
      str_node(n->a.get(), out);
      out += ")";
      return;
  }
}

}  // namespace

std::string map_str(const NumericMap& f) {
  if (!f.valid()) return "";
  std::string out;
  str_node(f.root.get(), out);
  return out;
}

namespace {

// recursive-descent parser over the prefix descriptor syntax
struct MapParser {
  std::string text;
  std::size_t pos = 0;
  Report* err;
  bool bad = false;

  explicit MapParser(std::string_view s, Report* e) : text(s), err(e) {}

  void fail(const std::string& what) {
    if (!bad && err)
      err->add("map-parse", what + " at offset " + std::to_string(pos));
    bad = true;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    fail(std::string("expected '") + c + "'");
    return false;
  }

  bool peek_number() {
    skip_ws();
    if (pos >= text.size()) return false;
    char c = text[pos];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  std::optional<double> number() {
    skip_ws();
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start || !std::isfinite(v)) {
      fail("expected a number");
      return std::nullopt;
    }
    pos += static_cast<std::size_t>(end - start);
    return v;
  }

  std::string ident() {
    skip_ws();
    std::size_t s = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(s, pos - s);
  }

  NumericMap args1(Kind kind) {
    if (!eat('(')) return {};
    NumericMap a = expr();
    if (bad || !eat(')')) return {};
    return make_node(kind, 0.0, 0, a.root, nullptr);
  }

  // add and mul fold left over two or more arguments
  NumericMap args_fold(Kind kind) {
    if (!eat('(')) return {};
    NumericMap acc = expr();
    if (bad) return {};
    std::size_t count = 1;
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        NumericMap nxt = expr();
        if (bad) return {};
        acc = make_node(kind, 0.0, 0, acc.root, nxt.root);
        ++count;
        continue;
      }
      break;
    }
    if (count < 2) {
      fail("needs at least two arguments");
      return {};
    }
    if (!eat(')')) return {};
    return acc;
  }

  NumericMap args2(Kind kind) {
    if (!eat('(')) return {};
    NumericMap a = expr();
    if (bad || !eat(',')) return {};
    NumericMap b = expr();
    if (bad || !eat(')')) return {};
    return make_node(kind, 0.0, 0, a.root, b.root);
  }

  NumericMap expr() {
    if (bad) return {};
    if (peek_number()) {
      auto v = number();
      if (!v) return {};
      return map_const(*v);
    }
    skip_ws();
    std::string name = ident();
    if (name.empty()) {
      fail("expected a map expression");
      return {};
    }
    if (name == "z") return map_z();
    if (name == "i") return map_const(Cpx(0.0, 1.0));
    if (name == "add") return args_fold(Kind::add);
    if (name == "mul" || name == "scale") return args_fold(Kind::mul);
    if (name == "div") return args2(Kind::divide);
    if (name == "sub") {
      if (!eat('(')) return {};
      NumericMap a = expr();
      if (bad || !eat(',')) return {};
      NumericMap b = expr();
      if (bad || !eat(')')) return {};
      return make_node(Kind::add, 0.0, 0, a.root,
                       make_node(Kind::mul, 0.0, 0, map_const(-1.0).root, b.root).root);
    }
    if (name == "pow") {
      if (!eat('(')) return {};
      NumericMap a = expr();
      if (bad || !eat(',')) return {};
      auto v = number();
      if (!v) return {};
      if (*v < 0 || *v > 4096 || std::floor(*v) != *v) {
        fail("pow wants an integer exponent in [0, 4096]");
        return {};
      }
      if (!eat(')')) return {};
      return make_node(Kind::power, 0.0, static_cast<long>(*v), a.root, nullptr);
    }
    if (name == "exp") return args1(Kind::exponential);
    if (name == "cos") return args1(Kind::cosine);
    if (name == "sin") return args1(Kind::sine);
    if (name == "complex") {
      if (!eat('(')) return {};
      auto re = number();
      if (!re || !eat(',')) return {};
      auto im = number();
      if (!im || !eat(')')) return {};
      return map_const(Cpx(*re, *im));
    }
    pos -= name.size();
    fail("unknown function '" + name + "'");
    return {};
  }
};

}  // namespace

std::optional<NumericMap> parse_map(std::string_view text, Report* err) {
  MapParser p(text, err);
  NumericMap m = p.expr();
  if (p.bad) return std::nullopt;
  p.skip_ws();
  if (p.pos != p.text.size()) {
    p.fail("trailing input");
    return std::nullopt;
  }
  return m;
}

namespace {

using CoefVec = std::vector<Cpx>;

std::optional<CoefVec> conv_guard(const CoefVec& a, const CoefVec& b, std::size_t maxd) {
  if (a.size() + b.size() - 2 > maxd) return std::nullopt;
  CoefVec out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::optional<CoefVec> coeffs_node(const NumericMap::Node* n, std::size_t maxd) {
  switch (n->kind) {
    case Kind::constant: return CoefVec{n->value};
    case Kind::variable: return CoefVec{0.0, 1.0};
    case Kind::add: {
      auto a = coeffs_node(n->a.get(), maxd);
      auto b = coeffs_node(n->b.get(), maxd);
      if (!a || !b) return std::nullopt;
      if (a->size() < b->size()) a->resize(b->size(), 0.0);
      for (std::size_t i = 0; i < b->size(); ++i) (*a)[i] += (*b)[i];
      return a;
    }
    case Kind::mul: {
      auto a = coeffs_node(n->a.get(), maxd);
      auto b = coeffs_node(n->b.get(), maxd);
      if (!a || !b) return std::nullopt;
      return conv_guard(*a, *b, maxd);
    }
    case Kind::divide: {
      auto a = coeffs_node(n->a.get(), maxd);
      auto b = coeffs_node(n->b.get(), maxd);
      if (!a || !b) return std::nullopt;
      while (b->size() > 1 && b->back() == 0.0) b->pop_back();
      if (b->size() != 1 || (*b)[0] == 0.0) return std::nullopt;
      for (Cpx& c : *a) c /= (*b)[0];
      return a;
    }
    case Kind::power: {
      auto a = coeffs_node(n->a.get(), maxd);
      if (!a) return std::nullopt;
      if (a->size() > 1 &&
          static_cast<std::size_t>(n->exponent) * (a->size() - 1) > maxd)
        return std::nullopt;
      CoefVec acc{1.0};
      for (long k = 0; k < n->exponent; ++k) {
        auto nxt = conv_guard(acc, *a, maxd);
        if (!nxt) return std::nullopt;
        acc = std::move(*nxt);
      }
      return acc;
    }
    case Kind::exponential:
    case Kind::cosine:
    case Kind::sine: return std::nullopt;
  }
  return std::nullopt;
}

Cpx horner(const CoefVec& c, Cpx z) {
  Cpx r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * z + c[i];
  return r;
}

}  // namespace

std::optional<std::vector<std::complex<double>>> poly_coeffs(const NumericMap& f,
                                                             std::size_t max_degree) {
  if (!f.valid()) return std::nullopt;
  return coeffs_node(f.root.get(), max_degree);
}

std::optional<std::vector<std::complex<double>>> poly_roots(
    const std::vector<std::complex<double>>& coeffs_in, Report* err) {
  CoefVec c = coeffs_in;
  double cmax = 0.0;
  for (Cpx x : c) cmax = std::max(cmax, std::abs(x));
  if (c.empty() || cmax == 0.0) {
    if (err) err->add("poly-roots", "the zero polynomial has no root set");
    return std::nullopt;
  }
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  const std::size_t d = c.size() - 1;
  if (d == 0) return std::vector<Cpx>{};
  Cpx lead = c.back();
  for (Cpx& x : c) x /= lead;
  double bound = 0.0;
  for (std::size_t k = 0; k < d; ++k) bound = std::max(bound, std::abs(c[k]));
  bound += 1.0;

  // Durand-Kerner from a fixed asymmetric ring of seeds; multiple roots
  // settle into clusters at their attainable accuracy, so the iteration
  // count is capped instead of demanding convergence.
  std::vector<Cpx> w(d);
  for (std::size_t i = 0; i < d; ++i)
    w[i] = std::polar(0.5 * bound + 0.1,
                      0.4 + 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(d));
  for (int iter = 0; iter < 600; ++iter) {
    double maxdel = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      Cpx den = 1.0;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) den *= (w[i] - w[j]);
      if (std::abs(den) < 1e-290) den = 1e-290;
      Cpx delta = horner(c, w[i]) / den;
      w[i] -= delta;
      if (!finite_c(w[i])) {
        if (err) err->add("poly-roots", "iteration diverged");
        return std::nullopt;
      }
      maxdel = std::max(maxdel, std::abs(delta));
    }
    if (maxdel < 1e-13 * std::max(1.0, bound)) break;
  }
  return w;
}

namespace {

double default_close_tol(double diam, Cpx base) {
  return std::max(1e-6 * diam, 1e-12 * std::max(1.0, std::abs(base)));
}

}  // namespace

NumericPath circle_loop(std::complex<double> center, double radius, int segments,
                        double base_angle) {
  segments = std::max(segments, 8);
  NumericPath p;
  p.t.reserve(segments + 1);
  p.z.reserve(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    p.t.push_back(static_cast<double>(k) / segments);
    p.z.push_back(center + std::polar(radius, base_angle + 2.0 * M_PI * k / segments));
  }
  p.z.back() = p.z.front();
  p.tol_close = default_close_tol(path_diameter(p), p.z.front());
  p.closed = true;
  return p;
}

NumericPath path_from_polyline(const Polyline& poly) {
  NumericPath p;
  for (Vec2 v : poly) {
    Cpx z = to_cpx(v);
    if (!p.z.empty() && std::abs(z - p.z.back()) < 1e-15) continue;
    p.z.push_back(z);
  }
  if (p.z.size() == 1) p.z.push_back(p.z.front());
  double total = 0.0;
  std::vector<double> acc{0.0};
  for (std::size_t i = 1; i < p.z.size(); ++i) {
    total += std::abs(p.z[i] - p.z[i - 1]);
    acc.push_back(total);
  }
  p.t.resize(p.z.size());
  for (std::size_t i = 0; i < acc.size(); ++i)
    p.t[i] = total > 0 ? acc[i] / total : static_cast<double>(i) / (acc.size() - 1);
  p.t.back() = 1.0;
  p.tol_close = default_close_tol(path_diameter(p), p.z.front());
  p.closed = std::abs(p.z.back() - p.z.front()) < p.tol_close;
  return p;
}

std::complex<double> path_point(const NumericPath& p, double s) {
  if (p.z.empty()) return 0.0;
  if (s <= p.t.front()) return p.z.front();
  if (s >= p.t.back()) return p.z.back();
  auto it = std::upper_bound(p.t.begin(), p.t.end(), s);
  std::size_t hi = static_cast<std::size_t>(it - p.t.begin());
  std::size_t lo = hi - 1;
  double dt = p.t[hi] - p.t[lo];
  if (dt <= 0) return p.z[hi];
  double u = (s - p.t[lo]) / dt;
  return p.z[lo] + u * (p.z[hi] - p.z[lo]);
}

double path_diameter(const NumericPath& p) {
  if (p.z.empty()) return 0.0;
  double xlo = p.z[0].real(), xhi = xlo, ylo = p.z[0].imag(), yhi = ylo;
  for (Cpx z : p.z) {
    xlo = std::min(xlo, z.real());
    xhi = std::max(xhi, z.real());
    ylo = std::min(ylo, z.imag());
    yhi = std::max(yhi, z.imag());
  }
  return std::hypot(xhi - xlo, yhi - ylo);
}

NumericPath reversed_path(const NumericPath& p) {
  NumericPath r = p;
  std::reverse(r.z.begin(), r.z.end());
  for (std::size_t i = 0; i < p.t.size(); ++i) r.t[i] = 1.0 - p.t[p.t.size() - 1 - i];
  return r;
}

namespace {

// damped Newton on f(z) = w; nullopt when it stalls or f' collapses
struct Corrector {
  const NumericMap& f;
  const NumericMap& fp;
  const ContinuationOptions& opt;

  std::optional<Cpx> solve(Cpx guess, Cpx w, bool* small_deriv) const {
    const double wscale = std::max(1.0, std::abs(w));
    Cpx zc = guess;
    Cpx r = evaluate(f, zc) - w;
    if (!finite_c(r)) return std::nullopt;
    double res = std::abs(r);
    for (int it = 0; it < 30 && res > opt.newton_tol * wscale; ++it) {
      Cpx d = evaluate(fp, zc);
      if (!finite_c(d) || std::abs(d) < opt.min_deriv) {
        *small_deriv = true;
        return std::nullopt;
      }
      Cpx step = r / d;
      bool improved = false;
      double lam = 1.0;
      for (int half = 0; half < 10; ++half, lam /= 2) {
        Cpx zn = zc - lam * step;
        Cpx rn = evaluate(f, zn) - w;
        if (finite_c(rn) && std::abs(rn) < res) {
          zc = zn;
          r = rn;
          res = std::abs(rn);
          improved = true;
          break;
        }
      }
      if (!improved) return std::nullopt;
    }
    if (res > opt.newton_tol * wscale) return std::nullopt;
    return zc;
  }
};

}  // namespace

std::optional<NumericPath> lift_path_numeric(const NumericMap& f,
                                             const NumericPath& gamma,
                                             std::complex<double> z0,
                                             const ContinuationOptions& opt,
                                             Report* err) {
  auto fail = [&](const char* code, std::string detail) {
    if (err) err->add(code, std::move(detail));
    return std::optional<NumericPath>{};
  };
  if (!f.valid()) return fail("lift-input", "empty map");
  if (gamma.z.size() < 2 || gamma.z.size() != gamma.t.size())
    return fail("lift-input", "path needs matching parameter and sample arrays");

  const NumericMap fp = derivative(f);
  const double tclose = opt.tol_close > 0
                            ? opt.tol_close
                            : default_close_tol(path_diameter(gamma), gamma.z.front());
  const Cpx w_start = gamma.z.front();
  const Cpx fz0 = evaluate(f, z0);
  if (!finite_c(fz0) || std::abs(fz0 - w_start) > 1e-3 * std::max(1.0, std::abs(w_start)))
    return fail("lift-basepoint", "f(z0) is not gamma(0)");

  const Corrector corr{f, fp, opt};
  bool small = false;
  auto start = corr.solve(z0, w_start, &small);
  if (!start)
    return fail(small ? "lift-singular" : "lift-basepoint",
                "could not refine the basepoint onto the path");

  NumericPath out;
  out.base_step = opt.base_step;
  out.tol_close = tclose;
  out.t.push_back(0.0);
  out.z.push_back(*start);

  Cpx z = *start;
  double s = 0.0;
  double h = opt.base_step;
  const double hmin = opt.base_step / 65536.0;
  while (s < 1.0 - 1e-12) {
    double s1 = std::min(1.0, s + std::min(h, 1.0 - s));
    if (1.0 - s1 < 1e-12) s1 = 1.0;
    const Cpx w1 = path_point(gamma, s1);
    const Cpx d0 = evaluate(fp, z);
    if (!finite_c(d0) || std::abs(d0) < opt.min_deriv)
      return fail("lift-singular", "|f'| below floor at t=" + std::to_string(s));
    const Cpx dpred = (w1 - evaluate(f, z)) / d0;
    bool small2 = false;
    auto zn = corr.solve(z + dpred, w1, &small2);
    // the corrector must stay on a short leash around the predictor, or a
    // neighboring branch could be picked up silently
    if (zn && std::abs(*zn - (z + dpred)) <=
                  0.5 * std::abs(dpred) + 1e-9 * std::max(1.0, std::abs(z))) {
      z = *zn;
      s = s1;
      out.t.push_back(s);
      out.z.push_back(z);
      h = std::min(opt.base_step, 2.0 * h);
    } else {
      h /= 2;
      if (h < hmin)
        return fail("lift-step-underflow",
                    "continuation step underflow at t=" + std::to_string(s));
    }
  }
  out.closed = std::abs(out.z.back() - out.z.front()) < tclose;
  return out;
}

std::optional<ClosureDegree> closure_degree(const NumericMap& f,
                                            const NumericPath& gamma,
                                            std::complex<double> z0, int max_k,
                                            const ContinuationOptions& opt,
                                            Report* err) {
  if (max_k < 1) {
    if (err) err->add("closure-degree", "max_k must be positive");
    return std::nullopt;
  }
  const double tclose = opt.tol_close > 0
                            ? opt.tol_close
                            : default_close_tol(path_diameter(gamma), gamma.z.front());
  Cpx base = z0;
  Cpx cur = z0;
  for (int k = 1; k <= max_k; ++k) {
    auto lifted = lift_path_numeric(f, gamma, cur, opt, err);
    if (!lifted) return std::nullopt;
    if (k == 1) base = lifted->z.front();
    cur = lifted->z.back();
    if (std::abs(cur - base) < tclose) return ClosureDegree{k, false};
  }
  return ClosureDegree{max_k, true};
}

std::optional<Quadruple> build_quadruple_numeric(const NumericMap& f,
                                                 const MarkedSet& marked,
                                                 const Rose& rose, const BBox& window,
                                                 const ContinuationOptions& opt,
                                                 Report* err) {
  auto fail = [&](const char* code, std::string detail) {
    if (err) err->add(code, std::move(detail));
    return std::optional<Quadruple>{};
  };
  if (!f.valid()) return fail("build-input", "empty map");
  if (marked.size() == 0 || rose.size() != marked.size())
    return fail("build-input", "rose and marked set sizes disagree");

  auto pc = poly_coeffs(f);
  if (!pc) return fail("build-not-polynomial", "map does not expand to a polynomial");

  const Cpx t = to_cpx(rose.center);
  CoefVec shifted = *pc;
  shifted[0] -= t;
  Report rerr;
  auto roots_opt = poly_roots(shifted, &rerr);
  if (!roots_opt) {
    if (err) err->merge(rerr);
    return fail("build-roots", "no vertex solutions");
  }
  std::vector<Cpx> roots = *roots_opt;
  if (roots.empty()) return fail("build-degree", "constant map has no preimages");

  double rscale = 1.0;
  for (Cpx r : roots) rscale = std::max(rscale, std::abs(r));
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) < 1e-8 * rscale)
        return fail("build-root-clustering",
                    "preimages of the rose center collide; is the center a critical value?");

  if (window.empty) return fail("build-window", "empty window");
  for (Cpx r : roots)
    if (r.real() < window.lo.x - 1e-9 || r.real() > window.hi.x + 1e-9 ||
        r.imag() < window.lo.y - 1e-9 || r.imag() > window.hi.y + 1e-9)
      return fail("build-window", "vertex outside the window: " + fmt_g(r.real()) + "+" +
                                      fmt_g(r.imag()) + "i");

  if (pc->size() >= 3) {
    CoefVec dcoef(pc->size() - 1);
    for (std::size_t k = 1; k < pc->size(); ++k)
      dcoef[k - 1] = static_cast<double>(k) * (*pc)[k];
    auto crit = poly_roots(dcoef, &rerr);
    if (!crit) {
      if (err) err->merge(rerr);
      return fail("build-critical", "could not solve for critical points");
    }
    for (Cpx cp : *crit) {
      const Cpx cv = evaluate(f, cp);
      double nearest = std::numeric_limits<double>::infinity();
      for (const MarkedPoint& mp : marked.points)
        nearest = std::min(nearest, std::abs(cv - to_cpx(mp.pos)));
      if (nearest > 1e-6 * std::max(1.0, std::abs(cv)))
        return fail("build-singular-not-marked",
                    "critical value " + fmt_g(cv.real()) + "+" + fmt_g(cv.imag()) +
                        "i is not a marked point");
      for (std::size_t j = 0; j < rose.size(); ++j)
        if (point_polyline_dist(to_vec(cv), rose.petals[j].loop) < 1e-3)
          return fail("build-singular-margin",
                      "petal " + std::to_string(j + 1) + " passes through a critical value");
    }
  }

  std::sort(roots.begin(), roots.end(), [](Cpx a, Cpx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  HalfEdgeGraph g;
  for (Cpx r : roots) g.add_vertex(to_vec(r));
  for (std::size_t j = 0; j < rose.size(); ++j) {
    const NumericPath petal = path_from_polyline(rose.petals[j].loop);
    if (!petal.closed)
      return fail("build-petal-open", "petal " + std::to_string(j + 1) + " does not close");
    for (std::size_t i = 0; i < roots.size(); ++i) {
      Report lerr;
      auto lifted = lift_path_numeric(f, petal, roots[i], opt, &lerr);
      if (!lifted) {
        if (err) err->merge(lerr);
        return fail("build-lift", "petal " + std::to_string(j + 1) + " from vertex " +
                                      std::to_string(i) + " failed to lift");
      }
      const Cpx end = lifted->z.back();
      std::size_t k = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < roots.size(); ++c)
        if (std::abs(end - roots[c]) < best) {
          best = std::abs(end - roots[c]);
          k = c;
        }
      if (best > 1e-6 * rscale)
        return fail("build-lift-endpoint", "lift endpoint misses every vertex");
      Polyline poly;
      poly.reserve(lifted->z.size());
      for (Cpx zz : lifted->z) poly.push_back(to_vec(zz));
      poly.front() = g.vertices[i].pos;
      poly.back() = g.vertices[k].pos;
      g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(k),
                 static_cast<int>(j + 1), std::move(poly));
    }
  }
  g.sort_rotations_by_angle();

  Quadruple q;
  q.marked = marked;
  q.rose = rose;
  q.graph = std::move(g);
  q.basepoint = 0;
  Report adm = validate_admissible(q);
  if (!adm.ok()) {
    if (err) err->merge(adm);
    return fail("build-not-admissible", "validate_admissible rejected the reconstruction");
  }
  return q;
}

namespace {

double sup_distance(const NumericPath& a, const NumericPath& b) {
  double sup = 0.0;
  for (std::size_t i = 0; i < a.t.size(); ++i)
    sup = std::max(sup, std::abs(a.z[i] - path_point(b, a.t[i])));
  for (std::size_t i = 0; i < b.t.size(); ++i)
    sup = std::max(sup, std::abs(b.z[i] - path_point(a, b.t[i])));
  return sup;
}

// depth-first scan of the reduced words; endpoints of every map ride along
// so each new letter costs one lift per map
struct WordScan {
  const std::vector<const NumericMap*>& maps;  // target first
  const std::vector<NumericPath>& fwd;
  const std::vector<NumericPath>& bwd;
  Cpx z0;
  double wtol;
  const ContinuationOptions& opt;
  Report* err;

  bool hard_error = false;
  bool disagreed = false;
  std::string witness;
  std::size_t threshold = 0;
  std::size_t words = 0;

  bool closed_at(Cpx z) const { return std::abs(z - z0) < wtol; }

  void run(Word& w, const std::vector<Cpx>& cur, int left) {
    if (left <= 0 || disagreed || hard_error) return;
    for (int j = 1; j <= static_cast<int>(fwd.size()); ++j) {
      for (int sgn : {+1, -1}) {
        if (!w.empty() && w.back().index == j && w.back().sign == -sgn) continue;
        const NumericPath& path = sgn > 0 ? fwd[j - 1] : bwd[j - 1];
        std::vector<Cpx> nxt(cur.size());
        for (std::size_t k = 0; k < maps.size(); ++k) {
          auto lifted = lift_path_numeric(*maps[k], path, cur[k], opt, err);
          if (!lifted) {
            if (err) err->add("verify-lift", "word lift failed");
            hard_error = true;
            return;
          }
          nxt[k] = lifted->z.back();
        }
        w.push_back({j, sgn});
        const bool vt = closed_at(nxt[0]);
        const std::size_t n = maps.size() - 1;
        if (closed_at(nxt[n]) != vt) {
          disagreed = true;
          witness = word_str(w);
          return;
        }
        std::size_t m0 = n;
        while (m0 > 1 && closed_at(nxt[m0 - 1]) == vt) --m0;
        threshold = std::max(threshold, m0 - 1);
        ++words;
        run(w, nxt, left - 1);
        w.pop_back();
        if (disagreed || hard_error) return;
      }
    }
  }
};

}  // namespace

std::optional<NumericConvergenceReport> verify_numeric_convergence(
    const std::vector<NumericMap>& seq, const NumericMap& target,
    const std::vector<NumericPath>& petals, std::complex<double> z0,
    std::complex<double> w0, int radius, double tol,
    const ContinuationOptions& opt, Report* err) {
  auto fail = [&](const char* code, std::string detail) {
    if (err) err->add(code, std::move(detail));
    return std::optional<NumericConvergenceReport>{};
  };
  if (seq.empty()) return fail("verify-input", "empty map sequence");
  if (petals.empty()) return fail("verify-input", "no petal loops supplied");
  if (radius < 0) return fail("verify-input", "negative word radius");
  if (!(tol > 0)) return fail("verify-input", "tolerance must be positive");
  if (!target.valid()) return fail("verify-input", "empty target map");

  const Cpx tv = evaluate(target, z0);
  if (!finite_c(tv) || std::abs(tv - w0) > tol)
    return fail("verify-precondition", "target(z0) is not w0");
  for (std::size_t n = 0; n < seq.size(); ++n) {
    if (!seq[n].valid()) return fail("verify-input", "empty map in the sequence");
    const Cpx v = evaluate(seq[n], z0);
    if (!finite_c(v) || std::abs(v - w0) > tol)
      return fail("verify-precondition",
                  "entry " + std::to_string(n) + " sends z0 to " + fmt_g(v.real()) + "+" +
                      fmt_g(v.imag()) + "i, not w0");
  }
  for (std::size_t j = 0; j < petals.size(); ++j) {
    if (petals[j].z.size() < 2)
      return fail("verify-petal", "petal " + std::to_string(j + 1) + " has no samples");
    if (std::abs(petals[j].z.front() - w0) > tol)
      return fail("verify-petal", "petal " + std::to_string(j + 1) + " is not based at w0");
    if (std::abs(petals[j].z.front() - petals[j].z.back()) >
        default_close_tol(path_diameter(petals[j]), w0))
      return fail("verify-petal", "petal " + std::to_string(j + 1) + " is not a loop");
  }

  NumericConvergenceReport rep;
  const std::size_t n = seq.size();

  const Cpx dtarget = evaluate(derivative(target), z0);
  for (std::size_t k = 0; k < n; ++k)
    rep.deriv_gap.push_back(std::abs(evaluate(derivative(seq[k]), z0) - dtarget));

  bool pass = true;
  if (rep.deriv_gap.back() > tol) {
    pass = false;
    rep.witness = "derivative";
    rep.detail = "the derivative gap at z0 stays above tol";
  } else {
    std::size_t from = n - 1;
    while (from > 0 && rep.deriv_gap[from - 1] <= tol) --from;
    rep.threshold = from;
  }

  // uniform closeness of the single-petal lifts, also a smoke test that
  // every supplied map actually lifts the petals
  rep.sup_gap.assign(n, 0.0);
  for (const NumericPath& petal : petals) {
    auto bt = lift_path_numeric(target, petal, z0, opt, err);
    if (!bt) return fail("verify-lift", "target lift of a petal failed");
    for (std::size_t k = 0; k < n; ++k) {
      auto bn = lift_path_numeric(seq[k], petal, z0, opt, err);
      if (!bn)
        return fail("verify-lift", "entry " + std::to_string(k) + " failed to lift a petal");
      rep.sup_gap[k] = std::max(rep.sup_gap[k], sup_distance(*bt, *bn));
    }
  }

  std::size_t words = 0;
  if (pass && radius > 0) {
    std::vector<const NumericMap*> maps;
    maps.push_back(&target);
    for (const NumericMap& m : seq) maps.push_back(&m);
    std::vector<NumericPath> bwd;
    for (const NumericPath& p : petals) bwd.push_back(reversed_path(p));
    double wdiam = 0.0;
    for (const NumericPath& p : petals) wdiam = std::max(wdiam, path_diameter(p));
    WordScan scan{maps, petals, bwd, z0, default_close_tol(wdiam, z0),
                  opt,  err,    false, false, "", 0, 0};
    Word w;
    std::vector<Cpx> cur(maps.size(), z0);
    scan.run(w, cur, radius);
    if (scan.hard_error) return std::nullopt;
    if (scan.disagreed) {
      pass = false;
      rep.witness = scan.witness;
      rep.detail = "closure verdict under the sequence never matches the target";
    } else {
      rep.threshold = std::max(rep.threshold, scan.threshold);
      words = scan.words;
    }
  }

  rep.pass = pass;
  if (pass)
    rep.detail = std::to_string(words) + " words checked; verdicts stable from entry " +
                 std::to_string(rep.threshold) + " on";
  return rep;
}

std::optional<double> teich_bound(double r, double R) {
  if (!(r > 0) || !(R > 0) || !(r < R)) return std::nullopt;
  const double x = r / R;
  return std::log1p(x) - std::log1p(-x);
}

}  // namespace quadrose
