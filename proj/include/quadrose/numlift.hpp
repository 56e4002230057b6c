#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quadrose/quad.hpp"

namespace quadrose {

/// Closed-form expression in one complex variable. Nodes are immutable and
/// shared, so copies are cheap and derivatives can reuse subtrees. Stick to
/// entire building blocks (divide only by nonvanishing factors); the lift
/// routines guard against small derivatives but not against poles.
struct NumericMap {
  enum class Kind {
    constant,
    variable,
    add,
    mul,
    divide,
    power,        // integer exponent >= 0
    exponential,
    cosine,
    sine,
  };
  struct Node {
    Kind kind = Kind::constant;
    std::complex<double> value;  // constant
    long exponent = 0;           // power
    std::shared_ptr<const Node> a, b;
  };
  std::shared_ptr<const Node> root;

  bool valid() const { return root != nullptr; }
};

NumericMap map_const(std::complex<double> c);
NumericMap map_z();
NumericMap operator+(const NumericMap& a, const NumericMap& b);
NumericMap operator-(const NumericMap& a, const NumericMap& b);
NumericMap operator*(const NumericMap& a, const NumericMap& b);
NumericMap operator/(const NumericMap& a, const NumericMap& b);
NumericMap pow(const NumericMap& a, long k);
NumericMap exp(const NumericMap& a);
NumericMap cos(const NumericMap& a);
NumericMap sin(const NumericMap& a);

/// Plain tree walk; overflow shows up as a non-finite result, which the
/// continuation routines treat as a failed step.
std::complex<double> evaluate(const NumericMap& f, std::complex<double> z);

/// Structural derivative (product/quotient/chain rules on the tree).
NumericMap derivative(const NumericMap& f);

/// Prefix descriptor, e.g. "pow(add(1, div(z, 8)), 8)". parse_map accepts
/// exactly what map_str emits plus whitespace, the aliases scale(c, f) for
/// mul and sub(a, b), the literal i, and complex(re, im) constants.
std::string map_str(const NumericMap& f);
std::optional<NumericMap> parse_map(std::string_view text, Report* err = nullptr);

/// Coefficients c[0..deg] with f = sum c[k] z^k when f expands to a
/// polynomial (no exp/cos/sin and no division by a non-constant);
/// nullopt otherwise or past max_degree.
std::optional<std::vector<std::complex<double>>> poly_coeffs(
    const NumericMap& f, std::size_t max_degree = 512);

/// All complex roots, with multiplicity, by Durand-Kerner iteration.
/// Trailing near-zero leading coefficients are stripped first.
std::optional<std::vector<std::complex<double>>> poly_roots(
    const std::vector<std::complex<double>>& coeffs, Report* err = nullptr);

/// Sampled parameterized path. t runs increasing from 0 to 1; closed
/// records |z.back() - z.front()| < tol_close.
struct NumericPath {
  std::vector<double> t;
  std::vector<std::complex<double>> z;
  double base_step = 0.0;  // coarsest parameter step of the continuation
  bool closed = false;
  double tol_close = 0.0;
};

/// Counterclockwise circle as a closed path, starting (and ending) at
/// angle base_angle. The last sample repeats the first exactly.
NumericPath circle_loop(std::complex<double> center, double radius,
                        int segments = 64, double base_angle = 0.0);

/// Path through the polyline nodes, parameterized by arclength.
NumericPath path_from_polyline(const Polyline& p);

/// Piecewise-linear position at parameter s (clamped to [0, 1]).
std::complex<double> path_point(const NumericPath& p, double s);

/// Diagonal of the bounding box of the samples.
double path_diameter(const NumericPath& p);

NumericPath reversed_path(const NumericPath& p);

struct ContinuationOptions {
  double base_step = 1.0 / 256;  // parameter step before adaptive halving
  double newton_tol = 1e-10;     // corrector residual, relative to max(1,|w|)
  double min_deriv = 1e-12;      // refuse to continue through |f'| below this
  double tol_close = 0.0;        // 0 means 1e-6 * loop diameter
};

/// Lift of the loop gamma under f starting at z0 (f(z0) must equal
/// gamma(0) up to a coarse tolerance; the start is Newton-refined).
/// Predictor steps along 1/f', then a damped Newton corrector solves
/// f(z) = gamma(t); the step halves whenever the corrector strays or
/// stalls. Fails on step underflow or derivative below min_deriv.
std::optional<NumericPath> lift_path_numeric(const NumericMap& f,
                                             const NumericPath& gamma,
                                             std::complex<double> z0,
                                             const ContinuationOptions& opt = {},
                                             Report* err = nullptr);

struct ClosureDegree {
  int degree = 0;       // smallest k with the lift of gamma^k closed
  bool exceeded = false;  // no closure up to max_k; degree holds max_k
};

std::optional<ClosureDegree> closure_degree(const NumericMap& f,
                                            const NumericPath& gamma,
                                            std::complex<double> z0, int max_k,
                                            const ContinuationOptions& opt = {},
                                            Report* err = nullptr);

/// Preimage quadruple of the rose under a polynomial map: vertices are the
/// roots of f(z) = center (sorted by real then imaginary part, basepoint 0),
/// edges the lifts of each petal from each vertex, rotations the angular
/// order of the lifted tangents. Critical values must sit on marked points
/// and every petal must clear them by 1e-3; the window must contain all
/// roots. The result is checked with validate_admissible before returning.
std::optional<Quadruple> build_quadruple_numeric(const NumericMap& f,
                                                 const MarkedSet& marked,
                                                 const Rose& rose,
                                                 const BBox& window,
                                                 const ContinuationOptions& opt = {},
                                                 Report* err = nullptr);

/// Convergence evidence for a sequence of maps against a target, all
/// sharing z0 -> w0. Checks the derivative gap at z0 and, for every
/// reduced word of length <= radius over the petal loops (based at w0),
/// that the lift-closure verdict under seq[n] eventually agrees with the
/// verdict under the target. sup_gap records, per entry, the largest
/// uniform distance between a single-petal lift under seq[n] and under
/// the target.
struct NumericConvergenceReport {
  bool pass = false;
  std::vector<double> deriv_gap;  // per sequence entry
  std::vector<double> sup_gap;    // per sequence entry
  std::size_t threshold = 0;      // all checks agree from this entry on
  std::string witness;            // failing word (or "derivative") when !pass
  std::string detail;
};

std::optional<NumericConvergenceReport> verify_numeric_convergence(
    const std::vector<NumericMap>& seq, const NumericMap& target,
    const std::vector<NumericPath>& petals, std::complex<double> z0,
    std::complex<double> w0, int radius, double tol,
    const ContinuationOptions& opt = {}, Report* err = nullptr);

/// log((1 + r/R) / (1 - r/R)); nullopt unless 0 < r < R.
std::optional<double> teich_bound(double r, double R);

}  // namespace quadrose
