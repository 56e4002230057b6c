#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "quadrose/quad.hpp"

namespace quadrose {

/// Line-oriented text form of a quadruple. Sections appear in the order
/// MARKED, ROSE, GRAPH or GENERATOR, META; ids are dense and ascending and
/// floats print with %.12g, so serialize(parse(text)) == text on canonical
/// files. Reference checks (edge endpoints, rotation entries, petal
/// assignments, the basepoint) run at parse time with line-numbered
/// diagnostics; geometric and covering validity stay with the validate
/// verbs so that deliberately broken files can still be loaded and
/// diagnosed.
std::optional<Quadruple> parse_quad_text(std::string_view text,
                                         Report* err = nullptr);
std::optional<Quadruple> parse_quad(const std::string& path,
                                    Report* err = nullptr);
std::string serialize_quad(const Quadruple& q);
bool write_quad(const Quadruple& q, const std::string& path,
                Report* err = nullptr);

/// Figure of a quadruple: the rose with its marked points on top, the graph
/// (for a generator, its radius `ball_radius` ball) below. Edges are colored
/// by petal, carry one midpoint arrowhead each, and marked points draw as
/// filled squares. `format` is "svg" or "dot"; bytes are deterministic.
std::optional<std::string> render_quad(const Quadruple& q,
                                       std::string_view format,
                                       int ball_radius = 2,
                                       Report* err = nullptr);

/// Command dispatch. Subcommands: validate, faces, portrait, degree, approx,
/// embed, converge, member, lift, class, isotopic, numlift, reconstruct,
/// verify-num, teich-bound, render. Reports go to `out` as key: value lines,
/// diagnostics to `diag`. Returns 0 on success or PASS, 1 on validation
/// failure, FAIL, or runtime errors, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& diag);

}  // namespace quadrose
