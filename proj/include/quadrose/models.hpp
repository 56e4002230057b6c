#pragma once

#include "quadrose/quad.hpp"

namespace quadrose::models {

/// Single petal, d vertices in one directed cycle: the combinatorics of
/// z -> z^d with the critical value marked.
Quadruple cycle(std::size_t d);

/// Single petal, bi-infinite directed chain: the combinatorics of the
/// exponential with its omitted value marked. Admissible but not
/// dynamically admissible (the marked point sits in an unbounded face).
Quadruple exp_chain();

/// Three petals over the marked orbit of (pi/2) cos z: a two-ended chain
/// of alternating petal-1 and petal-3 bigons, a petal-2 loop per vertex.
Quadruple cosine();

/// Three petals over the marked orbit of sqrt(ln 2)(1 - exp(z^2)): two
/// chains of petal-3 edges crossing over at the center, a central petal-2
/// bigon, and petal-1 loops; the two chain sides bound asymptotic tracts.
Quadruple exp_square();

}  // namespace quadrose::models
