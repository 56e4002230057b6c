#!/usr/bin/env python3
"""Independent oracle: dynamical portraits of the two transcendental test
maps, computed from calculus alone (no project code).

  g1(z) = (pi/2) cos z          marked set {-pi/2, 0, pi/2}
  g2(z) = sqrt(ln 2) (1 - e^{z^2})   marked set {0, +-sqrt(ln 2)}

For each marked point a we report f(a), the local degree at a's preimage
inside the marked set's faces (equivalently: the local degree of f at a
itself is irrelevant; what the combinatorial portrait weights record is the
local degree of f at the unique marked preimage in the face, which for a
marked point a equals ord_{z=a}(f(z) - f(a))), and the singular flags
(critical values from f' roots, asymptotic values from tract limits).
"""

import cmath
import math


def local_degree(f, a, h=1e-5):
    """Order of the zero of f(z) - f(a) at z = a, via a tiny circle.

    The winding number of f(a + h e^{it}) - f(a) around 0 equals the order.
    """
    n = 4096
    total = 0.0
    prev = None
    for k in range(n + 1):
        z = a + h * cmath.exp(2j * math.pi * k / n)
        w = f(z) - f(a)
        ang = cmath.phase(w)
        if prev is not None:
            d = ang - prev
            while d > math.pi:
                d -= 2 * math.pi
            while d < -math.pi:
                d += 2 * math.pi
            total += d
        prev = ang
    return round(total / (2 * math.pi))


def close(a, b, tol=1e-9):
    return abs(a - b) < tol


def name_of(v, marked):
    for nm, a in marked.items():
        if close(v, a, 1e-6):
            return nm
    raise AssertionError(f"orbit leaves marked set: {v}")


def report(title, f, marked, crit_values, asym_values):
    print(f"== {title}")
    singular = []
    for nm, a in marked.items():
        tgt = name_of(f(a), marked)
        w = local_degree(f, a)
        print(f"   {nm} -> {tgt}  weight {w}")
    for v in crit_values + asym_values:
        nm = name_of(v, marked)
        if nm not in singular:
            singular.append(nm)
    print(f"   singular: {{{', '.join(singular)}}}")
    print()


def main():
    # g1 = (pi/2) cos z. g1'(z) = -(pi/2) sin z: critical points k*pi,
    # critical values g1(0) = pi/2 and g1(pi) = -pi/2. cos has no finite
    # asymptotic values (it is a composition of exp with maps that send
    # infinity nowhere finite along any path... concretely |cos| -> inf on
    # every path to infinity off the real axis, and oscillates on it).
    half_pi = math.pi / 2
    g1 = lambda z: half_pi * cmath.cos(z)
    marked1 = {"-pi/2": -half_pi, "0": 0.0, "pi/2": half_pi}
    report("g1 = (pi/2) cos z", g1, marked1,
           crit_values=[half_pi, -half_pi], asym_values=[])

    # g2 = sqrt(ln2) (1 - exp(z^2)). g2'(z) = -2 sqrt(ln2) z exp(z^2):
    # single critical point 0, critical value g2(0) = 0. Along the
    # imaginary axis z^2 -> -inf so exp(z^2) -> 0: asymptotic value
    # sqrt(ln2) (two tracts, one up one down).
    s = math.sqrt(math.log(2))
    g2 = lambda z: s * (1 - cmath.exp(z * z))
    marked2 = {"-sqrt(ln2)": -s, "0": 0.0, "sqrt(ln2)": s}
    report("g2 = sqrt(ln2) (1 - exp(z^2))", g2, marked2,
           crit_values=[0.0], asym_values=[s])

    # Sanity: the asymptotic-value claim, numerically.
    for t in (5.0, 10.0, 20.0):
        assert abs(g2(1j * t) - s) < 1e-9
    # And the orbit values used above.
    assert close(g2(s), -s) and close(g2(-s), -s) and close(g2(0), 0)
    assert close(g1(0), half_pi) and close(g1(half_pi), 0)
    assert close(g1(-half_pi), 0)
    print("sanity checks passed")


if __name__ == "__main__":
    main()
