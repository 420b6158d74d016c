"""Solve for fully symmetric, positive, interior triangle quadrature rules.

Orbit structures follow the classical minimal-point layouts.  The solved
nodes/weights are written to ``src/pbedg/_triangle_tables.py``.

    python tools/gen_triangle_rules.py
"""
from math import factorial
from pathlib import Path

import numpy as np
from scipy.optimize import least_squares

# degree -> (centroid?, n_orbit3, n_orbit6)
STRUCTURES = {
    1: (1, 0, 0),
    2: (0, 1, 0),
    4: (0, 2, 0),
    5: (1, 2, 0),
    6: (0, 2, 1),
    7: (0, 3, 1),
    8: (1, 3, 1),
    9: (1, 4, 1),
    10: (1, 2, 3),
}


def expand(params, structure):
    c, n3, n6 = structure
    pts, wts = [], []
    it = iter(params)
    if c:
        pts.append((1 / 3, 1 / 3, 1 / 3))
        wts.append(next(it))
    for _ in range(n3):
        a, w = next(it), next(it)
        b = 1 - 2 * a
        for p in [(a, a, b), (a, b, a), (b, a, a)]:
            pts.append(p)
            wts.append(w / 3)
    for _ in range(n6):
        a, b, w = next(it), next(it), next(it)
        g = 1 - a - b
        for p in [(a, b, g), (a, g, b), (b, a, g), (b, g, a), (g, a, b), (g, b, a)]:
            pts.append(p)
            wts.append(w / 6)
    return np.array(pts), np.array(wts)


def residual(params, structure, degree):
    pts, wts = expand(params, structure)
    x, y = pts[:, 1], pts[:, 2]
    res = []
    for p in range(degree + 1):
        for q in range(degree + 1 - p):
            exact = 2 * factorial(p) * factorial(q) / factorial(p + q + 2)
            res.append(np.dot(wts, x**p * y**q) - exact)
    return np.array(res)


def admissible(params, structure):
    pts, wts = expand(params, structure)
    return np.all(wts > 0) and np.all(pts > 0)


def solve(degree, structure, rng, tries=20000):
    c, n3, n6 = structure
    best = None
    for _ in range(tries):
        x0 = []
        if c:
            x0.append(rng.uniform(0.05, 0.5))
        for _ in range(n3):
            x0 += [rng.uniform(0.01, 0.49), rng.uniform(0.05, 0.5)]
        for _ in range(n6):
            a, b = sorted(rng.uniform(0.005, 0.6, 2))
            x0 += [a, b, rng.uniform(0.05, 0.5)]
        try:
            sol = least_squares(residual, x0, args=(structure, degree),
                                xtol=1e-15, ftol=1e-15, gtol=1e-15, method="lm")
        except ValueError:
            sol = least_squares(residual, x0, args=(structure, degree),
                                xtol=1e-15, ftol=1e-15, gtol=1e-15)
        r = np.max(np.abs(residual(sol.x, structure, degree)))
        if r < 1e-15 and admissible(sol.x, structure):
            return sol.x
        if best is None or r < best[0]:
            best = (r, sol.x)
    raise RuntimeError(f"degree {degree}: no admissible rule, best residual {best[0]}")


def main():
    rng = np.random.default_rng(20240501)
    out = ['"""Fully symmetric triangle quadrature tables (generated by tools/gen_triangle_rules.py).',
           "",
           "Each entry maps exactness degree -> (barycentric nodes, weights summing to 1).",
           '"""', "", "TABLE = {"]
    for degree, structure in STRUCTURES.items():
        if degree == 2:
            params = np.array([1 / 6, 1.0])
        elif degree == 1:
            params = np.array([1.0])
        else:
            params = solve(degree, structure, rng)
        pts, wts = expand(params, structure)
        r = np.max(np.abs(residual(params, structure, degree)))
        print(degree, len(wts), r, wts.min(), pts.min())
        out.append(f"    {degree}: (")
        out.append("        [")
        for p in pts:
            out.append(f"            ({float(p[0])!r}, {float(p[1])!r}, {float(p[2])!r}),")
        out.append("        ],")
        out.append("        [" + ", ".join(repr(float(w)) for w in wts) + "],")
        out.append("    ),")
    out.append("}")
    dest = Path(__file__).resolve().parents[1] / "src" / "pbedg" / "_triangle_tables.py"
    dest.write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
