"""Degrees of iterated monomial maps by symbolic composition.

Each map is written as a rational map of P^N in homogeneous coordinates,
composed with sympy, and the common factor of the components is cancelled
before reading off the degree. Prints the values frozen into the Rust tests.
Run: python3 oracles/monomial_degrees.py
"""
import sympy as sp

MATRICES = {
    "fibonacci": [[0, 1], [1, 1]],
    "minus_two": [[-2, 0], [0, -2]],
    "mixed": [[1, -1], [2, 1]],
    "inverse_pair": [[2, 1], [1, 1]],
    "three": [[0, 1, 0], [0, 0, 1], [1, -1, 1]],
}


def homogeneous_map(a, xs):
    """[x0 : x0^{?}·∏ (x_j/x0)^{a_ij}] with denominators cleared."""
    x0, rest = xs[0], xs[1:]
    comps = [sp.Integer(1)] + [sp.Mul(*[(xj / x0) ** e for xj, e in zip(rest, row)]) for row in a]
    return clear(comps)


def clear(comps):
    comps = [sp.together(c) for c in comps]
    den = sp.lcm([sp.denom(c) for c in comps])
    comps = [sp.expand(sp.cancel(c * den)) for c in comps]
    g = comps[0]
    for c in comps[1:]:
        g = sp.gcd(g, c)
    return [sp.expand(sp.cancel(c / g)) for c in comps]


def degree(comps, xs):
    return max(sp.Poly(c, *xs).total_degree() for c in comps if c != 0)


def degrees(a, n_max):
    n = len(a)
    xs = sp.symbols(f"x0:{n + 1}")
    step = homogeneous_map(a, xs)
    cur = list(xs)
    out = []
    for _ in range(n_max):
        cur = clear([c.subs(dict(zip(xs, cur)), simultaneous=True) for c in step])
        out.append(degree(cur, xs))
    return out


if __name__ == "__main__":
    for name, a in MATRICES.items():
        print(name, degrees(a, 6))
