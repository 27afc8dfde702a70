"""Exact orbit oracle for the affine maps used by the repro cases.

Pure Python with fractions; prints the values frozen into the Rust tests.
Run: python3 oracles/generic_orbits.py
"""
from fractions import Fraction as Q
from math import gcd, log


def height(pt):
    d = 1
    for c in pt:
        d = d * c.denominator // gcd(d, c.denominator)
    m = max([d] + [abs(c.numerator * (d // c.denominator)) for c in pt])
    return log(m)


def orbit(f, p, n):
    out = [p]
    for _ in range(n):
        out.append(f(out[-1]))
    return out


def affine_fibonacci(p):
    x, y, z = p
    return (y, z, x + y * z)


def infinite_height(p):
    x, y, z = p
    return (x * y + x * z, y + z, z)


def henon(p):
    x, y = p
    return (y, y * y - x)


def henon_inv(p):
    x, y = p
    return (x * x - y, x)


HENON_POINTS = ["1,1", "2,1", "1,2", "2,3", "3,2", "1/2,1", "2,-1", "3,5", "-1,2", "5,1/3"]


def main():
    o = orbit(affine_fibonacci, (Q(1), Q(1), Q(2)), 25)
    h25 = height(o[25])
    print(f"affine_fibonacci h_25 = {h25!r}  h_25^(1/25) = {h25 ** (1 / 25)!r}")

    o = orbit(infinite_height, (Q(1), Q(0), Q(1)), 100)
    fact = 1
    ok = True
    for n in range(1, 101):
        fact *= n
        ok &= max(abs(c.numerator) for c in o[n]) == fact and all(c.denominator == 1 for c in o[n])
    print(f"infinite_height max coordinate == n! for n <= 100: {ok}")
    first = next((n for n in range(1, 101) if height(o[n]) / n >= 3), None)
    print(f"infinite_height first n with h_n/n >= 3: {first}  h_30/30 = {height(o[30]) / 30!r}")

    n = 15
    for s in HENON_POINTS:
        p = tuple(Q(t) for t in s.split(","))
        fwd = height(orbit(henon, p, n)[n]) / 2 ** n
        bwd = height(orbit(henon_inv, p, n)[n]) / 2 ** n
        print(f"henon {s:>7}: h(P) = {height(p)!r}  fwd + bwd = {fwd + bwd!r}")


if __name__ == "__main__":
    main()
