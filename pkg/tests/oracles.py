"""Independent reference computations used to freeze expected values.

Nothing here imports genuslab.  Everything goes through sympy or plain
enumeration so the package routes under test never check themselves.
"""

from fractions import Fraction
from itertools import product
from math import comb, factorial

import sympy as sp

x, q = sp.symbols("x q")


def partitions_count(n):
    """p(n) by brute-force enumeration of non-increasing tuples."""

    def count(rest, largest):
        if rest == 0:
            return 1
        return sum(count(rest - k, k) for k in range(min(rest, largest), 0, -1))

    return count(n, n)


def pentagonal_euler(order):
    """Coefficients of prod(1 - q^n) below q^order from the pentagonal theorem."""
    coeffs = [0] * order
    k = 0
    while True:
        hit = False
        for m in ([k] if k == 0 else [k, -k]):
            e = m * (3 * m - 1) // 2
            if e < order:
                coeffs[e] += (-1) ** abs(m)
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return coeffs


def divisor_sum(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def bernoulli_sympy(n):
    if n == 1:
        return Fraction(-1, 2)
    b = sp.bernoulli(n)
    return Fraction(int(b.p), int(b.q))


def _to_fraction(expr):
    expr = sp.nsimplify(expr)
    return Fraction(int(sp.numer(expr)), int(sp.denom(expr)))


def ahat_univariate(max_pow):
    """Taylor coefficients of (x/2)/sinh(x/2) up to x^max_pow."""
    s = sp.series((x / 2) / sp.sinh(x / 2), x, 0, max_pow + 1).removeO()
    return [_to_fraction(s.coeff(x, k)) for k in range(max_pow + 1)]


def _bimul(a, b, max_pow, order):
    out = {}
    for (k1, n1), u in a.items():
        for (k2, n2), v in b.items():
            if k1 + k2 <= max_pow and n1 + n2 < order:
                key = (k1 + k2, n1 + n2)
                out[key] = out.get(key, 0) + u * v
    return out


def phi_factor(max_pow, order):
    """Splitting-principle factor for one root, order by order in q.

    Returns f[k][n] = coefficient of x^k q^n in
        (x/2)/sinh(x/2) * prod_{n<order} (1-q^n)^2 / ((1-q^n e^x)(1-q^n e^-x)).
    Each geometric factor is expanded by hand as sum_{a,b} q^{n(a+b)} e^{(a-b)x}.
    """
    acc = {(k, 0): c for k, c in enumerate(ahat_univariate(max_pow)) if c}
    for n in range(1, order):
        geo = {}
        for a in range(order):
            for b in range(order):
                if n * (a + b) >= order:
                    continue
                for k in range(max_pow + 1):
                    key = (k, n * (a + b))
                    geo[key] = geo.get(key, 0) + Fraction((a - b) ** k, factorial(k))
        square = {(0, 0): Fraction(1), (0, n): Fraction(-2)}
        if 2 * n < order:
            square[(0, 2 * n)] = Fraction(1)
        acc = _bimul(_bimul(acc, geo, max_pow, order), square, max_pow, order)
    return [[acc.get((k, n), Fraction(0)) for n in range(order)] for k in range(max_pow + 1)]


def _mul(a, b, order):
    out = [Fraction(0)] * order
    for i, u in enumerate(a):
        if u:
            for j in range(order - i):
                out[i + j] += u * b[j]
    return out


def phi_dim4(p1, order):
    """Phi for a 4-manifold with p1[M] = p1: top part is f0*f2*(x1^2+x2^2)."""
    f = phi_factor(2, order)
    return [c * p1 for c in _mul(f[0], f[2], order)]


def phi_dim8(p1sq, p2, order):
    """Phi for an 8-manifold from p1^2[M], p2[M].

    Top part of prod f(x_i) is A*sum x_i^4 + B*sum_{i<j} x_i^2 x_j^2 with
    A = f0^3 f4, B = f0^2 f2^2, and  A m_(2) + B m_(1,1) = A p1^2 + (B-2A) p2.
    """
    f = phi_factor(4, order)
    f0cube = _mul(_mul(f[0], f[0], order), f[0], order)
    a = _mul(f0cube, f[4], order)
    b = _mul(_mul(f[0], f[0], order), _mul(f[2], f[2], order), order)
    return [a[n] * p1sq + (b[n] - 2 * a[n]) * p2 for n in range(order)]


def ch_sym_single_root(max_pow, order):
    """Coefficients [x^k q^n] of 1/(1 - q e^x)."""
    expr = sum(q**m * sp.exp(m * x) for m in range(order))
    sx = sp.series(expr, x, 0, max_pow + 1).removeO()
    return [
        [_to_fraction(sp.expand(sx.coeff(x, k)).coeff(q, n)) for n in range(order)]
        for k in range(max_pow + 1)
    ]


def fock_state_count(modes, cutoff, clifford_rank=0):
    """Number of monomials z^a zbar^b psibar^e with weighted level <= cutoff."""
    slots = [r for r, d in modes for _ in range(d)]
    total = 0
    ranges = []
    for r in slots:
        top = cutoff // r
        ranges.append([(a, b, e) for a in range(top + 1) for b in range(top + 1) for e in (0, 1)])
    for choice in product(*ranges):
        level = sum(r * (a + b + e) for r, (a, b, e) in zip(slots, choice))
        if level <= cutoff:
            total += 1
    return total * 2**clifford_rank


def binomial_row(n):
    return [comb(n, k) for k in range(n + 1)]
