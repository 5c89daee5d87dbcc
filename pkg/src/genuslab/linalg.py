"""Exact linear algebra over Q and Q(i).

Sparse vectors are dicts ``key -> (re, im)`` whose parts are ``int`` or
``Fraction``.  Elimination is fraction free: every row is scaled to
Gaussian integers and kept primitive by dividing out the integer content.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

__all__ = [
    "GaussianRational",
    "gq",
    "solve_rational",
    "sparse_nullspace",
    "sparse_rank",
    "vec_add",
    "vec_scale",
    "vec_is_zero",
    "vec_clean",
]


class GaussianRational:
    """Immutable element ``re + i*im`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> GaussianRational:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, tuple):
            return cls(*value)
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not accepted")
        return cls(value)

    def pair(self) -> tuple:
        return (_shrink(self.re), _shrink(self.im))

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


I = GaussianRational(0, 1)


def gq(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


def _shrink(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


# -- sparse Gaussian vectors ---------------------------------------------

def vec_add(acc: dict, vec: dict, cre=1, cim=0) -> dict:
    """``acc += (cre + i cim) * vec`` in place."""
    if cim == 0:
        for k, (vr, vi) in vec.items():
            old = acc.get(k)
            if old is None:
                acc[k] = (cre * vr, cre * vi)
            else:
                acc[k] = (old[0] + cre * vr, old[1] + cre * vi)
    else:
        for k, (vr, vi) in vec.items():
            r = cre * vr - cim * vi
            i = cre * vi + cim * vr
            old = acc.get(k)
            if old is None:
                acc[k] = (r, i)
            else:
                acc[k] = (old[0] + r, old[1] + i)
    return acc


def vec_scale(vec: dict, cre=1, cim=0) -> dict:
    return vec_add({}, vec, cre, cim)


def vec_clean(vec: dict) -> dict:
    return {k: v for k, v in vec.items() if v[0] or v[1]}


def vec_is_zero(vec: dict) -> bool:
    return not any(r or i for r, i in vec.values())


# -- dense rational solve ------------------------------------------------

def solve_rational(rows, rhs):
    """Exact solution of ``rows @ x = rhs`` or None if inconsistent.

    Free variables, if any, are set to zero.
    """
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = m[i][-1]
    return x


# -- fraction-free elimination over Z[i] ---------------------------------

def _to_gaussian_ints(vec: dict) -> dict:
    den = 1
    for r, i in vec.values():
        if isinstance(r, Fraction):
            den = lcm(den, r.denominator)
        if isinstance(i, Fraction):
            den = lcm(den, i.denominator)
    out = {}
    for k, (r, i) in vec.items():
        a, b = int(r * den), int(i * den)
        if a or b:
            out[k] = (a, b)
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for a, b in row.values():
        g = gcd(g, a, b)
        if g == 1:
            return row
    if g > 1:
        return {k: (a // g, b // g) for k, (a, b) in row.items()}
    return row


def _components(columns: list[dict]) -> list[list[int]]:
    """Group column indices that share a row key (union-find)."""
    parent = list(range(len(columns)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {}
    for j, col in enumerate(columns):
        for key in col:
            o = owner.get(key)
            if o is None:
                owner[key] = j
            else:
                ra, rb = find(o), find(j)
                if ra != rb:
                    parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for j in range(len(columns)):
        groups.setdefault(find(j), []).append(j)
    return list(groups.values())


def _eliminate(columns: list[dict], idx: list[int]):
    """Fraction-free Gauss-Jordan on the rows of the submatrix ``idx``.

    Returns (reduced rows, pivot column per row) where each row is a dict
    local column -> Gaussian integer pair.
    """
    rows: dict = {}
    for local, j in enumerate(idx):
        for key, v in columns[j].items():
            rows.setdefault(key, {})[local] = v
    work = [_to_gaussian_ints(r) for r in rows.values()]
    work = [r for r in work if r]
    reduced: list[dict] = []
    pivcols: list[int] = []
    for row in work:
        # reduce the incoming row against existing pivots
        for prow, pc in zip(reduced, pivcols):
            if pc in row:
                row = _cancel(row, prow, pc)
                if not row:
                    break
        if not row:
            continue
        pc = min(row)
        # eliminate the new pivot column from earlier rows (Gauss-Jordan)
        for i, prow in enumerate(reduced):
            if pc in prow:
                reduced[i] = _cancel(prow, row, pc)
        reduced.append(row)
        pivcols.append(pc)
    return reduced, pivcols


def _cancel(row: dict, prow: dict, pc: int) -> dict:
    """``p*row - c*prow`` with p, c the entries at pc; made primitive."""
    pr, pi = prow[pc]
    cr, ci = row[pc]
    out = {}
    for k, (a, b) in row.items():
        out[k] = (pr * a - pi * b, pr * b + pi * a)
    for k, (a, b) in prow.items():
        r = cr * a - ci * b
        i = cr * b + ci * a
        o = out.get(k, (0, 0))
        out[k] = (o[0] - r, o[1] - i)
    out = {k: v for k, v in out.items() if v[0] or v[1]}
    return _primitive(out)


def _gdiv(num, den):
    """Exact quotient of Gaussian integers as a pair of Fractions."""
    a, b = num
    c, d = den
    n = c * c + d * d
    return (_shrink(Fraction(a * c + b * d, n)), _shrink(Fraction(b * c - a * d, n)))


def sparse_nullspace(columns: list[dict]) -> list[dict]:
    """Null space of the linear map sending basis vector j to ``columns[j]``.

    Each returned vector is a dict ``j -> (re, im)`` normalized to 1 at its
    free column.
    """
    out = []
    for idx in _components(columns):
        if len(idx) == 1 and vec_is_zero(columns[idx[0]]):
            out.append({idx[0]: (1, 0)})
            continue
        reduced, pivcols = _eliminate(columns, idx)
        pivset = set(pivcols)
        for f in range(len(idx)):
            if f in pivset:
                continue
            vec = {idx[f]: (1, 0)}
            for row, pc in zip(reduced, pivcols):
                c = row.get(f)
                if c:
                    vec[idx[pc]] = _gdiv((-c[0], -c[1]), row[pc])
            out.append(vec)
    return out


def sparse_rank(vectors: list[dict]) -> int:
    """Rank of a family of sparse Gaussian vectors."""
    total = 0
    for idx in _components(vectors):
        reduced, _ = _eliminate(vectors, idx)
        total += len(reduced)
    return total
