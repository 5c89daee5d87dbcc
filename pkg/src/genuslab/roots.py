"""Characteristic classes written in formal Chern roots.

Every root variable has cohomological degree 2, so a manifold of real
dimension ``2l`` carries polynomials of degree at most ``l``.  Classes are
dicts from exponent tuples to q-series; integration pairs the top-degree
part, rewritten in Pontryagin classes ``p_i = e_i(x_1^2, ..., x_l^2)``,
against a table of characteristic numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from math import factorial

from .errors import InputError, MissingPairing, NonPositiveWeight, NotACharacteristicClass
from .series import PuiseuxQSeries

__all__ = [
    "RootRing",
    "RootSeries",
    "LinearForm",
    "parse_root",
    "ManifoldData",
    "parse_pmonomial",
    "format_pmonomial",
    "product_manifold",
    "ahat_univariate",
    "ahat_class",
    "multiplicative_class",
    "chern_character",
    "ch_sym",
    "ch_wedge",
    "sqrt_det_ch",
    "integrate",
    "to_pontryagin",
]


@dataclass(frozen=True)
class RootRing:
    """Root variables plus the cohomological degree cap."""

    variables: tuple
    degree_cap: int

    @property
    def max_degree(self) -> int:
        return self.degree_cap // 2


def _ring(ring) -> RootRing:
    if isinstance(ring, RootRing):
        return ring
    if isinstance(ring, ManifoldData):
        return ring.ring
    variables, cap = ring
    return RootRing(tuple(variables), int(cap))


# -- linear forms ----------------------------------------------------------

LinearForm = tuple  # coefficients over RootRing.variables

_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_]\w*)?\s*")


def parse_root(text, variables) -> LinearForm:
    """Parse ``"x1"``, ``"-x2"``, ``"x1+x2"``, ``"2*x1 - x3"`` or ``"0"``."""
    variables = tuple(variables)
    coeffs = [Fraction(0)] * len(variables)
    if isinstance(text, (int, Fraction)):
        if text != 0:
            raise InputError(f"a root must be a linear form in {variables}, got {text}")
        return tuple(coeffs)
    s = str(text).strip()
    if not s:
        raise InputError("empty root expression")
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise InputError(f"cannot parse root {text!r}")
        sign, num, name = m.groups()
        if not first and not sign:
            raise InputError(f"cannot parse root {text!r}")
        if num is None and name is None:
            raise InputError(f"cannot parse root {text!r}")
        c = Fraction(num) if num else Fraction(1)
        if sign == "-":
            c = -c
        if name is None:
            if c != 0:
                raise InputError(f"constant term in root {text!r}")
        else:
            if name not in variables:
                raise InputError(f"unknown root variable {name!r} (known: {', '.join(variables) or 'none'})")
            coeffs[variables.index(name)] += c
        pos = m.end()
        first = False
    return tuple(coeffs)


# -- root series -----------------------------------------------------------


class RootSeries:
    """Truncated polynomial in the root variables with q-series coefficients."""

    __slots__ = ("ring", "terms", "order")

    def __init__(self, ring, terms: dict | None = None, order: int = 0):
        ring = _ring(ring)
        top = ring.max_degree
        terms = terms or {}
        # zero coefficients are dropped but still bound what is known
        if terms:
            order = min([order] + [c.bound for c in terms.values()])
            if order.denominator == 1:
                order = int(order)
        kept = {}
        for exps, c in terms.items():
            if len(exps) != len(ring.variables):
                raise ValueError("exponent tuple does not match the variables")
            if sum(exps) <= top and not c.is_zero():
                kept[tuple(exps)] = c if c.bound <= order else c.truncate_at(order)
        self.ring = ring
        self.terms = kept
        self.order = order

    @property
    def variables(self):
        return self.ring.variables

    @property
    def degree_cap(self):
        return self.ring.degree_cap

    @classmethod
    def constant(cls, ring, value, order: int) -> RootSeries:
        ring = _ring(ring)
        if not isinstance(value, PuiseuxQSeries):
            value = PuiseuxQSeries.constant(value, order)
        return cls(ring, {(0,) * len(ring.variables): value}, order)

    @classmethod
    def linear(cls, ring, form: LinearForm, order: int) -> RootSeries:
        ring = _ring(ring)
        n = len(ring.variables)
        terms = {}
        for i, c in enumerate(form):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = PuiseuxQSeries.constant(c, order)
        return cls(ring, terms, order)

    def coefficient(self, exps) -> PuiseuxQSeries:
        return self.terms.get(tuple(exps), PuiseuxQSeries.zero(self.order))

    def degree_part(self, degree: int) -> dict:
        """Terms of polynomial degree ``degree`` (cohomological 2*degree)."""
        return {e: c for e, c in self.terms.items() if sum(e) == degree}

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("root series live over different rings")

    def __add__(self, other):
        if not isinstance(other, RootSeries):
            other = RootSeries.constant(self.ring, other, self.order)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return RootSeries(self.ring, terms, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self):
        return RootSeries(self.ring, {e: -c for e, c in self.terms.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> RootSeries:
        if isinstance(factor, PuiseuxQSeries):
            return RootSeries(self.ring, {e: c * factor for e, c in self.terms.items()}, min(self.order, factor.order))
        return RootSeries(self.ring, {e: c.scale(factor) for e, c in self.terms.items()}, self.order)

    def __mul__(self, other):
        if not isinstance(other, RootSeries):
            return self.scale(other)
        self._check(other)
        top = self.ring.max_degree
        out: dict = {}
        right = [(e, sum(e), c) for e, c in other.terms.items()]
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, d2, c2 in right:
                if d1 + d2 > top:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                out[e] = out[e] + prod if e in out else prod
        return RootSeries(self.ring, out, min(self.order, other.order))

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        result = RootSeries.constant(self.ring, 1, self.order)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, RootSeries) or self.ring != other.ring:
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(self.coefficient(k) == other.coefficient(k) for k in keys)

    def __repr__(self):
        body = ", ".join(f"{e}: {c}" for e, c in sorted(self.terms.items()))
        return f"RootSeries({{{body}}}, cap={self.degree_cap})"


def _exp_powers(ring: RootRing, form: LinearForm, order: int) -> list:
    """[y^k / k! for k = 0..max_degree] as root series with constant coefficients."""
    y = RootSeries.linear(ring, form, order)
    out = [RootSeries.constant(ring, 1, order)]
    for k in range(1, ring.max_degree + 1):
        out.append((out[-1] * y).scale(Fraction(1, k)))
    return out


def _univariate_product(ring: RootRing, coeffs: list, order: int) -> RootSeries:
    """Prod_i f(x_i) for f = sum_k coeffs[k] x^k (coefficients are q-series)."""
    n = len(ring.variables)
    top = ring.max_degree
    terms = {(0,) * n: PuiseuxQSeries.one(order)}
    for i in range(n):
        new: dict = {}
        for e, c in terms.items():
            room = top - sum(e)
            for k in range(min(room, len(coeffs) - 1) + 1):
                ck = coeffs[k]
                if ck.is_zero():
                    continue
                e2 = e[:i] + (k,) + e[i + 1:]
                prod = c * ck
                new[e2] = new[e2] + prod if e2 in new else prod
        terms = new
    return RootSeries(ring, terms, order)


def multiplicative_class(ring, coeffs, order: int) -> RootSeries:
    """Multiplicative class Prod_i f(x_i) over the ring's variables.

    ``coeffs[k]`` is the coefficient of x^k in f, a rational or a q-series.
    """
    ring = _ring(ring)
    coeffs = [c if isinstance(c, PuiseuxQSeries) else PuiseuxQSeries.constant(c, order) for c in coeffs]
    return _univariate_product(ring, coeffs, order)


@lru_cache(maxsize=None)
def ahat_univariate(max_degree: int) -> tuple:
    """Taylor coefficients of (x/2)/sinh(x/2) through x^max_degree."""
    # sinh(x/2)/(x/2) = sum x^{2k} / (4^k (2k+1)!)
    s = [Fraction(0)] * (max_degree + 1)
    for k in range(0, max_degree // 2 + 1):
        s[2 * k] = Fraction(1, 4**k * factorial(2 * k + 1))
    inv = [Fraction(0)] * (max_degree + 1)
    inv[0] = Fraction(1)
    for n in range(1, max_degree + 1):
        inv[n] = -sum(s[k] * inv[n - k] for k in range(1, n + 1))
    return tuple(inv)


def ahat_class(M, order: int) -> RootSeries:
    """The A-hat class Prod_i (x_i/2)/sinh(x_i/2) over the tangent roots."""
    ring = _ring(M)
    coeffs = ahat_univariate(ring.max_degree)
    return multiplicative_class(ring, coeffs, order)


def _parse_roots(ring: RootRing, roots) -> list:
    return [r if isinstance(r, tuple) else parse_root(r, ring.variables) for r in roots]


def chern_character(roots, order: int, ring) -> RootSeries:
    """sum_j exp(y_j)."""
    ring = _ring(ring)
    total = RootSeries(ring, {}, order)
    for form in _parse_roots(ring, roots):
        for p in _exp_powers(ring, form, order):
            total = total + p
    return total


def ch_sym(weight: int, roots, order: int, ring) -> RootSeries:
    """ch of S_{q^w}(E) = prod_j (1 - q^w e^{y_j})^{-1}."""
    if weight <= 0:
        raise NonPositiveWeight(f"Sym_t needs t = q^w with w > 0, got w = {weight}")
    ring = _ring(ring)
    top = ring.max_degree
    # sum_m q^{wm} e^{my} = sum_k (y^k/k!) * sum_m m^k q^{wm}
    sums = []
    for k in range(top + 1):
        c = [Fraction(0)] * order
        for m in range(0, (order - 1) // weight + 1):
            c[m * weight] = Fraction(m**k) if (m or k == 0) else Fraction(0)
        sums.append(PuiseuxQSeries(c, 0, order))
    result = RootSeries.constant(ring, 1, order)
    for form in _parse_roots(ring, roots):
        if not any(form):
            result = result.scale(sums[0])
            continue
        factor = RootSeries(ring, {}, order)
        for k, p in enumerate(_exp_powers(ring, form, order)):
            factor = factor + p.scale(sums[k])
        result = result * factor
    return result


def ch_wedge(t, roots, order: int, ring) -> RootSeries:
    """ch of Lambda_t(E) = prod_j (1 + t e^{y_j}); t a q-series or rational."""
    ring = _ring(ring)
    if not isinstance(t, PuiseuxQSeries):
        t = PuiseuxQSeries.constant(t, order)
    one = RootSeries.constant(ring, 1, order)
    result = one
    for form in _parse_roots(ring, roots):
        e = RootSeries(ring, {}, order)
        for p in _exp_powers(ring, form, order):
            e = e + p
        result = result * (one + e.scale(t))
    return result


def sqrt_det_ch(roots, order: int, ring) -> RootSeries:
    """exp((sum_j y_j)/2), the Chern character of the square-root determinant."""
    ring = _ring(ring)
    forms = _parse_roots(ring, roots)
    total = tuple(sum((f[i] for f in forms), Fraction(0)) / 2 for i in range(len(ring.variables)))
    out = RootSeries(ring, {}, order)
    for p in _exp_powers(ring, total, order):
        out = out + p
    return out


# -- Pontryagin monomials ----------------------------------------------------

_PMONO = re.compile(r"^p(\d+)(?:\^(\d+))?$")


def parse_pmonomial(text) -> tuple:
    """``"p1^2"`` -> (2,), ``"p1*p2"`` -> (1, 1), ``"1"`` -> ()."""
    if isinstance(text, tuple):
        return _trim(text)
    s = str(text).replace(" ", "")
    if s == "1":
        return ()
    exps: dict[int, int] = {}
    for factor in s.split("*"):
        m = _PMONO.match(factor)
        if not m or int(m.group(1)) < 1:
            raise InputError(f"cannot parse Pontryagin monomial {text!r}")
        i = int(m.group(1))
        exps[i] = exps.get(i, 0) + int(m.group(2) or 1)
    out = [0] * max(exps)
    for i, a in exps.items():
        out[i - 1] = a
    return _trim(tuple(out))


def _trim(exps: tuple) -> tuple:
    exps = tuple(int(a) for a in exps)
    while exps and exps[-1] == 0:
        exps = exps[:-1]
    return exps


def format_pmonomial(exps: tuple) -> str:
    parts = [f"p{i + 1}" if a == 1 else f"p{i + 1}^{a}" for i, a in enumerate(exps) if a]
    return "*".join(parts) or "1"


def _pdegree(exps: tuple) -> int:
    return sum((i + 1) * a for i, a in enumerate(exps))


@dataclass(frozen=True)
class ManifoldData:
    """Formal closed manifold: dimension, tangent roots, characteristic numbers."""

    dim: int
    pairings: dict = field(default_factory=dict)
    tangent_roots: tuple = ()
    spin: bool = False
    p1_zero: bool = False
    name: str = ""

    def __post_init__(self):
        if self.dim < 0 or self.dim % 2:
            raise InputError(f"dimension must be even and nonnegative, got {self.dim}")
        l = self.dim // 2
        roots = tuple(self.tangent_roots) or tuple(f"x{i}" for i in range(1, l + 1))
        if len(roots) != l or len(set(roots)) != l:
            raise InputError(f"a {self.dim}-manifold needs {l} distinct tangent roots")
        table = {}
        for key, value in dict(self.pairings).items():
            mono = parse_pmonomial(key)
            if 4 * _pdegree(mono) != self.dim:
                raise InputError(
                    f"pairing {format_pmonomial(mono)} has degree {4 * _pdegree(mono)}, not {self.dim}"
                )
            if isinstance(value, float):
                raise InputError("characteristic numbers must be exact (use a string like '7/2')")
            try:
                table[mono] = Fraction(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise InputError(f"bad characteristic number {value!r}") from exc
        if self.dim == 0 and not table:
            table = {(): Fraction(1)}
        if self.p1_zero:
            for mono, value in table.items():
                if mono and mono[0] > 0 and value != 0:
                    raise InputError(f"p1_zero is set but {format_pmonomial(mono)} = {value}")
        object.__setattr__(self, "tangent_roots", roots)
        object.__setattr__(self, "pairings", table)

    @property
    def ring(self) -> RootRing:
        return RootRing(self.tangent_roots, self.dim)

    @property
    def tangent_bundle_roots(self) -> list:
        """Roots of the complexified tangent bundle, +-x_i."""
        out = []
        for r in self.tangent_roots:
            out += [r, f"-{r}"]
        return out

    @classmethod
    def point(cls) -> ManifoldData:
        return cls(0)

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.pairings.items())), self.tangent_roots, self.spin, self.p1_zero))


def product_manifold(m1: ManifoldData, m2: ManifoldData) -> ManifoldData:
    """M1 x M2, with characteristic numbers from p(M1 x M2) = p(M1) p(M2)."""
    l1, l2 = m1.dim // 2, m2.dim // 2
    roots = tuple(f"x{i}" for i in range(1, l1 + l2 + 1))
    table = {}
    for mono in _pmonomials((m1.dim + m2.dim) // 4):
        # group the root expansion by its M2 part; each group is symmetric in M1's roots
        groups: dict = {}
        for exps, c in _pmonomial_class(l1 + l2, mono).items():
            e1, e2 = exps[:l1], exps[l1:]
            if sum(e1) == l1:
                groups.setdefault(e2, {})[e1] = c
        outer = {}
        for e2, poly in groups.items():
            v = _pair_rational(m1, poly)
            if v:
                outer[e2] = v
        table[mono] = _pair_rational(m2, outer) if outer else Fraction(0)
    return ManifoldData(m1.dim + m2.dim, table, roots, m1.spin and m2.spin, m1.p1_zero and m2.p1_zero)


def _pair_rational(M: ManifoldData, poly: dict) -> Fraction:
    if M.dim == 0:
        return poly.get((), Fraction(0)) * M.pairings.get((), Fraction(0))
    total = Fraction(0)
    for mono, c in to_pontryagin(poly, M.dim // 2).items():
        if mono not in M.pairings:
            raise MissingPairing(format_pmonomial(mono))
        total += c * M.pairings[mono]
    return total


def _pmonomials(top: int) -> list:
    """All p-exponent tuples of weight ``top``."""
    return [_e_mono_for(lam) for lam in _partitions(top)]


def _e_mono_for(lam: tuple) -> tuple:
    """Exponents a_i = lam_i - lam_{i+1}: prod e_i^{a_i} has leading monomial u^lam."""
    lam = list(lam) + [0]
    return _trim(tuple(lam[i] - lam[i + 1] for i in range(len(lam) - 1)))


def _pmonomial_class(n: int, mono: tuple) -> dict:
    """Expansion of a p-monomial in root monomials of n variables."""
    return {tuple(2 * a for a in e): c for e, c in _e_expansion(n, mono)}


def _polymul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


# -- symmetric to Pontryagin ------------------------------------------------


@lru_cache(maxsize=None)
def _e_expansion(n: int, mono: tuple) -> tuple:
    """Monomial expansion of prod e_i(u)^{a_i} in n variables u."""
    poly = {(0,) * n: 1}
    for i, a in enumerate(mono):
        ek = {}
        for idx in combinations(range(n), i + 1):
            e = [0] * n
            for j in idx:
                e[j] = 1
            ek[tuple(e)] = 1
        for _ in range(a):
            poly = _polymul(poly, ek)
    return tuple(sorted(poly.items()))


def _partitions(n: int, largest: int | None = None) -> list:
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            out.append((k,) + rest)
    return out


@lru_cache(maxsize=None)
def _conversion_table(n: int, degree: int) -> dict:
    """m_lambda -> {p-monomial: coefficient} for partitions of ``degree``
    with at most n parts, by leading-term elimination in lex order."""
    parts = sorted(p for p in _partitions(degree) if len(p) <= n)
    table: dict = {}
    for lam in parts:
        mono = _e_mono_for(lam)
        expansion = dict(_e_expansion(n, mono))
        result = {mono: Fraction(1)}
        for mu in parts:
            if mu >= lam:
                break
            c = expansion.get(mu + (0,) * (n - len(mu)), 0)
            if c:
                for m2, c2 in table[mu].items():
                    result[m2] = result.get(m2, Fraction(0)) - c * c2
        table[lam] = {k: v for k, v in result.items() if v}
    return table


def to_pontryagin(top: dict, n: int) -> dict:
    """Rewrite an even symmetric homogeneous polynomial in the p-basis.

    ``top`` maps root exponent tuples to coefficients (rationals or
    q-series).  Returns p-exponent tuples -> coefficient.
    """
    if not top:
        return {}
    degrees = {sum(e) for e in top}
    if len(degrees) != 1:
        raise NotACharacteristicClass("class is not homogeneous")
    (deg,) = degrees
    for e, c in top.items():
        if any(a % 2 for a in e):
            raise NotACharacteristicClass(f"monomial {e} is odd in some root")
        for other in set(permutations(e)):
            oc = top.get(other)
            if oc is None or oc != c:
                raise NotACharacteristicClass(f"class is not symmetric in the roots ({e} vs {other})")
    table = _conversion_table(n, deg // 2)
    out: dict = {}
    for e, c in top.items():
        u = tuple(a // 2 for a in e)
        if list(u) != sorted(u, reverse=True):
            continue
        for mono, k in table[tuple(a for a in u if a)].items():
            term = c * k
            out[mono] = out[mono] + term if mono in out else term
    return {m: c for m, c in out.items() if c != 0}


def integrate(M: ManifoldData, c: RootSeries) -> PuiseuxQSeries:
    """Pair the top-degree part of ``c`` with the characteristic numbers of M."""
    l = M.dim // 2
    top = c.degree_part(l)
    result = PuiseuxQSeries.zero(c.order)
    if l == 0:
        return top[()].scale(M.pairings.get((), Fraction(0))) if top else result
    for mono, series in to_pontryagin(top, l).items():
        if mono not in M.pairings:
            raise MissingPairing(format_pmonomial(mono))
        result = result + series.scale(M.pairings[mono])
    return result
