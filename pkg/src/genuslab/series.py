"""Exact truncated q-series with a rational exponent offset.

A :class:`PuiseuxQSeries` stores ``coeffs[n]`` for the exponent
``offset + n`` and knows every coefficient strictly below
``q**(offset + order)``.  Offsets are multiples of 1/24, enough for
``q**(c1/2)`` and the eta prefactor ``q**(d/24)``.

Also here: Bernoulli numbers, divisor sums, Eisenstein series, powers of
the Dedekind eta function and fitting against the ring of modular forms
generated by E4 and E6.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import IncompatibleOffsets, InvalidWeight, NeedMoreOrder, NotInvertible
from .linalg import solve_rational

__all__ = [
    "PuiseuxQSeries",
    "qs_arith",
    "bernoulli",
    "sigma",
    "eisenstein",
    "normalized_eisenstein",
    "eta_power",
    "FitReport",
    "modular_fit",
]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


class PuiseuxQSeries:
    """Immutable truncated series ``sum_n coeffs[n] q**(offset + n)``."""

    __slots__ = ("offset", "coeffs", "order")

    def __init__(self, coeffs=(), offset=0, order: int | None = None):
        offset = _frac(offset)
        if (offset * 24).denominator != 1:
            raise ValueError(f"offset {offset} is not a multiple of 1/24")
        coeffs = tuple(_frac(c) for c in coeffs)
        if order is None:
            order = len(coeffs)
        if order < 0:
            order = 0
        if len(coeffs) < order:
            coeffs = coeffs + (Fraction(0),) * (order - len(coeffs))
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "coeffs", coeffs[:order])
        object.__setattr__(self, "order", int(order))

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxQSeries is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, order: int, offset=0) -> PuiseuxQSeries:
        return cls((), offset, order)

    @classmethod
    def constant(cls, value, order: int) -> PuiseuxQSeries:
        return cls((value,), 0, order)

    @classmethod
    def one(cls, order: int) -> PuiseuxQSeries:
        return cls((1,), 0, order)

    @classmethod
    def monomial(cls, exponent, order: int, coefficient=1) -> PuiseuxQSeries:
        """``coefficient * q**exponent`` known up to relative order ``order``."""
        return cls((coefficient,), exponent, order)

    @classmethod
    def from_dict(cls, terms: dict, order: int | None = None) -> PuiseuxQSeries:
        """Build from ``{exponent: coefficient}``; exponents must differ by integers."""
        terms = {_frac(e): _frac(c) for e, c in terms.items() if c != 0}
        if not terms:
            return cls.zero(order or 0)
        low = min(terms)
        span = max(terms) - low
        if span.denominator != 1:
            raise IncompatibleOffsets("exponents do not differ by integers")
        coeffs = [Fraction(0)] * (int(span) + 1)
        for e, c in terms.items():
            coeffs[int(e - low)] = c
        return cls(coeffs, low, len(coeffs) if order is None else order)

    # -- inspection ---------------------------------------------------
    @property
    def bound(self) -> Fraction:
        """Absolute exponent below which every coefficient is known."""
        return self.offset + self.order

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def coefficient(self, exponent) -> Fraction:
        exponent = _frac(exponent)
        rel = exponent - self.offset
        if exponent >= self.bound:
            raise IndexError(f"coefficient of q^{exponent} is beyond the truncation")
        if rel < 0 or rel.denominator != 1:
            return Fraction(0)
        return self.coeffs[int(rel)]

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        """Nonzero ``(exponent, coefficient)`` pairs in increasing order."""
        return [(self.offset + n, c) for n, c in enumerate(self.coeffs) if c]

    def valuation(self):
        """Exponent of the first nonzero coefficient, or None for zero."""
        for n, c in enumerate(self.coeffs):
            if c:
                return self.offset + n
        return None

    def normalized(self) -> PuiseuxQSeries:
        """Same data with leading zero coefficients stripped."""
        v = self.valuation()
        if v is None:
            return PuiseuxQSeries.zero(0)
        k = int(v - self.offset)
        return PuiseuxQSeries(self.coeffs[k:], v, self.order - k)

    def truncate(self, order: int) -> PuiseuxQSeries:
        return PuiseuxQSeries(self.coeffs, self.offset, min(order, self.order))

    def truncate_at(self, exponent) -> PuiseuxQSeries:
        """Keep coefficients with absolute exponent strictly below ``exponent``."""
        rel = _frac(exponent) - self.offset
        return self.truncate(max(0, int(rel) if rel.denominator == 1 else int(rel) + 1))

    def agrees_with(self, other: PuiseuxQSeries, through=None) -> bool:
        """Coefficient-wise agreement on every commonly known exponent (<= through)."""
        return self.first_difference(other, through) is None

    def first_difference(self, other: PuiseuxQSeries, through=None):
        if (self.offset - other.offset).denominator != 1:
            raise IncompatibleOffsets(f"{self.offset} vs {other.offset}")
        low = min(self.offset, other.offset)
        high = min(self.bound, other.bound)
        if through is not None:
            high = min(high, _frac(through) + 1)
        e = low
        while e < high:
            a = self.coefficient(e) if e >= self.offset else Fraction(0)
            b = other.coefficient(e) if e >= other.offset else Fraction(0)
            if a != b:
                return e, a, b
            e += 1
        return None

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other) -> PuiseuxQSeries:
        if isinstance(other, PuiseuxQSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PuiseuxQSeries.constant(other, self.order + int(max(self.offset, 0)) + 1)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if (self.offset - other.offset).denominator != 1:
            raise IncompatibleOffsets(f"cannot add offsets {self.offset} and {other.offset}")
        low = min(self.offset, other.offset)
        bound = min(self.bound, other.bound)
        order = max(0, int(bound - low))
        out = [Fraction(0)] * order
        for s in (self, other):
            shift = int(s.offset - low)
            for n, c in enumerate(s.coeffs):
                if c and n + shift < order:
                    out[n + shift] += c
        return PuiseuxQSeries(out, low, order)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxQSeries([-c for c in self.coeffs], self.offset, self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> PuiseuxQSeries:
        factor = _frac(factor)
        return PuiseuxQSeries([factor * c for c in self.coeffs], self.offset, self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, PuiseuxQSeries):
            return NotImplemented
        order = min(self.order, other.order)
        out = [Fraction(0)] * order
        b = other.coeffs
        for i, a in enumerate(self.coeffs[:order]):
            if a:
                for j in range(order - i):
                    if b[j]:
                        out[i + j] += a * b[j]
        return PuiseuxQSeries(out, self.offset + other.offset, order)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def inverse(self) -> PuiseuxQSeries:
        if not self.coeffs or self.coeffs[0] == 0:
            raise NotInvertible("leading coefficient is zero")
        a = self.coeffs
        order = self.order
        inv0 = 1 / a[0]
        out = [Fraction(0)] * order
        out[0] = inv0
        for n in range(1, order):
            acc = Fraction(0)
            for k in range(1, n + 1):
                if a[k]:
                    acc += a[k] * out[n - k]
            out[n] = -acc * inv0
        return PuiseuxQSeries(out, -self.offset, order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / _frac(other))
        return self * other.inverse()

    def __pow__(self, exponent: int) -> PuiseuxQSeries:
        if not isinstance(exponent, int):
            raise TypeError("only integer powers are supported")
        base = self if exponent >= 0 else self.inverse()
        n = abs(exponent)
        result = PuiseuxQSeries.one(self.order)
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exponent) -> PuiseuxQSeries:
        """Multiply by ``q**exponent``."""
        return PuiseuxQSeries(self.coeffs, self.offset + _frac(exponent), self.order)

    def substitute(self, m: int) -> PuiseuxQSeries:
        """The series in ``q**m`` (for a positive integer m)."""
        if m < 1:
            raise ValueError("substitution exponent must be a positive integer")
        out = [Fraction(0)] * (self.order * m)
        for n, c in enumerate(self.coeffs):
            out[n * m] = c
        return PuiseuxQSeries(out, self.offset * m, self.order * m)

    # -- comparison / display ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PuiseuxQSeries.constant(other, self.order)
        if not isinstance(other, PuiseuxQSeries):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        a, b = self.normalized(), other.normalized()
        return a.offset == b.offset and a.coeffs == b.coeffs and a.order == b.order

    def __hash__(self):
        if self.is_zero():
            return hash(0)
        n = self.normalized()
        return hash((n.offset, n.coeffs, n.order))

    def __repr__(self):
        return f"PuiseuxQSeries({[str(c) for c in self.coeffs]}, offset={self.offset}, order={self.order})"

    def __str__(self):
        return self.to_text()

    def to_text(self, variable: str = "q") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.terms():
            mono = _power(variable, e)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return f"{text} + O({_power(variable, self.bound)})"

    def to_json(self) -> dict:
        return {
            "offset": str(self.offset),
            "coeffs": [str(c) for c in self.coeffs],
            "order": self.order,
        }

    @classmethod
    def from_json(cls, data: dict) -> PuiseuxQSeries:
        return cls([Fraction(c) for c in data["coeffs"]], Fraction(data["offset"]), int(data["order"]))


def _power(variable: str, exponent: Fraction) -> str:
    if exponent == 0:
        return "1"
    if exponent == 1:
        return variable
    if exponent.denominator == 1:
        return f"{variable}^{exponent}"
    return f"{variable}^({exponent})"


def qs_arith(a: PuiseuxQSeries, b, op: str) -> PuiseuxQSeries:
    """Dispatch ``add``/``mul``/``neg``/``pow``; for ``pow`` b is an integer."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "pow":
        return a**b
    raise ValueError(f"unknown operation {op!r}")


# -- number theory ---------------------------------------------------

_bernoulli_table = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < len(_bernoulli_table):
        return _bernoulli_table[n]
    with _bernoulli_lock:
        table = list(_bernoulli_table)
        for m in range(len(table), n + 1):
            acc = sum(comb(m + 1, k) * table[k] for k in range(m))
            table.append(-acc / (m + 1))
        if len(table) > len(_bernoulli_table):
            _bernoulli_table[:] = table
        return table[n]


def sigma(k: int, n: int) -> int:
    """Divisor power sum sum_{d | n} d**k."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
        d += 1
    return total


def eisenstein(weight: int, order: int) -> PuiseuxQSeries:
    """G_{2k} = -B_{2k}/(4k) + sum_{n>=1} sigma_{2k-1}(n) q^n."""
    if weight < 2 or weight % 2:
        raise InvalidWeight(f"weight must be even and >= 2, got {weight}")
    k = weight // 2
    coeffs = [-bernoulli(weight) / (4 * k)]
    coeffs += [Fraction(sigma(weight - 1, n)) for n in range(1, order)]
    return PuiseuxQSeries(coeffs, 0, order)


def normalized_eisenstein(weight: int, order: int) -> PuiseuxQSeries:
    """E_{2k} with constant term 1."""
    g = eisenstein(weight, order)
    return g.scale(1 / g.coeffs[0]) if order else g


def eta_power(d: int, order: int) -> PuiseuxQSeries:
    """eta(q)**d = q**(d/24) prod_{n>=1} (1 - q**n)**d, truncated."""
    if order < 1:
        raise ValueError("order must be >= 1")
    base = [Fraction(0)] * order
    base[0] = Fraction(1)
    if d > 0:
        for n in range(1, order):
            for _ in range(d):
                for m in range(order - 1, n - 1, -1):
                    base[m] -= base[m - n]
    elif d < 0:
        for n in range(1, order):
            for _ in range(-d):
                for m in range(n, order):
                    base[m] += base[m - n]
    return PuiseuxQSeries(base, Fraction(d, 24), order)


@dataclass(frozen=True)
class FitReport:
    weight: int
    member: bool
    coordinates: dict = field(default_factory=dict)
    basis: tuple = ()
    checked_through: int = 0

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "member": self.member,
            "basis": list(self.basis),
            "coordinates": {k: str(v) for k, v in self.coordinates.items()} if self.member else None,
            "checked_through": self.checked_through,
        }


def _basis_label(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("E4" if a == 1 else f"E4^{a}")
    if b:
        parts.append("E6" if b == 1 else f"E6^{b}")
    return "*".join(parts) or "1"


def modular_fit(s: PuiseuxQSeries, weight: int) -> FitReport:
    """Coordinates of ``s`` in the monomial basis E4^a E6^b of weight ``weight``.

    Non-membership is certified by inconsistency of the exact linear system
    built from every known coefficient of ``s``.
    """
    if weight < 0 or weight % 2:
        raise InvalidWeight(f"weight must be even and >= 0, got {weight}")
    if s.offset != 0:
        raise ValueError("modular fitting needs a series with offset 0")
    exps = [(a, b) for b in range(weight // 6 + 1) for a in range(weight // 4 + 1) if 4 * a + 6 * b == weight]
    exps.sort(reverse=True)
    labels = tuple(_basis_label(a, b) for a, b in exps)
    required = len(exps) + 1
    if s.order < required:
        raise NeedMoreOrder(required, s.order)
    order = s.order
    if not exps:
        return FitReport(weight, s.is_zero(), {}, labels, order)
    e4 = normalized_eisenstein(4, order)
    e6 = normalized_eisenstein(6, order)
    columns = [(e4**a) * (e6**b) for a, b in exps]
    rows = [[col.coeffs[n] for col in columns] for n in range(order)]
    solution = solve_rational(rows, list(s.coeffs))
    if solution is None:
        return FitReport(weight, False, {}, labels, order)
    return FitReport(weight, True, dict(zip(labels, solution)), labels, order)
