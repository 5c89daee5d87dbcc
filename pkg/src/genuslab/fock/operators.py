"""Exact operators on Fock spaces.

An operator is a linear combination of words (see ``genuslab.kernels``)
with Gaussian-rational coefficients, or, when expanding would blow up, a
lazy product of such combinations.  Operators act on the untruncated
polynomial ring; ``matrix`` and the identity checks restrict to a basis.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .. import kernels
from ..errors import InputError, InvalidStructureConstants, SpecMismatch, UnknownMode
from ..linalg import GaussianRational, vec_add, vec_clean
from .space import FockSpace, Layout

__all__ = [
    "FockOperator",
    "identity",
    "oscillator",
    "clifford_generator",
    "graded_commutator",
    "normal_order",
    "assemble_global",
    "GLOBAL_KINDS",
    "connection_action",
    "dirac_base_term",
]

EXPAND_LIMIT = 4096


def _gq(c) -> GaussianRational:
    return GaussianRational.coerce(c)


class FockOperator:
    """Sparse exact operator with a Z/2 parity."""

    __slots__ = ("layout", "parity", "terms", "factors", "_packed", "_cache")

    def __init__(self, layout: Layout, terms=None, parity: int = 0, factors=None):
        self.layout = layout
        self.parity = parity & 1
        self.factors = factors  # lazy product (left to right) when not None
        if factors is None:
            clean = {}
            for w, c in (terms or {}).items():
                c = _gq(c)
                if c:
                    clean[tuple(w)] = c
            self.terms = clean
        else:
            self.terms = None
        self._packed = None
        self._cache = {}

    # -- evaluation ----------------------------------------------------
    def _pack(self):
        if self._packed is None:
            words = list(self.terms)
            den = 1
            for c in self.terms.values():
                den = lcm(den, c.re.denominator, c.im.denominator)
            re = [int(self.terms[w].re * den) for w in words]
            im = [int(self.terms[w].im * den) for w in words]
            self._packed = (words, re, im, den)
        return self._packed

    def apply_state(self, state: tuple) -> dict:
        """Image of a basis monomial as {state: (re, im)}."""
        hit = self._cache.get(state)
        if hit is not None:
            return hit
        if self.factors is not None:
            vec = {state: (1, 0)}
            for f in reversed(self.factors):
                vec = f.apply(vec)
            out = vec
        else:
            words, re, im, den = self._pack()
            raw = kernels.apply_terms(words, re, im, state)
            if den == 1:
                out = {t: (v[0], v[1]) for t, v in raw.items()}
            else:
                out = {t: (_q(v[0], den), _q(v[1], den)) for t, v in raw.items()}
        self._cache[state] = out
        return out

    def apply(self, vec: dict) -> dict:
        acc: dict = {}
        for s, (cr, ci) in vec.items():
            if cr or ci:
                vec_add(acc, self.apply_state(s), cr, ci)
        return vec_clean(acc)

    def clear_cache(self):
        self._cache = {}

    def expanded(self) -> FockOperator:
        """Word expansion of a lazy product."""
        if self.factors is None:
            return self
        out = self.factors[-1].expanded()
        for f in reversed(self.factors[:-1]):
            out = _compose_terms(f.expanded(), out)
        return out

    # -- algebra -------------------------------------------------------
    def _same(self, other):
        if self.layout != other.layout:
            raise InputError("operators live on different Fock layouts")

    def __add__(self, other):
        if not isinstance(other, FockOperator):
            other = identity(self.layout) * other
        self._same(other)
        if self.parity != other.parity and not (self.is_zero_symbolic() or other.is_zero_symbolic()):
            raise InputError("adding operators of different parity")
        a, b = self.expanded(), other.expanded()
        terms = dict(a.terms)
        for w, c in b.terms.items():
            terms[w] = terms[w] + c if w in terms else c
        parity = self.parity if not self.is_zero_symbolic() else other.parity
        return FockOperator(self.layout, terms, parity)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FockOperator):
            return self @ other
        c = _gq(other)
        if self.factors is not None:
            return FockOperator(self.layout, parity=self.parity, factors=[self.factors[0] * c] + self.factors[1:])
        return FockOperator(self.layout, {w: v * c for w, v in self.terms.items()}, self.parity)

    def __rmul__(self, other):
        return self * other

    def __matmul__(self, other):
        self._same(other)
        size = self.size() * other.size()
        if self.factors is None and other.factors is None and size <= EXPAND_LIMIT:
            return _compose_terms(self, other)
        left = self.factors if self.factors is not None else [self]
        right = other.factors if other.factors is not None else [other]
        return FockOperator(self.layout, parity=self.parity + other.parity, factors=left + right)

    def size(self) -> int:
        if self.factors is None:
            return len(self.terms)
        n = 1
        for f in self.factors:
            n *= f.size()
        return n

    def is_zero_symbolic(self) -> bool:
        return self.factors is None and not self.terms

    def __repr__(self):
        kind = "lazy product" if self.factors is not None else f"{len(self.terms)} words"
        return f"FockOperator({kind}, parity={self.parity})"

    # -- restriction to a basis ----------------------------------------
    def matrix(self, space: FockSpace) -> dict:
        """{(row, col): GaussianRational}; the operator must preserve the truncation."""
        out = {}
        for j, s in enumerate(space.basis):
            for t, (re, im) in self.apply_state(s).items():
                i = space.index.get(t)
                if i is None:
                    raise InputError("operator leaves the truncated space; matrix() is undefined")
                out[(i, j)] = GaussianRational(re, im)
        return out

    def preserves(self, states) -> bool:
        states = list(states)
        inside = set(states)
        return all(t in inside for s in states for t in self.apply_state(s))

    def defect_states(self, states, scalar=0) -> list:
        """Basis states on which the operator differs from scalar * Id."""
        states = list(states)
        c = _gq(scalar)
        if self.factors is None:
            words, re, im, den = self._pack()
            cre, cim = c.re * den, c.im * den
            if cre.denominator == 1 and cim.denominator == 1:
                bad = kernels.zero_defect(words, re, im, states, int(cre), int(cim))
                return [states[i] for i in bad]
        bad = []
        for s in states:
            img = dict(self.apply_state(s))
            v = img.pop(s, (0, 0))
            if v[0] != c.re or v[1] != c.im or any(a or b for a, b in img.values()):
                bad.append(s)
        return bad

    def equals_scalar_on(self, states, scalar=0) -> bool:
        return not self.defect_states(states, scalar)

    def equals_on(self, other: FockOperator, states) -> bool:
        return (self - other).equals_scalar_on(states, 0)


def _q(num: int, den: int):
    f = Fraction(num, den)
    return f.numerator if f.denominator == 1 else f


def _compose_terms(a: FockOperator, b: FockOperator) -> FockOperator:
    terms: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = w1 + w2
            c = c1 * c2
            terms[w] = terms[w] + c if w in terms else c
    return FockOperator(a.layout, terms, a.parity + b.parity)


def identity(layout) -> FockOperator:
    layout = _layout(layout)
    return FockOperator(layout, {(): 1}, 0)


def _layout(x) -> Layout:
    return x.layout if isinstance(x, FockSpace) else x


def graded_commutator(a: FockOperator, b: FockOperator) -> FockOperator:
    """[a, b] = ab - (-1)^{p(a)p(b)} ba."""
    sign = -1 if (a.parity and b.parity) else 1
    return a @ b - (b @ a) * sign


# -- oscillators -----------------------------------------------------------

I = GaussianRational(0, 1)

KIND_ALIASES = {"a": "a", "alpha": "a", "b": "b", "beta": "b", "psi": "psi", "ψ": "psi"}


def _slot_or_raise(layout: Layout, r: int, k: int) -> int:
    s = layout.slot(r, k)
    if s < 0:
        raise UnknownMode(f"no oscillator slot for mode {r}, direction {k}")
    return s


def oscillator(space, kind: str, signed_weight: int, direction: int = 0) -> FockOperator:
    """a_{+r} = i d'_zbar, a_{-r} = i(d'_z - r zbar), b_{+r} = i d'_z,
    b_{-r} = i(d'_zbar - r z), psi_{+r} = contraction, psi_{-r} = wedge."""
    lay = _layout(space)
    kind = KIND_ALIASES.get(kind)
    if kind is None or signed_weight == 0:
        raise UnknownMode(f"unknown oscillator {kind!r}_{signed_weight}")
    r = abs(signed_weight)
    s = _slot_or_raise(lay, r, direction)
    z, zb, ps = lay.z(s), lay.zbar(s), lay.psi(s)
    if kind == "a":
        terms = {(1, zb): I} if signed_weight > 0 else {(1, z): I, (0, zb): I * (-r)}
    elif kind == "b":
        terms = {(1, z): I} if signed_weight > 0 else {(1, zb): I, (0, z): I * (-r)}
    else:
        terms = {(3, ps): 1} if signed_weight > 0 else {(2, ps): 1}
    return FockOperator(lay, terms, 1 if kind == "psi" else 0)


def multiplication(space, r: int, k: int = 0, conjugate: bool = False) -> FockOperator:
    lay = _layout(space)
    s = _slot_or_raise(lay, r, k)
    return FockOperator(lay, {(0, lay.zbar(s) if conjugate else lay.z(s)): 1}, 0)


def derivative(space, r: int, k: int = 0, conjugate: bool = False) -> FockOperator:
    """The plain derivative d'_z (or d'_zbar)."""
    lay = _layout(space)
    s = _slot_or_raise(lay, r, k)
    return FockOperator(lay, {(1, lay.zbar(s) if conjugate else lay.z(s)): 1}, 0)


def clifford_generator(space, i: int) -> FockOperator:
    """gamma_{2j} = i(f_j + f_j^*), gamma_{2j+1} = f_j - f_j^*; both square to -1."""
    lay = _layout(space)
    if not 0 <= i < 2 * lay.clifford_rank:
        raise InputError(f"Clifford generator index {i} out of range for rank {lay.clifford_rank}")
    j = i // 2
    if i % 2 == 0:
        terms = {(3, j): I, (2, j): I}
    else:
        terms = {(3, j): 1, (2, j): -1}
    return FockOperator(lay, terms, 1)


# -- normal ordering -------------------------------------------------------

def normal_order(space, word) -> FockOperator:
    """:x1 x2 ... xn: for descriptors (kind, signed_weight, direction).

    Annihilators (positive weight) move to the right, keeping relative
    order; each transposition of two fermions contributes a sign.
    """
    descs = [tuple(d) if len(d) == 3 else (d[0], d[1], 0) for d in word]
    odd = [KIND_ALIASES.get(d[0]) == "psi" for d in descs]
    ann = [d[1] > 0 for d in descs]
    sign = 1
    n = len(descs)
    for i in range(n):
        for j in range(i + 1, n):
            if ann[i] and not ann[j] and odd[i] and odd[j]:
                sign = -sign
    order = [i for i in range(n) if not ann[i]] + [i for i in range(n) if ann[i]]
    lay = _layout(space)
    out = identity(lay)
    for i in order:
        out = out @ oscillator(lay, *descs[i])
    return out * sign


# -- global operators --------------------------------------------------------

GLOBAL_KINDS = ("Q_flat", "Q_R_flat", "L_alpha", "L_beta", "L_psi", "L_K", "K", "Kprime", "dKprime", "P")


def _zero(lay, parity=0) -> FockOperator:
    return FockOperator(lay, {}, parity)


def _sum(ops, lay, parity=0) -> FockOperator:
    total = _zero(lay, parity)
    for op in ops:
        total = total + op
    return total


def assemble_global(space: FockSpace, kind: str) -> FockOperator:
    lay = space.layout
    spec = space.spec
    osc = lambda k, w, d: oscillator(lay, k, w, d)  # noqa: E731
    slots = lay.slots
    if kind in ("Q_R_flat", "P") and not spec.is_ramond:
        raise SpecMismatch(f"{kind} needs the Ramond profile: modes n = 1..cutoff with multiplicity 2l")
    if kind == "Q_flat":
        return _sum(
            (osc("psi", r, k) @ osc("a", -r, k) + osc("psi", -r, k) @ osc("a", r, k) for r, k in slots), lay, 1
        )
    if kind == "Q_R_flat":
        return _sum(
            (
                normal_order(lay, [("psi", r, k), ("a", -r, k)]) + normal_order(lay, [("psi", -r, k), ("a", r, k)])
                for r, k in slots
            ),
            lay,
            1,
        )
    if kind == "L_alpha":
        return _sum((osc("a", -r, k) @ osc("a", r, k) for r, k in slots), lay)
    if kind == "L_beta":
        return _sum((osc("b", -r, k) @ osc("b", r, k) for r, k in slots), lay)
    if kind == "L_psi":
        return _sum((osc("psi", -r, k) @ osc("psi", r, k) * r for r, k in slots), lay)
    if kind == "L_K":
        rest = assemble_global(space, "L_beta") - assemble_global(space, "L_alpha") - assemble_global(space, "L_psi")
        return identity(lay) * Fraction(spec.c1, 2) + rest
    if kind == "P":
        rest = assemble_global(space, "L_beta") - assemble_global(space, "L_alpha") - assemble_global(space, "L_psi")
        return rest - identity(lay) * Fraction(2 * spec.clifford_rank, 24)
    if kind == "K":
        # r (z d_z - zbar d_zbar) with the shifted derivatives d_z = d'_z - (r/2) zbar
        ops = []
        for r, k in slots:
            z, zb = multiplication(lay, r, k), multiplication(lay, r, k, True)
            dz = derivative(lay, r, k) - zb * Fraction(r, 2)
            dzb = derivative(lay, r, k, True) - z * Fraction(r, 2)
            ops.append((z @ dz - zb @ dzb) * r)
        return _sum(ops, lay)
    if kind == "Kprime":
        ops = []
        for r, k in slots:
            z, zb = multiplication(lay, r, k), multiplication(lay, r, k, True)
            ops.append((z @ osc("psi", -r, k) - zb @ osc("psi", r, k)) * r)
        return _sum(ops, lay, 1)
    if kind == "dKprime":
        ops = []
        for r, k in slots:
            p, m = osc("psi", r, k), osc("psi", -r, k)
            ops.append((p @ m - m @ p) * r)
        return _sum(ops, lay)
    raise InputError(f"unknown global operator {kind!r}; choose from {', '.join(GLOBAL_KINDS)}")


# -- structure-constant connection ---------------------------------------------

def _check_structure_constants(lay: Layout, w: dict) -> dict:
    nbase = 2 * lay.clifford_rank
    dims = {}
    for r, k in lay.slots:
        dims[r] = max(dims.get(r, 0), k + 1)
    clean = {}
    for r, table in w.items():
        if r not in dims:
            raise UnknownMode(f"structure constants given for undeclared mode {r}")
        d = dims[r]
        if len(table) != nbase or any(len(row) != d or any(len(x) != d for x in row) for row in table):
            raise InvalidStructureConstants(f"w({r}) must have shape ({nbase}, {d}, {d})")
        t = [[[Fraction(x) for x in row] for row in block] for block in table]
        for i in range(nbase):
            for j in range(d):
                for k in range(d):
                    if t[i][j][k] != -t[i][k][j]:
                        raise InvalidStructureConstants(f"w_{i}{j}^{k}({r}) is not antisymmetric in (j, k)")
        clean[r] = t
    return clean


def connection_action(space, w: dict) -> list:
    """D_i = sum_r w_ij^k(r) (z^k d_{z^j} + zbar^k d_{zbar^j} + psibar^k i^j), i < 2l.

    ``w[r][i][j][k]`` are real rationals antisymmetric in (j, k).
    """
    lay = _layout(space)
    w = _check_structure_constants(lay, w)
    out = []
    for i in range(2 * lay.clifford_rank):
        terms: dict = {}
        for r, table in w.items():
            d = len(table[i])
            for j in range(d):
                sj = lay.slot(r, j)
                for k in range(d):
                    c = table[i][j][k]
                    if not c:
                        continue
                    sk = lay.slot(r, k)
                    for word in (
                        (0, lay.z(sk), 1, lay.z(sj)),
                        (0, lay.zbar(sk), 1, lay.zbar(sj)),
                        (2, lay.psi(sk), 3, lay.psi(sj)),
                    ):
                        terms[word] = terms.get(word, 0) + c
        out.append(FockOperator(lay, terms, 0))
    return out


def dirac_base_term(space, connection: list) -> FockOperator:
    """sum_i psi_0(e_i) D_i."""
    lay = _layout(space)
    return _sum((clifford_generator(lay, i) @ d for i, d in enumerate(connection)), lay, 1)
