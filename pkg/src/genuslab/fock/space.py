"""Truncated Fock spaces: basis enumeration, grading and the Hermitian form.

Each (mode r, direction k) pair is a slot carrying a complex variable z,
its conjugate zbar and one exterior generator psibar.  A Clifford module of
rank l contributes l fermion modes.  State tuples are laid out as

    [clifford bits (l)] [psibar bits (S)] [z exponents (S)] [zbar exponents (S)]

so every fermion sits in a prefix and Jordan-Wigner signs are prefix sums.
The level of a state is sum_slots r * (z + zbar + psibar).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from math import factorial

from ..errors import CapacityExceeded, InputError
from ..linalg import GaussianRational

__all__ = ["ModeSpec", "FockSpace", "build_space", "MAX_STATES"]

MAX_STATES = 250_000


@dataclass(frozen=True)
class ModeSpec:
    modes: tuple = ()
    clifford_rank: int = 0
    level_cutoff: int = 0

    def __post_init__(self):
        modes = tuple((int(r), int(d)) for r, d in self.modes)
        weights = [r for r, _ in modes]
        if len(set(weights)) != len(weights):
            raise InputError(f"mode weights must be distinct, got {weights}")
        if any(r < 1 or d < 1 for r, d in modes):
            raise InputError("mode weights and multiplicities must be positive")
        if self.clifford_rank < 0 or self.level_cutoff < 0:
            raise InputError("clifford_rank and level_cutoff must be nonnegative")
        object.__setattr__(self, "modes", modes)

    @classmethod
    def ramond(cls, l: int, cutoff: int) -> ModeSpec:
        """Modes n = 1..cutoff, each with multiplicity 2l, and a rank-l Clifford module."""
        modes = tuple((n, 2 * l) for n in range(1, cutoff + 1)) if l else ()
        return cls(modes, l, cutoff)

    @property
    def is_ramond(self) -> bool:
        return self == ModeSpec.ramond(self.clifford_rank, self.level_cutoff)

    @property
    def c1(self) -> int:
        return sum(r * d for r, d in self.modes)

    def with_cutoff(self, cutoff: int) -> ModeSpec:
        return ModeSpec(self.modes, self.clifford_rank, cutoff)


@dataclass(frozen=True)
class Layout:
    """Slot bookkeeping shared by a space and every operator on it."""

    clifford_rank: int
    slots: tuple  # ((r, k), ...)

    @property
    def nslots(self) -> int:
        return len(self.slots)

    @property
    def nfermions(self) -> int:
        return self.clifford_rank + len(self.slots)

    @property
    def width(self) -> int:
        return self.clifford_rank + 3 * len(self.slots)

    def slot(self, r: int, k: int) -> int:
        try:
            return self.slots.index((r, k))
        except ValueError:
            return -1

    def psi(self, s: int) -> int:
        return self.clifford_rank + s

    def z(self, s: int) -> int:
        return self.clifford_rank + len(self.slots) + s

    def zbar(self, s: int) -> int:
        return self.clifford_rank + 2 * len(self.slots) + s

    def weights(self) -> list:
        return [r for r, _ in self.slots]

    def level(self, state: tuple) -> int:
        l, n = self.clifford_rank, len(self.slots)
        return sum(
            r * (state[l + s] + state[l + n + s] + state[l + 2 * n + s]) for s, (r, _) in enumerate(self.slots)
        )

    def parity(self, state: tuple) -> int:
        return sum(state[: self.nfermions]) & 1

    def key(self, state: tuple) -> tuple:
        """States with different keys are orthogonal."""
        l, n = self.clifford_rank, len(self.slots)
        return state[: l + n] + tuple(state[l + n + s] - state[l + 2 * n + s] for s in range(n))

    def gram_entry(self, a: tuple, b: tuple) -> Fraction:
        """(e_a, e_b): orthonormal fermions; per slot
        (z^k zbar^s, z^m zbar^t) = delta_{k+t, m+s} (k+t)! / r^(k+t)."""
        l, n = self.clifford_rank, len(self.slots)
        if a[: l + n] != b[: l + n]:
            return Fraction(0)
        value = Fraction(1)
        for s, (r, _) in enumerate(self.slots):
            k, sb = a[l + n + s], a[l + 2 * n + s]
            m, t = b[l + n + s], b[l + 2 * n + s]
            if k + t != m + sb:
                return Fraction(0)
            value *= Fraction(factorial(k + t), r ** (k + t))
        return value

    def z_part(self, state: tuple) -> tuple:
        n = len(self.slots)
        return state[self.clifford_rank + n : self.clifford_rank + 2 * n]

    def zbar_part(self, state: tuple) -> tuple:
        return state[self.clifford_rank + 2 * len(self.slots) :]

    def gram_factor(self, exps: tuple) -> Fraction:
        """prod_s e_s! / r_s^e_s, the Gram entry of two same-key states whose
        per-slot sums z(a) + zbar(b) are ``exps``."""
        return _gram_factor(self.weights_tuple, exps)

    @property
    def weights_tuple(self) -> tuple:
        return tuple(r for r, _ in self.slots)

    def describe(self, state: tuple) -> str:
        l, n = self.clifford_rank, len(self.slots)
        parts = []
        if l:
            parts.append("D" + "".join(str(b) for b in state[:l]))
        for s, (r, k) in enumerate(self.slots):
            tag = f"{r}.{k}"
            if state[l + n + s]:
                parts.append(f"z{tag}^{state[l + n + s]}")
            if state[l + 2 * n + s]:
                parts.append(f"zb{tag}^{state[l + 2 * n + s]}")
            if state[l + s]:
                parts.append(f"psib{tag}")
        return "*".join(parts) or "1"


@lru_cache(maxsize=65536)
def _gram_factor(weights: tuple, exps: tuple) -> Fraction:
    num, den = 1, 1
    for r, e in zip(weights, exps):
        num *= factorial(e)
        den *= r**e
    return Fraction(num, den)


def _slot_choices(r: int, budget: int):
    out = []
    top = budget // r
    for a in range(top + 1):
        for b in range(top + 1 - a):
            for e in (0, 1):
                if a + b + e <= top:
                    out.append((r * (a + b + e), a, b, e))
    return out


def _count(slots, cutoff) -> int:
    ways = [0] * (cutoff + 1)
    ways[0] = 1
    for r in slots:
        new = [0] * (cutoff + 1)
        for lev, w in enumerate(ways):
            if w:
                for cost, *_ in _slot_choices(r, cutoff - lev):
                    new[lev + cost] += w
        ways = new
    return sum(ways)


class FockSpace:
    """Basis of the truncation of Delta (x) Sym(N + Nbar) (x) Lambda(Nbar)."""

    def __init__(self, spec: ModeSpec, max_states: int = MAX_STATES):
        self.spec = spec
        slots = tuple((r, k) for r, d in spec.modes for k in range(d))
        self.layout = Layout(spec.clifford_rank, slots)
        weights = [r for r, _ in slots]
        count = _count(weights, spec.level_cutoff) * 2**spec.clifford_rank
        if count > max_states:
            raise CapacityExceeded(f"{count} states exceed the budget of {max_states}; lower the cutoff")
        self.basis = self._enumerate(weights, spec.level_cutoff)
        self.index = {s: i for i, s in enumerate(self.basis)}
        self._gram_blocks = None

    def _enumerate(self, weights, cutoff) -> list:
        lay = self.layout
        n = len(weights)
        found = []

        def rec(i, level, ps, zs, zbs):
            if i == n:
                found.append((level, tuple(ps), tuple(zs), tuple(zbs)))
                return
            for cost, a, b, e in _slot_choices(weights[i], cutoff - level):
                rec(i + 1, level + cost, ps + [e], zs + [a], zbs + [b])

        rec(0, 0, [], [], [])
        states = []
        for bits in product((0, 1), repeat=lay.clifford_rank):
            for level, ps, zs, zbs in found:
                states.append((level, bits + ps + zs + zbs))
        states.sort()
        return [s for _, s in states]

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __contains__(self, state):
        return state in self.index

    @property
    def vacuum(self) -> tuple:
        return (0,) * self.layout.width

    def level(self, state) -> int:
        return self.layout.level(state)

    def parity(self, state) -> int:
        return self.layout.parity(state)

    def even_states(self) -> list:
        return [s for s in self.basis if not self.layout.parity(s)]

    def odd_states(self) -> list:
        return [s for s in self.basis if self.layout.parity(s)]

    def sector(self, z=True, zbar=True, wedge=True, clifford=True) -> list:
        """Basis states whose excluded factors sit in their vacuum."""
        lay = self.layout
        l, n = lay.clifford_rank, lay.nslots
        out = []
        for s in self.basis:
            if not clifford and any(s[:l]):
                continue
            if not wedge and any(s[l : l + n]):
                continue
            if not z and any(s[l + n : l + 2 * n]):
                continue
            if not zbar and any(s[l + 2 * n :]):
                continue
            out.append(s)
        return out

    def vprime(self) -> list:
        """Delta (x) S(N): no zbar, no psibar."""
        return self.sector(zbar=False, wedge=False)

    # -- Hermitian structure -------------------------------------------------
    def gram_blocks(self) -> dict:
        """key -> (states, Gram matrix) for the orthogonal blocks of the form."""
        if self._gram_blocks is None:
            groups: dict = {}
            for s in self.basis:
                groups.setdefault(self.layout.key(s), []).append(s)
            blocks = {}
            for key, states in groups.items():
                g = [[self.layout.gram_entry(a, b) for b in states] for a in states]
                blocks[key] = (states, g)
            self._gram_blocks = blocks
        return self._gram_blocks

    def gram(self) -> dict:
        """Sparse Gram matrix {(i, j): value} in basis order."""
        out = {}
        for states, g in self.gram_blocks().values():
            for a, row in zip(states, g):
                for b, v in zip(states, row):
                    if v:
                        out[(self.index[a], self.index[b])] = v
        return out

    def is_positive_definite(self) -> bool:
        """Exact LDL^T on every orthogonal block."""
        for _, g in self.gram_blocks().values():
            if not _ldl_positive(g):
                return False
        return True

    def hermitian_form(self, u, v) -> GaussianRational:
        """(u, v), linear in u and conjugate-linear in v.

        Vectors are states or dicts state -> coefficient (pairs, rationals
        or GaussianRational)."""
        u, v = _as_vector(u), _as_vector(v)
        buckets: dict = {}
        for t, c in v.items():
            buckets.setdefault(self.layout.key(t), []).append((t, c))
        re = Fraction(0)
        im = Fraction(0)
        for s, (ar, ai) in u.items():
            for t, (br, bi) in buckets.get(self.layout.key(s), ()):
                g = self.layout.gram_entry(s, t)
                if g:
                    # (ar + i ai)(br - i bi)
                    re += g * (ar * br + ai * bi)
                    im += g * (ai * br - ar * bi)
        return GaussianRational(re, im)


def _as_vector(x) -> dict:
    if isinstance(x, tuple) and (not x or isinstance(x[0], int)):
        return {x: (1, 0)}
    out = {}
    for k, c in x.items():
        if isinstance(c, GaussianRational):
            out[k] = (c.re, c.im)
        elif isinstance(c, tuple):
            out[k] = c
        else:
            out[k] = (c, 0)
    return out


def _ldl_positive(g) -> bool:
    n = len(g)
    a = [list(map(Fraction, row)) for row in g]
    for i in range(n):
        p = a[i][i]
        if p <= 0:
            return False
        for j in range(i + 1, n):
            if a[j][i]:
                f = a[j][i] / p
                for k in range(i, n):
                    a[j][k] -= f * a[i][k]
    return True


def build_space(spec: ModeSpec, max_states: int = MAX_STATES) -> FockSpace:
    return FockSpace(spec, max_states)
