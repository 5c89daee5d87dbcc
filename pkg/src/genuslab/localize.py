"""Fixed-point localization of the equivariant index.

A fixed component is a formal manifold with its normal bundle split by
circle weight.  Its contribution is

    sign * q^{c1/2} * int_M  A(M) ch(sqrt det N) prod_r ch S_{q^r}(N_r),

with ``c1 = sum_r r d_r``.  The index of the whole action is the sum over
components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ._parallel import parallel_map
from .errors import InputError, NoFixedPoints, OddWeightSum
from .roots import ManifoldData, ahat_class, ch_sym, integrate, parse_root, sqrt_det_ch
from .series import PuiseuxQSeries

__all__ = [
    "NormalSummand",
    "FixedComponent",
    "component_index",
    "equivariant_index",
    "VanishingReport",
    "vanishing_check",
]


@dataclass(frozen=True)
class NormalSummand:
    """N_r: weight r, complex rank d and its roots as linear forms in the base roots."""

    weight: int
    dim: int
    roots: tuple = ()

    def __post_init__(self):
        if int(self.weight) != self.weight or self.weight < 1:
            raise InputError(f"normal weights must be positive integers, got {self.weight}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise InputError(f"normal ranks must be positive integers, got {self.dim}")
        roots = tuple(self.roots) or ("0",) * self.dim
        if len(roots) != self.dim:
            raise InputError(f"N_{self.weight} has rank {self.dim} but {len(roots)} roots")
        object.__setattr__(self, "roots", roots)


@dataclass(frozen=True)
class FixedComponent:
    base: ManifoldData = field(default_factory=ManifoldData.point)
    normal: tuple = ()
    orientation_sign: int = 1

    def __post_init__(self):
        normal = tuple(n if isinstance(n, NormalSummand) else NormalSummand(*n) for n in self.normal)
        weights = [n.weight for n in normal]
        if len(set(weights)) != len(weights):
            raise InputError(f"normal weights must be distinct within a component, got {weights}")
        if self.orientation_sign not in (1, -1):
            raise InputError("orientation_sign must be +1 or -1")
        for n in normal:
            for r in n.roots:
                parse_root(r, self.base.tangent_roots)
        object.__setattr__(self, "normal", normal)
        if self.c1 % 2:
            raise OddWeightSum(self.c1)

    @property
    def c1(self) -> int:
        return sum(n.weight * n.dim for n in self.normal)


def component_index(c: FixedComponent, q_order: int) -> PuiseuxQSeries:
    """Contribution of one component; offset c1/2, ``q_order`` coefficients."""
    M = c.base
    ring = M.ring
    cls = ahat_class(M, q_order)
    all_roots = [r for n in c.normal for r in n.roots]
    if all_roots:
        cls = cls * sqrt_det_ch(all_roots, q_order, ring)
    for n in c.normal:
        cls = cls * ch_sym(n.weight, n.roots, q_order, ring)
    value = integrate(M, cls).truncate(q_order)
    return value.shift(Fraction(c.c1, 2)).scale(c.orientation_sign)


def equivariant_index(components, q_order: int) -> PuiseuxQSeries:
    comps = list(components)
    if not comps:
        raise NoFixedPoints("the localization sum needs at least one fixed component")
    parts = parallel_map(lambda c: component_index(c, q_order), comps)
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


@dataclass(frozen=True)
class VanishingReport:
    vanishes: bool
    index: PuiseuxQSeries
    first_nonzero: tuple | None = None  # (exponent, coefficient)

    def to_json(self) -> dict:
        out = self.index.to_json()
        out["vanishes"] = self.vanishes
        if self.first_nonzero is not None:
            out["first_nonzero"] = {"exponent": str(self.first_nonzero[0]), "coefficient": str(self.first_nonzero[1])}
        return out


def vanishing_check(components, q_order: int) -> VanishingReport:
    idx = equivariant_index(components, q_order)
    terms = idx.terms()
    return VanishingReport(not terms, idx, terms[0] if terms else None)
