"""The Witten genus and the Ramond index of a formal manifold.

``phi_capital`` integrates A(M) ch(prod_n S_{q^n}(TM_C)) times
prod_n (1 - q^n)^{dim M}.  ``phi_witten`` integrates the Eisenstein
exponential prod_i exp(sum_{k>=2} 2 G_2k x_i^{2k} / (2k)!), which agrees
with ``phi_capital`` once p1 vanishes.  ``ramond_index`` carries the
eta normalization q^{-dim M/24} prod_n (1 - q^n)^{-dim M}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ._parallel import parallel_map
from .errors import InputError, RequiresP1Zero
from .roots import (
    ManifoldData,
    RootRing,
    ahat_class,
    ahat_univariate,
    ch_sym,
    integrate,
    multiplicative_class,
)
from .series import FitReport, PuiseuxQSeries, eisenstein, eta_power, modular_fit

__all__ = [
    "phi_factor",
    "phi_capital",
    "phi_witten",
    "ramond_index",
    "ZagierReport",
    "zagier_check",
    "IntegralityReport",
    "integrality_check",
    "modular_weight_check",
]


def _sym_factor(max_degree: int, order: int) -> list:
    """Coefficients of x^k in prod_{n<order} ch S_{q^n}(L + L^-1) for a root x."""
    ring = RootRing(("x",), 2 * max_degree)
    factors = parallel_map(lambda n: ch_sym(n, ["x", "-x"], order, ring), range(1, order))
    acc = multiplicative_class(ring, [1], order)
    for f in factors:
        acc = acc * f
    return [acc.coefficient((k,)) for k in range(max_degree + 1)]


def phi_factor(max_degree: int, order: int) -> list:
    """x^k coefficients of (x/2)/sinh(x/2) prod_n (1-q^n)^2/((1-q^n e^x)(1-q^n e^-x))."""
    sym = _sym_factor(max_degree, order)
    a = ahat_univariate(max_degree)
    euler2 = eta_power(2, order).shift(Fraction(-2, 24))
    out = []
    for k in range(max_degree + 1):
        c = PuiseuxQSeries.zero(order)
        for j in range(k + 1):
            if a[j]:
                c = c + sym[k - j].scale(a[j])
        out.append(c * euler2)
    return out


def _sym_integral(M: ManifoldData, q_order: int, method: str) -> PuiseuxQSeries:
    """int_M A(M) ch(prod_n S_{q^n}(TM_C)), without the (1-q^n) factors."""
    if method == "direct":
        cls = ahat_class(M, q_order)
        roots = M.tangent_bundle_roots
        for n in range(1, q_order):
            cls = cls * ch_sym(n, roots, q_order, M)
        return integrate(M, cls)
    if method != "univariate":
        raise ValueError(f"unknown method {method!r}")
    l = M.dim // 2
    sym = _sym_factor(l, q_order)
    a = ahat_univariate(l)
    coeffs = []
    for k in range(l + 1):
        c = PuiseuxQSeries.zero(q_order)
        for j in range(k + 1):
            if a[j]:
                c = c + sym[k - j].scale(a[j])
        coeffs.append(c)
    return integrate(M, multiplicative_class(M, coeffs, q_order))


def phi_capital(M: ManifoldData, q_order: int, method: str = "univariate") -> PuiseuxQSeries:
    """Phi(M, q) through q^(q_order - 1).

    ``method="direct"`` multiplies the full tangent-bundle classes instead
    of building the splitting-principle factor once; both agree exactly.
    """
    euler = eta_power(M.dim, q_order).shift(Fraction(-M.dim, 24))
    return _sym_integral(M, q_order, method) * euler


def _require_p1_zero(M: ManifoldData):
    # in dimension 0 there is no p1 to vanish
    if not M.p1_zero and M.dim:
        raise RequiresP1Zero("the Eisenstein form omits the G_2 term and needs p1 = 0 (set p1_zero)")
    if M.dim % 4:
        raise InputError(f"the Witten genus is defined for dimensions divisible by 4, got {M.dim}")


def phi_witten(M: ManifoldData, q_order: int) -> PuiseuxQSeries:
    """int_M prod_i exp(sum_{k>=2} 2 G_2k(q) x_i^{2k}/(2k)!)."""
    _require_p1_zero(M)
    l = M.dim // 2
    one = PuiseuxQSeries.one(q_order)
    zero = PuiseuxQSeries.zero(q_order)
    g = [zero] * (l + 1)
    for k in range(2, l // 2 + 1):
        g[2 * k] = eisenstein(2 * k, q_order).scale(Fraction(2, factorial(2 * k)))
    # exp of a polynomial without constant term, truncated at x^l
    exp = [one] + [zero] * l
    power = [one] + [zero] * l
    for m in range(1, l // 4 + 1):
        power = _umul(power, g, l)
        for k in range(l + 1):
            exp[k] = exp[k] + power[k].scale(Fraction(1, factorial(m)))
    return integrate(M, multiplicative_class(M, exp, q_order))


def _umul(a: list, b: list, top: int) -> list:
    out = [PuiseuxQSeries.zero(a[0].order) for _ in range(top + 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j in range(top + 1 - i):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + x * b[j]
    return out


def ramond_index(M: ManifoldData, q_order: int) -> PuiseuxQSeries:
    """q^{-dim M/24} int_M A(M) ch(prod_n S_{q^n}(TM_C))."""
    return _sym_integral(M, q_order, "univariate").shift(Fraction(-M.dim, 24))


@dataclass(frozen=True)
class ZagierReport:
    equal: bool
    phi: PuiseuxQSeries
    phi_w: PuiseuxQSeries
    first_difference: tuple | None = None  # (exponent, phi coeff, phi_w coeff)


def zagier_check(M: ManifoldData, q_order: int) -> ZagierReport:
    _require_p1_zero(M)
    a = phi_capital(M, q_order)
    b = phi_witten(M, q_order)
    diff = a.first_difference(b)
    return ZagierReport(diff is None, a, b, diff)


@dataclass(frozen=True)
class IntegralityReport:
    integral: bool
    spin: bool
    phi: PuiseuxQSeries
    offending: tuple | None = None  # (exponent, coefficient)


def integrality_check(M: ManifoldData, q_order: int) -> IntegralityReport:
    """Are all known coefficients of Phi integers?  Non-spin input is allowed
    and simply reported, since the statement only promises integrality for spin M."""
    phi = phi_capital(M, q_order)
    for n, c in enumerate(phi.coeffs):
        if c.denominator != 1:
            return IntegralityReport(False, M.spin, phi, (phi.offset + n, c))
    return IntegralityReport(True, M.spin, phi, None)


def modular_weight_check(M: ManifoldData, q_order: int) -> FitReport:
    _require_p1_zero(M)
    return modular_fit(phi_witten(M, q_order), M.dim // 2)
