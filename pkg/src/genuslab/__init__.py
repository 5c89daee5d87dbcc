"""Exact q-series, characteristic classes and Fock-space operator checks
for equivariant and loop-space index computations."""

from .errors import GenusLabError, InputError
from .localize import FixedComponent, NormalSummand, component_index, equivariant_index, vanishing_check
from .roots import ManifoldData, RootSeries, ahat_class, ch_sym, ch_wedge, chern_character, integrate, sqrt_det_ch
from .series import PuiseuxQSeries, bernoulli, eisenstein, eta_power, modular_fit, qs_arith, sigma
from .witten import integrality_check, modular_weight_check, phi_capital, phi_witten, ramond_index, zagier_check

__version__ = "0.1.0"

__all__ = [
    "GenusLabError",
    "InputError",
    "PuiseuxQSeries",
    "qs_arith",
    "bernoulli",
    "sigma",
    "eisenstein",
    "eta_power",
    "modular_fit",
    "RootSeries",
    "ManifoldData",
    "ahat_class",
    "chern_character",
    "ch_sym",
    "ch_wedge",
    "sqrt_det_ch",
    "integrate",
    "NormalSummand",
    "FixedComponent",
    "component_index",
    "equivariant_index",
    "vanishing_check",
    "phi_capital",
    "phi_witten",
    "ramond_index",
    "zagier_check",
    "integrality_check",
    "modular_weight_check",
]
