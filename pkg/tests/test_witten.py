from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genuslab.errors import InputError, RequiresP1Zero
from genuslab.roots import ManifoldData, ahat_class, integrate, product_manifold
from genuslab.series import PuiseuxQSeries, eta_power
from genuslab.witten import (
    integrality_check,
    modular_weight_check,
    phi_capital,
    phi_factor,
    phi_witten,
    ramond_index,
    zagier_check,
)

from . import oracles

F = Fraction

# frozen from tests/oracles.py (order-by-order splitting principle)
PHI_K3 = [2, -48, -144, -192, -336, -288]
PHI_DIM8_A = [1, 240, 2160, 6720, 17520]
PHI_DIM8_B = [-4, -960, -8640, -26880, -70080]

POINT = ManifoldData.point()
K3 = ManifoldData(4, {"p1": -48}, spin=True, name="K3")
DIM8_A = ManifoldData(8, {"p1^2": 0, "p2": -1440}, spin=True, p1_zero=True)
DIM8_B = ManifoldData(8, {"p1^2": 0, "p2": 5760}, spin=True, p1_zero=True)
DIM4_P1_ZERO = ManifoldData(4, {"p1": 0}, p1_zero=True)


def S(coeffs, offset=0):
    return PuiseuxQSeries(coeffs, offset)


dim4 = st.integers(-200, 200).map(lambda p: ManifoldData(4, {"p1": p}))
dim8 = st.tuples(st.integers(-3000, 3000), st.integers(-3000, 3000)).map(
    lambda t: ManifoldData(8, {"p1^2": t[0], "p2": t[1]})
)


class TestPhi:
    def test_point(self):
        assert phi_capital(POINT, 4) == S([1, 0, 0, 0])

    def test_k3_frozen(self):
        assert phi_capital(K3, 6) == S(PHI_K3)

    def test_k3_matches_oracle(self):
        assert PHI_K3 == oracles.phi_dim4(-48, 6)

    def test_methods_agree(self):
        for M in (K3, DIM8_A):
            assert phi_capital(M, 4, method="direct") == phi_capital(M, 4)
        with pytest.raises(ValueError):
            phi_capital(K3, 3, method="other")

    def test_p1_zero_dim4(self):
        assert phi_capital(DIM4_P1_ZERO, 5).is_zero()

    def test_dim8_frozen(self):
        assert phi_capital(DIM8_A, 5) == S(PHI_DIM8_A)
        assert phi_capital(DIM8_B, 5) == S(PHI_DIM8_B)
        assert PHI_DIM8_A == oracles.phi_dim8(0, -1440, 5)
        assert PHI_DIM8_B == oracles.phi_dim8(0, 5760, 5)

    def test_factor_matches_oracle(self):
        ours = phi_factor(4, 5)
        ref = oracles.phi_factor(4, 5)
        assert [list(c.coeffs) for c in ours] == ref

    @settings(max_examples=15, deadline=None)
    @given(st.one_of(dim4, dim8))
    def test_constant_term_is_ahat(self, M):
        assert phi_capital(M, 2).coefficient(0) == integrate(M, ahat_class(M, 1)).coefficient(0)

    @settings(max_examples=15, deadline=None)
    @given(st.one_of(dim4, dim8), st.integers(1, 6))
    def test_ramond_eta_identity(self, M, order):
        r = ramond_index(M, order)
        assert r.offset == F(-M.dim, 24)
        assert r * eta_power(M.dim, order) == phi_capital(M, order)
        assert phi_capital(M, order) * eta_power(-M.dim, order) == r

    def test_multiplicative(self):
        assert phi_capital(product_manifold(POINT, K3), 5) == phi_capital(K3, 5)
        k3k3 = product_manifold(K3, K3)
        assert phi_capital(k3k3, 4) == phi_capital(K3, 4) ** 2


class TestRamond:
    def test_point(self):
        assert ramond_index(POINT, 3) == S([1, 0, 0])

    def test_k3(self):
        r = ramond_index(K3, 3)
        assert r.offset == F(-1, 6)
        assert r == S([2, -40, -308], F(-1, 6))


class TestEisensteinForm:
    def test_point(self):
        assert phi_witten(POINT, 3) == S([1, 0, 0])

    def test_dim8_constant(self):
        assert phi_witten(DIM8_A, 1) == S([1])

    def test_dim4_is_zero(self):
        assert phi_witten(DIM4_P1_ZERO, 4).is_zero()

    def test_guards(self):
        with pytest.raises(RequiresP1Zero):
            phi_witten(K3, 3)
        with pytest.raises(InputError):
            phi_witten(ManifoldData(2, p1_zero=True), 3)


class TestChecks:
    def test_zagier_fixtures(self):
        for M in (POINT, DIM8_A, DIM8_B):
            rep = zagier_check(M, 5)
            assert rep.equal and rep.first_difference is None

    def test_zagier_needs_p1_zero(self):
        with pytest.raises(RequiresP1Zero):
            zagier_check(K3, 3)

    @settings(max_examples=8, deadline=None)
    @given(st.integers(-10**4, 10**4))
    def test_zagier_dim8(self, p2):
        M = ManifoldData(8, {"p1^2": 0, "p2": p2}, p1_zero=True)
        assert zagier_check(M, 4).equal

    def test_zagier_dim12(self):
        M = ManifoldData(12, {"p1^3": 0, "p1*p2": 0, "p3": 60480}, p1_zero=True)
        assert zagier_check(M, 4).equal

    def test_integrality(self):
        rep = integrality_check(K3, 6)
        assert rep.integral and rep.spin and rep.offending is None
        assert integrality_check(POINT, 3).integral

    def test_non_integral_does_not_raise(self):
        rep = integrality_check(ManifoldData(4, {"p1": 1}), 4)
        assert not rep.integral and not rep.spin
        assert rep.offending == (0, F(-1, 24))

    def test_modular(self):
        assert modular_weight_check(DIM8_A, 6).coordinates == {"E4": 1}
        assert modular_weight_check(DIM8_B, 6).coordinates == {"E4": -4}
        assert modular_weight_check(POINT, 3).member
        assert modular_weight_check(DIM4_P1_ZERO, 4).member
