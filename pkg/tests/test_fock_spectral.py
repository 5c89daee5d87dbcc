from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genuslab.errors import InputError, SpectralObstruction
from genuslab.fock import ModeSpec, assemble_global, build_space, graded_character, identity, kernel_of
from genuslab.fock.operators import derivative
from genuslab.localize import FixedComponent, NormalSummand, component_index
from genuslab.roots import ManifoldData
from genuslab.series import PuiseuxQSeries

F = Fraction


def S(coeffs, offset=0):
    return PuiseuxQSeries(coeffs, offset)


def space(modes, l=0, cutoff=3):
    return build_space(ModeSpec(modes, l, cutoff))


class TestKernel:
    def test_q_flat_single_mode(self):
        sp = space(((1, 1),))
        Q = assemble_global(sp, "Q_flat")
        vecs = kernel_of(Q, sp.even_states()) + kernel_of(Q, sp.odd_states())
        names = sorted(sp.layout.describe(next(iter(v))) for v in vecs)
        assert names == ["1", "z1.0^1", "z1.0^2", "z1.0^3"]
        assert all(len(v) == 1 for v in vecs)

    def test_identity(self):
        sp = space(((1, 1),))
        assert kernel_of(identity(sp.layout), sp.basis) == []

    def test_l_alpha(self):
        sp = space(((1, 1), (2, 1)), 1, 3)
        La = assemble_global(sp, "L_alpha")
        support = {s for v in kernel_of(La, sp.basis) for s in v}
        assert len(kernel_of(La, sp.basis)) == len(sp.sector(zbar=False))
        assert support == set(sp.sector(zbar=False))


class TestCharacter:
    def test_sym(self):
        sp = space(((1, 1),))
        ch = graded_character(sp, assemble_global(sp, "L_K"), "S_N_only")
        assert ch == S([1, 1, 1, 1], F(1, 2))

    def test_sym_bar(self):
        sp = space(((1, 1),))
        ch = graded_character(sp, assemble_global(sp, "L_K"), "S_Nbar_only")
        assert ch == S([1, 1, 1, 1], F(-5, 2))

    def test_wedge(self):
        sp = space(((1, 1),))
        ch = graded_character(sp, assemble_global(sp, "L_K"), "wedge_only")
        assert ch == S([-1, 1], F(-1, 2))
        plain = graded_character(sp, assemble_global(sp, "L_K"), "wedge_only", supertrace=False)
        assert plain == S([1, 1], F(-1, 2))

    def test_kernel_point_weight_two(self):
        sp = space(((2, 1),), 0, 6)
        ch = graded_character(sp, assemble_global(sp, "L_K"), "kernel_of_Q")
        assert ch == S([1, 0, 1, 0, 1, 0, 1], 1)

    @pytest.mark.parametrize("modes", [((2, 1),), ((1, 2),), ((2, 2),)])
    def test_kernel_is_localization(self, modes):
        cutoff = 5
        sp = space(modes, 0, cutoff)
        ch = graded_character(sp, assemble_global(sp, "L_K"), "kernel_of_Q")
        comp = FixedComponent(ManifoldData.point(), tuple(NormalSummand(r, d) for r, d in modes))
        idx = component_index(comp, cutoff + 1)
        assert ch.order >= 3
        assert idx.truncate_at(ch.bound) == ch

    @settings(max_examples=10, deadline=None)
    @given(st.sampled_from([((1, 1),), ((2, 1),), ((1, 1), (2, 1)), ((1, 2),)]), st.integers(0, 4))
    def test_full_supertrace_counts_monomials(self, modes, cutoff):
        sp = space(modes, 0, cutoff)
        lay = sp.layout
        c1 = sum(r * d for r, d in modes)
        expected: dict = {}
        for s in sp:
            n = lay.nslots
            lam = F(c1, 2) + sum(
                r * (s[n + i] - s[2 * n + i] - s[i]) for i, (r, _) in enumerate(lay.slots)
            )
            expected[lam] = expected.get(lam, 0) + (-1) ** lay.parity(s)
        got = graded_character(sp, assemble_global(sp, "L_K"), "full_supertrace")
        nonzero = {e: c for e, c in expected.items() if c}
        assert dict(got.terms()) == nonzero

    def test_ramond_small(self):
        sp = build_space(ModeSpec.ramond(1, 3))
        ch = graded_character(sp, assemble_global(sp, "P"), "kernel_of_Q", supertrace=False)
        expected = (S([1, -1, 0, 0]) * S([1, 0, -1, 0]) * S([1, 0, 0, -1])) ** -2
        assert ch.truncate_at(F(-1, 12) + 4) == expected.scale(2).shift(F(-1, 12))

    def test_supertrace_of_clifford_module_vanishes(self):
        sp = build_space(ModeSpec.ramond(1, 2))
        ch = graded_character(sp, assemble_global(sp, "P"), "kernel_of_Q")
        assert ch.is_zero()

    def test_unknown_restriction(self):
        sp = space(((1, 1),))
        with pytest.raises(InputError):
            graded_character(sp, assemble_global(sp, "L_K"), "everything")

    def test_not_diagonalizable(self):
        sp = space(((1, 1),), 0, 1)
        with pytest.raises(SpectralObstruction):
            graded_character(sp, derivative(sp, 1), "S_N_only")
