"""Kernels and graded characters of Fock operators."""

from __future__ import annotations

from fractions import Fraction

from ..errors import InputError, SpectralObstruction
from ..linalg import sparse_nullspace, sparse_rank, vec_add, vec_clean
from ..series import PuiseuxQSeries
from .operators import FockOperator, assemble_global
from .space import FockSpace

__all__ = ["kernel_of", "graded_character", "RESTRICTIONS"]

RESTRICTIONS = ("full_supertrace", "S_N_only", "S_Nbar_only", "wedge_only", "kernel_of_Q")


def kernel_of(op: FockOperator, states) -> list:
    """Exact null space of ``op`` on the span of ``states``.

    Returns sparse vectors {state: (re, im)}, each equal to 1 on one
    state of ``states`` (its free variable).
    """
    states = list(states)
    columns = [op.apply_state(s) for s in states]
    out = []
    for vec in sparse_nullspace(columns):
        out.append({states[j]: c for j, c in vec.items()})
    return out


def _diagonal(op: FockOperator, state) -> Fraction:
    re, im = op.apply_state(state).get(state, (0, 0))
    if im:
        raise SpectralObstruction(f"non-real diagonal entry {re}+{im}i")
    return Fraction(re)


def _multiplicities(op: FockOperator, vectors: list) -> dict:
    """Eigenvalue -> multiplicity of ``op`` on span(vectors), exactly.

    Candidates are the diagonal entries of ``op`` on the support; they are
    accepted only when their eigenspaces exhaust the span.
    """
    if not vectors:
        return {}
    if all(len(v) == 1 for v in vectors):
        # eigenvectors already when op is diagonal on each supporting state
        fast: dict = {}
        for v in vectors:
            (s,) = v
            img = op.apply_state(s)
            if len(img) > 1 or (img and s not in img):
                break
            lam = _diagonal(op, s)
            fast[lam] = fast.get(lam, 0) + 1
        else:
            return fast
    support = {s for v in vectors for s in v}
    candidates = sorted({_diagonal(op, s) for s in support})
    images = [op.apply(v) for v in vectors]
    dim = len(vectors)
    out = {}
    for lam in candidates:
        shifted = [vec_clean(vec_add(dict(img), v, -lam, 0)) for img, v in zip(images, vectors)]
        nullity = dim - sparse_rank(shifted)
        if nullity:
            out[lam] = nullity
    if sum(out.values()) != dim:
        raise SpectralObstruction("operator is not diagonalizable over Q on this subspace with the probed spectrum")
    return out


def graded_character(
    space: FockSpace,
    L: FockOperator,
    restrict: str = "full_supertrace",
    supertrace: bool | None = None,
    Q: FockOperator | None = None,
) -> PuiseuxQSeries:
    """sum_lambda (+-) dim E_lambda q^lambda over the chosen subspace.

    Single-factor restrictions keep the other factors in their vacuum.
    The supersign follows the parity grading; by default it is used for
    full_supertrace, wedge_only and kernel_of_Q, and a plain trace is
    taken for S_N_only and S_Nbar_only.
    """
    if restrict not in RESTRICTIONS:
        raise InputError(f"unknown restriction {restrict!r}; choose from {', '.join(RESTRICTIONS)}")
    if supertrace is None:
        supertrace = restrict in ("full_supertrace", "wedge_only", "kernel_of_Q")
    lay = space.layout
    if restrict == "kernel_of_Q":
        if Q is None:
            Q = assemble_global(space, "Q_R_flat" if space.spec.is_ramond and space.spec.modes else "Q_flat")
        sectors = [(0, kernel_of(Q, space.even_states())), (1, kernel_of(Q, space.odd_states()))]
    else:
        if restrict == "full_supertrace":
            states = space.basis
        elif restrict == "S_N_only":
            states = space.sector(zbar=False, wedge=False, clifford=False)
        elif restrict == "S_Nbar_only":
            states = space.sector(z=False, wedge=False, clifford=False)
        else:
            states = space.sector(z=False, zbar=False, clifford=False)
        sectors = [(p, [{s: (1, 0)} for s in states if lay.parity(s) == p]) for p in (0, 1)]
    terms: dict = {}
    for parity, vectors in sectors:
        sign = -1 if (supertrace and parity) else 1
        for lam, mult in _multiplicities(L, vectors).items():
            terms[lam] = terms.get(lam, 0) + sign * mult
    terms = {k: v for k, v in terms.items() if v}
    if not terms:
        return PuiseuxQSeries.zero(0)
    span = max(terms) - min(terms)
    return PuiseuxQSeries.from_dict(terms, int(span) + 1)
