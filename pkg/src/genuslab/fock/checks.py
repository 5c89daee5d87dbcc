"""Identity checks for the oscillator algebra on a truncated Fock space.

Every check applies operators to basis monomials in the untruncated
polynomial ring and compares exactly, so operators that raise the level
(creators) are checked without truncation-edge artifacts.  Each function
returns a list of human-readable failures; empty means the identity holds.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product

from .operators import (
    FockOperator,
    assemble_global,
    clifford_generator,
    connection_action,
    dirac_base_term,
    graded_commutator,
    oscillator,
)
from .space import FockSpace
from .spectral import kernel_of

__all__ = [
    "oscillator_table",
    "expected_bracket",
    "check_brackets",
    "check_adjoint",
    "check_adjoints",
    "check_clifford",
    "check_weitzenbock",
    "check_susy_kernel",
    "check_connection",
    "check_ramond",
    "random_structure_constants",
    "run_all",
    "sweep_modes",
]


def oscillator_table(space: FockSpace) -> list:
    """[(kind, signed_weight, direction, operator)] for every oscillator."""
    out = []
    for r, k in space.layout.slots:
        for kind in ("a", "b", "psi"):
            for sign in (1, -1):
                out.append((kind, sign * r, k, oscillator(space, kind, sign * r, k)))
    return out


def expected_bracket(x, y) -> Fraction:
    """Scalar value of [x, y] for oscillator descriptors (kind, n, k).

    [a_n, a_m] = r (m, n) delta_{n,-m} with r = |n| and the sign of n,
    likewise for b; [psi_n, psi_m] = (m, n) delta_{n,-m}; mixed kinds commute.
    """
    kx, nx, dx = x
    ky, ny, dy = y
    if kx != ky or dx != dy or nx != -ny:
        return Fraction(0)
    if kx == "psi":
        return Fraction(1)
    return Fraction(nx)


def check_brackets(space: FockSpace, states=None) -> list:
    states = list(space.basis if states is None else states)
    table = oscillator_table(space)
    failures = []
    for (k1, n1, d1, x), (k2, n2, d2, y) in product(table, repeat=2):
        br = graded_commutator(x, y)
        want = expected_bracket((k1, n1, d1), (k2, n2, d2))
        bad = br.defect_states(states, want)
        if bad:
            failures.append(f"[{k1}_{n1}^{d1}, {k2}_{n2}^{d2}] != {want} on {space.layout.describe(bad[0])}")
    return failures


def _form_pairs(space: FockSpace, op: FockOperator, first: bool) -> dict:
    """{(u, v): (Au, v)} if first else {(u, v): (u, Av)} over basis u, v.

    Two monomials pair nontrivially exactly when they share a key; the
    value then depends only on the per-slot sums z(left) + zbar(right).
    """
    lay = space.layout
    buckets: dict = {}
    for s in space.basis:
        buckets.setdefault(lay.key(s), []).append((s, lay.zbar_part(s)))
    # integer-scaled Gram factors: every denominator divides prod_s r_s^cap_s
    cap = [2 * (space.spec.level_cutoff // r) + 2 for r in lay.weights_tuple]
    scale = 1
    for r, c in zip(lay.weights_tuple, cap):
        scale *= r**c
    memo: dict = {}

    def factor(exps):
        g = memo.get(exps)
        if g is None:
            exact = lay.gram_factor(exps) * scale
            if exact.denominator != 1:
                raise ArithmeticError("Gram scale too small")
            g = memo[exps] = exact.numerator
        return g

    out: dict = {}
    for s in space.basis:
        for t, (re, im) in op.apply_state(s).items():
            zt = lay.z_part(t)
            for b, zb in buckets.get(lay.key(t), ()):
                g = factor(tuple(x + y for x, y in zip(zt, zb)))
                if first:
                    key, vr, vi = (s, b), g * re, g * im
                else:
                    # (b, A s) = conj((A s, b))
                    key, vr, vi = (b, s), g * re, -g * im
                old = out.get(key)
                out[key] = (vr, vi) if old is None else (old[0] + vr, old[1] + vi)
    return {k: v for k, v in out.items() if v[0] or v[1]}


def check_adjoint(space: FockSpace, op: FockOperator, adj: FockOperator) -> list:
    """(op u, v) == (u, adj v) for all basis u, v."""
    left = _form_pairs(space, op, True)
    right = _form_pairs(space, adj, False)
    if left == right:
        return []
    diff = sorted(set(left) ^ set(right) | {k for k in left if left[k] != right.get(k)}, key=str)
    u, v = diff[0]
    return [f"adjoint mismatch at ({space.layout.describe(u)}, {space.layout.describe(v)})"]


def check_adjoints(space: FockSpace) -> list:
    failures = []
    for r, k in space.layout.slots:
        for kind in ("a", "b", "psi"):
            plus = oscillator(space, kind, r, k)
            minus = oscillator(space, kind, -r, k)
            for msg in check_adjoint(space, plus, minus) + check_adjoint(space, minus, plus):
                failures.append(f"{kind}_{r}^{k}: {msg}")
    return failures


def check_clifford(space: FockSpace) -> list:
    failures = []
    states = space.basis
    gens = [clifford_generator(space, i) for i in range(2 * space.layout.clifford_rank)]
    for i, gi in enumerate(gens):
        for j, gj in enumerate(gens):
            want = -2 if i == j else 0
            if not graded_commutator(gi, gj).equals_scalar_on(states, want):
                failures.append(f"psi0(e{i}) psi0(e{j}) + psi0(e{j}) psi0(e{i}) != {want}")
        if check_adjoint(space, gi, gi * -1):
            failures.append(f"psi0(e{i}) is not anti-self-adjoint")
        for r, k in space.layout.slots:
            psi = oscillator(space, "psi", r, k)
            if not graded_commutator(gi, psi).equals_scalar_on(states, 0):
                failures.append(f"psi0(e{i}) does not anticommute with psi_{r}^{k}")
    return failures


def check_weitzenbock(space: FockSpace) -> list:
    """Q^2 = L_alpha + L_psi and [Q, L_K] = 0 for the flat Dirac operator."""
    states = space.basis
    Q = assemble_global(space, "Q_flat")
    La = assemble_global(space, "L_alpha")
    Lp = assemble_global(space, "L_psi")
    LK = assemble_global(space, "L_K")
    failures = []
    bad = (Q @ Q - La - Lp).defect_states(states)
    if bad:
        failures.append(f"Q^2 != L_alpha + L_psi on {space.layout.describe(bad[0])}")
    bad = graded_commutator(Q, LK).defect_states(states)
    if bad:
        failures.append(f"[Q, L_K] != 0 on {space.layout.describe(bad[0])}")
    dk = assemble_global(space, "dKprime")
    bad = (dk + Lp * 2).defect_states(states, space.spec.c1)
    if bad:
        failures.append(f"dK' != c1 - 2 L_psi on {space.layout.describe(bad[0])}")
    return failures


def check_susy_kernel(space: FockSpace) -> list:
    """ker Q on the truncation equals Delta (x) S(N) there."""
    Q = assemble_global(space, "Q_flat")
    failures = []
    if not Q.preserves(space.basis):
        failures.append("Q does not preserve the truncation")
        return failures
    vprime = set(space.vprime())
    found = 0
    for states in (space.even_states(), space.odd_states()):
        for vec in kernel_of(Q, states):
            found += 1
            if not set(vec) <= vprime:
                failures.append(f"kernel vector leaves V': {space.layout.describe(next(iter(set(vec) - vprime)))}")
                break
    if found != len(vprime):
        failures.append(f"dim ker Q = {found} but dim V' = {len(vprime)}")
    elif not all(not Q.apply_state(s) for s in vprime):
        failures.append("some V' state is not annihilated by Q")
    return failures


def random_structure_constants(space: FockSpace, rng, scale: int = 5) -> dict:
    """Random rational w_ij^k(r), antisymmetric in (j, k)."""
    lay = space.layout
    dims: dict = {}
    for r, k in lay.slots:
        dims[r] = max(dims.get(r, 0), k + 1)
    w = {}
    for r, d in dims.items():
        block = []
        for _ in range(2 * lay.clifford_rank):
            m = [[Fraction(0)] * d for _ in range(d)]
            for j in range(d):
                for k in range(j + 1, d):
                    v = Fraction(rng.randint(-scale, scale), rng.randint(1, scale))
                    m[j][k] = v
                    m[k][j] = -v
            block.append(m)
        w[r] = block
    return w


def check_connection(space: FockSpace, w: dict) -> list:
    """The six bracket families of D_i with the oscillators, plus
    [D_M, Q] = 0 and [D_i, L_alpha] = [D_i, L_beta] = [D_i, L_psi] = 0."""
    lay = space.layout
    states = space.basis
    D = connection_action(space, w)
    failures = []
    dims: dict = {}
    for r, k in lay.slots:
        dims[r] = max(dims.get(r, 0), k + 1)
    for i, Di in enumerate(D):
        for r, d in dims.items():
            wr = [[Fraction(x) for x in row] for row in w[r][i]] if r in w else [[Fraction(0)] * d for _ in range(d)]
            for kind in ("psi", "a", "b"):
                for j in range(d):
                    # [D_i, X^j_{-r}] = w_ij^k X^k_{-r};  [D_i, X^j_r] = -w_ik^j X^k_r
                    lhs_minus = graded_commutator(Di, oscillator(space, kind, -r, j))
                    rhs_minus = _combo(lay, [(wr[j][k], oscillator(space, kind, -r, k)) for k in range(d)], kind)
                    if not lhs_minus.equals_on(rhs_minus, states):
                        failures.append(f"[D_{i}, {kind}_-{r}^{j}] mismatch")
                    lhs_plus = graded_commutator(Di, oscillator(space, kind, r, j))
                    rhs_plus = _combo(lay, [(-wr[k][j], oscillator(space, kind, r, k)) for k in range(d)], kind)
                    if not lhs_plus.equals_on(rhs_plus, states):
                        failures.append(f"[D_{i}, {kind}_{r}^{j}] mismatch")
        for name in ("L_alpha", "L_beta", "L_psi"):
            if not graded_commutator(Di, assemble_global(space, name)).equals_scalar_on(states, 0):
                failures.append(f"[D_{i}, {name}] != 0")
    if D:
        DM = dirac_base_term(space, D)
        Q = assemble_global(space, "Q_flat")
        if not graded_commutator(DM, Q).equals_scalar_on(states, 0):
            failures.append("[D_M, D_N] != 0")
    return failures


def _combo(lay, pairs, kind) -> FockOperator:
    out = FockOperator(lay, {}, 1 if kind == "psi" else 0)
    for c, op in pairs:
        if c:
            out = out + op * c
    return out


def check_ramond(space: FockSpace) -> list:
    """Q_R^2 = L_alpha + L_psi and [Q_R, P] = 0 on a Ramond-profile space."""
    states = space.basis
    QR = assemble_global(space, "Q_R_flat")
    P = assemble_global(space, "P")
    La = assemble_global(space, "L_alpha")
    Lp = assemble_global(space, "L_psi")
    failures = []
    if (QR @ QR - La - Lp).defect_states(states):
        failures.append("Q_R^2 != L_alpha + L_psi")
    if graded_commutator(QR, P).defect_states(states):
        failures.append("[Q_R, P] != 0")
    return failures


def run_all(space: FockSpace) -> dict:
    """Every invariant that applies to ``space``: name -> failures."""
    out = {
        "brackets": check_brackets(space),
        "adjoints": check_adjoints(space),
        "gram_positive": [] if space.is_positive_definite() else ["Gram matrix is not positive definite"],
        "weitzenbock": check_weitzenbock(space),
        "susy_kernel": check_susy_kernel(space),
    }
    if space.layout.clifford_rank:
        out["clifford"] = check_clifford(space)
    if space.spec.is_ramond and space.spec.modes:
        out["ramond"] = check_ramond(space)
    return out



def sweep_modes(weights=(1, 2, 3), max_total: int = 3) -> list:
    """Every mode profile with distinct weights from ``weights`` and
    sum of multiplicities between 1 and ``max_total``."""
    out = []
    for total in range(1, max_total + 1):
        for multiset in combinations_with_replacement(sorted(weights), total):
            counts = {}
            for r in multiset:
                counts[r] = counts.get(r, 0) + 1
            out.append(tuple(sorted(counts.items())))
    return sorted(set(out), key=lambda m: (sum(d for _, d in m), m))
