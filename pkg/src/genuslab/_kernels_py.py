"""Pure-Python Fock kernels.  Mirrors ``_kernels.pyx`` line for line.

A state is a tuple of small nonnegative ints: fermion occupancies first
(Clifford modes, then exterior slots), then boson exponents.  A word is a
flat tuple ``(code0, slot0, code1, slot1, ...)`` applied right to left:

    0  multiply by the slot variable   (exponent + 1)
    1  differentiate                   (coefficient = exponent, exponent - 1)
    2  fermion create                  (Jordan-Wigner sign)
    3  fermion annihilate              (Jordan-Wigner sign)
"""


def apply_word(word, state):
    """Return (integer coefficient, new state) or None if the word kills the state."""
    st = list(state)
    coef = 1
    i = len(word) - 2
    while i >= 0:
        code = word[i]
        slot = word[i + 1]
        v = st[slot]
        if code == 0:
            st[slot] = v + 1
        elif code == 1:
            if v == 0:
                return None
            coef *= v
            st[slot] = v - 1
        else:
            if (code == 2) == (v == 1):
                return None
            if sum(st[:slot]) & 1:
                coef = -coef
            st[slot] = 1 if code == 2 else 0
        i -= 2
    return coef, tuple(st)


def apply_terms(words, re, im, state):
    """sum_w (re_w + i im_w) w(state) as {state: [re, im]} with zero entries dropped."""
    out = {}
    for w, a, b in zip(words, re, im):
        hit = apply_word(w, state)
        if hit is None:
            continue
        c, t = hit
        acc = out.get(t)
        if acc is None:
            out[t] = [a * c, b * c]
        else:
            acc[0] += a * c
            acc[1] += b * c
    return {t: v for t, v in out.items() if v[0] or v[1]}


def zero_defect(words, re, im, states, cre, cim):
    """Indices i with  sum_w coef_w w(s_i) != (cre + i cim) s_i."""
    bad = []
    for idx, s in enumerate(states):
        out = apply_terms(words, re, im, s)
        v = out.pop(s, [0, 0])
        if out or v[0] != cre or v[1] != cim:
            bad.append(idx)
    return bad
