# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled Fock kernels; same contract as ``_kernels_py``."""

cdef enum:
    MAXSLOTS = 1024


cdef int _run(tuple word, int* st, long long* coef) noexcept:
    """Apply ``word`` in place; return 0 if the state is killed."""
    cdef Py_ssize_t i = len(word) - 2
    cdef int code, slot, v, j, parity
    while i >= 0:
        code = <int>word[i]
        slot = <int>word[i + 1]
        v = st[slot]
        if code == 0:
            st[slot] = v + 1
        elif code == 1:
            if v == 0:
                return 0
            coef[0] *= v
            st[slot] = v - 1
        else:
            if (code == 2) == (v == 1):
                return 0
            parity = 0
            for j in range(slot):
                parity ^= st[j] & 1
            if parity:
                coef[0] = -coef[0]
            st[slot] = 1 if code == 2 else 0
        i -= 2
    return 1


cdef tuple _pack(int* st, Py_ssize_t n):
    cdef Py_ssize_t k
    return tuple([st[k] for k in range(n)])


def apply_word(tuple word, tuple state):
    cdef Py_ssize_t n = len(state), k
    if n > MAXSLOTS:
        raise ValueError("state too long")
    cdef int st[MAXSLOTS]
    cdef long long coef = 1
    for k in range(n):
        st[k] = state[k]
    if not _run(word, st, &coef):
        return None
    return coef, _pack(st, n)


cdef dict _apply_terms(list words, list re, list im, tuple state, int* base, int* st):
    cdef Py_ssize_t n = len(state), k, w, nw = len(words)
    cdef long long coef
    cdef dict out = {}
    cdef tuple t
    cdef list acc
    for w in range(nw):
        for k in range(n):
            st[k] = base[k]
        coef = 1
        if not _run(<tuple>words[w], st, &coef):
            continue
        t = _pack(st, n)
        acc = out.get(t)
        if acc is None:
            out[t] = [re[w] * coef, im[w] * coef]
        else:
            acc[0] += re[w] * coef
            acc[1] += im[w] * coef
    return out


def apply_terms(words, re, im, tuple state):
    cdef Py_ssize_t n = len(state), k
    if n > MAXSLOTS:
        raise ValueError("state too long")
    cdef int base[MAXSLOTS]
    cdef int st[MAXSLOTS]
    for k in range(n):
        base[k] = state[k]
    out = _apply_terms(list(words), list(re), list(im), state, base, st)
    return {t: v for t, v in out.items() if v[0] or v[1]}


def zero_defect(words, re, im, states, cre, cim):
    cdef list wl = list(words), rl = list(re), il = list(im)
    cdef list bad = []
    cdef Py_ssize_t idx = 0, n, k
    cdef int base[MAXSLOTS]
    cdef int st[MAXSLOTS]
    cdef dict out
    cdef tuple s
    for s in states:
        n = len(s)
        if n > MAXSLOTS:
            raise ValueError("state too long")
        for k in range(n):
            base[k] = s[k]
        out = _apply_terms(wl, rl, il, s, base, st)
        v = out.pop(s, [0, 0])
        if v[0] != cre or v[1] != cim:
            bad.append(idx)
        else:
            for val in out.values():
                if val[0] or val[1]:
                    bad.append(idx)
                    break
        idx += 1
    return bad
