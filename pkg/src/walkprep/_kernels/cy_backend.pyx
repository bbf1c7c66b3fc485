# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels.  Reference semantics live in py_backend.py; the two
backends must make identical decisions (orderings, tie-breaks)."""
from libc.stdlib cimport free, malloc

import numpy as np

BACKEND = "cython"

DEF EXACT_MAX_SETS = 8
DEF EXACT_MAX_UNIVERSE = 12

ctypedef double complex cplx
ctypedef long long i64

cdef extern from *:
    """
    #define POPCNT64(x) __builtin_popcountll((unsigned long long)(x))
    #define BITLEN64(x) ((x) ? 64 - __builtin_clzll((unsigned long long)(x)) : 0)
    #define CTZ64(x) __builtin_ctzll((unsigned long long)(x))
    """
    int POPCNT64(i64 x) nogil
    int BITLEN64(i64 x) nogil
    int CTZ64(i64 x) nogil


# ---------------------------------------------------------------------------
# statevector kernels


def apply_1q(cplx[::1] state, int tpos, cplx m00, cplx m01, cplx m10, cplx m11):
    cdef Py_ssize_t size = state.shape[0]
    cdef i64 step = 1LL << tpos
    cdef Py_ssize_t i
    cdef cplx a0, a1
    with nogil:
        for i in range(size):
            if not (i & step):
                a0 = state[i]
                a1 = state[i + step]
                state[i] = m00 * a0 + m01 * a1
                state[i + step] = m10 * a0 + m11 * a1


def apply_ctrl_1q(cplx[::1] state, int tpos, i64 cmask, i64 cval,
                  cplx m00, cplx m01, cplx m10, cplx m11):
    cdef Py_ssize_t size = state.shape[0]
    cdef i64 step = 1LL << tpos
    cdef Py_ssize_t i
    cdef cplx a0, a1
    with nogil:
        for i in range(size):
            if not (i & step) and (i & cmask) == cval:
                a0 = state[i]
                a1 = state[i + step]
                state[i] = m00 * a0 + m01 * a1
                state[i + step] = m10 * a0 + m11 * a1


def apply_x(cplx[::1] state, int tpos, i64 cmask=0, i64 cval=0):
    cdef Py_ssize_t size = state.shape[0]
    cdef i64 step = 1LL << tpos
    cdef Py_ssize_t i
    cdef cplx tmp
    with nogil:
        for i in range(size):
            if not (i & step) and (i & cmask) == cval:
                tmp = state[i]
                state[i] = state[i + step]
                state[i + step] = tmp


# ---------------------------------------------------------------------------
# hitting-set kernels


cdef i64 _greedy(i64* sets, Py_ssize_t ns, int n) nogil:
    """Greedy max-coverage; ties to the lowest qubit index.  Mutates sets
    (uses value 0 as the hit marker), so callers pass scratch copies."""
    cdef i64 result = 0, bit, best_bit
    cdef Py_ssize_t i, unhit = 0
    cdef int q, cover, best_cover
    for i in range(ns):
        if sets[i] == 0:
            return -1
        unhit += 1
    while unhit > 0:
        best_cover = 0
        best_bit = 0
        for q in range(n):
            bit = 1LL << (n - 1 - q)
            cover = 0
            for i in range(ns):
                if sets[i] != 0 and (sets[i] & bit):
                    cover += 1
            if cover > best_cover:
                best_cover = cover
                best_bit = bit
        result |= best_bit
        for i in range(ns):
            if sets[i] != 0 and (sets[i] & best_bit):
                sets[i] = 0
                unhit -= 1
    return result


cdef i64 _greedy_cover(i64* cover, int n, Py_ssize_t ns, i64* unhit, Py_ssize_t nchunks) nogil:
    """Greedy on the transposed representation: cover[q*nchunks+c] is a
    bitset over set indices.  Same choices as _greedy (multiplicity counts,
    ties to lowest qubit)."""
    cdef i64 result = 0
    cdef Py_ssize_t c
    cdef int q, best_q, cnt, best_cover, remaining = 0
    for c in range(nchunks):
        remaining += POPCNT64(unhit[c])
    while remaining > 0:
        best_cover = 0
        best_q = -1
        for q in range(n):
            cnt = 0
            for c in range(nchunks):
                cnt += POPCNT64(cover[q * nchunks + c] & unhit[c])
            if cnt > best_cover:
                best_cover = cnt
                best_q = q
        result |= 1LL << (n - 1 - best_q)
        for c in range(nchunks):
            unhit[c] &= ~cover[best_q * nchunks + c]
        remaining -= best_cover
    return result


cdef i64 _exact_small(i64* sets, Py_ssize_t ns, int n) nogil:
    """Minimum hitting set by increasing-size lexicographic enumeration
    over the union's qubits (ascending qubit index)."""
    cdef i64 uni = 0, mask
    cdef Py_ssize_t i
    cdef int q, nq = 0, size, j, pos
    cdef int qbit[64]
    cdef int idx[64]
    cdef bint ok
    if ns == 0:
        return 0
    for i in range(ns):
        if sets[i] == 0:
            return -1
        uni |= sets[i]
    for q in range(n):
        if (uni >> (n - 1 - q)) & 1:
            qbit[nq] = n - 1 - q
            nq += 1
    for size in range(1, nq + 1):
        for j in range(size):
            idx[j] = j
        while True:
            mask = 0
            for j in range(size):
                mask |= 1LL << qbit[idx[j]]
            ok = True
            for i in range(ns):
                if not (sets[i] & mask):
                    ok = False
                    break
            if ok:
                return mask
            pos = size - 1
            while pos >= 0 and idx[pos] == nq - size + pos:
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for j in range(pos + 1, size):
                idx[j] = idx[j - 1] + 1
    return -1


def greedy_hitting_mask(sets, int n):
    cdef i64[::1] arr = np.ascontiguousarray(np.asarray(sets, dtype=np.int64))
    cdef Py_ssize_t ns = arr.shape[0]
    if ns == 0:
        return 0
    cdef i64* scratch = <i64*> malloc(ns * sizeof(i64))
    cdef Py_ssize_t i
    for i in range(ns):
        scratch[i] = arr[i]
    cdef i64 out = _greedy(scratch, ns, n)
    free(scratch)
    return out


def exact_small_hitting_mask(sets, int n):
    cdef i64[::1] arr = np.ascontiguousarray(np.asarray(sets, dtype=np.int64))
    cdef Py_ssize_t ns = arr.shape[0]
    if ns == 0:
        return 0
    cdef i64* scratch = <i64*> malloc(ns * sizeof(i64))
    cdef Py_ssize_t i
    for i in range(ns):
        scratch[i] = arr[i]
    cdef i64 out = _exact_small(scratch, ns, n)
    free(scratch)
    return out


def auto_hitting_mask(sets, int n):
    cdef i64[::1] arr = np.ascontiguousarray(np.asarray(sets, dtype=np.int64))
    cdef Py_ssize_t ns = arr.shape[0]
    if ns == 0:
        return 0
    cdef Scratch* s = _scratch_alloc(ns, n)
    cdef Py_ssize_t i
    for i in range(ns):
        s.fbuf[i] = arr[i]
    cdef i64 out = _family_solve(s.fbuf, ns, n, s)
    _scratch_free(s)
    return out


# ---------------------------------------------------------------------------
# merge-step decisions and walk-order cost replay


cdef inline i64 _conj_one(i64 x, i64 tbit, i64 rest, i64 pbit) nogil:
    if pbit and (x & pbit):
        x ^= tbit
    if x & tbit:
        x ^= rest
    return x


cdef void _conj_params(i64 a, i64 b, int t, int n,
                       i64* tbit, i64* rest, i64* pbit, int* ncx) nogil:
    cdef i64 delta = a ^ b
    tbit[0] = 1LL << (n - 1 - t)
    if delta & tbit[0]:
        rest[0] = delta & ~tbit[0]
        pbit[0] = 0
        ncx[0] = POPCNT64(delta) - 1
    else:
        rest[0] = delta
        pbit[0] = 1LL << (BITLEN64(delta) - 1)
        ncx[0] = POPCNT64(delta) + 1


cdef struct Scratch:
    i64* diffs      # m entries: raw XOR differences vs z1
    i64* fbuf       # m entries: transformed family
    i64* aux        # m entries: greedy fallback scratch
    i64* cover      # n * nchunks: transposed coverage bitsets
    i64* unhit      # nchunks
    Py_ssize_t nchunks


cdef Scratch* _scratch_alloc(Py_ssize_t m, int n):
    cdef Py_ssize_t nchunks = ((m + 63) >> 6) or 1
    cdef Scratch* s = <Scratch*> malloc(sizeof(Scratch))
    s.nchunks = nchunks
    s.diffs = <i64*> malloc((3 * m + (n + 1) * nchunks + 4) * sizeof(i64))
    s.fbuf = s.diffs + m
    s.aux = s.fbuf + m
    s.cover = s.aux + m
    s.unhit = s.cover + n * nchunks
    return s


cdef void _scratch_free(Scratch* s):
    free(s.diffs)
    free(s)


cdef i64 _family_solve(i64* fbuf, Py_ssize_t cnt, int n, Scratch* s) nogil:
    """Hitting-set policy on a prebuilt family: exact when small, greedy
    via transposed coverage bitsets otherwise."""
    cdef i64 uni = 0, d
    cdef Py_ssize_t i, c
    cdef int q, bp
    if cnt == 0:
        return 0
    for i in range(cnt):
        if fbuf[i] == 0:
            return -1
        uni |= fbuf[i]
    if cnt <= EXACT_MAX_SETS and POPCNT64(uni) <= EXACT_MAX_UNIVERSE:
        return _exact_small(fbuf, cnt, n)
    cdef Py_ssize_t nchunks = (cnt + 63) >> 6
    for q in range(n * nchunks):
        s.cover[q] = 0
    for i in range(cnt):
        d = fbuf[i]
        while d:
            bp = CTZ64(d)
            q = n - 1 - bp
            s.cover[q * nchunks + (i >> 6)] |= 1LL << (i & 63)
            d &= d - 1
    for c in range(nchunks):
        s.unhit[c] = -1
    if cnt & 63:
        s.unhit[nchunks - 1] = (1LL << (cnt & 63)) - 1
    return _greedy_cover(s.cover, n, cnt, s.unhit, nchunks)


cdef i64 _control_from_diffs(Py_ssize_t cnt, i64 a, i64 b, int t, int n, Scratch* s) nogil:
    """Reduced-control mask given prebuilt raw diffs vs z1.  The CX
    conjugation acts linearly on XOR differences, so diffs transform with
    the same map as labels."""
    cdef i64 tbit, rest, pbit, d
    cdef int ncx
    cdef Py_ssize_t i
    _conj_params(a, b, t, n, &tbit, &rest, &pbit, &ncx)
    for i in range(cnt):
        s.fbuf[i] = _conj_one(s.diffs[i], tbit, rest, pbit) & ~tbit
    return _family_solve(s.fbuf, cnt, n, s)


cdef void _decide(i64* lab, unsigned char* alv, Py_ssize_t m,
                  Py_ssize_t i1, Py_ssize_t i2, int tgt, int n, bint reduce_controls,
                  Scratch* s, int* out_t, i64* out_cmask, int* out_conj) nogil:
    cdef i64 delta = lab[i1] ^ lab[i2]
    cdef i64 tbit, rest, pbit, cmask = -1, cm
    cdef int t, q, k, best, ncx
    cdef Py_ssize_t j, cnt = 0
    if reduce_controls:
        for j in range(m):
            if alv[j] and j != i1 and j != i2:
                s.diffs[cnt] = lab[j] ^ lab[i1]
                cnt += 1
    if tgt >= 0:
        t = tgt
    elif not reduce_controls:
        t = n - BITLEN64(delta)
    else:
        t = -1
        best = -1
        for q in range(n):
            if (delta >> (n - 1 - q)) & 1:
                cm = _control_from_diffs(cnt, lab[i1], lab[i2], q, n, s)
                k = POPCNT64(cm)
                if best < 0 or k < best:
                    best = k
                    t = q
                    cmask = cm
    _conj_params(lab[i1], lab[i2], t, n, &tbit, &rest, &pbit, &ncx)
    if not reduce_controls:
        cmask = ((1LL << n) - 1) & ~tbit
    elif cmask == -1:
        cmask = _control_from_diffs(cnt, lab[i1], lab[i2], t, n, s)
    out_t[0] = t
    out_cmask[0] = cmask
    out_conj[0] = ncx


def merge_step_decision(lab, alv, Py_ssize_t i1, Py_ssize_t i2, int tgt, int n,
                        bint reduce_controls):
    cdef i64[::1] labels = np.ascontiguousarray(np.asarray(lab, dtype=np.int64))
    cdef unsigned char[::1] alive = np.ascontiguousarray(np.asarray(alv, dtype=np.uint8))
    cdef Py_ssize_t m = labels.shape[0]
    cdef Scratch* s = _scratch_alloc(m, n)
    cdef int t, conj
    cdef i64 cmask
    _decide(&labels[0], &alive[0], m, i1, i2, tgt, n, reduce_controls, s, &t, &cmask, &conj)
    _scratch_free(s)
    return t, cmask, conj


def conj_apply_labels(lab, alv, i64 a, i64 b, int t, int n):
    cdef i64[::1] labels = lab
    cdef unsigned char[::1] alive = np.ascontiguousarray(np.asarray(alv, dtype=np.uint8))
    cdef Py_ssize_t m = labels.shape[0]
    cdef i64 tbit, rest, pbit
    cdef int ncx
    cdef Py_ssize_t j
    _conj_params(a, b, t, n, &tbit, &rest, &pbit, &ncx)
    for j in range(m):
        if alive[j]:
            labels[j] = _conj_one(labels[j], tbit, rest, pbit)


def walk_cx_cost(states, z1i, z2i, tgts, int n, btable, bint reduce_controls, bint frame):
    """CX count the synthesis pipeline would emit for this order; labels
    only, no amplitudes.  See py_backend.walk_cx_cost."""
    cdef i64[::1] vals = np.ascontiguousarray(np.asarray(states, dtype=np.int64))
    cdef i64[::1] a1 = np.ascontiguousarray(np.asarray(z1i, dtype=np.int64))
    cdef i64[::1] a2 = np.ascontiguousarray(np.asarray(z2i, dtype=np.int64))
    cdef i64[::1] tg = np.ascontiguousarray(np.asarray(tgts, dtype=np.int64))
    cdef i64[::1] bt = np.ascontiguousarray(np.asarray(btable, dtype=np.int64))
    cdef Py_ssize_t m = vals.shape[0]
    if m <= 1:
        return 0
    cdef i64* lab = <i64*> malloc(m * sizeof(i64))
    cdef unsigned char* alv = <unsigned char*> malloc(m)
    cdef Scratch* scr = _scratch_alloc(m, n)
    cdef Py_ssize_t s, j, i1, i2
    cdef i64 total = 0, cmask, tbit, rest, pbit, av, bv
    cdef int t, conj, ncx
    for j in range(m):
        lab[j] = vals[j]
        alv[j] = 1
    with nogil:
        for s in range(m - 2, -1, -1):
            i1 = <Py_ssize_t> a1[s]
            i2 = <Py_ssize_t> a2[s]
            av = lab[i1]
            bv = lab[i2]
            _decide(lab, alv, m, i1, i2, <int> tg[s], n, reduce_controls, scr, &t, &cmask, &conj)
            total += conj if frame else 2 * conj
            total += bt[POPCNT64(cmask)]
            alv[i2] = 0
            _conj_params(av, bv, t, n, &tbit, &rest, &pbit, &ncx)
            for j in range(m):
                if alv[j]:
                    lab[j] = _conj_one(lab[j], tbit, rest, pbit)
    free(lab)
    free(alv)
    _scratch_free(scr)
    return total
