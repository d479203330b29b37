"""Numba-jitted implementations of the hot kernels (same API as
_kernels_numpy).  First call per kernel pays a compile; cache=True keeps the
compiled artifacts across processes."""

import numpy as np
from numba import njit

_PC16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


@njit(cache=True, inline="always")
def _pop64(v):
    return (_PC16[v & 0xFFFF] + _PC16[(v >> 16) & 0xFFFF]
            + _PC16[(v >> 32) & 0xFFFF] + _PC16[(v >> 48) & 0xFFFF])


def popcount(a):
    return np.bitwise_count(a)


@njit(cache=True)
def _fwht(mat):
    b, n = mat.shape
    for r in range(b):
        h = 1
        while h < n:
            for start in range(0, n, 2 * h):
                for j in range(start, start + h):
                    x = mat[r, j]
                    y = mat[r, j + h]
                    mat[r, j] = x + y
                    mat[r, j + h] = x - y
            h <<= 1
    return mat


def fwht(mat):
    return _fwht(mat)


@njit(cache=True)
def _mobius(mat):
    b, n = mat.shape
    for r in range(b):
        h = 1
        while h < n:
            for start in range(0, n, 2 * h):
                for j in range(start, start + h):
                    mat[r, j + h] ^= mat[r, j]
            h <<= 1
    return mat


def mobius(mat):
    return _mobius(mat)


@njit(cache=True)
def _component_signs(table, bs):
    nb = bs.size
    n = table.size
    out = np.empty((nb, n), dtype=np.int32)
    for i in range(nb):
        b = bs[i]
        for x in range(n):
            out[i, x] = 1 - 2 * (_pop64(table[x] & b) & 1)
    return out


def component_signs(table, bs):
    return _component_signs(np.asarray(table, dtype=np.int64),
                            np.asarray(bs, dtype=np.int64))


@njit(cache=True)
def _walsh_component_maxes(table, n):
    size = 1 << n
    out = np.zeros(size, dtype=np.int64)
    out[0] = size
    row = np.empty(size, dtype=np.int64)
    for b in range(1, size):
        for x in range(size):
            row[x] = 1 - 2 * (_pop64(table[x] & b) & 1)
        h = 1
        while h < size:
            for start in range(0, size, 2 * h):
                for j in range(start, start + h):
                    x = row[j]
                    y = row[j + h]
                    row[j] = x + y
                    row[j + h] = x - y
            h <<= 1
        best = 0
        for x in range(size):
            v = row[x] if row[x] >= 0 else -row[x]
            if v > best:
                best = v
        out[b] = best
    return out


def walsh_component_maxes(table, n):
    return _walsh_component_maxes(np.asarray(table, dtype=np.int64), n)


@njit(cache=True)
def _walsh_zero_bitmap(table, n):
    size = 1 << n
    bm = np.zeros(size * size, dtype=np.uint8)
    for a in range(size):
        bm[a] = 1
    row = np.empty(size, dtype=np.int64)
    for b in range(1, size):
        for x in range(size):
            row[x] = 1 - 2 * (_pop64(table[x] & b) & 1)
        h = 1
        while h < size:
            for start in range(0, size, 2 * h):
                for j in range(start, start + h):
                    x = row[j]
                    y = row[j + h]
                    row[j] = x + y
                    row[j + h] = x - y
            h <<= 1
        base = b << n
        for a in range(size):
            if row[a] == 0:
                bm[base | a] = 1
    return bm


def walsh_zero_bitmap(table, n):
    return _walsh_zero_bitmap(np.asarray(table, dtype=np.int64), n)


@njit(cache=True)
def _ddt_spectrum(table, n):
    size = 1 << n
    hist = np.zeros(size + 1, dtype=np.int64)
    row = np.zeros(size, dtype=np.int64)
    dmax = 0
    for a in range(1, size):
        for x in range(size):
            row[table[x] ^ table[x ^ a]] += 1
        for v in range(size):
            c = row[v]
            hist[c] += 1
            if c > dmax:
                dmax = c
            row[v] = 0
    return dmax, hist


def ddt_spectrum(table, n):
    dmax, hist = _ddt_spectrum(np.asarray(table, dtype=np.int64), n)
    return int(dmax), hist


@njit(cache=True, inline="always")
def _rank_of(rows, k, nbits):
    # destroys rows[:k]; greedy elimination by lowest set bit
    rank = 0
    for i in range(k):
        v = rows[i]
        for j in range(i):
            w = rows[j]
            if w and (v & (w & -w)):
                v ^= w
        rows[i] = v
        if v:
            rank += 1
            # clear v's pivot from later handling is implicit (reduction order)
    return rank


@njit(cache=True)
def _rank_batch(vecs, nbits):
    s, k = vecs.shape
    out = np.empty(s, dtype=np.int8)
    buf = np.empty(k, dtype=np.int64)
    for i in range(s):
        for j in range(k):
            buf[j] = vecs[i, j]
        out[i] = _rank_of(buf, k, nbits)
    return out


def rank_batch(vecs, nbits):
    return _rank_batch(np.ascontiguousarray(vecs, dtype=np.int64), nbits)


@njit(cache=True)
def _transform_batch(vecs, rows):
    flat = vecs.ravel()
    out = np.zeros_like(flat)
    nr = rows.size
    for i in range(flat.size):
        v = flat[i]
        acc = 0
        for r in range(nr):
            acc |= np.int64(_pop64(v & rows[r]) & 1) << r
        out[i] = acc
    return out.reshape(vecs.shape)


def transform_batch(vecs, rows):
    return _transform_batch(np.asarray(vecs, dtype=np.int64),
                            np.asarray(rows, dtype=np.int64))


@njit(cache=True)
def _component_ls_dims(gram_rows, bs):
    n = gram_rows.shape[0]
    out = np.empty(bs.size, dtype=np.int8)
    buf = np.empty(n, dtype=np.int64)
    for i in range(bs.size):
        b = bs[i]
        for r in range(n):
            acc = 0
            for c in range(n):
                if (b >> c) & 1:
                    acc ^= gram_rows[c, r]
            buf[r] = acc
        out[i] = n - _rank_of(buf, n, n)
    return out


def component_ls_dims(gram_rows, bs):
    return _component_ls_dims(np.ascontiguousarray(gram_rows, dtype=np.int64),
                              np.asarray(bs, dtype=np.int64))


@njit(cache=True)
def _quad_direction_dims(table, n, dirs):
    out = np.empty(dirs.size, dtype=np.int8)
    buf = np.empty(n, dtype=np.int64)
    f0 = table[0]
    for i in range(dirs.size):
        a = dirs[i]
        fa = table[a]
        for j in range(n):
            e = 1 << j
            buf[j] = table[a ^ e] ^ fa ^ table[e] ^ f0
        out[i] = n - _rank_of(buf, n, n)
    return out


def quad_direction_dims(table, n, dirs):
    return _quad_direction_dims(np.asarray(table, dtype=np.int64), n,
                                np.asarray(dirs, dtype=np.int64))


@njit(cache=True, inline="always")
def _gmul(exp, log, q1, a, b):
    if a == 0 or b == 0:
        return np.int64(0)
    return exp[log[a] + log[b]]


@njit(cache=True)
def _trivariate_direction_dims(exp, log, m, u, alpha, beta, gamma, system):
    q1 = (1 << m) - 1
    d = alpha.size
    out = np.empty(d, dtype=np.int8)
    cols = np.empty(3 * m, dtype=np.int64)
    for t in range(d):
        al, be, ga = alpha[t], beta[t], gamma[t]
        a2 = _gmul(exp, log, q1, al, al)
        b2 = _gmul(exp, log, q1, be, be)
        g2 = _gmul(exp, log, q1, ga, ga)
        if system == 2:
            ua = _gmul(exp, log, q1, u, al)
            ub = _gmul(exp, log, q1, u, be)
            ug = _gmul(exp, log, q1, u, ga)
            ua2 = _gmul(exp, log, q1, u, a2)
            ub2 = _gmul(exp, log, q1, u, b2)
            ug2 = _gmul(exp, log, q1, u, g2)
            for i in range(m):
                e = np.int64(1 << i)
                e2 = _gmul(exp, log, q1, e, e)
                cols[i] = ((_gmul(exp, log, q1, al, e2) ^ _gmul(exp, log, q1, a2, e))
                           | (_gmul(exp, log, q1, ug2, e) << m)
                           | (_gmul(exp, log, q1, ub, e2) << (2 * m)))
                cols[m + i] = (_gmul(exp, log, q1, ug, e2)
                               | ((_gmul(exp, log, q1, be, e2) ^ _gmul(exp, log, q1, b2, e)) << m)
                               | (_gmul(exp, log, q1, ua2, e) << (2 * m)))
                cols[2 * m + i] = (_gmul(exp, log, q1, ub2, e)
                                   | (_gmul(exp, log, q1, ua, e2) << m)
                                   | ((_gmul(exp, log, q1, ga, e2) ^ _gmul(exp, log, q1, g2, e)) << (2 * m)))
        else:
            u2 = _gmul(exp, log, q1, u, u)
            ua = _gmul(exp, log, q1, u, al)
            ub = _gmul(exp, log, q1, u, be)
            ug = _gmul(exp, log, q1, u, ga)
            u2a2 = _gmul(exp, log, q1, u2, a2)
            u2b2 = _gmul(exp, log, q1, u2, b2)
            u2g2 = _gmul(exp, log, q1, u2, g2)
            for i in range(m):
                e = np.int64(1 << i)
                e2 = _gmul(exp, log, q1, e, e)
                e4 = _gmul(exp, log, q1, e2, e2)
                cols[i] = ((_gmul(exp, log, q1, al, e) ^ _gmul(exp, log, q1, a2, e4))
                           | (_gmul(exp, log, q1, u2g2, e4) << m)
                           | (_gmul(exp, log, q1, ub, e) << (2 * m)))
                cols[m + i] = (_gmul(exp, log, q1, ug, e)
                               | ((_gmul(exp, log, q1, be, e) ^ _gmul(exp, log, q1, b2, e4)) << m)
                               | (_gmul(exp, log, q1, u2a2, e4) << (2 * m)))
                cols[2 * m + i] = (_gmul(exp, log, q1, u2b2, e4)
                                   | (_gmul(exp, log, q1, ua, e) << m)
                                   | ((_gmul(exp, log, q1, ga, e) ^ _gmul(exp, log, q1, g2, e4)) << (2 * m)))
        out[t] = 3 * m - _rank_of(cols, 3 * m, 3 * m)
    return out


def trivariate_direction_dims(exp, log, m, u, alpha, beta, gamma, system):
    if system not in (2, 6):
        raise ValueError(f"unknown system {system}")
    return _trivariate_direction_dims(
        np.asarray(exp, dtype=np.int64), np.asarray(log, dtype=np.int64),
        m, np.int64(u),
        np.asarray(alpha, dtype=np.int64), np.asarray(beta, dtype=np.int64),
        np.asarray(gamma, dtype=np.int64), system)


@njit(cache=True)
def _msb_bit(x):
    b = np.int64(-1)
    while x:
        x >>= 1
        b += 1
    return b


@njit(cache=True)
def _extract_spaces_dfs(zmap, two_n, dim):
    size = zmap.size
    target = np.int64(1) << dim
    nz = 0
    for w in range(size):
        if zmap[w]:
            nz += 1
    cl = np.empty((dim + 1, nz), dtype=np.int64)
    cl_len = np.zeros(dim + 1, dtype=np.int64)
    bm = np.zeros((dim + 1, size), dtype=np.uint8)
    pos = np.zeros(dim + 1, dtype=np.int64)
    pivmask = np.zeros(dim + 1, dtype=np.int64)
    gens = np.zeros(dim + 1, dtype=np.int64)
    span_len = 1  # the span itself is implicit; only its size matters here

    k = 0
    for w in range(size):
        if zmap[w]:
            cl[0, k] = w
            bm[0, w] = 1
            k += 1
    cl_len[0] = k
    pos[0] = 1  # cl[0, 0] == 0, never a generator

    cap = 1024
    out = np.empty((cap, dim), dtype=np.int64)
    nout = 0

    level = 0
    while level >= 0:
        descended = False
        while pos[level] < cl_len[level]:
            i = pos[level]
            pos[level] += 1
            c = cl[level, i]
            if cl_len[level] - i < target - span_len:
                pos[level] = cl_len[level]
                break
            if c & pivmask[level]:
                continue
            if level + 1 == dim:
                # c completes a space: closure membership already certifies
                # span + c*span is inside the set
                if nout == cap:
                    cap *= 2
                    grown = np.empty((cap, dim), dtype=np.int64)
                    grown[:nout] = out[:nout]
                    out = grown
                for j in range(level):
                    out[nout, j] = gens[j]
                out[nout, level] = c
                nout += 1
                continue
            nl = level + 1
            for j in range(cl_len[nl]):  # clear previous occupant's bitmap
                bm[nl, cl[nl, j]] = 0
            cnt = np.int64(0)
            ngt = np.int64(0)
            first_gt = np.int64(-1)
            for j in range(cl_len[level]):
                w = cl[level, j]
                if bm[level, w ^ c]:
                    cl[nl, cnt] = w
                    if w > c:
                        ngt += 1
                        if first_gt < 0:
                            first_gt = cnt
                    cnt += 1
            if ngt < target - span_len - 1:
                continue
            cl_len[nl] = cnt
            for j in range(cnt):
                bm[nl, cl[nl, j]] = 1
            gens[level] = c
            span_len *= 2
            pivmask[nl] = pivmask[level] | (np.int64(1) << _msb_bit(c))
            pos[nl] = first_gt if first_gt >= 0 else cnt
            level = nl
            descended = True
            break
        if not descended:
            level -= 1
            if level >= 0 and span_len > 1:
                span_len >>= 1
    return out[:nout].copy()


def extract_spaces_dfs(zmap, two_n, dim):
    return _extract_spaces_dfs(np.ascontiguousarray(zmap, dtype=np.uint8),
                               two_n, dim)


@njit(cache=True)
def _structural_candidates(s, n):
    max_dim = n - 1
    size = np.int64(1) << n
    half = 1 << max_dim
    span = np.zeros((max_dim + 1, half), dtype=np.int64)
    sbas = np.zeros((max_dim + 2, n + 1), dtype=np.int64)
    scnt = np.zeros(max_dim + 2, dtype=np.int64)
    gens = np.zeros(max_dim + 1, dtype=np.int64)
    pivm = np.zeros(max_dim + 1, dtype=np.int64)
    nxt = np.zeros(max_dim + 1, dtype=np.int64)

    cap = 1024
    out_gens = np.zeros((cap, max_dim), dtype=np.int64)
    out_dims = np.zeros(cap, dtype=np.int8)
    nout = 0

    level = 0
    nxt[0] = 1
    while level >= 0:
        c = nxt[level]
        descended = False
        while c < size:
            if (c & pivm[level]) == 0:
                # sigma of the child span(gens..., c): parent basis + s of
                # the 2^level new span elements
                cnt = scnt[level]
                for i in range(cnt):
                    sbas[level + 1, i] = sbas[level, i]
                ccnt = cnt
                sl = 1 << level
                ok = True
                for j in range(sl):
                    v = s[span[level, j] ^ c]
                    for i in range(ccnt):
                        b = sbas[level + 1, i]
                        if v & (b & (-b)):
                            v ^= b
                    if v != 0:
                        if ccnt >= max_dim:
                            ok = False
                            break
                        sbas[level + 1, ccnt] = v
                        ccnt += 1
                if ok:
                    d1 = level + 1
                    gens[level] = c
                    if ccnt <= d1:
                        if nout == cap:
                            cap *= 2
                            ng = np.zeros((cap, max_dim), dtype=np.int64)
                            nd = np.zeros(cap, dtype=np.int8)
                            ng[:nout] = out_gens
                            nd[:nout] = out_dims
                            out_gens, out_dims = ng, nd
                        for j in range(max_dim):
                            out_gens[nout, j] = gens[j] if j < d1 else 0
                        out_dims[nout] = np.int8(d1)
                        nout += 1
                    if d1 < max_dim:
                        for j in range(sl):
                            span[d1, j] = span[level, j]
                            span[d1, sl + j] = span[level, j] ^ c
                        scnt[d1] = ccnt
                        pivm[d1] = pivm[level] | (np.int64(1) << _msb_bit(c))
                        nxt[level] = c + 1
                        nxt[d1] = c + 1
                        level = d1
                        descended = True
                        break
            c += 1
        if not descended:
            level -= 1
    return out_gens[:nout].copy(), out_dims[:nout].copy()


def structural_candidates(s, n):
    return _structural_candidates(np.ascontiguousarray(s, dtype=np.int64), n)
