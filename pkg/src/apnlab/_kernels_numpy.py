"""Pure-numpy implementations of the hot kernels.

Same signatures as _kernels_numba; selected via APNLAB_BACKEND=numpy (or when
numba is unavailable).  Everything operates on packed bit-vectors: an element
of F_2^k is an integer with bit i = coordinate i.
"""

import numpy as np


def popcount(a):
    return np.bitwise_count(a)


def fwht(mat):
    """In-place Walsh-Hadamard transform along the last axis (length 2^n)."""
    b, n = mat.shape
    h = 1
    while h < n:
        m3 = mat.reshape(b, n // (2 * h), 2, h)
        lo = m3[:, :, 0, :].copy()
        hi = m3[:, :, 1, :].copy()
        m3[:, :, 0, :] = lo + hi
        m3[:, :, 1, :] = lo - hi
        h *= 2
    return mat


def mobius(mat):
    """In-place binary Moebius transform (truth table <-> ANF) along the last
    axis.  Self-inverse."""
    b, n = mat.shape
    h = 1
    while h < n:
        m3 = mat.reshape(b, n // (2 * h), 2, h)
        m3[:, :, 1, :] ^= m3[:, :, 0, :]
        h *= 2
    return mat


def component_signs(table, bs):
    """(len(bs), 2^n) int32 of (-1)^<b, F(x)>."""
    par = popcount(table[None, :] & np.asarray(bs, dtype=table.dtype)[:, None]) & 1
    return (1 - 2 * par.astype(np.int32))


def walsh_component_maxes(table, n):
    """max_a |W_F(a, b)| for every b (index = b); entry 0 is 2^n."""
    size = 1 << n
    out = np.zeros(size, dtype=np.int64)
    out[0] = size
    chunk = max(1, (1 << 22) // size)
    for start in range(1, size, chunk):
        bs = np.arange(start, min(start + chunk, size), dtype=table.dtype)
        rows = component_signs(table, bs)
        fwht(rows)
        out[start:start + len(bs)] = np.abs(rows).max(axis=1)
    return out


def walsh_zero_bitmap(table, n):
    """uint8 bitmap over packed (a, b) = a | b << n marking W_F(a, b) == 0.
    Row b = 0 is set directly: all a != 0, plus the (0, 0) entry."""
    size = 1 << n
    bm = np.zeros(size * size, dtype=np.uint8)
    bm[:size] = 1
    chunk = max(1, (1 << 22) // size)
    for start in range(1, size, chunk):
        bs = np.arange(start, min(start + chunk, size), dtype=table.dtype)
        rows = component_signs(table, bs)
        fwht(rows)
        block = (rows == 0).astype(np.uint8)
        bm[start * size:(start + len(bs)) * size] = block.reshape(-1)
    return bm


def ddt_spectrum(table, n):
    """(differential uniformity, histogram of DDT entries over rows a != 0).

    Histogram index = entry value (0 .. 2^n)."""
    size = 1 << n
    idx = np.arange(size)
    hist = np.zeros(size + 1, dtype=np.int64)
    dmax = 0
    for a in range(1, size):
        row = np.bincount(table ^ table[idx ^ a], minlength=size)
        hist += np.bincount(row, minlength=size + 1)
        m = int(row.max())
        if m > dmax:
            dmax = m
    return dmax, hist


def rank_batch(vecs, nbits):
    """Rank over F_2 of each row-set: vecs has shape (s, k), each row holds k
    packed vectors of nbits bits.  Returns int8 (s,)."""
    rows = np.array(vecs, dtype=np.int64, copy=True)
    s, k = rows.shape
    used = np.zeros((s, k), dtype=bool)
    rank = np.zeros(s, dtype=np.int64)
    sidx = np.arange(s)
    for bit in range(nbits):
        has = ((rows >> bit) & 1).astype(bool) & ~used
        found = has.any(axis=1)
        if not found.any():
            continue
        pividx = has.argmax(axis=1)
        piv = rows[sidx, pividx].copy()
        piv[~found] = 0
        elim = ((rows >> bit) & 1).astype(bool)
        elim[sidx, pividx] = False
        rows ^= np.where(elim, piv[:, None], 0)
        used[sidx[found], pividx[found]] = True
        rank += found
    return rank.astype(np.int8)


def transform_batch(vecs, rows):
    """Apply a bit-matrix (row ints, out_bits = len(rows)) to every packed
    vector in vecs (any shape)."""
    vecs = np.asarray(vecs, dtype=np.int64)
    out = np.zeros_like(vecs)
    for i, r in enumerate(rows):
        out |= ((popcount(vecs & np.int64(r)) & 1).astype(np.int64)) << i
    return out


def component_ls_dims(gram_rows, bs):
    """Kernel dimension of the symplectic (Gram) form of each component b.

    gram_rows: (n, n) int64, gram_rows[c] = packed rows of coordinate c's form.
    Returns int8 array, one dim per entry of bs (b = 0 gives n)."""
    n = gram_rows.shape[0]
    bs = np.asarray(bs, dtype=np.int64)
    rows = np.zeros((len(bs), n), dtype=np.int64)
    for c in range(n):
        sel = ((bs >> c) & 1).astype(bool)
        rows[sel] ^= gram_rows[c]
    return (n - rank_batch(rows, n)).astype(np.int8)


def quad_direction_dims(table, n, dirs):
    """For a quadratic F: dim ker of the linear part of the derivative in each
    direction a of dirs.  Returns int8 (len(dirs),)."""
    dirs = np.asarray(dirs, dtype=np.int64)
    t = np.asarray(table, dtype=np.int64)
    cols = np.empty((len(dirs), n), dtype=np.int64)
    f0 = int(t[0])
    fa = t[dirs]
    for i in range(n):
        e = 1 << i
        cols[:, i] = t[dirs ^ e] ^ fa ^ int(t[e]) ^ f0
    return (n - rank_batch(cols, n)).astype(np.int8)


def _mulv(exp, log, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    prod = exp[log[a] + log[b]]
    return np.where((a == 0) | (b == 0), 0, prod)


def trivariate_direction_dims(exp, log, m, u, alpha, beta, gamma, system):
    """Solution-space dimensions of the derivative (system=2) or component
    linear-structure (system=6) equations of the trivariate cube family, for a
    batch of directions (alpha, beta, gamma).  Returns int8."""
    alpha = np.asarray(alpha, dtype=np.int64)
    beta = np.asarray(beta, dtype=np.int64)
    gamma = np.asarray(gamma, dtype=np.int64)
    d = len(alpha)
    mul = lambda a, b: _mulv(exp, log, a, b)
    a2 = mul(alpha, alpha)
    b2 = mul(beta, beta)
    g2 = mul(gamma, gamma)
    cols = np.empty((d, 3 * m), dtype=np.int64)
    if system == 2:
        ua, ub, ug = mul(u, alpha), mul(u, beta), mul(u, gamma)
        ua2, ub2, ug2 = mul(u, a2), mul(u, b2), mul(u, g2)
        for i in range(m):
            e = 1 << i
            e2 = int(_mulv(exp, log, e, e))
            # x-column: (alpha e^2 + alpha^2 e, u gamma^2 e, u beta e^2)
            cols[:, i] = (mul(alpha, e2) ^ mul(a2, e)
                          | (mul(ug2, e) << m)
                          | (mul(ub, e2) << 2 * m))
            # y-column: (u gamma e^2, beta e^2 + beta^2 e, u alpha^2 e)
            cols[:, m + i] = (mul(ug, e2)
                              | ((mul(beta, e2) ^ mul(b2, e)) << m)
                              | (mul(ua2, e) << 2 * m))
            # z-column: (u beta^2 e, u alpha e^2, gamma e^2 + gamma^2 e)
            cols[:, 2 * m + i] = (mul(ub2, e)
                                  | (mul(ua, e2) << m)
                                  | ((mul(gamma, e2) ^ mul(g2, e)) << 2 * m))
    elif system == 6:
        u2 = int(_mulv(exp, log, u, u))
        ua, ub, ug = mul(u, alpha), mul(u, beta), mul(u, gamma)
        u2a2, u2b2, u2g2 = mul(u2, a2), mul(u2, b2), mul(u2, g2)
        for i in range(m):
            e = 1 << i
            e2 = int(_mulv(exp, log, e, e))
            e4 = int(_mulv(exp, log, e2, e2))
            # S-column: (alpha e + alpha^2 e^4, gamma^2 u^2 e^4, beta u e)
            cols[:, i] = (mul(alpha, e) ^ mul(a2, e4)
                          | (mul(u2g2, e4) << m)
                          | (mul(ub, e) << 2 * m))
            # T-column: (gamma u e, beta e + beta^2 e^4, alpha^2 u^2 e^4)
            cols[:, m + i] = (mul(ug, e)
                              | ((mul(beta, e) ^ mul(b2, e4)) << m)
                              | (mul(u2a2, e4) << 2 * m))
            # U-column: (beta^2 u^2 e^4, alpha u e, gamma e + gamma^2 e^4)
            cols[:, 2 * m + i] = (mul(u2b2, e4)
                                  | (mul(ua, e) << m)
                                  | ((mul(gamma, e) ^ mul(g2, e4)) << 2 * m))
    else:
        raise ValueError(f"unknown system {system}")
    return (3 * m - rank_batch(cols, 3 * m)).astype(np.int8)


def extract_spaces_dfs(zmap, two_n, dim):
    """All dim-dimensional subspaces fully inside the set marked by zmap
    (uint8 bitmap over F_2^two_n, zmap[0] must be 1).

    Returns an int64 array (count, dim) of generator tuples; each space is
    produced exactly once, generators strictly ascending (the greedy minimal
    basis of the space)."""
    full = np.nonzero(zmap)[0].astype(np.int64)
    out = []
    target = 1 << dim

    def rec(gens, span_len, fl, pivmask, last):
        if len(gens) == dim:
            out.append(list(gens))
            return
        start = int(np.searchsorted(fl, last + 1))
        cand = fl[start:]
        for pos in range(len(cand)):
            c = int(cand[pos])
            # the full space still needs target - span_len elements > c
            if len(cand) - pos < target - span_len:
                break
            if c & pivmask:
                continue
            t = fl ^ c
            loc = np.searchsorted(fl, t)
            np.clip(loc, 0, len(fl) - 1, out=loc)
            child_fl = fl[fl[loc] == t]
            # of the child closure elements > c, span_len - 1 are span, the
            # remaining target - 2*span_len space elements must fit too
            ngt = len(child_fl) - int(np.searchsorted(child_fl, c, side="right"))
            if ngt - (span_len - 1) < target - 2 * span_len:
                continue
            rec(gens + [c], 2 * span_len,
                child_fl, pivmask | (1 << (c.bit_length() - 1)), c)

    rec([], 1, full, 0, 0)
    if not out:
        return np.zeros((0, dim), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def structural_candidates(s, n):
    """Canonical bases of subspaces B of F_2^n with 1 <= dim <= n-1 whose
    normal-span dimension sigma = dim span{s[b] : b in B \ 0} is at most
    dim B.  Such B are the only possible output-side projections of graph
    spaces inside a zero set whose rows are hyperplane cosets with normals s.

    Returns (gens, dims): int64 (count, n-1) generator rows padded with
    zeros, and int8 dims; rows in lexicographic generator order."""
    s = np.asarray(s, dtype=np.int64)
    max_dim = n - 1
    out_gens = []
    out_dims = []
    all_c = np.arange(1 << n, dtype=np.int64)

    def insert_all(basis, vals):
        basis = list(basis)
        for v in vals:
            v = int(v)
            for b in basis:
                if v & (b & -b):
                    v ^= b
            if v:
                basis.append(v)
        return basis

    def rec(gens, span, sbasis, pivmask):
        d = len(gens)
        start = gens[-1] + 1 if gens else 1
        cand = all_c[start:]
        cand = cand[(cand & pivmask) == 0]
        if cand.size == 0:
            return
        # sigma of each child = rank of parent s-basis plus s over new elems
        mats = np.empty((cand.size, len(sbasis) + span.size), dtype=np.int64)
        mats[:, :len(sbasis)] = np.asarray(sbasis, dtype=np.int64)
        mats[:, len(sbasis):] = s[span[None, :] ^ cand[:, None]]
        sigmas = rank_batch(mats, n)
        for c, sigma in zip(cand, sigmas):
            if sigma > max_dim:
                continue
            c = int(c)
            child_gens = gens + [c]
            if sigma <= d + 1:
                out_gens.append(child_gens + [0] * (max_dim - d - 1))
                out_dims.append(d + 1)
            if d + 1 < max_dim:
                new_elems = span ^ c
                rec(child_gens, np.concatenate([span, new_elems]),
                    insert_all(sbasis, s[new_elems]),
                    pivmask | (1 << (c.bit_length() - 1)))

    rec([], np.zeros(1, dtype=np.int64), [], 0)
    if not out_gens:
        return (np.zeros((0, max_dim), dtype=np.int64),
                np.zeros(0, dtype=np.int8))
    return np.array(out_gens, dtype=np.int64), np.array(out_dims, dtype=np.int8)
