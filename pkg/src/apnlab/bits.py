"""Linear algebra over F_2 on bit-packed vectors.

A vector of F_2^k is a Python int whose bit i is coordinate i.  A matrix is a
sequence of row ints, so (M @ v)_i = parity(popcount(row_i & v)).  Everything
here is exact integer arithmetic; the sizes involved (k <= 54) never need
numpy.
"""

from __future__ import annotations


def parity(x: int) -> int:
    return x.bit_count() & 1


def matvec(rows, v: int) -> int:
    """Apply a matrix (list of row ints) to a vector."""
    out = 0
    for i, r in enumerate(rows):
        out |= ((r & v).bit_count() & 1) << i
    return out


def transpose(rows, ncols: int) -> list[int]:
    out = [0] * ncols
    for i, r in enumerate(rows):
        for j in range(ncols):
            out[j] |= ((r >> j) & 1) << i
    return out


def matmul(a, b, ncols_b: int) -> list[int]:
    """Rows of a @ b where both are row-int matrices (b has ncols_b columns)."""
    bt = transpose(b, ncols_b)
    return [sum(((r & c).bit_count() & 1) << j for j, c in enumerate(bt)) for r in a]


def rank(vectors) -> int:
    r = 0
    basis = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            r += 1
    return r


def rref(vectors) -> list[int]:
    """Reduced row-echelon basis of the span, pivots (lowest set bits)
    strictly increasing down the list.  Canonical for the span."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            if v & (b & -b):
                v ^= b
        if v:
            piv = v & -v
            for i, b in enumerate(basis):
                if b & piv:
                    basis[i] = b ^ v
            basis.append(v)
    basis.sort(key=lambda b: b & -b)
    return basis


def span(vectors) -> list[int]:
    """All 2^dim elements spanned, sorted ascending."""
    out = [0]
    for v in rref(vectors):
        out += [x ^ v for x in out]
    return sorted(out)


def identity(k: int) -> list[int]:
    return [1 << i for i in range(k)]


def invert(rows, k: int) -> list[int]:
    """Inverse of a k x k matrix given as row ints. Raises ValueError if singular."""
    aug = [(rows[i] | (1 << (k + i))) for i in range(k)]
    r = 0
    for c in range(k):
        piv = None
        for i in range(r, k):
            if (aug[i] >> c) & 1:
                piv = i
                break
        if piv is None:
            raise ValueError("matrix is singular")
        aug[r], aug[piv] = aug[piv], aug[r]
        for i in range(k):
            if i != r and ((aug[i] >> c) & 1):
                aug[i] ^= aug[r]
        r += 1
    return [row >> k for row in aug]


def nullspace(rows, ncols: int) -> list[int]:
    """Basis of {v in F_2^ncols : M v = 0}."""
    # RREF of the row space, tracking pivot columns.
    rr = []
    pivots = []
    for row in rows:
        for p, b in zip(pivots, rr):
            if (row >> p) & 1:
                row ^= b
        if row:
            p = (row & -row).bit_length() - 1
            for i in range(len(rr)):
                if (rr[i] >> p) & 1:
                    rr[i] ^= row
            rr.append(row)
            pivots.append(p)
    pivset = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivset:
            continue
        v = 1 << j
        for p, b in zip(pivots, rr):
            if (b >> j) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def orthogonal_complement(vectors, k: int) -> list[int]:
    """Basis of {w : <w, v> = 0 for all v} w.r.t. the dot product on F_2^k."""
    return nullspace(list(vectors), k)


def solve_columns(cols, target: int) -> int | None:
    """One coefficient mask c with XOR of {cols[j] : bit j of c set} = target,
    or None if target is outside the column span."""
    basis: list[tuple[int, int]] = []  # (reduced vector, coefficient mask)
    for j, v in enumerate(cols):
        tag = 1 << j
        for b, t in basis:
            if v & (b & -b):
                v, tag = v ^ b, tag ^ t
        if v:
            basis.append((v, tag))
    acc = 0
    for b, t in basis:
        if target & (b & -b):
            target, acc = target ^ b, acc ^ t
    return acc if target == 0 else None


def is_invertible(rows, k: int) -> bool:
    return rank(rows) == k
