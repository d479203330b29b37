"""Walsh-zero geometry: zero sets, the n-dimensional vector spaces they
contain, thickness spectra, and the permutation-concatenation criterion.

A zero set Z of an n-bit function F lives in F_2^{2n}; points are packed as
a | b << n where a indexes the input mask (left half) and b the component
(right half).  Z always contains the full row b = 0 and the point (0,0).

Space extraction has two engines:

* generic: depth-first search over echelonized partial bases directly on
  the membership bitmap.  Exact for any Z, but only tractable for small 2n.
* structural: when every nonzero row of Z is a coset of a hyperplane
  {a : <a, s_b> = eps_b} — which is the case for the almost-bent quadratic
  functions this package studies — a dim-n space inside Z is equivalent to
  a triple (B, K, phi): its projection B on the right half, its left-half
  kernel K = W'^perp for some dim-t superspace W' of span{s_b : b in B},
  and a linear section phi with <phi(b), s_b> = eps_b.  Enumerating those
  triples replaces an infeasible DFS over 2^{2n} points by a pruned search
  over right-half subspaces plus small linear solves.

Both engines return the same canonical form and are cross-checked in tests.
"""

from dataclasses import dataclass
from collections import Counter

import numpy as np

from . import bits
from .backend import kernels
from .vbf import VBF, CapacityError, SPECTRUM_FULL_MAX_N

# generic DFS works on the 2^{2n} bitmap; keep it to small functions
GENERIC_MAX_2N = 14


@dataclass(frozen=True, order=True)
class VectorSpaceBasis:
    """A subspace of F_2^width in canonical reduced echelon form: pivots
    (lowest set bits) strictly increasing, each pivot cleared in the other
    rows.  Unique per subspace, so equality/order are structural."""
    width: int
    rows: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    def span_list(self) -> list[int]:
        return bits.span(list(self.rows))

    def contains(self, v: int) -> bool:
        for r in self.rows:
            if v & (r & -r):
                v ^= r
        return v == 0

    @staticmethod
    def from_vectors(width: int, vectors) -> "VectorSpaceBasis":
        return VectorSpaceBasis(width, tuple(bits.rref(list(vectors))))


class ZeroSet:
    """Membership bitmap of the Walsh zeroes of an n-bit function."""

    def __init__(self, n: int, bitmap: np.ndarray):
        if bitmap.shape != (1 << (2 * n),):
            raise ValueError(f"bitmap length {bitmap.size}, expected 2^{2 * n}")
        self.n = n
        self.bitmap = np.ascontiguousarray(bitmap, dtype=np.uint8)
        self._structure = -1  # lazily computed by hyperplane_structure

    def contains(self, a: int, b: int) -> bool:
        return bool(self.bitmap[a | (b << self.n)])

    @property
    def count(self) -> int:
        return int(self.bitmap.sum())

    def row(self, b: int) -> np.ndarray:
        """The a's with (a, b) in Z, ascending."""
        n = self.n
        return np.nonzero(self.bitmap[b << n:(b + 1) << n])[0].astype(np.int64)

    def hyperplane_structure(self):
        """(s, eps) arrays with row b = {a : <a, s[b]> = eps[b]} for every
        b != 0, or None when some row is not a hyperplane coset."""
        if not isinstance(self._structure, int):
            return self._structure
        if self._structure == 0:
            return None
        self._structure = self._detect_structure()
        return self._structure if self._structure != 0 else None

    def _detect_structure(self):
        n = self.n
        half = 1 << (n - 1)
        if not self.bitmap[:1 << n].all():
            return 0  # row b = 0 must be the full trivial-zero row
        s = np.zeros(1 << n, dtype=np.int64)
        eps = np.zeros(1 << n, dtype=np.uint8)
        for b in range(1, 1 << n):
            row = self.row(b)
            if row.size != half:
                return 0
            a0 = int(row[0])
            diffs = [int(v) for v in (row ^ a0)[1:]]
            basis = bits.rref(diffs)
            if len(basis) != n - 1:
                return 0
            normal = bits.orthogonal_complement(basis, n)
            s[b] = normal[0]
            eps[b] = bits.parity(a0 & s[b])
        return s, eps


def walsh_zeroes(f: VBF) -> ZeroSet:
    """Exact zero set of the full Walsh spectrum of f."""
    if f.n > SPECTRUM_FULL_MAX_N:
        raise CapacityError(
            f"zero-set bitmap needs 2^{2 * f.n} bits; n={f.n} exceeds the "
            f"n<={SPECTRUM_FULL_MAX_N} limit")
    return ZeroSet(f.n, kernels().walsh_zero_bitmap(f.table, f.n))


# ----------------------------------------------------------- space extraction

def _subspace_bases(k: int, d: int):
    """Greedy-minimal generator tuples of every d-dim subspace of F_2^k."""
    out = []

    def rec(gens, pivmask, last):
        if len(gens) == d:
            out.append(list(gens))
            return
        for c in range(last + 1, 1 << k):
            if c & pivmask:
                continue
            rec(gens + [c], pivmask | (1 << (c.bit_length() - 1)), c)

    rec([], 0, 0)
    return out


def _superspace_bases(w_basis, t: int, n: int):
    """Bases of every dim-t space W' with span(w_basis) <= W' <= F_2^n."""
    sigma = len(w_basis)
    if sigma > t:
        return []
    if sigma == t:
        return [list(w_basis)]
    pivpos = {(r & -r).bit_length() - 1 for r in w_basis}
    free = [j for j in range(n) if j not in pivpos]
    out = []
    for qgens in _subspace_bases(len(free), t - sigma):
        lift = []
        for q in qgens:
            v = 0
            for idx, j in enumerate(free):
                if (q >> idx) & 1:
                    v |= 1 << j
            lift.append(v)
        out.append(list(w_basis) + lift)
    return out


def _solve_affine(rows, k: int):
    """Solve the F_2 system given as (coefficient mask, rhs bit) pairs over
    k unknowns.  Returns (particular, nullspace basis) or None."""
    basis = []  # fully reduced rows (mask, rhs), unique lowest-bit pivots
    for mask, rhs in rows:
        for i, (bm, br) in enumerate(basis):
            if mask & (bm & -bm):
                mask ^= bm
                rhs ^= br
        if mask:
            piv = mask & -mask
            for i, (bm, br) in enumerate(basis):
                if bm & piv:
                    basis[i] = (bm ^ mask, br ^ rhs)
            basis.append((mask, rhs))
        elif rhs:
            return None
    particular = 0
    pivbits = 0
    for bm, br in basis:
        piv = bm & -bm
        pivbits |= piv
        if br:
            particular |= piv
    null = []
    for j in range(k):
        if (pivbits >> j) & 1:
            continue
        v = 1 << j
        for bm, _ in basis:
            if (bm >> j) & 1:
                v |= bm & -bm
        null.append(v)
    return particular, null


def _phi_spaces(n, s, eps, bgens, k_rows):
    """All spaces {(phi(b) + k, b) : b in span(bgens), k in K} with a linear
    phi landing in the complement of K and <phi(b), s_b> = eps_b on every
    nonzero b.  Returns canonical row tuples over F_2^{2n}."""
    t = len(bgens)
    kpiv = {(r & -r).bit_length() - 1 for r in k_rows}
    comp = [1 << j for j in range(n) if j not in kpiv]
    assert len(comp) == t, "K is not a complement-sized kernel"
    mpos = [g.bit_length() - 1 for g in bgens]  # generator coordinates
    eqs = []
    for b in bits.span(bgens):
        if not b:
            continue
        sb = int(s[b])
        mask = 0
        for j in range(t):
            if (b >> mpos[j]) & 1:
                for i in range(t):
                    if bits.parity(comp[i] & sb):
                        mask ^= 1 << (j * t + i)
        eqs.append((mask, int(eps[b])))
    sol = _solve_affine(eqs, t * t)
    if sol is None:
        return []
    particular, null = sol
    solutions = [particular]
    for v in null:
        solutions += [x ^ v for x in solutions]
    out = []
    for msol in solutions:
        rows = [int(k) for k in k_rows]
        for j in range(t):
            a = 0
            for i in range(t):
                if (msol >> (j * t + i)) & 1:
                    a ^= comp[i]
            rows.append(a | (bgens[j] << n))
        out.append(tuple(bits.rref(rows)))
    return out


def _structural_extract(z: ZeroSet):
    struct = z.hyperplane_structure()
    if struct is None:
        raise ValueError("zero set rows are not hyperplane cosets; "
                         "structural extraction does not apply")
    s, eps = struct
    n = z.n
    spaces = [tuple(1 << i for i in range(n))]  # the left-half space, t = 0
    gens_arr, dims_arr = kernels().structural_candidates(s, n)
    for row, d in zip(gens_arr, dims_arr):
        bgens = [int(x) for x in row[:d]]
        w_basis = bits.rref([int(s[b]) for b in bits.span(bgens) if b])
        for wp in _superspace_bases(w_basis, int(d), n):
            k_rows = bits.rref(bits.orthogonal_complement(wp, n))
            spaces.extend(_phi_spaces(n, s, eps, bgens, k_rows))
    spaces.extend(_phi_spaces(n, s, eps, [1 << i for i in range(n)], []))
    return spaces


def _generic_extract(z: ZeroSet, dim: int):
    tuples = kernels().extract_spaces_dfs(z.bitmap, 2 * z.n, dim)
    return [tuple(bits.rref([int(x) for x in row])) for row in tuples]


def extract_spaces(z: ZeroSet, target_dim: int | None = None,
                   method: str = "auto") -> list[VectorSpaceBasis]:
    """Every vector space of dimension target_dim (default n) contained in
    the zero set, in canonical echelon form, sorted, duplicate-free."""
    n = z.n
    dim = n if target_dim is None else target_dim
    if method == "auto":
        if dim == n and z.hyperplane_structure() is not None:
            method = "structural"
        elif 2 * n <= GENERIC_MAX_2N:
            method = "generic"
        else:
            raise CapacityError(
                f"no extraction path: zero-set rows are not hyperplane cosets "
                f"and 2n={2 * n} exceeds the generic-DFS limit {GENERIC_MAX_2N}")
    if method == "structural":
        if dim != n:
            raise ValueError("structural extraction only produces dim-n spaces")
        rows_list = _structural_extract(z)
    elif method == "generic":
        if 2 * n > GENERIC_MAX_2N:
            raise CapacityError(
                f"generic DFS extraction needs 2n <= {GENERIC_MAX_2N}, "
                f"got 2n={2 * n}")
        rows_list = _generic_extract(z, dim)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = sorted(set(rows_list))
    return [VectorSpaceBasis(2 * n, rows) for rows in out]


# ------------------------------------------------------------------ thickness

def thickness(v: VectorSpaceBasis) -> int:
    """Rank of the right-half (component-side) coordinates of the basis."""
    half = v.width // 2
    return bits.rank([r >> half for r in v.rows])


def thickness_spectrum_of_spaces(spaces) -> dict[int, int]:
    return dict(sorted(Counter(thickness(v) for v in spaces).items()))


def thickness_spectrum(f: VBF, method: str = "auto") -> dict[int, int]:
    """Multiset {t: count} of thicknesses over all dim-n spaces in Z_f."""
    spaces = extract_spaces(walsh_zeroes(f), method=method)
    return thickness_spectrum_of_spaces(spaces)


# ------------------------------------------------- permutation concatenation

def _projection_rows(block: VectorSpaceBasis, partner: VectorSpaceBasis):
    """Matrix of the projection onto block along partner (rows, for matvec)."""
    n = block.width
    cols = list(block.rows) + list(partner.rows)
    m_rows = bits.transpose(cols, n)          # matrix with those columns
    m_inv = bits.invert(m_rows, n)            # v -> coordinates (block first)
    left_cols = list(block.rows) + [0] * len(partner.rows)
    return bits.matmul(bits.transpose(left_cols, n), m_inv, n)


def _dot_complement(block: VectorSpaceBasis) -> VectorSpaceBasis:
    n = block.width
    comp = VectorSpaceBasis.from_vectors(
        n, bits.orthogonal_complement(block.rows, n))
    if bits.rank(list(block.rows) + list(comp.rows)) != n:
        raise ValueError(
            "block meets its orthogonal complement; supply an explicit "
            "partner block to define the projection")
    return comp


def perm_concat_test(f: VBF, block: VectorSpaceBasis, method: str = "direct",
                     partner: VectorSpaceBasis | None = None,
                     zeroes: ZeroSet | None = None) -> bool:
    """Is f a permutation-concatenation of the block B?

    method="direct" checks that x -> rho_B(f(y + x)) permutes B for every
    coset representative y (rho_B projects onto B along the partner block,
    by default B's orthogonal complement).  method="walsh" checks the
    equivalent spectral criterion B^perp x B <= Z_f.
    """
    n = f.n
    if block.width != n:
        raise ValueError(f"block lives in F_2^{block.width}, function has n={n}")
    if method == "walsh":
        comp = bits.orthogonal_complement(block.rows, n)
        avals = np.array(bits.span(comp), dtype=np.int64)
        bvals = np.array(block.span_list(), dtype=np.int64)
        z = zeroes if zeroes is not None else walsh_zeroes(f)
        idx = avals[:, None] | (bvals[None, :] << n)
        return bool(z.bitmap[idx.reshape(-1)].all())
    if method == "direct":
        part = partner if partner is not None else _dot_complement(block)
        if bits.rank(list(block.rows) + list(part.rows)) != n:
            raise ValueError("block and partner do not span F_2^n")
        rho = _projection_rows(block, part)
        proj_f = kernels().transform_batch(f.table.astype(np.int64), rho)
        bspan = np.array(block.span_list(), dtype=np.int64)
        for y in bits.span(list(part.rows)):
            vals = proj_f[bspan ^ y]
            if np.unique(vals).size != bspan.size:
                return False
        return True
    raise ValueError(f"unknown method {method!r}")


# -------------------------------------------------------------- block splits

@dataclass(frozen=True)
class BlockPartition:
    """Pairwise orthogonal blocks spanning F_2^n, with their projections."""
    n: int
    blocks: tuple
    projections: tuple  # projection matrices (row tuples), one per block

    def project(self, i: int, v: int) -> int:
        return bits.matvec(self.projections[i], v)

    def mu(self, v: int) -> tuple:
        """The isomorphism x -> (rho_1(x), ..., rho_l(x))."""
        return tuple(self.project(i, v) for i in range(len(self.blocks)))


def validate_block_partition(blocks, n: int | None = None) -> BlockPartition:
    """Check pairwise dot-orthogonality and that the blocks span F_2^n with
    dimensions summing to n; returns the partition with its projections.
    Blocks may be VectorSpaceBasis instances or raw row sequences (the
    latter require n)."""
    vs = []
    for b in blocks:
        if isinstance(b, VectorSpaceBasis):
            vs.append(b)
        elif n is not None:
            vs.append(VectorSpaceBasis.from_vectors(n, b))
        else:
            raise ValueError("raw row sequences need an explicit n")
    if not vs:
        raise ValueError("empty block list")
    n = vs[0].width
    for i, b in enumerate(vs):
        if b.width != n:
            raise ValueError(f"block {i} has width {b.width}, expected {n}")
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            for ri in vs[i].rows:
                for rj in vs[j].rows:
                    if bits.parity(ri & rj):
                        raise ValueError(
                            f"blocks {i} and {j} are not orthogonal: "
                            f"<{ri:#x}, {rj:#x}> = 1")
    total = sum(b.dim for b in vs)
    allrows = [r for b in vs for r in b.rows]
    if total != n or bits.rank(allrows) != n:
        raise ValueError(
            f"blocks span rank {bits.rank(allrows)} with dimension sum "
            f"{total}; both must equal n = {n}")
    projections = []
    for i, b in enumerate(vs):
        others = [r for j, v in enumerate(vs) if j != i for r in v.rows]
        partner = VectorSpaceBasis.from_vectors(n, others) if others else \
            VectorSpaceBasis(n, ())
        projections.append(tuple(_projection_rows(b, partner)))
    return BlockPartition(n, tuple(vs), tuple(projections))
