"""Vectorial Boolean functions F: F_2^n -> F_2^n as lookup tables.

The table is a numpy uint32 array of length 2^n; inputs and outputs are
packed bit-vectors.  Components are the Boolean functions <b, F(x)> for
nonzero masks b.  Spectral reports (DDT, Walsh) delegate the heavy part to
the selected kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from apnlab import bits
from apnlab.backend import kernels
from apnlab.gf2m import FieldSpec

TABLE_MAX_N = 24          # table materialization cap
SPECTRUM_FULL_MAX_N = 12  # full 2^n x 2^n Walsh spectrum / zero bitmap cap
SPECTRUM_STREAM_MAX_N = 18


class CapacityError(ValueError):
    """Requested computation exceeds the supported size for this code path."""


class VBF:
    """A function F_2^n -> F_2^n given by its value table."""

    __slots__ = ("n", "table")

    def __init__(self, n: int, table):
        if not 1 <= n <= TABLE_MAX_N:
            raise CapacityError(f"n={n} outside supported table range 1..{TABLE_MAX_N}")
        t = np.asarray(table, dtype=np.uint32)
        if t.shape != (1 << n,):
            raise ValueError(f"table has length {t.size}, expected 2^{n}")
        if t.size and int(t.max()) >> n:
            raise ValueError(f"table entry {int(t.max())} does not fit in {n} bits")
        self.n = n
        self.table = t
        self.table.flags.writeable = False

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other):
        return (isinstance(other, VBF) and self.n == other.n
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        return f"VBF(n={self.n})"

    @property
    def image_size(self) -> int:
        return int(np.unique(self.table).size)

    @property
    def is_permutation(self) -> bool:
        return self.image_size == 1 << self.n


def from_table(values) -> VBF:
    values = np.asarray(values)
    n = int(values.size).bit_length() - 1
    if 1 << n != values.size:
        raise ValueError(f"table length {values.size} is not a power of two")
    return VBF(n, values)


def identity(n: int) -> VBF:
    return VBF(n, np.arange(1 << n))


def from_univariate(field: FieldSpec, coeffs) -> VBF:
    """F(x) = sum coeffs[i] x^i over GF(2^m), as a table on m bits."""
    m = field.m
    xs = np.arange(1 << m, dtype=np.int64)
    acc = np.zeros(1 << m, dtype=np.int64)
    for c in reversed(list(coeffs)):
        acc = field.mul_vec(acc, xs) ^ c
    return VBF(m, acc)


def monomial(field: FieldSpec, e: int) -> VBF:
    """F(x) = x^e over GF(2^m)."""
    q1 = field.order - 1
    exp, log = field.exp_table, field.log_table
    xs = np.arange(field.order, dtype=np.int64)
    out = exp[(log[xs] * (e % q1 if e else 0)) % q1]
    out[0] = 1 if e == 0 else 0
    return VBF(field.m, out)


def compose(f: VBF, g: VBF) -> VBF:
    """x -> f(g(x))."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    return VBF(f.n, f.table[g.table])


def xor_add(f: VBF, g: VBF) -> VBF:
    """Pointwise sum x -> f(x) + g(x)."""
    if f.n != g.n:
        raise ValueError("dimension mismatch")
    return VBF(f.n, f.table ^ g.table)


def inverse(f: VBF) -> VBF:
    inv = np.zeros_like(f.table)
    img = f.image_size
    if img != 1 << f.n:
        raise ValueError(
            f"not invertible: image size {img} of {1 << f.n}")
    inv[f.table] = np.arange(1 << f.n, dtype=np.uint32)
    return VBF(f.n, inv)


# --------------------------------------------------------------- affine maps

@dataclass(frozen=True)
class AffineMap:
    """x -> M x + c with M given as packed row ints."""
    rows: tuple
    const: int = 0

    @property
    def n_out(self) -> int:
        return len(self.rows)

    def apply(self, x: int) -> int:
        return bits.matvec(self.rows, x) ^ self.const

    def apply_table(self, xs: np.ndarray) -> np.ndarray:
        return (kernels().transform_batch(xs, list(self.rows)) ^ self.const).astype(np.int64)

    def linear_rank(self) -> int:
        return bits.rank(self.rows)

    @staticmethod
    def identity(n: int, const: int = 0) -> "AffineMap":
        return AffineMap(tuple(1 << i for i in range(n)), const)


def ea_transform(f: VBF, outer: AffineMap, inner: AffineMap,
                 added: AffineMap | None = None) -> VBF:
    """outer o F o inner + added.  outer and inner must be invertible affine
    permutations of F_2^n; added may be any affine map (or None)."""
    n = f.n
    for name, a in (("outer", outer), ("inner", inner)):
        if a.n_out != n:
            raise ValueError(f"{name} map has {a.n_out} rows, expected {n}")
        r = a.linear_rank()
        if r != n:
            raise ValueError(f"{name} affine map is not invertible: rank {r} < {n}")
    xs = np.arange(1 << n, dtype=np.int64)
    t = outer.apply_table(f.table[inner.apply_table(xs)].astype(np.int64))
    if added is not None:
        if added.n_out != n:
            raise ValueError(f"added map has {added.n_out} rows, expected {n}")
        t = t ^ added.apply_table(xs)
    return VBF(n, t)


# ------------------------------------------------------------------- reports

@dataclass
class DDTReport:
    n: int
    differential_uniformity: int
    value_histogram: np.ndarray  # index = DDT entry value, rows a != 0

    @property
    def is_apn(self) -> bool:
        return self.differential_uniformity == 2


@dataclass
class WalshReport:
    n: int
    linearity: int
    per_component_max: np.ndarray        # index b; entry 0 is 2^n by convention
    spectrum: np.ndarray | None = None   # [b, a] if materialized


def ddt(f: VBF) -> DDTReport:
    if f.n > SPECTRUM_STREAM_MAX_N:
        raise CapacityError(
            f"exhaustive DDT supported up to n={SPECTRUM_STREAM_MAX_N}; "
            "use the derivative-kernel path for quadratic functions")
    dmax, hist = kernels().ddt_spectrum(f.table, f.n)
    return DDTReport(f.n, int(dmax), hist)


def differential_uniformity(f: VBF) -> int:
    return ddt(f).differential_uniformity


def ddt_row(f: VBF, a: int) -> np.ndarray:
    """Row a of the DDT: counts of F(x+a)+F(x) = b over b."""
    xs = np.arange(1 << f.n)
    return np.bincount(f.table ^ f.table[xs ^ a], minlength=1 << f.n)


def walsh(f: VBF, mode: str = "per-component") -> WalshReport:
    """Walsh data.  mode="full" keeps the whole spectrum (n <= 12);
    mode="per-component" streams it and keeps per-b maxima (n <= 18)."""
    if mode == "full":
        if f.n > SPECTRUM_FULL_MAX_N:
            raise CapacityError(
                f"full Walsh spectrum materialization supported up to "
                f"n={SPECTRUM_FULL_MAX_N}; use mode='per-component'")
        k = kernels()
        rows = k.component_signs(f.table, np.arange(1 << f.n, dtype=np.uint32))
        k.fwht(rows)
        per = np.abs(rows).max(axis=1).astype(np.int64)
        per[0] = 1 << f.n
        lin = int(per[1:].max()) if f.n else 0
        return WalshReport(f.n, lin, per, rows)
    if mode == "per-component":
        if f.n > SPECTRUM_STREAM_MAX_N:
            raise CapacityError(
                f"streamed Walsh supported up to n={SPECTRUM_STREAM_MAX_N}; "
                "use the quadratic component-form path")
        per = kernels().walsh_component_maxes(f.table, f.n)
        return WalshReport(f.n, int(per[1:].max()), per)
    raise ValueError(f"unknown walsh mode {mode!r}")


def walsh_component(f: VBF, b: int) -> np.ndarray:
    """W_F(a, b) over all a, one FWHT."""
    k = kernels()
    row = k.component_signs(f.table, np.asarray([b], dtype=np.uint32))
    k.fwht(row)
    return row[0]


def linearity(f: VBF) -> int:
    return walsh(f).linearity


# ----------------------------------------------------------------------- ANF

def anf(f: VBF) -> np.ndarray:
    """Coordinate ANFs, shape (n, 2^n) uint8: row k is the Moebius transform
    of coordinate k's truth table (bit u = coefficient of monomial x^u)."""
    rows = np.empty((f.n, 1 << f.n), dtype=np.uint8)
    for k in range(f.n):
        rows[k] = (f.table >> k) & 1
    kernels().mobius(rows)
    return rows


def _anf_columns(f: VBF) -> np.ndarray:
    """ANF packed per monomial: col[u] has bit k = coeff of x^u in coord k."""
    a = anf(f)
    cols = np.zeros(1 << f.n, dtype=np.int64)
    for k in range(f.n):
        cols |= a[k].astype(np.int64) << k
    return cols


def _weight_spans(f: VBF) -> list[list[int]]:
    """For each monomial weight w: a basis of span{ANF column of x^u : |u|=w}.
    deg <b, F> >= w  iff  b is non-orthogonal to span_w."""
    cols = _anf_columns(f)
    ws = np.bitwise_count(np.arange(1 << f.n, dtype=np.uint32))
    spans = []
    for w in range(f.n + 1):
        spans.append(bits.rref(int(c) for c in np.unique(cols[ws == w]) if c))
    return spans


def component_degrees(f: VBF) -> np.ndarray:
    """Algebraic degree of <b, F> for every mask b (index b, entry 0 is 0)."""
    spans = _weight_spans(f)
    bs = np.arange(1 << f.n, dtype=np.int64)
    deg = np.zeros(1 << f.n, dtype=np.int8)
    for w in range(f.n, 0, -1):
        hit = np.zeros(1 << f.n, dtype=bool)
        for v in spans[w]:
            hit |= (np.bitwise_count(bs & np.int64(v)) & 1).astype(bool)
        deg = np.where((deg == 0) & hit, w, deg)
    return deg


def degree_spectrum(f: VBF) -> dict[int, int]:
    """Multiset {degree: count} of component degrees over b != 0."""
    deg = component_degrees(f)[1:]
    vals, counts = np.unique(deg, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def algebraic_degree(f: VBF) -> int:
    return max(degree_spectrum(f))


def has_affine_component(f: VBF) -> bool:
    """True if some nonzero component has degree <= 1 (degenerate spectrum)."""
    return min(degree_spectrum(f)) <= 1


def is_quadratic(f: VBF) -> bool:
    return algebraic_degree(f) <= 2


# ----------------------------------------------------- quadratic short-cuts

def _coordinate_grams(f: VBF) -> np.ndarray:
    """Gram (symplectic form) rows of every coordinate of a quadratic F:
    G_k[i] bit j = <e_k, F(e_i+e_j)+F(e_i)+F(e_j)+F(0)>."""
    n = f.n
    t = f.table.astype(np.int64)
    g = np.zeros((n, n), dtype=np.int64)
    f0 = int(t[0])
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = int(t[(1 << i) ^ (1 << j)]) ^ int(t[1 << i]) ^ int(t[1 << j]) ^ f0
            for k in range(n):
                g[k, i] |= ((v >> k) & 1) << j
    return g


def quad_component_ls_dims(f: VBF, check: bool = True) -> np.ndarray:
    """dim of the linear-structure space of every component of a quadratic F
    (index b; entry 0 is n)."""
    if check and not is_quadratic(f):
        raise ValueError("function is not quadratic; no Gram short-cut")
    g = _coordinate_grams(f)
    dims = kernels().component_ls_dims(g, np.arange(1 << f.n, dtype=np.int64))
    dims[0] = f.n
    return dims


def quad_linearity(f: VBF, check: bool = True) -> int:
    """Linearity of a quadratic F: every component is plateaued with
    amplitude 2^((n + dim LS)/2)."""
    dims = quad_component_ls_dims(f, check)
    return 1 << ((f.n + int(dims[1:].max())) >> 1)


def quad_differential_uniformity(f: VBF, check: bool = True) -> int:
    """D(F) for quadratic F: the derivative in direction a is affine with
    linear part L_a; D = max_a 2^(dim ker L_a)."""
    if check and not is_quadratic(f):
        raise ValueError("function is not quadratic; no derivative short-cut")
    dirs = np.arange(1, 1 << f.n, dtype=np.int64)
    dims = kernels().quad_direction_dims(f.table, f.n, dirs)
    return 1 << int(dims.max())


# ------------------------------------------------------------------ file IO

def save_json(f: VBF, path):
    import json
    with open(path, "w") as fh:
        json.dump({"n": f.n, "table": [int(v) for v in f.table]}, fh)
        fh.write("\n")


def load_json(path) -> VBF:
    import json
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "n" not in data or "table" not in data:
        raise ValueError(f"{path}: expected a JSON object with 'n' and 'table'")
    return VBF(int(data["n"]), data["table"])


def save_raw(f: VBF, path):
    with open(path, "wb") as fh:
        fh.write(int(f.n).to_bytes(8, "little"))
        fh.write(f.table.astype("<u4").tobytes())


def load_raw(path) -> VBF:
    with open(path, "rb") as fh:
        head = fh.read(8)
        if len(head) < 8:
            raise ValueError(f"{path}: truncated header at byte {len(head)}")
        n = int.from_bytes(head, "little")
        if not 1 <= n <= TABLE_MAX_N:
            raise ValueError(f"{path}: header n={n} out of range at byte 0")
        body = fh.read(4 * (1 << n) + 1)
        if len(body) != 4 * (1 << n):
            raise ValueError(
                f"{path}: expected {8 + 4 * (1 << n)} bytes total, "
                f"found byte count {8 + len(body)}")
    return VBF(n, np.frombuffer(body, dtype="<u4"))


def load_table(path) -> VBF:
    """Load a table file, JSON or raw binary (sniffed from first byte)."""
    with open(path, "rb") as fh:
        first = fh.read(1)
    if first in (b"{", b" ", b"\n", b"\t"):
        return load_json(path)
    return load_raw(path)
