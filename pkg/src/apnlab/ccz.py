"""CCZ-class exploration by twisting a function's graph along the vector
spaces contained in its Walsh zeroes.

Twisting along a dim-n space V of thickness t produces a CCZ-equivalent
function whose degree spectrum and thickness spectrum are EA-invariants;
the pair of spectra partitions the spaces into regions, and the number of
distinct non-degenerate regions lower-bounds the number of EA-classes in
the CCZ-class, while the total space count upper-bounds it.

If L is the admissible matrix built from V, the twisted function G has
graph L(graph(F)), and its zero set is the image of Z_F under (L^T)^{-1}.
The explorer exploits this: spaces are extracted once per CCZ class and
only their basis images are transformed per twist, which is exact and far
cheaper than re-running a Walsh transform and extraction for every space.
"""

from dataclasses import dataclass
import json
import random

import numpy as np

from . import bits
from .backend import kernels
from .vbf import VBF, degree_spectrum, has_affine_component
from .geometry import (VectorSpaceBasis, ZeroSet, walsh_zeroes,
                       extract_spaces, thickness)


class TwistError(RuntimeError):
    """Graph image is not a function graph: V was not a dim-n Walsh-zero
    space of F, or something upstream is broken."""


@dataclass(frozen=True)
class AdmissibleMap:
    """Invertible 2n x 2n matrix whose transpose maps F_2^n x {0} onto the
    source space; rows[i] is row i as a packed int."""
    rows: tuple
    source_space: VectorSpaceBasis
    t: int

    @property
    def width(self) -> int:
        return len(self.rows)


def admissible_map(v: VectorSpaceBasis, completion=None) -> AdmissibleMap:
    """Deterministic admissible map for a dim-n space: the first n rows are
    V's echelon basis, completed by the unit vectors at non-pivot positions
    (a different completion order may be supplied; the signature of the
    twisted function does not depend on it)."""
    n2 = v.width
    n = n2 // 2
    if v.dim != n:
        raise ValueError(f"space has dim {v.dim}, twisting needs dim n = {n}")
    pivots = {(r & -r).bit_length() - 1 for r in v.rows}
    if completion is None:
        completion = [1 << j for j in range(n2) if j not in pivots]
    rows = list(v.rows) + list(completion)
    if bits.rank(rows) != n2:
        raise ValueError("completion does not extend the basis to full rank")
    return AdmissibleMap(tuple(rows), v, thickness(v))


def zero_map_rows(amap: AdmissibleMap) -> np.ndarray:
    """Rows of (L^T)^{-1}, the matrix carrying Z_F onto Z_G."""
    inv = bits.invert(list(amap.rows), amap.width)
    return np.array(bits.transpose(inv, amap.width), dtype=np.int64)


def apply_graph_map(f: VBF, rows) -> VBF:
    """The function whose graph is the image of graph(f) under the linear
    map given by rows (2n packed row ints).  Raises TwistError when the
    image is not a function graph."""
    n = f.n
    if len(rows) != 2 * n:
        raise ValueError(f"map has {len(rows)} rows, expected {2 * n}")
    pts = np.arange(1 << n, dtype=np.int64) | (f.table.astype(np.int64) << n)
    imgs = kernels().transform_batch(pts, np.array(rows, dtype=np.int64))
    xs = imgs & ((1 << n) - 1)
    ys = imgs >> n
    tbl = np.zeros(1 << n, dtype=np.int64)
    tbl[xs] = ys
    if int(np.bincount(xs, minlength=1 << n).max()) != 1:
        raise TwistError(
            "graph image has a non-bijective first projection; the map does "
            "not carry this graph onto a function graph")
    return VBF(n, tbl)


def twist(f: VBF, v) -> VBF:
    """The function whose graph is L(graph(f)) for the admissible map L of
    the space v (a VectorSpaceBasis or a prebuilt AdmissibleMap)."""
    amap = v if isinstance(v, AdmissibleMap) else admissible_map(v)
    if amap.width != 2 * f.n:
        raise ValueError(f"map width {amap.width}, expected {2 * f.n}")
    try:
        return apply_graph_map(f, amap.rows)
    except TwistError as exc:
        raise TwistError(
            "twist failed: the space is not a dim-n subspace of the Walsh "
            "zeroes") from exc


def linear_rows(f: VBF) -> list[int]:
    """Matrix rows of a linear function (f(x ^ y) == f(x) ^ f(y), f(0)=0),
    so that matvec(rows, x) == f(x)."""
    n = f.n
    cols = [int(f.table[1 << i]) for i in range(n)]
    rows = bits.transpose(cols, n)
    check = kernels().transform_batch(
        np.arange(1 << n, dtype=np.int64), np.array(rows, dtype=np.int64))
    if not np.array_equal(check, f.table.astype(np.int64)):
        raise ValueError("function is not linear")
    return rows


def tfl_graph_map(shift: VBF) -> list[int]:
    """Rows of the map carrying graph(F) onto graph of x -> F^{-1}(x) + S(x)
    for a linear shift S: (a, b) -> (b, a + S(b))."""
    n = shift.n
    srows = linear_rows(shift)
    rows = [1 << (n + i) for i in range(n)]
    rows += [(1 << i) | (srows[i] << n) for i in range(n)]
    return rows


def swap_rows(n: int) -> list[int]:
    """Rows of the half-swap (a, b) -> (b, a) on F_2^{2n}."""
    return [1 << (n + i) for i in range(n)] + [1 << i for i in range(n)]


def compose_rows(outer, inner, width: int) -> list[int]:
    """Rows of outer . inner."""
    return bits.matmul(list(outer), list(inner), width)


# ------------------------------------------------------------- DT signatures

@dataclass(frozen=True)
class DTSignature:
    """EA-invariant pair of spectra, stored as sorted (value, count) pairs;
    twist records the source-space thickness when built by the explorer."""
    degree_spectrum: tuple
    thickness_spectrum: tuple
    twist: int | None = None
    degenerate: bool = False

    @property
    def key(self) -> tuple:
        return (self.degree_spectrum, self.thickness_spectrum)

    @property
    def spectral_permutation(self) -> bool:
        """Thickness n present: the region contains permutations."""
        n = (sum(c for _, c in self.degree_spectrum) + 1).bit_length() - 1
        return any(t == n for t, _ in self.thickness_spectrum)

    def as_dict(self) -> dict:
        d = {
            "degree_spectrum": {str(k): v for k, v in self.degree_spectrum},
            "thickness_spectrum": {str(k): v for k, v in self.thickness_spectrum},
            "degenerate": self.degenerate,
        }
        if self.twist is not None:
            d["twist"] = self.twist
        return d


def _spectrum_items(spec: dict) -> tuple:
    return tuple(sorted((int(k), int(v)) for k, v in spec.items()))


def dt_signature(g: VBF, twist_t: int | None = None,
                 method: str = "auto") -> DTSignature:
    """Signature computed from scratch: degree spectrum plus the thickness
    spectrum of a full space extraction on Z_g."""
    from .geometry import thickness_spectrum_of_spaces
    spaces = extract_spaces(walsh_zeroes(g), method=method)
    return DTSignature(
        degree_spectrum=_spectrum_items(degree_spectrum(g)),
        thickness_spectrum=_spectrum_items(thickness_spectrum_of_spaces(spaces)),
        twist=twist_t,
        degenerate=has_affine_component(g),
    )


class ClassContext:
    """One CCZ class: the function, its zero set, and all dim-n spaces with
    their basis rows flattened for batched per-twist transforms."""

    def __init__(self, f: VBF, zeroes: ZeroSet | None = None, spaces=None):
        self.f = f
        self.n = f.n
        self.zeroes = zeroes if zeroes is not None else walsh_zeroes(f)
        self.spaces = (spaces if spaces is not None
                       else extract_spaces(self.zeroes))
        self.thicknesses = [thickness(v) for v in self.spaces]
        self._rows_flat = np.array(
            [r for v in self.spaces for r in v.rows], dtype=np.int64)

    @property
    def z(self) -> int:
        return len(self.spaces)

    def image_thickness_spectrum(self, map_rows) -> tuple:
        """Thickness spectrum of the zero set (A^T)^{-1}(Z_F) for the graph
        map A, via basis-image transforms of the extracted spaces."""
        inv = bits.invert(list(map_rows), 2 * self.n)
        zrows = np.array(bits.transpose(inv, 2 * self.n), dtype=np.int64)
        imgs = kernels().transform_batch(self._rows_flat, zrows)
        right = (imgs >> self.n).reshape(len(self.spaces), self.n)
        ranks = kernels().rank_batch(np.ascontiguousarray(right), self.n)
        counts = np.bincount(ranks, minlength=self.n + 1)
        return tuple((t, int(c)) for t, c in enumerate(counts) if c)

    def signature_of_map(self, map_rows, twist_t: int | None = None) -> tuple:
        """(DTSignature, image function) for a graph map applied to f."""
        g = apply_graph_map(self.f, map_rows)
        sig = DTSignature(
            degree_spectrum=_spectrum_items(degree_spectrum(g)),
            thickness_spectrum=self.image_thickness_spectrum(map_rows),
            twist=twist_t,
            degenerate=has_affine_component(g),
        )
        return sig, g

    def signature_of_space(self, v: VectorSpaceBasis) -> tuple:
        """(DTSignature, twisted function) for one space."""
        amap = admissible_map(v)
        return self.signature_of_map(amap.rows, twist_t=amap.t)


# ----------------------------------------------------------- region explorer

@dataclass(frozen=True)
class Region:
    signature: DTSignature
    twists: tuple                 # distinct source thicknesses, ascending
    count: int                    # source spaces mapping into this region
    representative_space: VectorSpaceBasis
    contains_permutation: bool    # a twisted representative is a permutation

    @property
    def twist(self) -> int:
        return self.twists[0]

    def as_dict(self) -> dict:
        d = self.signature.as_dict()
        d.update({
            "twist": self.twist,
            "twists": list(self.twists),
            "count": self.count,
            # the region holds permutations iff thickness n occurs;
            # "verified" marks a twist in this run that was itself a
            # permutation
            "permutation": self.signature.spectral_permutation,
            "permutation_verified": self.contains_permutation,
            "representative_space": [f"{r:x}" for r in
                                     self.representative_space.rows],
        })
        return d


@dataclass(frozen=True)
class RegionTable:
    n: int
    z: int                        # all dim-n spaces in Z_F
    selected: int                 # spaces actually twisted in this run
    regions: tuple                # non-degenerate regions, deterministic order
    degenerate: tuple             # diagnostics: regions with affine components
    seed: int | None = None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "space_count": self.z,
            "selected": self.selected,
            "region_count": len(self.regions),
            "seed": self.seed,
            "regions": [r.as_dict() for r in self.regions],
            "degenerate_regions": [r.as_dict() for r in self.degenerate],
        }


def ea_class_bounds(table: RegionTable, z: int | None = None) -> tuple:
    """(r, z): r distinct non-degenerate regions lower-bound the EA-class
    count, the space count z upper-bounds it."""
    return len(table.regions), table.z if z is None else z


def _space_key(v: VectorSpaceBasis) -> str:
    return ",".join(f"{r:x}" for r in v.rows)


def _load_checkpoint(path) -> dict:
    records = {}
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError:
        return records
    with fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            records[rec["space"]] = rec
    return records


def explore_regions(f: VBF, thicknesses=None, sample: int | None = None,
                    seed: int = 0, checkpoint=None,
                    context: ClassContext | None = None) -> RegionTable:
    """Twist f along selected Walsh-zero spaces and group the signatures.

    thicknesses: restrict to source spaces of these thicknesses (None = all).
    sample: draw this many spaces from the selection with the seeded RNG.
    The trivial space F_2^n x {0} is always processed as well, so every run
    reports the region of f itself as a baseline.
    checkpoint: JSONL file keyed by canonical space basis; finished spaces
    are skipped on resume and new results are appended.
    """
    ctx = context if context is not None else ClassContext(f)
    indices = list(range(ctx.z))
    if thicknesses is not None:
        wanted = set(thicknesses)
        indices = [i for i in indices if ctx.thicknesses[i] in wanted]
    if sample is not None and sample < len(indices):
        rng = random.Random(seed)
        indices = sorted(rng.sample(indices, sample))
    trivial = next(i for i, v in enumerate(ctx.spaces)
                   if ctx.thicknesses[i] == 0)
    if trivial not in indices:
        indices = [trivial] + indices

    done = _load_checkpoint(checkpoint) if checkpoint else {}
    ckpt_fh = open(checkpoint, "a", encoding="utf-8") if checkpoint else None
    records = []
    try:
        for i in indices:
            v = ctx.spaces[i]
            key = _space_key(v)
            if key in done:
                rec = done[key]
            else:
                sig, g = ctx.signature_of_space(v)
                rec = {
                    "space": key,
                    "twist": sig.twist,
                    "degree_spectrum": {str(k): c for k, c in
                                        sig.degree_spectrum},
                    "thickness_spectrum": {str(k): c for k, c in
                                           sig.thickness_spectrum},
                    "permutation": g.is_permutation,
                    "degenerate": sig.degenerate,
                }
                if ckpt_fh is not None:
                    ckpt_fh.write(json.dumps(rec, sort_keys=True) + "\n")
                    ckpt_fh.flush()
            records.append((i, rec))
    finally:
        if ckpt_fh is not None:
            ckpt_fh.close()

    grouped = {}
    for i, rec in records:
        sig_key = (_spectrum_items(rec["degree_spectrum"]),
                   _spectrum_items(rec["thickness_spectrum"]))
        entry = grouped.setdefault(sig_key, {
            "twists": set(), "count": 0, "rep": ctx.spaces[i],
            "perm": False, "degenerate": bool(rec["degenerate"]),
        })
        entry["twists"].add(int(rec["twist"]))
        entry["count"] += 1
        entry["perm"] = entry["perm"] or bool(rec["permutation"])

    regions, degen = [], []
    for (deg, thick), entry in grouped.items():
        twists = tuple(sorted(entry["twists"]))
        sig = DTSignature(deg, thick, twist=twists[0],
                          degenerate=entry["degenerate"])
        region = Region(sig, twists, entry["count"], entry["rep"],
                        entry["perm"])
        (degen if entry["degenerate"] else regions).append(region)
    order = lambda r: (not r.signature.spectral_permutation, r.twist,
                       r.signature.key)
    return RegionTable(
        n=ctx.n, z=ctx.z, selected=len(indices),
        regions=tuple(sorted(regions, key=order)),
        degenerate=tuple(sorted(degen, key=order)),
        seed=seed if sample is not None else None,
    )
