"""The trivariate cube family over GF(2^m)^3 and related constructions.

The central object is the quadratic rotation-symmetric map

    C_u(x, y, z) = (x^3 + u y^2 z,  y^3 + u x z^2,  z^3 + u x^2 y)

on triples of GF(2^m) elements, packed into n = 3m bits with x in the low
m bits, y in the middle, z on top.  Because C_u is quadratic, both its
differential behaviour and the linear structures of its components reduce
to kernels of explicit 3m x 3m binary systems; those are what
diff_solution_count / ls_solution_count compute, without ever touching a
value table.  Direction sweeps are cut down by the rotation and scalar
symmetries of the family (orbit_representatives).

Also here: Gold power maps, the inverse-plus-linear-shift construction
T_{F,L}(x) = F^{-1}(x) + L(x) used to reach new permutation classes, a
relative-trace linear modifier for Gold maps, closed-form degree-5 inverses
of C_u at m = 3, and a small permutation-polynomial test.
"""

from dataclasses import dataclass

import numpy as np

from . import bits, vbf
from .backend import kernels
from .gf2m import FieldSpec, make_field, poly_eval
from .vbf import VBF, CapacityError, TABLE_MAX_N

# Exhaustive direction sweeps (reduction="none") walk all 2^n - 1 directions.
SWEEP_FULL_MAX_N = 18


# ------------------------------------------------------------------ packing

def pack_triple(m: int, x: int, y: int, z: int) -> int:
    return x | (y << m) | (z << (2 * m))


def unpack_triple(m: int, w: int):
    mask = (1 << m) - 1
    return w & mask, (w >> m) & mask, (w >> (2 * m)) & mask


def _rotate_packed(w, m):
    """(x, y, z) -> (y, z, x) on packed words (ints or arrays)."""
    mask = (1 << m) - 1
    return (w >> m) | ((w & mask) << (2 * m))


@dataclass(frozen=True)
class TrivariateSpec:
    """Parameters of one member of the family: the field GF(2^m) and u."""
    field: FieldSpec
    u: int

    def __post_init__(self):
        if not 0 <= self.u < self.field.order:
            raise ValueError(f"u={self.u} is not a GF(2^{self.field.m}) element")

    @property
    def m(self) -> int:
        return self.field.m

    @property
    def n(self) -> int:
        return 3 * self.field.m

    def pack(self, x: int, y: int, z: int) -> int:
        return pack_triple(self.field.m, x, y, z)

    def unpack(self, w: int):
        return unpack_triple(self.field.m, w)

    def evaluate(self, x: int, y: int, z: int):
        """One point, scalar field arithmetic (no table needed)."""
        f, u = self.field, self.u
        c1 = f.mul(f.mul(x, x), x) ^ f.mul(u, f.mul(f.mul(y, y), z))
        c2 = f.mul(f.mul(y, y), y) ^ f.mul(u, f.mul(x, f.mul(z, z)))
        c3 = f.mul(f.mul(z, z), z) ^ f.mul(u, f.mul(f.mul(x, x), y))
        return c1, c2, c3


# ------------------------------------------------------------------ builders

def build_cu(field: FieldSpec, u: int) -> VBF:
    """Value table of C_u on n = 3m bits."""
    spec = TrivariateSpec(field, u)
    m, n = spec.m, spec.n
    if n > TABLE_MAX_N:
        raise CapacityError(
            f"n=3m={n} exceeds the table limit {TABLE_MAX_N}; "
            "use the kernel-based counting functions instead")
    mask = (1 << m) - 1
    mul = field.mul_vec
    out = np.empty(1 << n, dtype=np.uint32)
    step = 1 << min(n, 20)
    for lo in range(0, 1 << n, step):
        w = np.arange(lo, lo + step, dtype=np.int64)
        x, y, z = w & mask, (w >> m) & mask, (w >> (2 * m)) & mask
        x2, y2, z2 = mul(x, x), mul(y, y), mul(z, z)
        c1 = mul(x2, x) ^ mul(u, mul(y2, z))
        c2 = mul(y2, y) ^ mul(u, mul(x, z2))
        c3 = mul(z2, z) ^ mul(u, mul(x2, y))
        out[lo:lo + step] = c1 | (c2 << m) | (c3 << (2 * m))
    return VBF(n, out)


# Closed-form inverses at m = 3.  C_u^{-1} = (psi(x,y,z), psi(y,z,x),
# psi(z,x,y)) where psi is a 9-term polynomial whose coefficients are the
# listed polynomials in u; the variant depends on which cubic u satisfies.
# Term format: (coefficient as u-power exponents to be XOR-summed, ex, ey, ez).
_PSI_X3_X_1 = (
    ((2, 1), 0, 1, 4),        # (u^2+u)      y z^4
    ((2, 1), 1, 5, 6),        # (u^2+u)      x y^5 z^6
    ((2, 1, 0), 2, 2, 1),     # (u^2+u+1)    x^2 y^2 z
    ((1,), 4, 3, 5),          # u            x^4 y^3 z^5
    ((0,), 5, 0, 0),          # 1            x^5
    ((1,), 5, 0, 7),          # u            x^5 z^7
    ((2, 1, 0), 5, 7, 0),     # (u^2+u+1)    x^5 y^7
    ((2, 0), 6, 4, 2),        # (u^2+1)      x^6 y^4 z^2
    ((0,), 7, 1, 4),          # 1            x^7 y z^4
)
_PSI_X3_X2_1 = (
    ((1, 0), 0, 1, 4),        # (u+1)        y z^4
    ((2, 1, 0), 1, 5, 6),     # (u^2+u+1)    x y^5 z^6
    ((0,), 2, 2, 1),          # 1            x^2 y^2 z
    ((1,), 4, 3, 5),          # u            x^4 y^3 z^5
    ((0,), 5, 0, 0),          # 1            x^5
    ((1,), 5, 0, 7),          # u            x^5 z^7
    ((1, 0), 5, 7, 0),        # (u+1)        x^5 y^7
    ((2, 1), 6, 4, 2),        # (u^2+u)      x^6 y^4 z^2
    ((2,), 7, 1, 4),          # u^2          x^7 y z^4
)


def build_cu_inverse_closed_form(field: FieldSpec, u: int) -> VBF:
    """Degree-5 inverse of C_u for m = 3 and u a root of X^3+X+1 or X^3+X^2+1."""
    if field.m != 3:
        raise ValueError(f"closed-form inverse exists only for m=3, got m={field.m}")
    if poly_eval([1, 1, 0, 1], field, u) == 0:       # X^3 + X + 1
        terms = _PSI_X3_X_1
    elif poly_eval([1, 0, 1, 1], field, u) == 0:     # X^3 + X^2 + 1
        terms = _PSI_X3_X2_1
    else:
        raise ValueError(
            f"u={u} is not a root of X^3+X+1 or X^3+X^2+1 over GF(2^3)")
    m = 3
    mask = (1 << m) - 1
    w = np.arange(1 << (3 * m), dtype=np.int64)
    x, y, z = w & mask, (w >> m) & mask, (w >> (2 * m)) & mask

    def power(base, e):
        if e == 0:
            return np.ones_like(base)
        acc = base
        for _ in range(e - 1):
            acc = field.mul_vec(acc, base)
        return acc

    def psi(a, b, c):
        out = np.zeros_like(a)
        for upows, ea, eb, ec in terms:
            coeff = 0
            for p in upows:
                coeff ^= field.pow(u, p)
            t = field.mul_vec(coeff, power(a, ea))
            t = field.mul_vec(t, power(b, eb))
            t = field.mul_vec(t, power(c, ec))
            out ^= t
        return out

    c1, c2, c3 = psi(x, y, z), psi(y, z, x), psi(z, x, y)
    return VBF(3 * m, c1 | (c2 << m) | (c3 << (2 * m)))


# ---------------------------------------------------------------- symmetries

def check_symmetries(field: FieldSpec, u: int, seed: int = 0) -> dict:
    """Verify the two structural symmetries of C_u on its value table.

    (i) rotation equivariance: C_u(y,z,x) is the coordinate rotation of
        C_u(x,y,z); checked on every input.
    (ii) cube homogeneity: C_u(λx,λy,λz) = λ^3 · C_u(x,y,z) coordinatewise;
        exhaustive for m <= 4, sampled scalars and 4096 random inputs above.

    Returns a report dict; report["ok"] is True iff no violations.
    """
    spec = TrivariateSpec(field, u)
    m, n = spec.m, spec.n
    f = build_cu(field, u)
    t = f.table.astype(np.int64)
    w = np.arange(1 << n, dtype=np.int64)

    rot_in = _rotate_packed(w, m)
    bad = np.nonzero(t[rot_in] != _rotate_packed(t, m))[0]
    rotation = {"cases": int(w.size), "violations": [int(v) for v in bad[:16]]}

    rng = np.random.default_rng(seed)
    lams = np.arange(1, 1 << m, dtype=np.int64)
    if m <= 4:
        inputs = w
    else:
        lams = rng.choice(lams, size=min(lams.size, 16), replace=False)
        inputs = rng.integers(0, 1 << n, size=4096, dtype=np.int64)
    mask = (1 << m) - 1
    mul = field.mul_vec
    x, y, z = inputs & mask, (inputs >> m) & mask, (inputs >> (2 * m)) & mask
    fv = t[inputs]
    c1, c2, c3 = fv & mask, (fv >> m) & mask, (fv >> (2 * m)) & mask
    sc_cases = 0
    sc_bad = []
    for lam in lams:
        lam = int(lam)
        l3 = field.mul(field.mul(lam, lam), lam)
        sw = mul(lam, x) | (mul(lam, y) << m) | (mul(lam, z) << (2 * m))
        want = mul(l3, c1) | (mul(l3, c2) << m) | (mul(l3, c3) << (2 * m))
        viol = np.nonzero(t[sw] != want)[0]
        sc_cases += inputs.size
        for v in viol[:4]:
            sc_bad.append((lam, int(inputs[v])))
    scaling = {"cases": sc_cases, "scalars": [int(v) for v in lams],
               "violations": sc_bad[:16]}
    return {"m": m, "u": u, "rotation": rotation, "scaling": scaling,
            "ok": not rotation["violations"] and not sc_bad}


# ------------------------------------------------- solution-counting systems

def _direction_dims(spec: TrivariateSpec, alphas, betas, gammas, system: int):
    k = kernels()
    return k.trivariate_direction_dims(
        spec.field.exp_table, spec.field.log_table, spec.m, spec.u,
        alphas, betas, gammas, system)


def _check_triple(spec, triple, what):
    a, b, g = triple
    for v in (a, b, g):
        if not 0 <= v < spec.field.order:
            raise ValueError(f"{what} entry {v} is not a GF(2^{spec.m}) element")
    if a == b == g == 0:
        raise ValueError(f"{what} must be nonzero")
    return a, b, g


def diff_solution_count(spec: TrivariateSpec, direction) -> int:
    """Number of solutions (x,y,z) of the derivative system of C_u in the
    given direction (α,β,γ) ≠ 0.

    The derivative of the quadratic C_u is linear in (x,y,z), so the count
    is 2^(kernel dim) of a 3m x 3m binary matrix.  It equals the number of
    w with C_u(w + a) + C_u(w) = C_u(a) + C_u(0), a = (α,β,γ) packed.
    """
    a, b, g = _check_triple(spec, direction, "direction")
    dim = int(_direction_dims(spec, [a], [b], [g], system=2)[0])
    return 1 << dim


def ls_solution_count(spec: TrivariateSpec, component) -> int:
    """Dimension of the linear-structure space of the component of C_u
    selected (in the trace inner product) by (α,β,γ) ≠ (0,0,0)."""
    a, b, g = _check_triple(spec, component, "component")
    return int(_direction_dims(spec, [a], [b], [g], system=6)[0])


# ----------------------------------------------------- symmetry orbit sweeps

def _cube_subgroup(field: FieldSpec):
    """The nonzero cubes of the field, as a sorted array."""
    q1 = field.order - 1
    gen3 = field.pow(int(field.exp_table[1]), 3)
    cubes = {1}
    v = 1
    for _ in range(q1):
        v = field.mul(v, gen3)
        cubes.add(v)
    return np.array(sorted(cubes), dtype=np.int64)


def _scale_normalizer(field: FieldSpec, subgroup: str):
    """Tables (canon, lam): for v != 0, canon[v] = min of v's scaling coset
    and lam[v] the scalar with lam[v]*v = canon[v].  canon[0] = lam[0] = 0."""
    q = field.order
    xs = np.arange(q, dtype=np.int64)
    if subgroup == "all":
        scalars = np.arange(1, q, dtype=np.int64)
    elif subgroup == "cubes":
        scalars = _cube_subgroup(field)
    else:
        raise ValueError(f"unknown scaling subgroup {subgroup!r}")
    canon = xs.copy()
    lam = np.ones(q, dtype=np.int64)
    for s in scalars:
        prod = field.mul_vec(int(s), xs)
        better = prod < canon
        canon[better] = prod[better]
        lam[better] = int(s)
    canon[0] = 0
    lam[0] = 0
    return canon, lam, scalars


def _normalize_packed(field, w, lam_tbl):
    """Scale each packed triple so its last nonzero coordinate becomes the
    canonical element of its scaling coset (the orbit's packed minimum)."""
    m = field.m
    mask = (1 << m) - 1
    x, y, z = w & mask, (w >> m) & mask, (w >> (2 * m)) & mask
    lead = np.where(z != 0, z, np.where(y != 0, y, x))
    lam = lam_tbl[lead]
    mul = field.mul_vec
    return mul(lam, x) | (mul(lam, y) << m) | (mul(lam, z) << (2 * m))


def canonical_triple(field: FieldSpec, w, subgroup: str = "all"):
    """Packed minimum of the rotation+scaling orbit of each packed triple."""
    _, lam_tbl, _ = _scale_normalizer(field, subgroup)
    w = np.asarray(w, dtype=np.int64)
    m = field.m
    best = _normalize_packed(field, w, lam_tbl)
    r = w
    for _ in range(2):
        r = _rotate_packed(r, m)
        best = np.minimum(best, _normalize_packed(field, r, lam_tbl))
    return best


def orbit_representatives(field: FieldSpec, subgroup: str = "all") -> np.ndarray:
    """One canonical representative (the packed minimum) per orbit of nonzero
    triples under coordinate rotation and scalar multiplication.

    subgroup="all" uses every nonzero scalar (derivative directions);
    subgroup="cubes" only cube scalars (components: scaling an input by λ
    multiplies C_u by λ^3, so only cubes act on component selectors).
    """
    canon_tbl, _, _ = _scale_normalizer(field, subgroup)
    m = field.m
    q = field.order
    # Every orbit minimum has its last nonzero coordinate equal to a coset
    # minimum, so enumerating those few shapes covers all orbits.
    mins = [int(c) for c in np.unique(canon_tbl[1:])]
    xs = np.arange(q, dtype=np.int64)
    pairs = (xs[:, None] | (xs[None, :] << m)).reshape(-1)
    cands = [(c << (2 * m)) | pairs for c in mins]          # (x, y, c)
    cands += [(c << m) | xs for c in mins]                  # (x, c, 0)
    cands.append(np.array(mins, dtype=np.int64))            # (c, 0, 0)
    cand = np.concatenate(cands)
    keep = cand[canonical_triple(field, cand, subgroup) == cand]
    return np.unique(keep)


def _sweep_dims(spec: TrivariateSpec, packed, system: int, chunk=1 << 16):
    m = spec.m
    mask = (1 << m) - 1
    out = np.empty(len(packed), dtype=np.int8)
    for lo in range(0, len(packed), chunk):
        w = packed[lo:lo + chunk]
        out[lo:lo + chunk] = _direction_dims(
            spec, w & mask, (w >> m) & mask, (w >> (2 * m)) & mask, system)
    return out


def max_diff_uniformity_cu(spec: TrivariateSpec, reduction: str = "symmetry") -> int:
    """Differential uniformity of C_u via the derivative kernel system.

    reduction="symmetry" sweeps one direction per rotation/scaling orbit
    (both symmetries provably preserve the solution count); "none" sweeps
    all 2^n - 1 directions.
    """
    if reduction == "none":
        if spec.n > SWEEP_FULL_MAX_N:
            raise CapacityError(
                f"full sweep at n={spec.n} exceeds the n<={SWEEP_FULL_MAX_N} "
                "limit; use reduction='symmetry'")
        dirs = np.arange(1, 1 << spec.n, dtype=np.int64)
    elif reduction == "symmetry":
        dirs = orbit_representatives(spec.field, "all")
    else:
        raise ValueError(f"unknown reduction {reduction!r}")
    return 1 << int(_sweep_dims(spec, dirs, system=2).max())


def max_component_ls_dim_cu(spec: TrivariateSpec, reduction: str = "symmetry") -> int:
    """Largest linear-structure dimension over all nonzero components."""
    if reduction == "none":
        if spec.n > SWEEP_FULL_MAX_N:
            raise CapacityError(
                f"full sweep at n={spec.n} exceeds the n<={SWEEP_FULL_MAX_N} "
                "limit; use reduction='symmetry'")
        comps = np.arange(1, 1 << spec.n, dtype=np.int64)
    elif reduction == "symmetry":
        comps = orbit_representatives(spec.field, "cubes")
    else:
        raise ValueError(f"unknown reduction {reduction!r}")
    return int(_sweep_dims(spec, comps, system=6).max())


def quadratic_linearity_cu(spec: TrivariateSpec, reduction: str = "symmetry") -> int:
    """Linearity of C_u: components of a quadratic map are plateaued, so the
    linearity is 2^((n + d)/2) with d the largest component LS dimension."""
    d = max_component_ls_dim_cu(spec, reduction)
    n = spec.n
    if (n + d) % 2:
        raise ValueError(f"inconsistent plateau: n={n}, max LS dim={d}")
    return 1 << ((n + d) // 2)


# ----------------------------------------------- related constructions

def build_gold(field: FieldSpec, i: int) -> VBF:
    """The power map x -> x^(2^i + 1) on GF(2^n).  A permutation (and APN)
    when gcd(i, n) = 1 and n is odd; no precondition is enforced."""
    return vbf.monomial(field, (1 << i) + 1)


def subfield_trace_map(field: FieldSpec, i: int) -> VBF:
    """The linear map x -> Tr_{n->3}(x + x^(2^(2i))) into the GF(2^3)
    subfield, used to shift a Gold map's inverse into a new class."""
    n = field.m
    if n % 3:
        raise ValueError(f"relative trace to GF(2^3) needs 3 | n, got n={n}")
    xs = np.arange(1 << n, dtype=np.int64)
    t = xs
    for _ in range(2 * i):
        t = field.mul_vec(t, t)
    v = xs ^ t
    acc = v
    t = v
    for _ in range(n // 3 - 1):
        for _ in range(3):
            t = field.mul_vec(t, t)
        acc = acc ^ t
    return VBF(n, acc)


def default_tfl_shift(field: FieldSpec, t: int = 3) -> VBF:
    """The linear map (x_1, ..., x_t) -> (x_1 + x_1^4, 0, ..., 0) on
    (GF(2^m))^t, the shift used in the T_{F,L} permutation construction."""
    m = field.m
    n = t * m
    if n > TABLE_MAX_N:
        raise CapacityError(f"n={n} exceeds the table limit {TABLE_MAX_N}")
    mask = (1 << m) - 1
    xs = np.arange(1 << n, dtype=np.int64) & mask
    x2 = field.mul_vec(xs, xs)
    return VBF(n, xs ^ field.mul_vec(x2, x2))


def build_tfl(f: VBF, shift: VBF) -> VBF:
    """T_{F,L}: x -> F^{-1}(x) + L(x) for a permutation F and linear L."""
    if not f.is_permutation:
        raise ValueError("T_{F,L} needs a permutation: "
                         f"image size {f.image_size} of {1 << f.n}")
    return vbf.xor_add(vbf.inverse(f), shift)


def permpoly_check(n: int, i: int, j: int) -> bool:
    """Is X^((2^i+1)*2^(2ij)) + X^(2^i+1) + X a permutation of GF(2^n)?

    This polynomial decides whether adding the linear shift x + x^(2^(2ij))
    to the inverse of the power permutation x^(2^i+1) keeps it bijective;
    j = 1 is the shift used by the degree-4 permutation constructions.
    """
    field = make_field(n)
    e = (1 << i) + 1
    # as a function on the field, X^k = X^(k mod 2^n-1); the reduction never
    # hits 0 because 2^i + 1 < 2^n - 1 is not a multiple of the group order
    shifted = (e << (2 * i * j)) % ((1 << n) - 1)
    t = vbf.monomial(field, shifted).table ^ vbf.monomial(field, e).table
    t = t ^ np.arange(1 << n, dtype=np.uint32)
    return np.unique(t).size == 1 << n


# -------------------------------------------------- non-bijectivity witness

def _system2_columns(spec: TrivariateSpec, direction):
    """Columns of the derivative system matrix for one direction, as packed
    3m-bit ints (column j = image of the j-th input basis vector)."""
    f, u = spec.field, spec.u
    m = spec.m
    a, b, g = direction
    a2, b2, g2 = f.mul(a, a), f.mul(b, b), f.mul(g, g)
    cols = []
    for i in range(m):
        e = 1 << i
        e2 = f.mul(e, e)
        cols.append((f.mul(a, e2) ^ f.mul(a2, e))
                    | (f.mul(u, f.mul(g2, e)) << m)
                    | (f.mul(u, f.mul(b, e2)) << (2 * m)))
    for i in range(m):
        e = 1 << i
        e2 = f.mul(e, e)
        cols.append(f.mul(u, f.mul(g, e2))
                    | ((f.mul(b, e2) ^ f.mul(b2, e)) << m)
                    | (f.mul(u, f.mul(a2, e)) << (2 * m)))
    for i in range(m):
        e = 1 << i
        e2 = f.mul(e, e)
        cols.append(f.mul(u, f.mul(b2, e))
                    | (f.mul(u, f.mul(a, e2)) << m)
                    | ((f.mul(g, e2) ^ f.mul(g2, e)) << (2 * m)))
    return cols


def search_nonbijectivity_witness(spec: TrivariateSpec, max_orbits=None) -> dict:
    """Search for a collision C_u(w) = C_u(w') with w != w'.

    For the quadratic C_u, a collision in direction a exists iff the linear
    part L_a of the derivative satisfies L_a(v) = C_u(a) for some v; that is
    a solvability check of a 3m x 3m system, done per symmetry-orbit
    representative.  Reports a verified witness pair when one exists; a
    negative result only means no collision was found, nothing is proved.
    """
    reps = orbit_representatives(spec.field, "all")
    if max_orbits is not None:
        reps = reps[:max_orbits]
    checked = 0
    for w in reps:
        checked += 1
        direction = spec.unpack(int(w))
        target = spec.pack(*spec.evaluate(*direction))
        cols = _system2_columns(spec, direction)
        sol = bits.solve_columns(cols, target)
        if sol is None:
            continue
        # column j is the image of input bit j, so the coefficient mask is
        # itself the packed solution vector
        w1, w2 = sol, sol ^ int(w)
        p1 = spec.pack(*spec.evaluate(*spec.unpack(w1)))
        p2 = spec.pack(*spec.evaluate(*spec.unpack(w2)))
        if w1 != w2 and p1 == p2:
            return {"found": True, "direction": list(direction),
                    "collision": [w1, w2], "value": p1,
                    "checked_orbits": checked}
        raise AssertionError("solver returned a non-collision")  # pragma: no cover
    return {"found": False, "checked_orbits": checked}
