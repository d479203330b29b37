import numpy as np
import pytest

from apnlab import vbf
from apnlab.gf2m import element_from_minpoly, make_field
from apnlab.trivariate import (
    SWEEP_FULL_MAX_N, TrivariateSpec, build_cu, build_cu_inverse_closed_form,
    build_gold, build_tfl, canonical_triple, check_symmetries,
    default_tfl_shift, diff_solution_count, ls_solution_count,
    max_component_ls_dim_cu, max_diff_uniformity_cu, orbit_representatives,
    pack_triple, permpoly_check, quadratic_linearity_cu,
    search_nonbijectivity_witness, subfield_trace_map, unpack_triple,
)
from apnlab.vbf import CapacityError


@pytest.fixture(scope="module")
def f3():
    return make_field(3)


@pytest.fixture(scope="module")
def u3(f3):
    return element_from_minpoly(f3, 0b1011)


@pytest.fixture(scope="module")
def cu3(f3, u3):
    return build_cu(f3, u3)


# ------------------------------------------------------------------ packing

def test_packing_round_trip():
    for m in (1, 3, 5):
        for w in range(0, 1 << (3 * m), 7):
            assert pack_triple(m, *unpack_triple(m, w)) == w


def test_spec_evaluate_matches_table(f3, u3, cu3):
    spec = TrivariateSpec(f3, u3)
    for w in range(0, 512, 11):
        x, y, z = spec.unpack(w)
        assert spec.pack(*spec.evaluate(x, y, z)) == cu3(w)


def test_build_cu_direct_formula(f3, u3, cu3):
    # independent per-point evaluation of the three coordinates
    for w in (0, 1, 73, 255, 511):
        x, y, z = unpack_triple(3, w)
        c1 = f3.pow(x, 3) ^ f3.mul(u3, f3.mul(f3.sq(y), z))
        c2 = f3.pow(y, 3) ^ f3.mul(u3, f3.mul(x, f3.sq(z)))
        c3 = f3.pow(z, 3) ^ f3.mul(u3, f3.mul(f3.sq(x), y))
        assert cu3(w) == pack_triple(3, c1, c2, c3)


def test_build_cu_is_quadratic(f3, u3, cu3):
    assert vbf.algebraic_degree(cu3) == 2
    assert vbf.degree_spectrum(cu3) == {2: 511}


def test_build_cu_capacity():
    with pytest.raises(CapacityError, match="table limit"):
        build_cu(make_field(9), 2)


# ----------------------------------------------------------- known uniformity

def test_apn_for_non_seventh_power_roots(f3):
    for minpoly in (0b1011, 0b1101):
        u = element_from_minpoly(f3, minpoly)
        assert not f3.is_seventh_power(u)
        f = build_cu(f3, u)
        assert vbf.ddt(f).differential_uniformity == 2
        assert f.is_permutation


def test_u_one_gives_32(f3):
    spec = TrivariateSpec(f3, 1)
    assert max_diff_uniformity_cu(spec) == 32
    assert vbf.ddt(build_cu(f3, 1)).differential_uniformity == 32


def test_u_zero_gives_128(f3):
    # C_0 = (x^3, y^3, z^3): a derivative in (a,0,0) leaves y,z free
    spec = TrivariateSpec(f3, 0)
    assert diff_solution_count(spec, (1, 0, 0)) == 128
    assert max_diff_uniformity_cu(spec) == 128


# ------------------------------------------------------- closed-form inverse

@pytest.mark.parametrize("minpoly", [0b1011, 0b1101])
def test_closed_form_inverse(f3, minpoly):
    u = element_from_minpoly(f3, minpoly)
    f = build_cu(f3, u)
    inv = build_cu_inverse_closed_form(f3, u)
    assert vbf.compose(inv, f) == vbf.identity(9)
    assert vbf.compose(f, inv) == vbf.identity(9)
    assert vbf.algebraic_degree(inv) == 5
    # rotation structure: second coordinate of inv = first coordinate at
    # rotated input
    for w in (1, 100, 300):
        x, y, z = unpack_triple(3, w)
        here = unpack_triple(3, inv(w))
        rot = unpack_triple(3, inv(pack_triple(3, y, z, x)))
        assert here[1] == rot[0]


def test_closed_form_inverse_rejects_other_u(f3):
    with pytest.raises(ValueError, match="root"):
        build_cu_inverse_closed_form(f3, 1)
    with pytest.raises(ValueError, match="m=3"):
        build_cu_inverse_closed_form(make_field(2), 1)


def test_inverse_fixes_unit_vector(f3, u3):
    f = build_cu(f3, u3)
    inv = build_cu_inverse_closed_form(f3, u3)
    w = pack_triple(3, 1, 0, 0)
    assert inv(f(w)) == w


# ----------------------------------------------------------------- symmetries

def test_symmetries_m3(f3):
    for u in range(8):
        rep = check_symmetries(f3, u)
        assert rep["ok"], rep
        assert rep["rotation"]["cases"] == 512


def test_symmetries_m6_sampled():
    f6 = make_field(6)
    u = element_from_minpoly(f6, 0b1000011)
    rep = check_symmetries(f6, u, seed=5)
    assert rep["ok"]
    assert rep["scaling"]["scalars"]          # sampled scalars are logged


# ------------------------------------------------- solution-count systems

def test_diff_count_matches_exhaustive_derivative(f3, u3, cu3):
    spec = TrivariateSpec(f3, u3)
    rng = np.random.default_rng(42)
    t = cu3.table
    for w in rng.choice(511, size=24, replace=False) + 1:
        w = int(w)
        row = np.bincount(t ^ t[np.arange(512) ^ w], minlength=512)
        expect = int(row[cu3(w) ^ cu3(0)])
        assert diff_solution_count(spec, unpack_triple(3, w)) == expect


def test_diff_count_rejects_zero_direction(f3, u3):
    spec = TrivariateSpec(f3, u3)
    with pytest.raises(ValueError, match="nonzero"):
        diff_solution_count(spec, (0, 0, 0))
    with pytest.raises(ValueError, match="element"):
        diff_solution_count(spec, (9, 0, 0))


def test_seventh_power_direction_m6():
    f6 = make_field(6)
    u = f6.pow(3, 7)                    # a nonzero 7th power
    spec = TrivariateSpec(f6, u)
    root = f6.seventh_root(u)
    assert diff_solution_count(spec, (root, 1, 0)) == 1 << 6


def test_ls_count_vs_component_dims(f3, u3, cu3):
    # System-6 dims over all components must reproduce the known max
    spec = TrivariateSpec(f3, u3)
    dims = [ls_solution_count(spec, unpack_triple(3, b))
            for b in range(1, 512, 17)]
    assert max(dims) <= 1
    assert max_component_ls_dim_cu(spec) == 1
    assert quadratic_linearity_cu(spec) == 32
    assert vbf.quad_linearity(cu3) == 32


# ---------------------------------------------------------- orbit reduction

def test_orbit_reduction_preserves_max(f3):
    for u in (1, 2, 5):
        spec = TrivariateSpec(f3, u)
        assert (max_diff_uniformity_cu(spec, "none")
                == max_diff_uniformity_cu(spec, "symmetry"))


def test_diff_count_constant_on_orbits(f3, u3):
    spec = TrivariateSpec(f3, u3)
    rng = np.random.default_rng(3)
    for w in rng.choice(511, size=16, replace=False) + 1:
        a, b, g = unpack_triple(3, int(w))
        base = diff_solution_count(spec, (a, b, g))
        assert diff_solution_count(spec, (b, g, a)) == base   # rotation
        for lam in (2, 7):
            scaled = (f3.mul(lam, a), f3.mul(lam, b), f3.mul(lam, g))
            assert diff_solution_count(spec, scaled) == base  # scaling


def test_orbit_representatives_cover(f3):
    reps = orbit_representatives(f3, "all")
    every = np.arange(1, 512, dtype=np.int64)
    canon = canonical_triple(f3, every, "all")
    assert set(int(c) for c in canon) == set(int(r) for r in reps)
    # canonical form is idempotent and minimal in its orbit
    assert np.array_equal(canonical_triple(f3, reps, "all"), reps)


def test_reduction_factor_m6():
    f6 = make_field(6)
    reps = orbit_representatives(f6, "all")
    # order-of-magnitude: |orbits| ~ (2^18 - 1) / (3 * 63)
    assert len(reps) < (1 << 18) / 150


def test_sweep_capacity_guard():
    spec = TrivariateSpec(make_field(9), 2)
    assert spec.n > SWEEP_FULL_MAX_N
    with pytest.raises(CapacityError, match="symmetry"):
        max_diff_uniformity_cu(spec, "none")
    with pytest.raises(ValueError, match="reduction"):
        max_diff_uniformity_cu(spec, "fast")


def test_m9_direction_count_without_table():
    # kernel counting needs no 2^27 table; the orbit sweep finds a direction
    # of count 8 and never exceeds it
    f9 = make_field(9)
    u = next(v for v in range(2, 512) if not f9.is_seventh_power(v))
    spec = TrivariateSpec(f9, u)
    assert max_diff_uniformity_cu(spec) == 8
    counts = {diff_solution_count(spec, unpack_triple(9, int(w)))
              for w in orbit_representatives(f9, "all")[:4000]}
    assert counts <= {2, 4, 8}


# ------------------------------------------------ related constructions

def test_build_gold():
    f9 = make_field(9)
    g = build_gold(f9, 1)
    assert g.is_permutation
    assert vbf.ddt(g).is_apn
    g6 = build_gold(make_field(6), 1)
    assert not g6.is_permutation       # gcd(3, 63) = 3


def test_subfield_trace_map_linear_and_lands_in_subfield():
    f9 = make_field(9)
    L = subfield_trace_map(f9, 1)
    t = L.table.astype(np.int64)
    rng = np.random.default_rng(8)
    for _ in range(100):
        a, b = rng.integers(0, 512, size=2)
        assert t[a ^ b] == t[a] ^ t[b]
    for v in t[:64]:
        assert f9.pow(int(v), 8) == int(v)       # image inside GF(8)
    with pytest.raises(ValueError, match="3"):
        subfield_trace_map(make_field(4), 1)


def test_default_tfl_shift_formula(f3):
    L = default_tfl_shift(f3)
    for w in range(0, 512, 5):
        x = w & 7
        assert L(w) == f3.pow(x, 4) ^ x


def test_build_tfl_permutation_iff_m3(f3, u3):
    f = build_cu(f3, u3)
    t = build_tfl(f, default_tfl_shift(f3))
    assert t.is_permutation
    tinv = vbf.inverse(t)
    assert vbf.algebraic_degree(tinv) == 4
    assert vbf.ddt(tinv).is_apn
    with pytest.raises(ValueError, match="permutation"):
        build_tfl(build_cu(f3, 1), default_tfl_shift(f3))


def test_tfl_zero_shift_is_inverse(f3, u3):
    f = build_cu(f3, u3)
    zero = vbf.from_table([0] * 512)
    assert build_tfl(f, zero) == vbf.inverse(f)


# ------------------------------------------------------------ permpoly

def test_permpoly_true_cases():
    assert permpoly_check(3, 1, 1)
    assert permpoly_check(3, 2, 1)


@pytest.mark.parametrize("n", [5, 7, 9])
def test_permpoly_false_for_larger_fields(n):
    for i in range(1, n):
        for j in range(1, n):
            import math
            if math.gcd(i, n) == 1 and math.gcd(j, n) == 1:
                assert not permpoly_check(n, i, j), (n, i, j)


def test_permpoly_matches_direct_evaluation():
    # brute-force the defining polynomial over a few parameter sets
    for n, i, j in ((3, 1, 1), (3, 2, 1), (5, 1, 1), (7, 1, 2)):
        field = make_field(n)
        e = (1 << i) + 1
        shift = 1 << (2 * i * j)
        values = {field.pow(x, e * shift % ((1 << n) - 1))
                  ^ field.pow(x, e) ^ x for x in range(1 << n)}
        assert (len(values) == 1 << n) == permpoly_check(n, i, j)


# ----------------------------------------------------- collision witnesses

def test_witness_found_for_seventh_power(f3):
    spec = TrivariateSpec(f3, 1)            # u = 1 is a 7th power
    rep = search_nonbijectivity_witness(spec)
    assert rep["found"]
    w1, w2 = rep["collision"]
    f = build_cu(f3, 1)
    assert w1 != w2 and f(w1) == f(w2) == rep["value"]


def test_witness_absent_for_permutation(f3, u3):
    rep = search_nonbijectivity_witness(TrivariateSpec(f3, u3))
    assert not rep["found"]
    assert rep["checked_orbits"] == len(orbit_representatives(f3, "all"))


def test_witness_found_even_field():
    f6 = make_field(6)
    u = element_from_minpoly(f6, 0b1000011)
    rep = search_nonbijectivity_witness(TrivariateSpec(f6, u))
    assert rep["found"]
    f = build_cu(f6, u)
    w1, w2 = rep["collision"]
    assert f(w1) == f(w2) and w1 != w2
