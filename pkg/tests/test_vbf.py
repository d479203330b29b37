import json
import random

import numpy as np
import pytest

from apnlab import vbf
from apnlab.gf2m import make_field
from apnlab.vbf import (
    AffineMap, CapacityError, VBF, algebraic_degree, anf, compose,
    component_degrees, ddt, degree_spectrum, differential_uniformity,
    ea_transform, from_table, has_affine_component, identity, inverse,
    is_quadratic, linearity, load_table, monomial, quad_component_ls_dims,
    quad_differential_uniformity, quad_linearity, save_json, save_raw, walsh,
    walsh_component, xor_add,
)


@pytest.fixture(scope="module")
def cube5():
    return monomial(make_field(5), 3)          # APN permutation, n odd


@pytest.fixture(scope="module")
def cube6():
    return monomial(make_field(6), 3)          # APN, not a permutation


@pytest.fixture(scope="module")
def gold52():
    return monomial(make_field(5), 5)          # x^5 = x^(2^2+1), APN


# ------------------------------------------------------------- construction

def test_table_validation():
    with pytest.raises(ValueError):
        VBF(2, [0, 1, 2])                      # wrong length
    with pytest.raises(ValueError):
        VBF(2, [0, 1, 2, 4])                   # out of range
    f = from_table([3, 2, 1, 0])
    assert f.n == 2 and f(0) == 3


def test_identity_and_permutation_flags():
    e = identity(4)
    assert e.is_permutation and e.image_size == 16
    c = from_table([0] * 8)
    assert not c.is_permutation and c.image_size == 1


def test_monomial_and_compose(cube5):
    f9 = monomial(make_field(5), 9)
    # x^9 = (x^3)^3
    assert compose(cube5, cube5) == f9
    assert compose(cube5, identity(5)) == cube5
    with pytest.raises(ValueError):
        compose(cube5, identity(4))


def test_inverse(cube5):
    inv = inverse(cube5)
    assert compose(inv, cube5) == identity(5)
    assert compose(cube5, inv) == identity(5)
    with pytest.raises(ValueError, match="not invertible"):
        inverse(from_table([0, 0, 1, 1]))


def test_xor_add(cube5):
    g = xor_add(cube5, cube5)
    assert g == from_table([0] * 32)


# ------------------------------------------------------------------ DDT

def test_ddt_brute_force_small():
    rng = random.Random(11)
    for _ in range(5):
        table = [rng.randrange(16) for _ in range(16)]
        f = from_table(table)
        rep = ddt(f)
        full = np.zeros((16, 16), dtype=int)
        for a in range(1, 16):
            for x in range(16):
                full[a][table[x] ^ table[x ^ a]] += 1
        assert rep.differential_uniformity == full[1:].max()
        want = np.bincount(full[1:].reshape(-1), minlength=17)
        assert np.array_equal(rep.value_histogram, want)


def test_ddt_known_values(cube5, cube6):
    assert ddt(cube5).is_apn
    assert ddt(cube6).is_apn
    assert differential_uniformity(identity(4)) == 16


def test_ddt_rows_sum_and_evenness(cube5):
    for a in (1, 7, 31):
        row = vbf.ddt_row(cube5, a)
        assert row.sum() == 32
        assert not (row & 1).any()


# ------------------------------------------------------------------ Walsh

def test_walsh_modes_agree(cube5):
    per = walsh(cube5, mode="per-component")
    full = walsh(cube5, mode="full")
    assert per.linearity == full.linearity == 8   # AB: 2^((n+1)/2)
    assert np.array_equal(per.per_component_max, full.per_component_max)


def test_walsh_origin_convention(cube5):
    rep = walsh(cube5)
    assert rep.per_component_max[0] == 32


def test_parseval(cube6):
    for b in (1, 9, 63):
        coeffs = walsh_component(cube6, b)
        assert int((coeffs.astype(np.int64) ** 2).sum()) == 1 << (2 * 6)


def test_permutation_iff_balanced_components(cube5, cube6):
    # three independent computations of "is a permutation"
    for f, expect in ((cube5, True), (cube6, False)):
        by_table = f.is_permutation
        by_walsh = all(int(walsh_component(f, b)[0]) == 0
                       for b in range(1, 1 << f.n))
        by_count = f.image_size == 1 << f.n
        assert by_table == by_walsh == by_count == expect


def test_capacity_errors():
    with pytest.raises(CapacityError):
        walsh(identity(13), mode="full")
    with pytest.raises(ValueError, match="mode"):
        walsh(identity(3), mode="banana")


# ------------------------------------------------------------------- ANF

def test_anf_involution(cube5):
    coeffs = anf(cube5)
    back = coeffs.copy()
    from apnlab.backend import kernels
    kernels().mobius(back)
    for k in range(cube5.n):
        assert np.array_equal(back[k],
                              (cube5.table >> k) & 1)


def test_monomial_degrees():
    f = make_field(6)
    for e, want in ((1, 1), (3, 2), (5, 2), (7, 3), (21, 3)):
        assert algebraic_degree(monomial(f, e)) == bin(e).count("1") == want


def test_degree_spectrum_cube(cube5):
    assert degree_spectrum(cube5) == {2: 31}
    assert not has_affine_component(cube5)
    assert is_quadratic(cube5)


def test_affine_component_detection():
    f = make_field(4)
    g = monomial(f, 3)
    # adding a coordinate that copies an input bit gives an affine component
    t = g.table.copy()
    mixed = from_table([(int(v) & 0b0111) | ((x & 1) << 3)
                        for x, v in enumerate(t)])
    assert has_affine_component(mixed)


def test_component_degrees_match_anf_definition(cube6):
    degs = component_degrees(cube6)
    assert degs[0] == 0
    # spot-check two components against a direct Moebius transform
    from apnlab.backend import kernels
    for b in (1, 45):
        tt = np.array([bin(b & int(v)).count("1") & 1 for v in cube6.table],
                      dtype=np.uint8).reshape(1, -1)
        kernels().mobius(tt)
        deg = max(bin(u).count("1") for u in np.nonzero(tt[0])[0])
        assert degs[b] == deg


# ------------------------------------------------------ quadratic shortcuts

def test_quad_shortcuts_match_oracles(cube5, cube6, gold52):
    for f in (cube5, cube6, gold52):
        assert quad_linearity(f) == linearity(f)
        assert quad_differential_uniformity(f) == ddt(f).differential_uniformity


def test_quad_shortcut_rejects_cubic():
    f = monomial(make_field(5), 7)
    with pytest.raises(ValueError, match="quadratic"):
        quad_linearity(f)
    with pytest.raises(ValueError, match="quadratic"):
        quad_component_ls_dims(f)


def test_cube5_ls_dims(cube5):
    # almost bent: every nonzero component has linear-structure dim 1
    dims = quad_component_ls_dims(cube5)
    assert dims[0] == 5
    assert set(dims[1:].tolist()) == {1}


# ----------------------------------------------------------- EA transforms

def test_ea_invariance(cube5):
    rng = random.Random(20)
    n = cube5.n
    d0 = differential_uniformity(cube5)
    l0 = linearity(cube5)
    s0 = degree_spectrum(cube5)
    trials = 0
    while trials < 20:
        rows_a = [rng.randrange(1 << n) for _ in range(n)]
        rows_b = [rng.randrange(1 << n) for _ in range(n)]
        from apnlab import bits
        if not (bits.is_invertible(rows_a, n) and bits.is_invertible(rows_b, n)):
            continue
        trials += 1
        outer = AffineMap(tuple(rows_a), rng.randrange(1 << n))
        inner = AffineMap(tuple(rows_b), rng.randrange(1 << n))
        g = ea_transform(cube5, outer, inner)
        assert differential_uniformity(g) == d0
        assert linearity(g) == l0
        assert degree_spectrum(g) == s0


def test_ea_transform_identity(cube5):
    e = AffineMap.identity(5)
    assert ea_transform(cube5, e, e) == cube5


# ------------------------------------------------------------------ file IO

def test_json_round_trip(tmp_path, cube5):
    p = tmp_path / "f.json"
    save_json(cube5, p)
    assert load_table(p) == cube5
    data = json.loads(p.read_text())
    assert data["n"] == 5 and len(data["table"]) == 32


def test_raw_round_trip(tmp_path, cube6):
    p = tmp_path / "f.bin"
    save_raw(cube6, p)
    assert load_table(p) == cube6
    assert p.stat().st_size == 8 + 4 * 64


def test_raw_malformed_reports_byte_offset(tmp_path):
    p = tmp_path / "bad.bin"
    p.write_bytes(b"\x03\x00\x00")
    with pytest.raises(ValueError, match="byte"):
        load_table(p)
    p.write_bytes((3).to_bytes(8, "little") + b"\x00" * 9)
    with pytest.raises(ValueError, match="byte"):
        load_table(p)
    p.write_bytes((99).to_bytes(8, "little"))
    with pytest.raises(ValueError, match="out of range"):
        load_table(p)


def test_json_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2}')
    with pytest.raises(ValueError, match="table"):
        load_table(p)
    p.write_text('{"n": 2, "table": [0, 1, 2,')
    with pytest.raises(ValueError):
        load_table(p)
