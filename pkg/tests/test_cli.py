import json
import xml.etree.ElementTree as ET

import pytest

from apnlab.cli import main
from apnlab.geometry import (thickness, thickness_spectrum_of_spaces,
                             extract_spaces, walsh_zeroes)
from apnlab.gf2m import make_field
from apnlab.vbf import inverse, load_table, monomial, save_json


def run(capsys, *argv):
    rc = main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


@pytest.fixture(scope="module")
def cube5():
    return monomial(make_field(5), 3)


@pytest.fixture(scope="module")
def cube5_file(cube5, tmp_path_factory):
    path = tmp_path_factory.mktemp("tables") / "cube5.json"
    save_json(cube5, path)
    return str(path)


@pytest.fixture(scope="module")
def cube6_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("tables") / "cube6.json"
    save_json(monomial(make_field(6), 3), path)
    return str(path)


# ------------------------------------------------------------ documented IO

def test_cu_ddt_exact_output(capsys):
    rc, out, err = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011",
                       "--ddt")
    assert rc == 0 and err == ""
    assert out == '{"D": 2}\n'


def test_cu_image_exact_output(capsys):
    rc, out, err = run(capsys, "cu", "--m", "6", "--u-minpoly", "1000011",
                       "--image")
    assert rc == 0 and err == ""
    assert out == '{"image_size": 73564}\n'


def test_cu_combined_flags_fixed_key_order(capsys):
    rc, out, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011",
                     "--ddt", "--walsh")
    assert rc == 0
    assert out == '{"D": 2, "linearity": 32}\n'


def test_identical_invocations_byte_identical(capsys):
    _, out1, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011", "--ddt")
    _, out2, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011", "--ddt")
    assert out1 == out2


# ----------------------------------------------------------------- field, cu

def test_field_record(capsys):
    rc, out, _ = run(capsys, "field", "--m", "3")
    rec = json.loads(out)
    assert rc == 0
    assert rec == {"m": 3, "modulus": "0xb", "modulus_bits": "1011",
                   "order": 8}
    rc, out, _ = run(capsys, "field", "--m", "6", "--u", "2")
    rec = json.loads(out)
    assert rec["order"] == 64
    assert rec["u"] == "0x2"
    assert isinstance(rec["is_seventh_power"], bool)


def test_field_minpoly_round_trip(capsys):
    rc, out, _ = run(capsys, "field", "--m", "3", "--u-minpoly", "1011")
    assert json.loads(out)["u_minpoly_bits"] == "1011"


def test_field_csv_golden(capsys):
    rc, out, _ = run(capsys, "field", "--m", "3", "--format", "csv")
    assert out == "key,value\nm,3\nmodulus,0xb\nmodulus_bits,1011\norder,8\n"


def test_cu_default_record(capsys):
    rc, out, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011")
    rec = json.loads(out)
    assert rec["m"] == 3 and rec["n"] == 9
    assert rec["modulus"] == "0xb"
    assert int(rec["u"], 16) > 0


def test_cu_out_table(capsys, tmp_path):
    path = tmp_path / "cu3.json"
    rc, out, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011",
                     "--degree", "--out", str(path))
    rec = json.loads(out)
    assert rec["degree"] == 2 and rec["out"] == str(path)
    f = load_table(path)
    assert f.n == 9 and f.is_permutation


def test_cu_symmetries_and_seed(capsys):
    rc, out, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011",
                     "--symmetries", "--seed", "5")
    rec = json.loads(out)
    assert rec["seed"] == 5
    assert rec["symmetries"] and all(rec["symmetries"].values())


def test_cu_witness_search(capsys):
    rc, out, _ = run(capsys, "cu", "--m", "3", "--u", "1",
                     "--search-nonbijectivity-witness")
    rec = json.loads(out)["witness"]
    assert rec["witness_found"] is True
    assert set(rec) >= {"direction", "collision", "value", "checked_orbits"}
    rc, out, _ = run(capsys, "cu", "--m", "3", "--u-minpoly", "1011",
                     "--search-nonbijectivity-witness")
    rec = json.loads(out)["witness"]
    assert rec["witness_found"] is False and rec["checked_orbits"] > 0


# ----------------------------------------------------------- table analyzers

def test_ddt_summary_and_row(capsys, cube5_file):
    rc, out, _ = run(capsys, "ddt", "--in", cube5_file)
    rec = json.loads(out)
    assert rec == {"n": 5, "D": 2, "apn": True,
                   "spectrum": {"0": 496, "2": 496}}
    rc, out, _ = run(capsys, "ddt", "--in", cube5_file, "--row", "1")
    rec = json.loads(out)
    assert rec["a"] == 1 and rec["row_max"] == 2
    assert sum(rec["spectrum"].values()) == 32
    rc, out, err = run(capsys, "ddt", "--in", cube5_file, "--row", "0")
    assert rc == 2 and "outside" in err


def test_ddt_csv_and_md_golden(capsys, cube5_file):
    rc, out, _ = run(capsys, "ddt", "--in", cube5_file, "--format", "csv")
    assert out == "value,count\n0,496\n2,496\n"
    rc, out, _ = run(capsys, "ddt", "--in", cube5_file, "--format", "md")
    assert out == ("| value | count |\n"
                   "| --- | --- |\n"
                   "| 0 | 496 |\n"
                   "| 2 | 496 |\n")


def test_walsh_summary_component_zeroes(capsys, cube5, cube5_file):
    rc, out, _ = run(capsys, "walsh", "--in", cube5_file)
    assert json.loads(out) == {"n": 5, "linearity": 8}
    rc, out, _ = run(capsys, "walsh", "--in", cube5_file, "--zeroes")
    assert json.loads(out)["zero_count"] == walsh_zeroes(cube5).count
    rc, out, _ = run(capsys, "walsh", "--in", cube5_file, "--component", "3")
    rec = json.loads(out)
    assert rec["b"] == 3 and rec["max_abs"] == 8 and rec["zero_count"] == 16
    rc, _, err = run(capsys, "walsh", "--in", cube5_file, "--component", "0")
    assert rc == 2 and "outside" in err


def test_anf_record(capsys, cube5_file):
    rc, out, _ = run(capsys, "anf", "--in", cube5_file)
    assert json.loads(out) == {"n": 5, "algebraic_degree": 2,
                               "degree_spectrum": {"2": 31},
                               "has_affine_component": False}


# ------------------------------------------------------- spaces / thickness

def test_spaces_stdout_matches_library(capsys, cube5, cube5_file):
    spaces = extract_spaces(walsh_zeroes(cube5))
    rc, out, _ = run(capsys, "spaces", "--in", cube5_file)
    lines = [json.loads(s) for s in out.splitlines()]
    assert rc == 0 and len(lines) == len(spaces)
    for line, v in zip(lines, spaces):
        assert tuple(int(h, 16) for h in line["rows"]) == v.rows
        assert line["thickness"] == thickness(v)


def test_spaces_out_summary(capsys, cube5, cube5_file, tmp_path):
    dest = tmp_path / "spaces.jsonl"
    rc, out, _ = run(capsys, "spaces", "--in", cube5_file,
                     "--out", str(dest))
    rec = json.loads(out)
    spaces = extract_spaces(walsh_zeroes(cube5))
    spec = thickness_spectrum_of_spaces(spaces)
    assert rec["count"] == len(spaces) and rec["dim"] == 5
    assert rec["thickness_spectrum"] == {str(k): v for k, v in spec.items()}
    assert len(dest.read_text().splitlines()) == len(spaces)


def test_spaces_smaller_dim(capsys, cube5, cube5_file):
    want = extract_spaces(walsh_zeroes(cube5), target_dim=2,
                          method="generic")
    rc, out, _ = run(capsys, "spaces", "--in", cube5_file, "--dim", "2",
                     "--method", "generic")
    assert len(out.splitlines()) == len(want)


def test_thickness_record(capsys, cube5, cube5_file):
    spaces = extract_spaces(walsh_zeroes(cube5))
    spec = thickness_spectrum_of_spaces(spaces)
    rc, out, _ = run(capsys, "thickness", "--in", cube5_file)
    assert json.loads(out) == {
        "n": 5, "space_count": len(spaces),
        "spectrum": {str(k): v for k, v in spec.items()}}


def test_cache_reuse(capsys, cube5_file, tmp_path, monkeypatch):
    monkeypatch.setenv("APNLAB_CACHE", str(tmp_path))
    rc, out1, _ = run(capsys, "thickness", "--in", cube5_file)
    cached = list(tmp_path.glob("spaces-*.jsonl"))
    assert len(cached) == 1
    stamp = cached[0].stat().st_mtime_ns
    rc, out2, _ = run(capsys, "thickness", "--in", cube5_file)
    assert out2 == out1
    assert cached[0].stat().st_mtime_ns == stamp   # reused, not rewritten


# ----------------------------------------------------------------- twisting

def test_twist_inline_space(capsys, cube5, cube5_file, tmp_path):
    dest = tmp_path / "twisted.json"
    rc, out, _ = run(capsys, "twist", "--in", cube5_file,
                     "--space", "20,40,80,100,200", "--out", str(dest))
    rec = json.loads(out)
    assert rec["thickness"] == 5 and rec["permutation"] is True
    assert load_table(dest).table.tolist() == inverse(cube5).table.tolist()


def test_twist_space_file(capsys, cube5_file, tmp_path):
    sp = tmp_path / "spaces.jsonl"
    run(capsys, "spaces", "--in", cube5_file, "--out", str(sp))
    rc, out, _ = run(capsys, "twist", "--in", cube5_file,
                     "--space-file", str(sp), "--index", "0")
    assert rc == 0 and json.loads(out)["n"] == 5
    rc, _, err = run(capsys, "twist", "--in", cube5_file,
                     "--space-file", str(sp), "--index", "999999")
    assert rc == 2 and "out of range" in err


def test_twist_rejects_bad_spaces(capsys, cube5_file, cube6_file):
    rc, _, err = run(capsys, "twist", "--in", cube5_file, "--space", "1,2")
    assert rc == 2 and "dim" in err
    rc, _, err = run(capsys, "twist", "--in", cube5_file, "--space", "0,1")
    assert rc == 2 and "space row" in err
    rc, _, err = run(capsys, "twist", "--in", cube6_file,
                     "--space", "40,80,100,200,400,800")
    assert rc == 2 and "not a dim-n subspace" in err


# ------------------------------------------------------------------- regions

def test_regions_payload(capsys, cube5_file):
    rc, out, _ = run(capsys, "regions", "--in", cube5_file)
    rec = json.loads(out)
    assert rc == 0 and rec["n"] == 5
    assert rec["selected"] == rec["space_count"]
    assert rec["region_count"] == len(rec["regions"])
    assert sum(r["count"] for r in rec["regions"]) == rec["space_count"]


def test_regions_filter_and_sample(capsys, cube5, cube5_file):
    spaces = extract_spaces(walsh_zeroes(cube5))
    t5 = sum(1 for v in spaces if thickness(v) == 5)
    rc, out, _ = run(capsys, "regions", "--in", cube5_file,
                     "--filter", "thickness=5")
    assert json.loads(out)["selected"] == t5 + 1
    rc, out, _ = run(capsys, "regions", "--in", cube5_file,
                     "--sample", "6", "--seed", "3")
    rec = json.loads(out)
    assert rec["seed"] == 3 and rec["selected"] in (6, 7)
    rc, _, err = run(capsys, "regions", "--in", cube5_file,
                     "--filter", "degree=2")
    assert rc == 2 and "thickness=T" in err


def test_regions_out_deterministic(capsys, cube5_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for dest in (a, b):
        rc, out, _ = run(capsys, "regions", "--in", cube5_file,
                         "--sample", "10", "--seed", "7",
                         "--out", str(dest))
        assert rc == 0 and json.loads(out)["out"] == str(dest)
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    for row in payload["regions"]:
        assert {"twist", "count", "degree_spectrum", "thickness_spectrum",
                "permutation"} <= set(row)


def test_regions_checkpoint(capsys, cube5_file, tmp_path):
    ck = tmp_path / "run.ckpt"
    rc, out, _ = run(capsys, "regions", "--in", cube5_file,
                     "--checkpoint", str(ck))
    rec = json.loads(out)
    assert len(ck.read_text().splitlines()) == rec["selected"]
    rc, out2, _ = run(capsys, "regions", "--in", cube5_file,
                      "--checkpoint", str(ck))
    assert out2 == out


def test_regions_md_table(capsys, cube5_file):
    rc, out, _ = run(capsys, "regions", "--in", cube5_file,
                     "--format", "md")
    head = out.splitlines()[0]
    assert head == ("| region | twist | degree_spectrum | thickness_spectrum"
                    " | permutation | count |")


# ---------------------------------------------------------- tfl / permpoly

def test_tfl_cu_family(capsys):
    rc, out, _ = run(capsys, "tfl", "--family", "cu", "--m", "3",
                     "--u-minpoly", "1011")
    rec = json.loads(out)
    assert rec == {"family": "cu", "n": 9, "permutation": True, "degree": 5,
                   "inverse_degree": 4, "inverse_D": 2,
                   "inverse_linearity": 32}


def test_tfl_gold_family(capsys):
    rc, out, _ = run(capsys, "tfl", "--family", "gold", "--n", "9")
    rec = json.loads(out)
    assert rec["permutation"] is True
    assert rec["inverse_degree"] == 4 and rec["inverse_D"] == 2


def test_tfl_usage_errors(capsys):
    rc, _, err = run(capsys, "tfl", "--family", "cu")
    assert rc == 2 and "--m" in err
    rc, _, err = run(capsys, "tfl", "--family", "gold")
    assert rc == 2 and "--n" in err


def test_permpoly(capsys):
    rc, out, _ = run(capsys, "permpoly", "--n", "3", "--i", "1", "--j", "1")
    assert json.loads(out) == {"n": 3, "i": 1, "j": 1, "permutation": True}
    rc, out, _ = run(capsys, "permpoly", "--n", "5", "--i", "1", "--j", "2")
    assert json.loads(out)["permutation"] is False


# -------------------------------------------------------------------- verify

def test_verify_single_claim_with_reports(capsys, tmp_path):
    report = tmp_path / "report.json"
    junit = tmp_path / "report.xml"
    rc, out, _ = run(capsys, "verify", "--filter", "U1-M3",
                     "--report", str(report), "--junit", str(junit))
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("PASS  U1-M3 (")
    assert lines[-1] == "1/1 passed, 0 failed, 0 errors"
    rep = json.loads(report.read_text())
    assert rep["filter"] == "U1-M3"
    assert rep["summary"] == {"pass": 1, "fail": 0, "error": 0}
    assert rep["results"][0]["id"] == "U1-M3"
    root = ET.parse(junit).getroot()
    assert root.tag == "testsuite" and root.get("tests") == "1"
    assert root.get("failures") == "0" and root.get("errors") == "0"
    assert root[0].get("name") == "U1-M3"


def test_verify_unknown_id_exits_one(capsys, tmp_path):
    junit = tmp_path / "bad.xml"
    rc, out, _ = run(capsys, "verify", "--filter", "NO-SUCH-CLAIM",
                     "--junit", str(junit))
    assert rc == 1
    assert out.splitlines()[0].startswith("ERROR NO-SUCH-CLAIM")
    root = ET.parse(junit).getroot()
    assert root.get("errors") == "1"
    assert root[0][0].tag == "error"


def test_verify_seconds_filter_passes(capsys):
    rc, out, _ = run(capsys, "verify", "--filter", "seconds")
    assert rc == 0
    assert out.splitlines()[-1].endswith("0 failed, 0 errors")


# ---------------------------------------------------------------- exit codes

def test_missing_file(capsys):
    rc, _, err = run(capsys, "ddt", "--in", "/nonexistent/table.json")
    assert rc == 2 and err.startswith("error:")


def test_malformed_json_reports_byte(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 5, "table": }')
    rc, _, err = run(capsys, "ddt", "--in", str(bad))
    assert rc == 2 and "malformed JSON at byte 18" in err


def test_truncated_raw_reports_byte(capsys, tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes(b"\x05\x00\x00")
    rc, _, err = run(capsys, "walsh", "--in", str(bad))
    assert rc == 2 and "byte 3" in err


def test_raw_header_out_of_range(capsys, tmp_path):
    bad = tmp_path / "bad.bin"
    bad.write_bytes((99).to_bytes(8, "little") + b"\x00" * 64)
    rc, _, err = run(capsys, "walsh", "--in", str(bad))
    assert rc == 2 and "out of range" in err


def test_jobs_flag(capsys, cube5_file):
    _, base, _ = run(capsys, "spaces", "--in", cube5_file)
    _, j1, _ = run(capsys, "spaces", "--in", cube5_file, "--jobs", "1")
    _, j2, _ = run(capsys, "spaces", "--in", cube5_file, "--jobs", "2")
    assert base == j1 == j2
    rc, _, err = run(capsys, "spaces", "--in", cube5_file, "--jobs", "0")
    assert rc == 2 and ">= 1" in err


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["frobnicate"])
    assert ei.value.code == 2
