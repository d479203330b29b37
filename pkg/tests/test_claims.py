import numpy as np
import pytest

from apnlab.claims import (
    CLAIM_IDS, CLAIMS, Claim, ClaimContext, ClaimResult, _first_diff,
    run_claims,
)

EXPECTED_IDS = (
    "APN-M3", "INV-M3", "DU-IMAGE-M6", "LIN-M6", "LIN-BOUND-M3", "U1-M3",
    "SEVENTH-POWER", "THICK-M3", "GOLD-REGIONS", "REGIONS-M3", "TFL",
    "PERMPOLY", "GOLD-TRACE-SHIFT", "M9-D8", "ORACLE-EQUIV",
)


def test_registry_shape():
    assert CLAIM_IDS == EXPECTED_IDS
    assert len(set(CLAIM_IDS)) == 15
    for claim in CLAIMS:
        assert claim.cost_class in ("seconds", "minutes", "hours")
        assert claim.description


def test_single_claim_passes():
    results = run_claims(ids=["U1-M3"])
    assert len(results) == 1
    r = results[0]
    assert r.id == "U1-M3"
    assert r.status == "pass"
    assert r.expected == r.observed
    assert r.runtime >= 0
    d = r.as_dict()
    assert d["status"] == "pass"
    assert d["counterexample"] is None


def test_unknown_id_reports_error_without_stopping():
    results = run_claims(ids=["NO-SUCH-CLAIM", "U1-M3"])
    assert [r.id for r in results] == ["NO-SUCH-CLAIM", "U1-M3"]
    assert results[0].status == "error"
    assert results[0].observed == "unknown claim id"
    assert results[1].status == "pass"


def test_seconds_class_all_pass():
    ctx = ClaimContext()
    results = run_claims(cost_class="seconds", context=ctx)
    expected = sorted(c.id for c in CLAIMS if c.cost_class == "seconds")
    assert [r.id for r in results] == expected
    bad = [(r.id, r.counterexample or r.observed)
           for r in results if r.status != "pass"]
    assert not bad, bad


def test_context_caches_objects():
    ctx = ClaimContext()
    assert ctx.field(3) is ctx.field(3)
    assert ctx.cu(3, "1011") is ctx.cu(3, "1011")


def test_failing_runner_yields_counterexample():
    claim = Claim("X", "always disagrees", "seconds",
                  lambda ctx: ({"a": [1, 2]}, {"a": [1, 3]}))
    r = claim.run(ClaimContext())
    assert r.status == "fail"
    assert r.counterexample == {"path": "/a[1]", "expected": 2, "observed": 3}


def test_raising_runner_yields_error():
    def boom(ctx):
        raise ValueError("broken input")
    r = Claim("X", "raises", "seconds", boom).run(ClaimContext())
    assert r.status == "error"
    assert r.observed == "ValueError: broken input"


def test_first_diff_cases():
    assert _first_diff({"a": 1}, {"a": 1}) is None
    assert _first_diff(True, 1) is None            # bool/int tolerance
    d = _first_diff([1, 2], [1, 2, 3])
    assert d == {"path": "[2]", "expected": "<absent>", "observed": 3}
    d = _first_diff({"a": {"b": 4}}, {"a": {"b": 5}})
    assert d["path"] == "/a/b"
    d = _first_diff({"a": 1}, {})
    assert d == {"path": "/a", "expected": 1, "observed": None}


def test_result_as_dict_converts_numpy():
    r = ClaimResult("X", "pass", expected={"v": np.int64(3)},
                    observed=[np.bool_(True)], runtime=1.23456)
    d = r.as_dict()
    assert d["expected"] == {"v": 3} and type(d["expected"]["v"]) is int
    assert d["observed"] == [True] and type(d["observed"][0]) is bool
    assert d["runtime_seconds"] == 1.235
