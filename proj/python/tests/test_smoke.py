import json

import pytest

import sitelab


def test_value_and_membership():
    assert sitelab.value("x^2/y") == "2 - √2"
    assert sitelab.value("x y") == "1 + √2"
    assert sitelab.membership("y/x") == "maximal_ideal"
    assert sitelab.membership("x/y") == "outside"
    with pytest.raises(ValueError, match="column"):
        sitelab.value("x +")


def test_centers_and_escape():
    centers = sitelab.center_sequence(3)
    assert [c[0] for c in centers] == ["-", "A", "B", "B"]
    assert centers[0][1:] == ("1", "√2")
    r = sitelab.lift_dvr_point("t^2", "t^3")
    assert (r["escaped"], r["step"], r["word"]) == (True, 3, "AB")
    assert sitelab.lift_dvr_point("t", "0")["step"] == 2


def test_rv_trace_is_periodic():
    t = sitelab.canonical_rv_trace(64)
    assert not t["escaped"]
    assert t["matches_center"]
    assert t["period"] == t["expected_period"] == 1
    assert len(t["values"]) == 65


def test_lifting_and_divisibility():
    assert sitelab.unit_or_zero_lift("Q", "3/7")[0] == "GmLift"
    assert sitelab.unit_or_zero_lift("Q", "0")[0] == "ZeroLift"
    assert sitelab.unit_or_zero_lift("V", "t") == ("Fail", "t")
    assert sitelab.divisibility_witness("Z", 3) == (False, "1")
    assert sitelab.divisibility_witness("Q", 5) == (True, None)
    with pytest.raises(ValueError):
        sitelab.divisibility_witness("Z", 4)


def test_sweeps():
    o = sitelab.topology_soundness(3, 3)
    assert o.ok and o.checked > 0
    assert sitelab.cover_detection_sweep(3, 3).ok
    ok, checked, isos, discrepancies = sitelab.deligne_sample("vee", 50, 1)
    assert ok and checked == 50 and discrepancies == 0
    assert "suspended-circle" in sitelab.catalogue_spaces()


def test_demos():
    demos = sitelab.builtin_demos()
    assert "blowup-escape" in demos and len(demos) == 7
    for name in demos:
        report, code = sitelab.run_demo(name)
        assert code == 0, json.dumps(report)
        assert report["schema"] == 1


def test_scenarios():
    report, code = sitelab.run_scenario({"name": "s", "checks": [{"op": "rv_trace", "n": 64}]})
    assert code == 0
    assert report["entries"][0]["result"]["period"] == 1
    report, code = sitelab.run_scenario({"checks": [{"op": "nope"}]})
    assert code == 2 and "unknown operation" in report["error"]
    report, code = sitelab.run_scenario('{"checks": [{"op": "divisible", "group": "Z", "l": 2}]}')
    assert code == 1 and report["entries"][0]["status"] == "fail"
    assert "pushforward" in sitelab.operations()
