import json

import pytest

from omegalab.counterexamples import EXAMPLE_IDS, run_all, run_example, tent_no_hshadow_orbit
from omegalab.errors import ParameterError
from omegalab.numeric import format_rational


@pytest.mark.parametrize("example_id", EXAMPLE_IDS)
def test_bundle_passes(example_id):
    report = run_example(example_id)
    assert report["passed"], [c for c in report["claims"] if c["verdict"] != "pass"]
    for entry in report["claims"]:
        assert set(entry) == {"claim", "anchor", "verdict", "certificate"}


def test_reports_are_byte_identical():
    a = json.dumps(run_all(), sort_keys=True)
    b = json.dumps(run_all(), sort_keys=True)
    assert a == b


def test_tent_orbit():
    po = tent_no_hshadow_orbit()
    assert [format_rational(x) for x in po.states] == ["1/3", "1/2", "13/16"]


def test_failures_are_entries_not_exceptions():
    # a delta outside (0, 1 - T(c)) makes two claims fail without raising
    report = run_example("tent_no_hshadow", delta=1)
    assert not report["passed"]
    verdicts = {c["claim"]: c["verdict"] for c in report["claims"]}
    assert verdicts["delta lies in (0, 1 - T(c))"] == "fail"


def test_unknown_example():
    with pytest.raises(ParameterError):
        run_example("nope")


def test_truncation_is_a_parameter():
    report = run_example("exact_map_H", truncation=5)
    assert report["passed"] and report["params"]["truncation"] == 5
