import json
from fractions import Fraction

import numpy as np
import pytest

from idgames.census import MAX_CENSUS_FUNCTIONS, fraction_doc, run_census
from idgames.classical import optimal_classical
from idgames.game import GameFunction, Scenario
from idgames.nosignaling import optimal_ns
from idgames.symmetry import apply, enumerate_classes, random_element


@pytest.fixture(scope="module")
def census_232():
    return run_census(Scenario.parse("2,3,2"))


def test_fraction_doc():
    assert fraction_doc(Fraction(3, 8)) == {"num": 3, "den": 8, "decimal": "0.375"}


def test_census_222():
    rep = run_census(Scenario.parse("2,2,2"))
    assert rep.total_functions == 256
    assert sum(r.orbit_size for r in rep.records) == 256
    assert rep.nontrivial_class_count == 0
    assert rep.decomposable_count is None


def test_census_232(census_232):
    rep = census_232
    assert sum(r.orbit_size for r in rep.records) == 4 ** 9
    assert rep.class_count == 85
    assert rep.nontrivial_class_count == 10
    assert rep.histogram_cl == {Fraction(4, 9): 10}
    assert rep.histogram_ns == {Fraction(1, 2): 10}


def test_census_232_members_share_bounds(census_232, rng):
    # values of random non-representative members match their class
    s = census_232.scenario
    nt = census_232.nontrivial
    for _ in range(20):
        r = nt[int(rng.integers(len(nt)))]
        f = apply(random_element(s, rng), GameFunction.from_int(s, r.code))
        assert optimal_classical(f).value == Fraction(4, 9)
        assert optimal_ns(f).value == Fraction(1, 2)


def test_worker_count_does_not_change_output(census_232):
    s = Scenario.parse("2,3,2")
    classes = enumerate_classes(s)[:40]
    one = run_census(s, workers=1, classes=classes)
    two = run_census(s, workers=2, classes=classes)
    assert one.dumps() == two.dumps()


def test_outputs(census_232):
    doc = json.loads(census_232.dumps())
    assert doc["class_count"] == 85
    assert doc["histograms"]["omega_cl"] == [
        {"value": {"num": 4, "den": 9, "decimal": "0.444444444"}, "count": 10}]
    csv_lines = census_232.to_csv().splitlines()
    assert csv_lines[0] == "table,value,fraction,count"
    assert "omega_ns,0.5,1/2,10" in csv_lines
    assert "nontrivial classes 10" in census_232.to_text()


def test_too_large():
    s = Scenario.parse("2,4,4")
    assert s.n_functions > MAX_CENSUS_FUNCTIONS
    with pytest.raises(ValueError):
        run_census(s)


@pytest.mark.slow
def test_census_322():
    rep = run_census(Scenario.parse("3,2,2"), workers=2)
    assert rep.class_count == 5876
    assert rep.nontrivial_class_count == 68
    assert rep.histogram_cl == {Fraction(1, 4): 45, Fraction(3, 8): 23}
    assert rep.decomposable_count == 53
    assert sum(rep.histogram_abs_gap.values()) == 68
    assert rep.histogram_rel_gap[Fraction(1, 6)] == 32
    assert rep.histogram_rel_gap[Fraction(1, 4)] == 30
