import json
from collections import Counter
from fractions import Fraction

import pytest

from uipt.exact import DomainError
from uipt.experiments import (EXPERIMENTS, THRESHOLDS, ExperimentReport, exp_core,
                              exp_degree, exp_free_empty, exp_growth, exp_invariance,
                              exp_sub_prob, frac_str, goodness_of_fit, core_sum_exact_side)


def test_frac_str():
    assert frac_str(Fraction(9, 32)) == "9/32"
    assert frac_str(Fraction(2)) == "2/1"


def test_goodness_of_fit_exact_match():
    st = goodness_of_fit({"a": 50, "b": 30, "c": 20},
                         {"a": Fraction(1, 2), "b": Fraction(3, 10), "c": Fraction(1, 5)})
    assert st.tv == 0 and st.chi2 == 0 and st.p_value == 1
    assert st.n == 100 and st.df == 2


def test_goodness_of_fit_tail_and_pooling():
    # "z" is not expected and goes to the tail; tiny bins are pooled
    obs = {"a": 900, "b": 95, "z": 5}
    exp = {"a": Fraction(9, 10), "b": Fraction(96, 1000), "c": Fraction(1, 1000)}
    st = goodness_of_fit(obs, exp)
    assert st.tv == pytest.approx(0.5 * (0 + 0.001 + 0.001 + 0.002))
    assert st.df >= 1


def test_goodness_of_fit_detects_mismatch():
    st = goodness_of_fit({"a": 700, "b": 300}, {"a": Fraction(1, 2), "b": Fraction(1, 2)})
    assert st.p_value < 1e-10
    assert st.tv == pytest.approx(0.2)


def test_goodness_of_fit_rejects_bad_input():
    with pytest.raises(DomainError):
        goodness_of_fit({}, {"a": 1})
    with pytest.raises(DomainError):
        goodness_of_fit({"a": 1}, {"a": Fraction(2, 3), "b": Fraction(2, 3)})


def test_exit_codes():
    rep = ExperimentReport("x", {}, [], {})
    rep.checks.append(("a", True, ""))
    assert rep.exit_code == 0
    rep.checks.append(("b", False, ""))
    assert rep.exit_code == 2
    rep.status_override = 3
    assert rep.exit_code == 3


def test_reports_are_byte_identical():
    a = exp_sub_prob(300, seed=4)
    b = exp_sub_prob(300, seed=4)
    assert a.to_json() == b.to_json()
    assert a.to_csv() == b.to_csv()
    assert "runtime" not in json.loads(a.to_json())
    c = exp_free_empty(500, seeds=(7, 8, 9))
    assert c.to_json() == exp_free_empty(500, seeds=(7, 8, 9)).to_json()


def test_report_serialization():
    rep = exp_core(1000, seed=3)
    d = json.loads(rep.to_json())
    exp = {e["label"]: e["value"] for e in d["expected"]}
    assert exp["3"] == "9/32" and exp["4"] == "243/4096" and exp["infinite"] == "1/2"
    assert sum(d["observed"].values()) == 1000
    assert rep.to_csv().splitlines()[0] == "label,observed,observed_fraction,expected"
    side = d["extra"]["exact_side"]
    assert side["N"] == 10_000
    assert side["extrapolated_within_tol"] is True


def test_exact_side_of_core_sum():
    side = core_sum_exact_side(1000)
    assert float(side["partial_sum"]) < 0.5
    assert side["gap"] > THRESHOLDS["core_sum_tol"]


def test_small_experiments_run():
    assert exp_degree(3, 1000, seed=2).name == "degree-III"
    assert exp_degree(2, 1000, seed=2).name == "degree-II"
    rep = exp_invariance("reroot", 2000, seed=3)
    assert rep.statistics.tv < 0.1
    rep = exp_invariance("policy", 1000, seed=3)
    assert rep.extra["distinct_codes"] > 10
    g = exp_growth(r_max=3, samples=5, seed=1)
    assert g.passed and g.extra["note"].startswith("descriptive")
    with pytest.raises(DomainError):
        exp_invariance("sideways", 10)
    with pytest.raises(DomainError):
        exp_core(10)


def test_experiment_registry():
    assert set(EXPERIMENTS) == {"free-empty", "degree", "core", "invariance-reroot",
                                "invariance-rw", "invariance-policy", "sub-prob", "growth"}


def test_policy_invariance_second_ball():
    # B_2 codes almost never repeat, so pooling reduces this to the root degree
    rep = exp_invariance("policy", 4000, seed=5, radius=2)
    assert rep.statistics.tv < 0.05
