import numpy as np
import pytest

from qres.angular import HALF, SpinJ
from qres.bayes import Prior, average_information_gain
from qres.tasks import (
    SRF_OUTCOMES,
    Resource,
    TaskResult,
    spin_pair_outcomes,
    srf_likelihood,
    srf_pair_table,
    task1_avg_info,
    task1_likelihood_sss,
    task1_probabilities_closed_form,
    task1_probabilities_constructive,
    task2_avg_info,
    task2_conclusive,
    task2_likelihood_sss,
    task2_probabilities_closed_form,
    task2_probabilities_constructive,
    task2_spinj_sweep,
)

# 30-digit reference values computed independently with mpmath adaptive quadrature
TASK1_SRF = 0.0270233121676954
TASK1_SSS = 0.0292213767352877
TASK2_SSS_HALF = 0.0981587785705665
TASK2_SSS_ONE = 0.0841465795032307
TASK2_SSS_25 = 0.0817094294812449
TASK2_SSS_50 = 0.0817055065367245
ONE_MINUS_H_THIRD = 0.0817041659455105


def test_resource_validation():
    with pytest.raises(ValueError):
        Resource("sss")
    with pytest.raises(ValueError):
        Resource("srf", HALF)
    with pytest.raises(ValueError):
        Resource.sss(0)
    with pytest.raises(ValueError):
        Resource("frame")
    assert str(Resource.sss("3/2")) == "sss(j=3/2)"


def test_task_result_validation():
    with pytest.raises(ValueError):
        TaskResult("IV", Resource.srf(), "avg_info_bits", 0.1)
    with pytest.raises(ValueError):
        TaskResult("I", Resource.srf(), "avg_info_bits", 0.1, outcome_table={("a", "h"): 0.4})


@pytest.mark.parametrize("alpha", np.linspace(0, np.pi, 9))
@pytest.mark.parametrize("phi", [0.0, 1.3, 4.0])
def test_task1_constructive_matches_closed_form(alpha, phi):
    got = task1_probabilities_constructive(alpha, phi)
    assert np.max(np.abs(got - task1_probabilities_closed_form(alpha))) < 1e-12


def test_task1_values():
    srf = task1_avg_info(Resource.srf())
    sss = task1_avg_info(Resource.sss())
    assert abs(srf.value - TASK1_SRF) < 1e-12
    assert abs(sss.value - TASK1_SSS) < 1e-12
    assert sss.value > srf.value
    assert sss.parameter == 0.5 and srf.parameter is None


def test_task1_rejects_other_resources():
    with pytest.raises(ValueError):
        task1_avg_info(Resource.refbit())
    with pytest.raises(ValueError):
        task1_avg_info(Resource.sss(1))


def test_task1_likelihood_domain():
    with pytest.raises(ValueError):
        task1_likelihood_sss().table([4.0])


def test_srf_likelihood_columns_sum_to_one():
    lik = srf_likelihood("I")
    t = lik.table(np.linspace(0, np.pi, 50))
    assert np.allclose(t.sum(axis=1), 1, atol=1e-12)
    with pytest.raises(ValueError):
        srf_likelihood("II").table([1.0])
    with pytest.raises(ValueError):
        srf_likelihood("III")


def test_srf_likelihood_analytic_values():
    # parallel spins: P(same) = 2/3; anti-parallel: P(same) = 1/3
    t = srf_likelihood("II").table([0.0, np.pi])
    assert np.allclose(t, [[1 / 3, 1 / 6, 1 / 6, 1 / 3], [1 / 6, 1 / 3, 1 / 3, 1 / 6]], atol=1e-14)


@pytest.mark.parametrize("task", ["I", "II"])
def test_srf_same_different_coarse_graining(task):
    lik = srf_likelihood(task)
    merged = lik.coarse_grained({"same": ["+,+", "-,-"], "different": ["+,-", "-,+"]})
    if task == "I":
        prior = Prior.continuous(lambda a: 0.5 * np.sin(a))
    else:
        prior = Prior.discrete([0.0, np.pi], [0.5, 0.5])
    assert abs(average_information_gain(prior, lik) - average_information_gain(prior, merged)) < 1e-9


def test_task2_srf_value_and_analytic():
    r = task2_avg_info(Resource.srf())
    assert abs(r.value - ONE_MINUS_H_THIRD) < 1e-9
    assert set(r.outcomes) == set(SRF_OUTCOMES)


@pytest.mark.parametrize("twice", range(1, 21))
def test_task2_closed_form_matches_constructive(twice):
    j = SpinJ(twice)
    closed = task2_probabilities_closed_form(j)
    assert np.max(np.abs(closed - task2_probabilities_constructive(j))) < 1e-10
    assert np.allclose(closed.sum(axis=0), 1, atol=1e-12)


def test_task2_spin_half_table():
    t = task2_probabilities_closed_form(HALF)
    assert np.allclose(t, [[0, 1 / 8], [1 / 4, 1 / 8], [1 / 4, 1 / 8], [1 / 2, 5 / 8]], atol=1e-15)
    assert spin_pair_outcomes(HALF) == ("0,0", "0,1", "1,0", "1,1")
    assert spin_pair_outcomes(SpinJ(2)) == ("1/2,1/2", "1/2,3/2", "3/2,1/2", "3/2,3/2")


def test_task2_likelihood_methods_agree():
    j = SpinJ(5)
    a = task2_likelihood_sss(j).table([0.0, np.pi])
    b = task2_likelihood_sss(j, method="constructive").table([0.0, np.pi])
    assert np.max(np.abs(a - b)) < 1e-10
    with pytest.raises(ValueError):
        task2_likelihood_sss(j, method="guess")
    with pytest.raises(ValueError):
        task2_likelihood_sss(j).table([0.5])


@pytest.mark.parametrize(
    "j,expected",
    [("1/2", TASK2_SSS_HALF), ("1", TASK2_SSS_ONE), ("25", TASK2_SSS_25), ("50", TASK2_SSS_50)],
)
def test_task2_sss_values(j, expected):
    assert abs(task2_avg_info(Resource.sss(j)).value - expected) < 1e-12


def test_task2_resource_ordering():
    half = task2_avg_info(Resource.sss(HALF)).value
    one = task2_avg_info(Resource.sss(1)).value
    srf = task2_avg_info(Resource.srf()).value
    assert half - one > 1e-3 and one - srf > 1e-3


def test_sweep_strictly_decreasing_to_srf():
    values = [r.value for r in task2_spinj_sweep(SpinJ(t) for t in range(1, 101))]
    assert np.all(np.diff(values) < 0)
    assert values[-1] > ONE_MINUS_H_THIRD
    with pytest.raises(ValueError):
        task2_spinj_sweep([])


def test_task2_conclusive_sss():
    r = task2_conclusive(Resource.sss())
    assert abs(r.value - 1 / 16) < 1e-12
    assert abs(r.extras["conclusive_given_anti-parallel"] - 1 / 8) < 1e-12
    assert r.extras["conclusive_given_parallel"] == 0.0


def test_task2_conclusive_higher_spin_has_none():
    # for j >= 1 every outcome is possible under both hypotheses
    assert task2_conclusive(Resource.sss(1)).value == 0.0


def test_task2_conclusive_srf():
    r = task2_conclusive(Resource.srf(), n_directions=100, seed=0)
    assert r.value == 0.0
    assert r.extras["min_sampled_probability"] > 1e-6


@pytest.mark.parametrize("theta", [0.2, 1.0, 2.5])
def test_srf_pair_table_phi_independent(theta):
    base = srf_pair_table(theta, 0.0)
    for phi in np.linspace(0, 2 * np.pi, 7):
        assert np.max(np.abs(srf_pair_table(theta, phi) - base)) < 1e-12
    assert np.allclose(base.sum(axis=0), 1)
