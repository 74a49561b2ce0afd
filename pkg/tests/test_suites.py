import numpy as np
import pytest

from dglue import expr as E
from dglue.suites import (SUITE_DOMAIN, random_function, random_interval_gluing, random_metric,
                          run_suite)


@pytest.mark.parametrize("name", ["leibniz", "metric", "compat"])
@pytest.mark.parametrize("seed", [0, 1, 123456789])
def test_suites_pass(name, seed):
    reports = run_suite(name, seed=seed)
    assert all(reports), [r.line() for r in reports if not r]


def test_generators_are_seeded():
    a = [E.to_text(random_function(np.random.default_rng(5))) for _ in range(3)]
    b = [E.to_text(random_function(np.random.default_rng(5))) for _ in range(3)]
    assert a == b


def test_generated_metrics_positive():
    rng = np.random.default_rng(0)
    xs = np.linspace(*SUITE_DOMAIN, 201)
    for _ in range(50):
        assert np.min(E.evaluate_many(random_metric(rng), xs)) > 0


def test_interval_gluing_fibre_map_invertible():
    rng = np.random.default_rng(2)
    for rank in (1, 2):
        G = random_interval_gluing(rng, rank)
        for y in np.linspace(*SUITE_DOMAIN, 9):
            assert abs(np.linalg.det(G.A(y))) > 0.1
