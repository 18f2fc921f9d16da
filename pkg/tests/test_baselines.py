import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixorder.baselines import (AgingNotion, Family, classify_monotone_aging, evaluate,
                                make_baseline)
from mixorder.exceptions import DomainError
from mixorder._monotone import Monotonicity

UNBOUNDED = [("exponential", ()), ("weibull", (2.0,)), ("weibull", (0.7,)),
             ("frechet", (3.0,)), ("frechet", (1.5,))]
ALL = UNBOUNDED + [("power", (3.0, 2.0)), ("power", (0.5, 4.0))]


def test_make_baseline_support():
    w = make_baseline("weibull", [2])
    assert w.family is Family.WEIBULL and w.params == (2.0,)
    assert w.support_lo == 0 and w.support_hi == math.inf
    p = make_baseline(Family.POWER, [3, 2])
    assert p.support_hi == 2.0 and p.bounded


@pytest.mark.parametrize("family,params", [
    ("weibull", [-1]), ("weibull", []), ("power", [3]), ("frechet", [0]),
    ("exponential", [1.0]), ("gamma", [2.0]),
])
def test_make_baseline_rejects(family, params):
    with pytest.raises(ValueError):
        make_baseline(family, params)


def test_eval_closed_forms():
    w = make_baseline("weibull", (2.0,))
    assert evaluate(w, "cdf", 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert evaluate(make_baseline("frechet", (3.0,)), "cdf", 1.0) == pytest.approx(math.exp(-1))
    assert evaluate(make_baseline("power", (3.0, 2.0)), "cdf", 2.0) == 1.0
    assert evaluate(w, "quantile", 0.632121) == pytest.approx(1.0, abs=1e-5)
    assert evaluate(w, "quantile", evaluate(w, "cdf", 1.0)) == pytest.approx(1.0, abs=1e-9)
    assert evaluate(w, "hazard", 3.0) == pytest.approx(6.0)
    assert evaluate(w, "log_density_slope", 2.0) == pytest.approx(1 / 2 - 4)


def test_outside_support_conventions():
    p = make_baseline("power", (3.0, 2.0))
    assert p.cdf(-1.0) == 0 and p.sf(-1.0) == 1 and p.pdf(-1.0) == 0
    assert p.cdf(5.0) == 1 and p.sf(5.0) == 0 and p.pdf(5.0) == 0


def test_domain_errors():
    w = make_baseline("weibull", (2.0,))
    p = make_baseline("power", (3.0, 2.0))
    for bad in (0.0, 1.0, 1.5, -0.1):
        with pytest.raises(DomainError):
            w.quantile(bad)
    with pytest.raises(DomainError):
        p.hazard(2.0)
    with pytest.raises(DomainError):
        w.reversed_hazard(0.0)
    with pytest.raises(ValueError):
        evaluate(w, "mode", 1.0)


@pytest.mark.parametrize("family,params", ALL)
def test_pdf_matches_differenced_cdf(family, params):
    d = make_baseline(family, params)
    t = np.asarray(d.quantile(np.linspace(0.01, 0.99, 60)))
    h = 1e-5 * t
    fd = (np.asarray(d.cdf(t + h)) - np.asarray(d.cdf(t - h))) / (2 * h)
    pdf = np.asarray(d.pdf(t))
    assert np.all(np.abs(pdf - fd) <= 1e-6 * (1 + pdf))


@pytest.mark.parametrize("family,params", ALL)
def test_hazard_identities(family, params):
    d = make_baseline(family, params)
    t = np.asarray(d.quantile(np.linspace(0.001, 0.999, 80)))
    pdf, sf, cdf = (np.asarray(f(t)) for f in (d.pdf, d.sf, d.cdf))
    np.testing.assert_allclose(np.asarray(d.hazard(t)) * sf, pdf, rtol=1e-12)
    np.testing.assert_allclose(np.asarray(d.reversed_hazard(t)) * cdf, pdf, rtol=1e-12)
    np.testing.assert_allclose(sf + cdf, 1.0, atol=1e-12)


@pytest.mark.parametrize("family,params", ALL)
@settings(max_examples=60, deadline=None)
@given(p=st.floats(1e-9, 1 - 1e-9))
def test_quantile_roundtrip(family, params, p):
    d = make_baseline(family, params)
    t = float(d.quantile(p))
    assert abs(float(d.quantile(float(d.cdf(t)))) - t) <= 1e-8 * (1 + abs(t))


@pytest.mark.parametrize("family,params,notion,expected", [
    ("weibull", (2.0,), "plr", Monotonicity.INCREASING),
    ("weibull", (2.0,), "fr", Monotonicity.INCREASING),
    ("weibull", (2.0,), "prfr", Monotonicity.DECREASING),
    ("frechet", (3.0,), "prfr", Monotonicity.DECREASING),
    ("weibull", (0.7,), "fr", Monotonicity.DECREASING),
    ("exponential", (), "fr", Monotonicity.CONSTANT),
    ("exponential", (), "plr", Monotonicity.INCREASING),
    ("frechet", (3.0,), "plr", Monotonicity.INCREASING),
    ("frechet", (3.0,), "fr", Monotonicity.NON_MONOTONE),
])
def test_aging_on_fixed_probe(family, params, notion, expected):
    v = classify_monotone_aging(make_baseline(family, params), notion, (0.01, 20))
    assert v.classification is expected
    if expected is Monotonicity.NON_MONOTONE:
        t1, t2 = v.witness
        assert 0.01 <= t1 < t2 <= 20


def test_aging_analytic_plr_fr_on_all_builtins():
    # -t f'/f: Weibull a t^a - (a-1); Frechet a+1 - a t^-a; Power 1-a; exponential t.
    cases = {
        ("exponential", ()): ("increasing", "constant"),
        ("weibull", (2.0,)): ("increasing", "increasing"),
        ("weibull", (0.5,)): ("increasing", "decreasing"),
        ("frechet", (3.0,)): ("increasing", None),
        ("power", (3.0, 2.0)): ("constant", "increasing"),
    }
    for (fam, params), (plr, fr) in cases.items():
        d = make_baseline(fam, params)
        probe = (1e-3, 1.9) if d.bounded else None
        assert classify_monotone_aging(d, "plr", probe).classification.value == plr
        if fr is not None:
            assert classify_monotone_aging(d, "fr", probe).classification.value == fr


def test_iprfr_fails_for_all_unbounded_builtins():
    for fam, params in UNBOUNDED:
        v = classify_monotone_aging(make_baseline(fam, params), AgingNotion.PRFR)
        assert not v.satisfies(Monotonicity.INCREASING)


def test_aging_probe_errors():
    w = make_baseline("weibull", (2.0,))
    with pytest.raises(DomainError):
        classify_monotone_aging(w, "fr", (-1.0, 2.0))
    with pytest.raises(DomainError):
        classify_monotone_aging(make_baseline("power", (3.0, 2.0)), "fr", (0.5, 3.0))
    with pytest.raises(ValueError):
        classify_monotone_aging(w, "fr", (2.0, 2.0))
    with pytest.raises(ValueError):
        classify_monotone_aging(w, "fr", (0.1, 2.0), n_points=8)


def test_mean_and_tail_integral():
    assert make_baseline("exponential", ()).mean == pytest.approx(1.0)
    assert make_baseline("weibull", (2.0,)).mean == pytest.approx(math.sqrt(math.pi) / 2)
    assert make_baseline("frechet", (3.0,)).mean == pytest.approx(math.gamma(1 - 1 / 3))
    assert make_baseline("frechet", (1.0,)).mean == math.inf
    assert make_baseline("power", (3.0, 2.0)).mean == pytest.approx(1.5)
