import math

import numpy as np
import pytest

from warpcurv.certify import (INF_NOT_ATTAINED, NONSTRICT, SUP_NOT_ATTAINED, Pinching, Unbounded,
                              certify_upper_bound, pinching, principal_profiles,
                              rescale_to_unit_lower_bound)
from warpcurv.errors import InvalidParams, OutOfDomain, UnboundedInput
from warpcurv.metricspec import MetricSpec
from warpcurv.warpfn import MetricVariant, build_interpolant, choose_rho


@pytest.fixture(scope="module")
def paper_ip():
    return build_interpolant(0.1, choose_rho(0.1))


@pytest.fixture(scope="module")
def paper4(paper_ip):
    return MetricSpec.from_interpolant(paper_ip, 4)


@pytest.fixture(scope="module")
def paper3(paper_ip):
    return MetricSpec.from_interpolant(paper_ip, 3)


@pytest.fixture(scope="module")
def fujiwara4():
    ip = build_interpolant(1.0, choose_rho(1.0), MetricVariant.fujiwara(0.1))
    return MetricSpec.from_interpolant(ip, 4)


def test_profiles_on_tails(paper4):
    rho = paper4.rho
    left = np.linspace(-rho - 8, -rho, 50)
    t = principal_profiles(paper4, left)
    for name in ("K1", "K2", "K3"):
        assert np.max(np.abs(t.column(name) + 1.0)) <= 1e-12
    assert np.max(np.abs(t.column("K4") / (-1 - np.exp(-2 * left)) - 1)) <= 1e-12
    right = principal_profiles(paper4, np.linspace(paper4.eps, 6, 50))
    assert np.max(np.abs(right.rows[:, 1:] + 1.0)) <= 1e-12


def test_n3_table_has_no_k4(paper3):
    t = principal_profiles(paper3, [0.0])
    assert t.columns == ("r", "K1", "K2", "K3")


def test_profiles_out_of_domain():
    with pytest.raises(OutOfDomain):
        principal_profiles(MetricSpec.hyperbolic(4), [-1.0])


def test_paper_upper_negative_and_sound(paper4):
    cert = certify_upper_bound(paper4)
    assert cert.upper < 0 and cert.strict
    rng = np.random.default_rng(11)
    r = rng.uniform(-paper4.rho - 3, paper4.eps + 3, 10_000)
    K = principal_profiles(paper4, r).rows[:, 1:]
    assert np.max(K) <= cert.upper + 1e-12
    assert cert.grid_max <= cert.upper


def test_n3_bounds_are_sound(paper3):
    cert = certify_upper_bound(paper3)
    rng = np.random.default_rng(12)
    r = rng.uniform(-paper3.rho - 3, paper3.eps + 3, 10_000)
    K = principal_profiles(paper3, r).rows[:, 1:]
    assert cert.lower - 1e-12 <= np.min(K) and np.max(K) <= cert.upper + 1e-12


def test_heintze_schroeder_nonstrict():
    ip = build_interpolant(0.1, choose_rho(0.1), MetricVariant.heintze_schroeder())
    cert = certify_upper_bound(MetricSpec.from_interpolant(ip, 4))
    assert cert.upper == 0.0 and cert.upper_attained
    assert NONSTRICT in cert.flags and not cert.strict


def test_hyperbolic_model():
    cert = certify_upper_bound(MetricSpec.hyperbolic(4))
    assert cert.upper == -1.0 and cert.lower == -1.0


def test_cusp_unbounded():
    cert = certify_upper_bound(MetricSpec.cusp(4))
    assert isinstance(cert.lower, Unbounded) and cert.lower.verified()
    assert cert.upper == -1.0 and SUP_NOT_ATTAINED in cert.flags


def test_pinching_dichotomy(paper3, paper4):
    p3 = pinching(paper3)
    assert isinstance(p3, Pinching) and p3.lower < 0 and p3.upper < 0
    p4 = pinching(paper4)
    assert isinstance(p4, Unbounded) and p4.verified()
    assert [w[0] for w in p4.witness] == pytest.approx([-paper4.rho - d for d in (1, 5, 10)])


def test_fujiwara_limits(fujiwara4):
    cert = certify_upper_bound(fujiwara4)
    assert cert.lower == pytest.approx(-100.0, abs=1e-6)
    assert not cert.lower_attained and INF_NOT_ATTAINED in cert.flags
    # K1 -> 0 on the left tail: supremum 0, never reached
    assert cert.upper == 0.0 and not cert.upper_attained and cert.strict


def test_rescale_examples():
    r = rescale_to_unit_lower_bound(Pinching(-100.0, -0.01, True, True))
    assert (r.scale, r.lower, r.upper) == (10.0, -1.0, pytest.approx(-0.0001, abs=1e-16))
    assert rescale_to_unit_lower_bound(Pinching(-1.0, -0.5, True, True)).scale == 1.0
    with pytest.raises(UnboundedInput):
        rescale_to_unit_lower_bound(Unbounded())
    with pytest.raises(UnboundedInput):
        rescale_to_unit_lower_bound(Pinching(0.0, 0.0, True, True))


def test_rescaled_spec_has_unit_lower_bound(fujiwara4, paper3):
    for spec in (fujiwara4, paper3):
        s = rescale_to_unit_lower_bound(pinching(spec)).scale
        assert pinching(spec.rescaled(s)).lower == pytest.approx(-1.0, abs=1e-12)


def test_spec_text_round_trip(paper4):
    back = MetricSpec.from_text(paper4.to_text())
    assert back.to_text() == paper4.to_text()
    assert back.v == paper4.v and back.n == 4 and back.rho == paper4.rho


def test_spec_validation():
    with pytest.raises(InvalidParams):
        MetricSpec.hyperbolic(2)
    with pytest.raises(InvalidParams):
        MetricSpec.from_text("model = paper-negative\n")


def test_certificate_text_is_deterministic(paper4):
    a = certify_upper_bound(paper4).to_text()
    assert a == certify_upper_bound(paper4).to_text()
    assert "lower = unbounded" in a and math.isfinite(float(a.split("upper = ")[1].split()[0]))
