import math

import pytest
from hypothesis import given, settings, strategies as st

from warpcurv.errors import InvalidParams, NonpositiveRadius, OutOfDomain
from warpcurv.volume import (Divergent, EndSpec, adaptive_simpson, cross_section_volume,
                             end_volume, tube_geometry)
from warpcurv.warpfn import (MetricVariant, build_interpolant, choose_rho, constant, exponential,
                             shifted_exponential)


@pytest.fixture(scope="module")
def paper():
    return build_interpolant(0.1, choose_rho(0.1))


def test_tube_geometry():
    c, s = tube_geometry(1.0)
    assert c == pytest.approx(2 * math.pi * 1.1752011936438014, rel=1e-15)
    assert s == pytest.approx(1.543081, abs=1e-6)
    assert tube_geometry(1e-9)[0] < 1e-8
    with pytest.raises(NonpositiveRadius):
        tube_geometry(0.0)


@settings(max_examples=50)
@given(st.floats(0.01, 5), st.floats(0.001, 1))
def test_tube_circumference_increasing(r, dr):
    assert tube_geometry(r + dr)[0] > tube_geometry(r)[0]


def test_cross_sections():
    spec = EndSpec(exponential(), exponential(), 4, 1.0, 0.0)
    assert cross_section_volume(spec, 0.0) == pytest.approx(2 * math.pi, rel=1e-15)
    assert cross_section_volume(spec, -1.0) == pytest.approx(2 * math.pi * math.exp(-7), rel=1e-14)
    with pytest.raises(OutOfDomain):
        cross_section_volume(spec, 1.0)
    with pytest.raises(InvalidParams):
        EndSpec(exponential(), exponential(), 4, 0.0, 0.0)


@pytest.mark.parametrize("n,r0", [(3, 0.0), (4, 0.0), (4, -2.0), (5, 1.5)])
def test_pure_exponential_closed_form(n, r0):
    got = end_volume(EndSpec(exponential(), exponential(), n, 1.0, r0))
    want = 2 * math.pi / (2 * n - 1) * math.exp((2 * n - 1) * r0)
    assert got == pytest.approx(want, rel=1e-8)


def test_constant_tail_diverges():
    vol = end_volume(EndSpec(constant(1.0), constant(1.0), 4, 1.0, 0.0))
    assert isinstance(vol, Divergent) and str(vol) == "divergent"


def test_paper_spec_is_finite(paper):
    vol = end_volume(EndSpec(paper.v, paper.h, 4, 1.0, 0.5))
    assert not isinstance(vol, Divergent) and 0 < vol < math.inf


def test_shifted_tail_closed_form():
    # integral of e^r (e^r + tau)^6 over (-inf, 0] = ((1+tau)^7 - tau^7) / 7
    vol = end_volume(EndSpec(exponential(), shifted_exponential(0.1), 4, 1.0, 0.0))
    assert vol == pytest.approx(2 * math.pi * ((1.1 ** 7) - 0.1 ** 7) / 7, rel=1e-12)


def test_additivity(paper):
    spec = EndSpec(paper.v, paper.h, 4, 1.0, 0.5)
    a = -4.0
    left = end_volume(EndSpec(paper.v, paper.h, 4, 1.0, a))
    mid = adaptive_simpson(lambda r: cross_section_volume(spec, r), a, 0.5)
    assert abs(end_volume(spec) - left - mid) <= 1e-10


def test_cross_section_is_derivative(paper):
    spec = EndSpec(paper.v, paper.h, 4, 2.0, 1.0)
    h = 1e-4
    for r0 in (-3.0, 0.0, 0.05):
        lo = end_volume(EndSpec(paper.v, paper.h, 4, 2.0, r0 - h))
        hi = end_volume(EndSpec(paper.v, paper.h, 4, 2.0, r0 + h))
        assert (hi - lo) / (2 * h) == pytest.approx(cross_section_volume(spec, r0), abs=1e-6)


def test_simpson_polynomial():
    assert adaptive_simpson(lambda x: x**3 - x, 0.0, 2.0) == pytest.approx(2.0, abs=1e-12)


def test_fujiwara_end_finite():
    ip = build_interpolant(1.0, choose_rho(1.0), MetricVariant.fujiwara(0.1))
    assert end_volume(EndSpec(ip.v, ip.h, 4, 1.0, 0.0)) > 0
