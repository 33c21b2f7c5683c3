import numpy as np
import pytest

from warpcurv.checks import check_flat, heisenberg_mixed_values
from warpcurv.errors import DomainMargin, FrameNotOrthonormal, InvalidParams
from warpcurv.frame_curvature import frame_table
from warpcurv.oracle import (ChartMetric, FDConfig, chart_euclidean, chart_warped_hyperbolic,
                             convergence_check, frame_compare, hyperbolic_frame, riemann_fd,
                             sectional_coordinate_planes)
from warpcurv.warpfn import hyperbolic_pair


def round_sphere_chart():
    # (theta, phi) on the unit sphere away from the poles
    return ChartMetric(2, lambda p: np.diag([1.0, np.sin(p[0]) ** 2]),
                       lambda p: bool(0.1 < p[0] < 3.0), "sphere")


def test_sphere_curvature_is_one():
    chart = round_sphere_chart()
    T = riemann_fd(chart, [1.0, 0.0], FDConfig(1e-3))
    assert sectional_coordinate_planes(chart, T, [1.0, 0.0])[(0, 1)] == pytest.approx(1.0, abs=1e-8)


def test_flat_chart():
    assert check_flat().passed
    assert np.all(riemann_fd(chart_euclidean(4), np.ones(4)) == 0)


def test_domain_margin():
    v, h = hyperbolic_pair(0.0)
    chart = chart_warped_hyperbolic(v, h, 3)
    with pytest.raises(DomainMargin):
        riemann_fd(chart, [0.002, 0.0, 1.0], FDConfig(1e-3))


def test_bad_step():
    with pytest.raises(InvalidParams):
        FDConfig(0.0)


def test_frame_must_be_orthonormal():
    v, h = hyperbolic_pair(0.0)
    chart = chart_warped_hyperbolic(v, h, 3)
    p = np.array([1.0, 0.0, 1.0])
    with pytest.raises(FrameNotOrthonormal):
        frame_compare(chart, np.eye(3), p, frame_table(v, h, 3, 1.0))


@pytest.mark.parametrize("n", [3, 4])
def test_hyperbolic_frame_compare(n):
    v, h = hyperbolic_pair(0.0)
    chart = chart_warped_hyperbolic(v, h, n)
    p = np.array([0.8] + [0.3] * (n - 2) + [2.0])
    rep = frame_compare(chart, hyperbolic_frame(chart, p), p, frame_table(v, h, n, 0.8))
    assert rep.passed(1e-6)


def test_heisenberg_oracle_sign():
    oracle, good, bad = heisenberg_mixed_values(0.0)
    # frozen oracle output at step 1e-3
    assert oracle == pytest.approx(0.4999999999998, abs=1e-9)
    assert good == 0.5 and bad == -0.5


def test_convergence_flags():
    v, h = hyperbolic_pair(0.0)
    chart = chart_warped_hyperbolic(v, h, 4)
    good = convergence_check(chart, [0.5, 0.0, 0.0, 1.0], step=0.05)
    assert good.reliable and 3.5 <= good.order <= 4.5
    far = convergence_check(chart, [0.5, 0.0, 0.0, 1.0], step=0.3)
    assert not far.reliable and "domain" in far.note
    floor = convergence_check(chart, [0.5, 0.0, 0.0, 1.0], step=1e-3)
    assert not floor.reliable
