from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings, strategies as st

from warpcurv.bundle import (OrientableFlatBundle, angle_distance, deform, holonomy_image,
                             trivializing_cover_degree, validate)
from warpcurv.errors import InvalidParams, TorsionOrderMismatch


@st.composite
def bundles(draw):
    k = draw(st.integers(0, 3))
    free = draw(st.lists(st.floats(0, 1, exclude_max=True), min_size=k, max_size=k))
    orders = draw(st.lists(st.integers(2, 30), max_size=4))
    angles = [Fraction(draw(st.integers(0, d - 1)), d) for d in orders]
    return OrientableFlatBundle(k, orders, free, angles)


def test_examples():
    assert trivializing_cover_degree(OrientableFlatBundle(0, [5], [], [Fraction(2, 5)])) == 5
    b = OrientableFlatBundle(0, [4, 6], [], [Fraction(1, 4), Fraction(2, 6)])
    assert trivializing_cover_degree(b) == 12
    assert trivializing_cover_degree(OrientableFlatBundle(1, [], [0.3], [])) == 1


def test_validation():
    validate(OrientableFlatBundle(0, [5], [], [Fraction(2, 5)]))
    validate(OrientableFlatBundle(2, [], [0.123, 7.5], []))
    with pytest.raises(TorsionOrderMismatch):
        validate(OrientableFlatBundle(0, [4], [], [Fraction(1, 3)]))
    with pytest.raises(InvalidParams):
        validate(OrientableFlatBundle(1, [], [], []))


def test_deform_examples():
    b = OrientableFlatBundle(1, [3], [0.3], [Fraction(1, 3)])
    assert deform(b, 0.0) == b
    assert deform(b, 1.0).free_angles == (0.0,)
    assert deform(b, 0.5).free_angles[0] == pytest.approx(0.15)
    assert deform(b, 0.5).torsion_angles == b.torsion_angles
    with pytest.raises(InvalidParams):
        deform(b, 1.5)


@settings(max_examples=1000, deadline=None)
@given(bundles(), st.floats(0, 1), st.floats(0, 1))
def test_bundle_properties(b, t, s):
    deg = trivializing_cover_degree(b)
    assert lcm(*b.torsion, 1) % deg == 0
    assert all((deg * a).denominator == 1 for a in b.torsion_angles)
    assert all(a == 0 for a in deform(b, 1.0).free_angles)
    assert deform(b, 0.0) == b
    bound = abs(t - s) * max(b.free_angles, default=0.0) + 1e-12
    for x, y in zip(deform(b, t).free_angles, deform(b, s).free_angles):
        assert angle_distance(x, y) <= bound
    assert len(holonomy_image(b)) == deg
