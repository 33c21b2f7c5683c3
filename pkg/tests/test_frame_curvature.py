import numpy as np
import pytest

from warpcurv.errors import InvalidParams, NotDiagonalizable
from warpcurv.frame_curvature import (FrameBracketData, LieFrame,
                                      WarpProfile, assemble_curvature, bracket_coeffs,
                                      curvature_operator_extremes, frame_table, mixed_table,
                                      mixed_term, mixed_term_erroneous,
                                      paper_principal_curvatures, q_coeffs)
from warpcurv.warpfn import (build_interpolant, choose_rho, constant, exponential,
                             hyperbolic_pair, shifted_exponential)

HEIS = (constant(1.0), constant(1.0), exponential())


def test_structure_constants_must_be_antisymmetric():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0
    with pytest.raises(InvalidParams):
        FrameBracketData(c)


def test_bracket_and_koszul_tables():
    prof = WarpProfile(HEIS)
    b = bracket_coeffs(FrameBracketData.heisenberg(), prof, 0.0)
    assert b[0, 1, 2] == 1.0 and b[1, 0, 2] == -1.0
    Q = q_coeffs(b)
    assert Q[0, 1, 2] == b[0, 1, 2] + b[2, 0, 1] + b[2, 1, 0]


@pytest.mark.parametrize("r", [-1.0, 0.0, 0.7])
def test_heisenberg_mixed_terms(r):
    prof = WarpProfile(HEIS)
    b = bracket_coeffs(FrameBracketData.heisenberg(), prof, r)
    assert mixed_term(0, 1, 2, prof, b, r) == pytest.approx(np.exp(r) / 2, rel=1e-14)
    assert mixed_term_erroneous(0, 1, 2, prof, b, r) == pytest.approx(-np.exp(r) / 2, rel=1e-14)


def test_mixed_table_agrees_with_scalar_formula():
    rng = np.random.default_rng(7)
    c = rng.normal(size=(3, 3, 3))
    c = c - c.transpose(1, 0, 2)
    prof = WarpProfile((exponential(), shifted_exponential(0.3), constant(2.0)))
    b = bracket_coeffs(FrameBracketData(c), prof, 0.4)
    M = mixed_table(prof, b, 0.4)
    for idx in np.ndindex(3, 3, 3):
        assert M[idx] == pytest.approx(mixed_term(*idx, prof, b, 0.4), abs=1e-13)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_hyperbolic_table(n):
    v, h = hyperbolic_pair(0.0)
    comp = frame_table(v, h, n, 1.3)
    assert curvature_operator_extremes(comp) == pytest.approx((-1.0, -1.0), abs=1e-12)
    assert comp.symmetry_defect() <= 1e-12


def test_lie_frame_table_symmetries():
    comp = assemble_curvature(FrameBracketData.heisenberg(), WarpProfile(HEIS), LieFrame(), 0.3)
    assert comp.symmetry_defect() <= 1e-12
    with pytest.raises(NotDiagonalizable):
        curvature_operator_extremes(comp)


def test_principal_curvatures_match_table():
    ip = build_interpolant(0.1, choose_rho(0.1))
    for r in (-13.0, -5.0, 0.0, 0.05, 1.0):
        pc = paper_principal_curvatures(ip.v, ip.h, 4, r)
        comp = frame_table(ip.v, ip.h, 4, r)
        assert comp.sectional(1, 2) == pytest.approx(pc.K1, rel=1e-12)
        assert comp.sectional(0, 2) == pytest.approx(pc.K2, rel=1e-12)
        assert comp.sectional(0, 1) == pytest.approx(pc.K3, rel=1e-12)
        assert comp.sectional(2, 3) == pytest.approx(pc.K4, rel=1e-12)


def test_fujiwara_tail_profile():
    pc = paper_principal_curvatures(exponential(), shifted_exponential(0.1), 4, -3.0)
    # closed forms -e^r/(e^r+tau) and -(1+e^{2r})/(e^r+tau)^2
    e = np.exp(-3.0)
    assert pc.K1 == pytest.approx(-e / (e + 0.1), rel=1e-14)
    assert pc.K4 == pytest.approx(-(1 + e * e) / (e + 0.1) ** 2, rel=1e-14)
    assert pc.K1 == pytest.approx(-0.33238562521025683, rel=1e-12)
    assert pc.K4 == pytest.approx(-44.681375546436371, rel=1e-12)


def test_n3_has_no_k4():
    v, h = hyperbolic_pair(0.0)
    assert paper_principal_curvatures(v, h, 3, 1.0).K4 is None
