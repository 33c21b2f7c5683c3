"""Named comparisons between the frame formulas and the finite-difference oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frame_curvature import (FrameBracketData, LieFrame, WarpProfile, assemble_curvature,
                              bracket_coeffs, frame_table, mixed_term, mixed_term_erroneous)
from .oracle import (FDConfig, chart_euclidean, chart_heisenberg, chart_warped_hyperbolic,
                     convergence_check, frame_compare, frame_contract, heisenberg_frame,
                     hyperbolic_frame, riemann_fd)
from .warpfn import constant, exponential, hyperbolic_pair


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_discrepancy: float
    details: tuple[tuple[str, float], ...] = ()

    def to_text(self) -> str:
        lines = [f"check = {self.name}",
                 f"status = {'PASS' if self.passed else 'FAIL'}",
                 f"max_discrepancy = {format(self.max_discrepancy, '.6e')}"]
        lines += [f"{k} = {format(v, '.17g')}" for k, v in self.details]
        return "\n".join(lines) + "\n"


def check_hyperbolic(dims=(3, 4, 5), radii=(0.5, 1.0, 2.0), tol: float = 1e-6,
                     sec_tol: float = 1e-12) -> CheckResult:
    """Frame table of ``sinh``/``cosh`` against the oracle, and every
    coordinate-plane sectional curvature against -1."""
    v, h = hyperbolic_pair(0.0)
    worst_oracle = 0.0
    worst_formula = 0.0
    worst_oracle_sec = 0.0
    for n in dims:
        chart = chart_warped_hyperbolic(v, h, n)
        for r in radii:
            comp = frame_table(v, h, n, r)
            for a in range(n):
                for b in range(a + 1, n):
                    worst_formula = max(worst_formula, abs(comp.sectional(a, b) + 1.0))
            p = np.array([r] + [0.0] * (n - 2) + [1.0])
            rep = frame_compare(chart, hyperbolic_frame(chart, p), p, comp)
            worst_oracle = max(worst_oracle, rep.max_discrepancy)
            O = rep.oracle
            for a in range(n):
                for b in range(a + 1, n):
                    worst_oracle_sec = max(worst_oracle_sec, abs(O[a, b, b, a] + 1.0))
    passed = worst_oracle <= tol and worst_formula <= sec_tol and worst_oracle_sec <= tol
    return CheckResult("hyperbolic", passed, worst_oracle,
                       (("formula_sectional_defect", worst_formula),
                        ("oracle_sectional_defect", worst_oracle_sec)))


def heisenberg_mixed_values(r: float = 0.0) -> tuple[float, float, float]:
    """(oracle, corrected formula, superseded formula) for ``<R(d_r, Y_1) Y_2, Y_3>``
    on the Heisenberg fiber with warping ``(1, 1, e^r)``."""
    funcs = (constant(1.0), constant(1.0), exponential())
    chart = chart_heisenberg(*funcs)
    p = np.array([r, 0.0, 0.0, 0.0])
    O = frame_contract(riemann_fd(chart, p, FDConfig()), heisenberg_frame(chart, p))
    prof = WarpProfile(funcs)
    b = bracket_coeffs(FrameBracketData.heisenberg(), prof, r)
    return (float(O[0, 1, 2, 3]), mixed_term(0, 1, 2, prof, b, r),
            mixed_term_erroneous(0, 1, 2, prof, b, r))


def check_heisenberg_mixed(r: float = 0.0, tol: float = 1e-4,
                           gap_tol: float = 1e-3) -> CheckResult:
    oracle, good, bad = heisenberg_mixed_values(r)
    funcs = (constant(1.0), constant(1.0), exponential())
    chart = chart_heisenberg(*funcs)
    p = np.array([r, 0.0, 0.0, 0.0])
    full = frame_compare(chart, heisenberg_frame(chart, p), p,
                         assemble_curvature(FrameBracketData.heisenberg(), WarpProfile(funcs),
                                            LieFrame(), r))
    gap = abs(oracle - bad)
    passed = abs(oracle - good) <= tol and abs(gap - 1.0) <= gap_tol
    return CheckResult("heisenberg-mixed", passed, abs(oracle - good),
                       (("oracle", oracle), ("mixed_term", good), ("mixed_term_erroneous", bad),
                        ("gap_to_erroneous", gap), ("full_table_discrepancy", full.max_discrepancy)))


def check_convergence(step: float = 0.05) -> CheckResult:
    v, h = hyperbolic_pair(0.0)
    chart = chart_warped_hyperbolic(v, h, 4)
    rep = convergence_check(chart, [0.5, 0.0, 0.0, 1.0], truth=-1.0, step=step)
    order = rep.order if rep.order is not None else math.nan
    return CheckResult("convergence", rep.reliable, rep.errors[1],
                       (("observed_order", order), ("error_step", rep.errors[0]),
                        ("error_half_step", rep.errors[1])))


def check_flat(n: int = 3, tol: float = 1e-10) -> CheckResult:
    T = riemann_fd(chart_euclidean(n), np.zeros(n))
    worst = float(np.max(np.abs(T)))
    return CheckResult("flat", worst <= tol, worst)


CHECKS = {
    "hyperbolic": check_hyperbolic,
    "heisenberg-mixed": check_heisenberg_mixed,
    "convergence": check_convergence,
    "flat": check_flat,
}
