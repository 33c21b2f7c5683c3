"""Curvature of ``dr^2 + g_r`` in the orthonormal frame (d_r, Y_1..Y_m).

Conventions (pinned against the finite-difference oracle):

* ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``;
* the 4-index table stores ``R[a, b, c, d] = <R(e_a, e_b) e_c, e_d>``;
* sectional curvature of the plane (e_a, e_b) is ``R[a, b, b, a]``;
* frame index 0 is ``d_r``; 1..m are the fiber fields Y_i = X_i / h_i.

Fiber-level tables (structure constants ``c``, bracket coefficients ``b``,
Koszul coefficients ``Q``) are indexed 0..m-1, i.e. fiber index ``i``
corresponds to frame index ``i + 1``.  Along the radial direction
``nabla_{d_r} Y_i = 0`` holds identically for this frame.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidParams, NotDiagonalizable
from .warpfn import WarpingFunction, eval_jet

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class FrameBracketData:
    """Structure constants ``[X_i, X_j] = sum_k c[i, j, k] X_k`` (r-independent)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise InvalidParams(f"structure constants must be m x m x m, got {c.shape}")
        if np.max(np.abs(c + c.transpose(1, 0, 2)), initial=0.0) > 0:
            raise InvalidParams("structure constants must be antisymmetric in (i, j)")
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return self.c.shape[0]

    @classmethod
    def zeros(cls, m: int) -> "FrameBracketData":
        return cls(np.zeros((m, m, m)))

    @classmethod
    def heisenberg(cls) -> "FrameBracketData":
        """``X_1 = d_x, X_2 = d_y + x d_z, X_3 = d_z``: [X_1, X_2] = X_3."""
        c = np.zeros((3, 3, 3))
        c[0, 1, 2] = 1.0
        c[1, 0, 2] = -1.0
        return cls(c)


@dataclass(frozen=True)
class WarpProfile:
    h: tuple[WarpingFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(self.h))

    @property
    def m(self) -> int:
        return len(self.h)

    def jets(self, r: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        js = [eval_jet(f, r) for f in self.h]
        return (np.array([j.value for j in js]), np.array([j.d1 for j in js]),
                np.array([j.d2 for j in js]))


def bracket_coeffs(data: FrameBracketData, prof: WarpProfile, r: float) -> np.ndarray:
    """``b[i, j, k] = <[Y_i, Y_j], Y_k> = c[i, j, k] h_k / (h_i h_j)``."""
    if data.m != prof.m:
        raise InvalidParams(f"bracket data has m={data.m}, profile has m={prof.m}")
    h = prof.jets(r)[0]
    return data.c * h[None, None, :] / (h[:, None, None] * h[None, :, None])


def q_coeffs(b: np.ndarray) -> np.ndarray:
    """Koszul coefficients ``Q_ijk = b_ijk + b_kij + b_kji``."""
    return b + b.transpose(1, 2, 0) + b.transpose(2, 1, 0)


def connection(i: int, j: int, prof: WarpProfile, b: np.ndarray,
               r: float) -> tuple[float, np.ndarray]:
    """Coefficients of ``nabla_{Y_i} Y_j``: (d_r component, Y_k components)."""
    h, h1, _ = prof.jets(r)
    radial = -h1[i] / h[i] if i == j else 0.0
    return radial, q_coeffs(b)[i, j, :] / 2.0


def mixed_term(i: int, j: int, k: int, prof: WarpProfile, b: np.ndarray, r: float) -> float:
    """``<R(d_r, Y_i) Y_j, Y_k>`` from the corrected mixed-term formula."""
    h, h1, _ = prof.jets(r)
    lg = h1 / h  # (ln h)'
    twice = (b[i, j, k] * (lg[k] - lg[j])
             + b[k, i, j] * (lg[j] - lg[k])
             + b[k, j, i] * (2 * lg[i] - lg[j] - lg[k]))
    return 0.5 * twice


def mixed_term_erroneous(i: int, j: int, k: int, prof: WarpProfile, b: np.ndarray,
                         r: float) -> float:
    """The superseded mixed-term formula, kept as a comparator.

    ``(ln h_j h_k)' / 2 * (b_jik + b_ikj + b_jki)``; disagrees with
    :func:`mixed_term` whenever brackets do not vanish.
    """
    h, h1, _ = prof.jets(r)
    lg = h1 / h
    return 0.5 * (lg[j] + lg[k]) * (b[j, i, k] + b[i, k, j] + b[j, k, i])


def mixed_table(prof: WarpProfile, b: np.ndarray, r: float) -> np.ndarray:
    """All mixed terms at once, ``M[i, j, k] = <R(d_r, Y_i) Y_j, Y_k>``."""
    h, h1, _ = prof.jets(r)
    lg = h1 / h
    bt = b.transpose(1, 2, 0)  # bt[i,j,k] = b[k,i,j]
    bs = b.transpose(2, 1, 0)  # bs[i,j,k] = b[k,j,i]
    dkj = lg[None, None, :] - lg[None, :, None]
    return 0.5 * (b * dkj - bt * dkj
                  + bs * (2 * lg[:, None, None] - lg[None, :, None] - lg[None, None, :]))


# ---------------------------------------------------------------------------
# fiber curvature models

@dataclass(frozen=True)
class ConstantCurvatureBlocks:
    """Product fiber: each block of fiber indices is a constant-curvature factor.

    ``kappa`` is the curvature of the unscaled factor; warped by ``h`` the
    factor has sectional curvature ``kappa / h^2``.  All indices in a block
    must share the same warping function value.
    """

    blocks: tuple[tuple[int, ...], ...]
    kappa: tuple[float, ...]

    def components(self, data: FrameBracketData, prof: WarpProfile, r: float) -> np.ndarray:
        m = prof.m
        seen = sorted(i for blk in self.blocks for i in blk)
        if seen != list(range(m)):
            raise InvalidParams("blocks must partition the fiber indices")
        h = prof.jets(r)[0]
        R = np.zeros((m, m, m, m))
        for blk, kap in zip(self.blocks, self.kappa):
            hb = h[blk[0]]
            if np.max(np.abs(h[list(blk)] - hb)) > 1e-12 * hb:
                raise InvalidParams(f"block {blk} has unequal warping functions at r={r}")
            K = kap / hb**2
            for a, bb in itertools.permutations(blk, 2):
                R[a, bb, bb, a] = K
                R[a, bb, a, bb] = -K
        return R


@dataclass(frozen=True)
class LieFrame:
    """Fiber curvature of the frame metric with constant brackets at fixed r."""

    def components(self, data: FrameBracketData, prof: WarpProfile, r: float) -> np.ndarray:
        b = bracket_coeffs(data, prof, r)
        G = q_coeffs(b) / 2.0  # G[i,j,k] = <nabla_{Y_i} Y_j, Y_k>
        return (np.einsum("bck,akd->abcd", G, G)
                - np.einsum("ack,bkd->abcd", G, G)
                - np.einsum("abk,kcd->abcd", b, G))


@dataclass(frozen=True)
class FiberProcedure:
    """Caller-supplied ``(r, i, j, k, l) -> <R_{g_r}(Y_i, Y_j) Y_k, Y_l>``."""

    fn: Callable[[float, int, int, int, int], float]

    def components(self, data: FrameBracketData, prof: WarpProfile, r: float) -> np.ndarray:
        m = prof.m
        R = np.empty((m, m, m, m))
        for idx in itertools.product(range(m), repeat=4):
            R[idx] = self.fn(r, *idx)
        return R


FiberCurvature = ConstantCurvatureBlocks | LieFrame | FiberProcedure


@dataclass(frozen=True)
class CurvatureComponents:
    r: float
    R: np.ndarray

    @property
    def dim(self) -> int:
        return self.R.shape[0]

    def sectional(self, a: int, b: int) -> float:
        return float(self.R[a, b, b, a])

    def symmetry_defect(self) -> float:
        """Largest violation of the curvature-tensor symmetries and first Bianchi."""
        R = self.R
        defects = [
            np.abs(R + R.transpose(1, 0, 2, 3)),
            np.abs(R + R.transpose(0, 1, 3, 2)),
            np.abs(R - R.transpose(2, 3, 0, 1)),
            np.abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)),
        ]
        return float(max(d.max() for d in defects))


def assemble_curvature(data: FrameBracketData, prof: WarpProfile, fiber: FiberCurvature,
                       r: float) -> CurvatureComponents:
    """Full curvature table of ``dr^2 + g_r`` in the frame (d_r, Y_1..Y_m)."""
    m = prof.m
    if data.m != m:
        raise InvalidParams(f"bracket data has m={data.m}, profile has m={m}")
    h, h1, h2 = prof.jets(r)
    b = bracket_coeffs(data, prof, r)
    R = np.zeros((m + 1,) * 4)
    F = R[1:, 1:, 1:, 1:]
    F += fiber.components(data, prof, r)
    # level sets have diagonal second fundamental form -h_i'/h_i
    sff = -h1 / h
    eye = np.eye(m)
    F += (np.einsum("i,j,ik,jl->ijkl", sff, sff, eye, eye)
          - np.einsum("i,j,jk,il->ijkl", sff, sff, eye, eye))
    radial = np.diag(h2 / h)
    R[1:, 0, 0, 1:] = -radial
    R[0, 1:, 1:, 0] = -radial
    R[1:, 0, 1:, 0] = radial
    R[0, 1:, 0, 1:] = radial
    M = mixed_table(prof, b, r)
    R[0, 1:, 1:, 1:] = M
    R[1:, 0, 1:, 1:] = -M
    R[1:, 1:, 0, 1:] = M.transpose(1, 2, 0)
    R[1:, 1:, 1:, 0] = -M.transpose(1, 2, 0)
    return CurvatureComponents(float(r), R)


# ---------------------------------------------------------------------------
# the S^1 x H^{n-2} fiber

def warped_hyperbolic_frame(v: WarpingFunction, h: WarpingFunction, n: int):
    """Bracket data, profile and fiber model for ``dr^2 + v^2 dtheta^2 + h^2 g_hyp``."""
    if n < 2:
        raise InvalidParams(f"dimension must be >= 2, got {n}")
    m = n - 1
    prof = WarpProfile((v,) + (h,) * (m - 1))
    blocks = ((0,),) + ((tuple(range(1, m)),) if m > 1 else ())
    fiber = ConstantCurvatureBlocks(blocks, (0.0, -1.0)[: len(blocks)])
    return FrameBracketData.zeros(m), prof, fiber


class PrincipalCurvatures(NamedTuple):
    K1: float | None  # sec(Y_i, Y_1), 1 < i
    K2: float | None  # sec(Y_i, d_r)
    K3: float         # sec(Y_1, d_r)
    K4: float | None  # sec(Y_i, Y_j), 1 < i < j


def paper_principal_curvatures(v: WarpingFunction, h: WarpingFunction, n: int,
                               r: float) -> PrincipalCurvatures:
    """The four coordinate-plane sectional curvatures of the warped metric."""
    if n < 2:
        raise InvalidParams(f"dimension must be >= 2, got {n}")
    jv, jh = eval_jet(v, r), eval_jet(h, r)
    K3 = -jv.d2 / jv.value
    if n == 2:
        return PrincipalCurvatures(None, None, K3, None)
    K1 = -jh.d1 * jv.d1 / (jh.value * jv.value)
    K2 = -jh.d2 / jh.value
    K4 = -1.0 / jh.value**2 - (jh.d1 / jh.value) ** 2 if n >= 4 else None
    return PrincipalCurvatures(K1, K2, K3, K4)


def bivector_basis(dim: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(dim), 2))


def curvature_operator(comp: CurvatureComponents) -> np.ndarray:
    """Matrix of the curvature operator on e_a ^ e_b (a < b); diagonal = sec."""
    basis = bivector_basis(comp.dim)
    R = comp.R
    return np.array([[R[a, b, d, c] for (c, d) in basis] for (a, b) in basis])


def curvature_operator_extremes(comp: CurvatureComponents,
                                tol: float = SYMMETRY_TOL) -> tuple[float, float]:
    """Min and max sectional curvature, read off a diagonal curvature operator."""
    op = curvature_operator(comp)
    off = op - np.diag(np.diag(op))
    worst = float(np.max(np.abs(off), initial=0.0))
    if worst > tol:
        raise NotDiagonalizable(f"off-diagonal curvature operator entry {worst:.3e} > {tol}")
    d = np.diag(op)
    return float(d.min()), float(d.max())


def operator_eigenvalues(comp: CurvatureComponents) -> np.ndarray:
    return np.sort(np.linalg.eigvalsh(curvature_operator(comp)))


def frame_table(v: WarpingFunction, h: WarpingFunction, n: int, r: float) -> CurvatureComponents:
    """Shortcut: :func:`assemble_curvature` for the ``S^1 x H^{n-2}`` fiber."""
    data, prof, fiber = warped_hyperbolic_frame(v, h, n)
    return assemble_curvature(data, prof, fiber, r)


def sectional_profile(comp: CurvatureComponents,
                      planes: Sequence[tuple[int, int]]) -> list[float]:
    return [comp.sectional(a, b) for a, b in planes]
