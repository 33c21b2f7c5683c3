"""Flat Euclidean circle bundles with rotation holonomy.

Holonomy into the rotation group SO(2) factors through ``H_1 = Z^k + T``,
so a bundle is described by one rotation angle (in turns) per free
generator and an exact rational angle per cyclic torsion summand.
Contracting the free angles to zero leaves a holonomy with finite image;
the bundle becomes trivial on the cover of that degree.

Bundles with reflections in their holonomy are handled by passing the
data of the orientation double cover, whose holonomy lies in SO(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import InvalidParams, TorsionOrderMismatch


@dataclass(frozen=True)
class OrientableFlatBundle:
    rank: int
    torsion: tuple[int, ...] = ()
    free_angles: tuple[float, ...] = ()
    torsion_angles: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        object.__setattr__(self, "free_angles", tuple(float(a) for a in self.free_angles))
        object.__setattr__(self, "torsion_angles",
                           tuple(Fraction(a) for a in self.torsion_angles))


def validate(b: OrientableFlatBundle) -> OrientableFlatBundle:
    """Check the holonomy data; returns ``b`` unchanged when valid."""
    if b.rank < 0:
        raise InvalidParams(f"free rank must be >= 0, got {b.rank}")
    if len(b.free_angles) != b.rank:
        raise InvalidParams(f"expected {b.rank} free angles, got {len(b.free_angles)}")
    if len(b.torsion_angles) != len(b.torsion):
        raise InvalidParams("one angle per torsion summand required")
    for d, a in zip(b.torsion, b.torsion_angles):
        if d < 2:
            raise InvalidParams(f"torsion orders must be >= 2, got {d}")
        if not 0 <= a < 1:
            raise TorsionOrderMismatch(f"torsion angle {a} not in [0, 1) turns")
        if (d * a).denominator != 1:
            raise TorsionOrderMismatch(f"angle {a} has order not dividing {d}")
    return b


def _signed(angle: float) -> float:
    """Representative of ``angle`` mod 1 in [-1/2, 1/2): shortest rotation path."""
    return (angle + 0.5) % 1.0 - 0.5


def deform(b: OrientableFlatBundle, t: float) -> OrientableFlatBundle:
    """Holonomy at time ``t`` of the contraction of the free generators."""
    if not 0.0 <= t <= 1.0:
        raise InvalidParams(f"deformation time must lie in [0, 1], got {t}")
    validate(b)
    if t == 0.0:
        return b
    free = tuple(((1.0 - t) * _signed(a)) % 1.0 for a in b.free_angles)
    return OrientableFlatBundle(b.rank, b.torsion, free, b.torsion_angles)


def angle_distance(a: float, b: float) -> float:
    """Distance in turns between two rotations."""
    return abs(_signed(a - b))


def trivializing_cover_degree(b: OrientableFlatBundle) -> int:
    """Order of the finite holonomy image after the free angles are contracted."""
    validate(b)
    # a reduced angle p/q generates a cyclic group of order q
    return reduce(math.lcm, (a.denominator for a in b.torsion_angles), 1)


def holonomy_image(b: OrientableFlatBundle) -> list[Fraction]:
    """Elements (in turns) of the cyclic group generated by the torsion angles."""
    deg = trivializing_cover_degree(b)
    return [Fraction(j, deg) for j in range(deg)]
