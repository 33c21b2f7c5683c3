"""Handle bookkeeping for complements of totally geodesic submanifolds.

The distance function to a family of disjoint totally geodesic components
gives a handle decomposition of the complement: a ball with one k-handle
per component of codimension k + 1.  Everything here is combinatorics on
the list of codimensions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BadCodim, NotAspherical


class _CountablyInfinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CountablyInfinite"

    __str__ = __repr__


CountablyInfinite = _CountablyInfinite()


@dataclass(frozen=True)
class StratumData:
    """Codimensions of the components; ``countable`` marks a truncated census
    of an infinite (countable) family."""

    codims: tuple[int, ...] = ()
    countable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "codims", tuple(int(c) for c in self.codims))


def _check(s: StratumData) -> None:
    for c in s.codims:
        if c < 2:
            raise BadCodim(f"component codimension must be >= 2, got {c}")


def handle_decomposition(s: StratumData) -> dict[int, int]:
    """Number of k-handles for each index k."""
    _check(s)
    return dict(sorted(Counter(c - 1 for c in s.codims).items()))


def is_aspherical(s: StratumData) -> bool:
    _check(s)
    return all(c == 2 for c in s.codims)


def kernel_rank(s: StratumData) -> int | _CountablyInfinite:
    """Rank of the free kernel: one generator per codimension-two component."""
    if not is_aspherical(s):
        raise NotAspherical("some component has codimension > 2")
    if s.countable:
        return CountablyInfinite
    return len(s.codims)


def homotopy_type(s: StratumData) -> list[int]:
    """Dimensions of the spheres in the wedge (empty: contractible)."""
    _check(s)
    return sorted(c - 1 for c in s.codims)
