"""Random trees and configurations shared by the tree tests."""

import numpy as np

from warpcurv.treegraded import ConePoint, MetricTree, median, tree_distance


def random_tree(rng, max_edges=20):
    k = int(rng.integers(2, max_edges + 1))
    edges = [(f"v{int(rng.integers(0, i))}", f"v{i}", float(rng.uniform(0.3, 3.0)))
             for i in range(1, k + 1)]
    return MetricTree(edges)


def random_point(rng, T):
    e = int(rng.integers(0, len(T.edges)))
    if rng.random() < 0.2:
        return T.point(e, 0.0)
    return T.point(e, float(rng.uniform(0.0, T.length(e))))


def _cross(p, q, dp, dq):
    return p.t + (q.t - p.t) * dp / (dp + dq)


def random_configuration(rng, T, collide=False):
    """Three cone points, not in the symmetric configuration.

    With ``collide`` the R-coordinate of z is solved so that sides [x,z] and
    [x,y] cross the central wall at the same height, when the tripod allows it.
    """
    while True:
        a, b, c = (random_point(rng, T) for _ in range(3))
        x = ConePoint(float(rng.uniform(-2, 2)), a)
        y = ConePoint(float(rng.uniform(-2, 2)), b)
        z = ConePoint(float(rng.uniform(-2, 2)), c)
        m = median(T, a, b, c)
        dx, dy, dz = (tree_distance(T, p, m) for p in (a, b, c))
        if min(tree_distance(T, a, b), tree_distance(T, a, c), tree_distance(T, b, c)) < 1e-3:
            continue
        if collide and min(dx, dy, dz) > 1e-6:
            h = _cross(x, y, dx, dy)
            z = ConePoint(x.t + (h - x.t) * (dx + dz) / dx, c)
        if abs(x.t - y.t) < 1e-9 and abs(dx - dy) < 1e-9:
            continue
        return x, y, z


def tripod():
    return MetricTree([("m", "a", 1.0), ("m", "b", 1.0), ("m", "c", 1.0)])
