"""Shared helpers: fixture graphs and independent brute-force oracles.

The oracles deliberately avoid the fast integer-key machinery: everything
here goes through Fraction-based closed_ball / sets_equal / point_distance
so that engine results are checked by a second, independent route.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from ballflow import fixtures
from ballflow.balls import BallSet, closed_ball, sets_equal
from ballflow.graph import GraphPoint, MetricGraph


@pytest.fixture(scope="session")
def path_g():
    return fixtures.path()


@pytest.fixture(scope="session")
def theta_g():
    return fixtures.theta()


@pytest.fixture(scope="session")
def c6_g():
    return fixtures.c6()


def grid_points(g: MetricGraph, k: int) -> list[GraphPoint]:
    """Vertices plus interior offsets j/k on every edge, deduplicated."""
    pts = [g.vertex_point(v) for v in range(g.num_vertices)]
    for e in range(g.num_edges):
        for j in range(1, k):
            pts.append(GraphPoint(e, Fraction(j, k)))
    return pts


def ecc_oracle(g: MetricGraph, p: GraphPoint, k: int = 32) -> Fraction:
    """Max distance from p to a dense sample; within 1/k of the truth."""
    return max(g.point_distance(p, q) for q in grid_points(g, k))


def brute_classes(g: MetricGraph, r: Fraction, pts: list[GraphPoint]) -> list[list[int]]:
    """Partition of point indices by exact ball equality at radius r."""
    balls = [closed_ball(g, p, r) for p in pts]
    classes: list[list[int]] = []
    reps: list[BallSet] = []
    for i, b in enumerate(balls):
        for ci, rb in enumerate(reps):
            if sets_equal(g, b, rb):
                classes[ci].append(i)
                break
        else:
            reps.append(b)
            classes.append([i])
    return classes


def _sample_scaled(A: BallSet, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Sample coverage at step 1/k; offsets returned as ints in 0..k."""
    es, ts = [], []
    for e, ivs in enumerate(A.coverage):
        for a, b in ivs:
            lo = -((-a * k).__floor__())  # ceil(a*k)
            hi = (b * k).__floor__()
            for j in range(lo, hi + 1):
                es.append(e)
                ts.append(j)
    return np.array(es, dtype=np.int64), np.array(ts, dtype=np.int64)


def hausdorff_oracle(g: MetricGraph, A: BallSet, B: BallSet, k: int = 64) -> Fraction:
    """Hausdorff distance between dense samples of A and B, exact on the
    samples; within 1/k of the true value for closed interval unions."""
    D = g.vertex_distance_matrix().astype(np.int64) * k
    tails = np.array([u for u, _ in g.edges], dtype=np.int64)
    heads = np.array([v for _, v in g.edges], dtype=np.int64)

    eA, tA = _sample_scaled(A, k)
    eB, tB = _sample_scaled(B, k)

    def directed(e1, t1, e2, t2):
        u1, v1 = tails[e1], heads[e1]
        u2, v2 = tails[e2], heads[e2]
        d = np.minimum.reduce(
            [
                t1[:, None] + D[u1[:, None], u2[None, :]] + t2[None, :],
                t1[:, None] + D[u1[:, None], v2[None, :]] + (k - t2)[None, :],
                (k - t1)[:, None] + D[v1[:, None], u2[None, :]] + t2[None, :],
                (k - t1)[:, None] + D[v1[:, None], v2[None, :]] + (k - t2)[None, :],
            ]
        )
        same = e1[:, None] == e2[None, :]
        d = np.where(same, np.minimum(d, np.abs(t1[:, None] - t2[None, :])), d)
        return int(d.min(axis=1).max())

    h = max(directed(eA, tA, eB, tB), directed(eB, tB, eA, tA))
    return Fraction(h, k)


def relabeled(g_doc: dict, perm_seed: int) -> dict:
    """The same graph document with vertices relabeled and edges shuffled."""
    import random

    rng = random.Random(perm_seed)
    names = list(g_doc["vertices"])
    shuffled = names[:]
    rng.shuffle(shuffled)
    mapping = dict(zip(names, shuffled))
    edges = [
        {"u": mapping[str(e["u"])], "v": mapping[str(e["v"])], "len": e.get("len", e.get("length", "1"))}
        for e in g_doc["edges"]
    ]
    rng.shuffle(edges)
    return {"name": g_doc.get("name", "g") + "-relabeled", "vertices": shuffled, "edges": edges}
