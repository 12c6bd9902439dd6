"""Merge radii between points and the single-linkage dendrogram they induce.

The merge radius of two points is the smallest r at which their closed
r-balls coincide.  Ball equality is monotone in r (a larger ball is the
dilation of a smaller one), so each pairwise radius can be found by binary
search over a finite candidate set: every coincidence of ball boundaries
solves a linear equation whose denominator divides twice the lcm of the
two offset denominators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .balls import BallSet, closed_ball, full_set, sets_equal
from .errors import InternalConsistencyError, ValidationError
from .graph import GraphPoint, MetricGraph

_ball_cache: dict = {}
_BALL_CACHE_MAX = 200_000


def _cached_ball(g: MetricGraph, p: GraphPoint, r: Fraction) -> BallSet:
    key = (id(g), p, r)
    hit = _ball_cache.get(key)
    if hit is None:
        if len(_ball_cache) >= _BALL_CACHE_MAX:
            _ball_cache.clear()
        hit = _ball_cache[key] = closed_ball(g, p, r)
    return hit


def merge_radius(g: MetricGraph, p: GraphPoint, q: GraphPoint) -> Fraction:
    """Smallest radius at which the closed balls about p and q are equal."""
    p = g.canonical_point(p)
    q = g.canonical_point(q)
    if p == q:
        return Fraction(0)
    qhat = math.lcm(p.t.denominator, q.t.denominator, 2)
    den = 2 * qhat
    hi = (g.diameter() * den).__ceil__()
    lo = 1
    if not sets_equal(g, _cached_ball(g, p, Fraction(hi, den)), _cached_ball(g, q, Fraction(hi, den))):
        raise InternalConsistencyError(
            f"balls of {p} and {q} differ at the diameter radius"
        )
    # smallest m in [1, hi] with equality, by bisection on monotone equality
    while lo < hi:
        mid = (lo + hi) // 2
        r = Fraction(mid, den)
        if sets_equal(g, _cached_ball(g, p, r), _cached_ball(g, q, r)):
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, den)


def extinction_radius(g: MetricGraph, p: GraphPoint) -> Fraction:
    """Smallest radius at which the ball about p is the whole graph.

    Computed from balls alone; it must agree with the eccentricity of p.
    """
    p = g.canonical_point(p)
    den = 2 * math.lcm(p.t.denominator, 2)
    hi = (g.diameter() * den).__ceil__()
    lo = 0
    X = full_set(g)
    if not sets_equal(g, _cached_ball(g, p, Fraction(hi, den)), X):
        raise InternalConsistencyError(f"ball about {p} misses points at the diameter radius")
    while lo < hi:
        mid = (lo + hi) // 2
        if sets_equal(g, _cached_ball(g, p, Fraction(mid, den)), X):
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, den)


def sample_points(g: MetricGraph, step: Fraction) -> list[GraphPoint]:
    """Distinct points of the graph on the uniform grid of the given step
    (internal units), vertices included once each."""
    step = Fraction(step)
    if step <= 0 or 1 % step != 0:
        raise ValidationError(f"step must be a positive divisor of 1, got {step}")
    n = int(1 / step)
    pts = [g.vertex_point(v) for v in range(g.num_vertices)]
    for e in range(g.num_edges):
        for k in range(1, n):
            pts.append(GraphPoint(e, Fraction(k, n)))
    return pts


@dataclass(frozen=True)
class MergeMatrix:
    points: tuple[GraphPoint, ...]
    mu: tuple[tuple[Fraction, ...], ...]

    def radius(self, i: int, j: int) -> Fraction:
        return self.mu[i][j]


def merge_matrix(g: MetricGraph, points: list[GraphPoint]) -> MergeMatrix:
    pts = [g.canonical_point(p) for p in points]
    n = len(pts)
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            mu[i][j] = mu[j][i] = merge_radius(g, pts[i], pts[j])
    return MergeMatrix(tuple(pts), tuple(tuple(row) for row in mu))


@dataclass(frozen=True)
class UltrametricReport:
    ok: bool
    violations: tuple[tuple[int, int, int], ...]


def ultrametric_check(m: MergeMatrix) -> UltrametricReport:
    """Exhaustive strong-triangle check; any violation is an engine bug."""
    n = len(m.points)
    violations = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                s = sorted((m.mu[i][j], m.mu[i][k], m.mu[j][k]))
                # the maximum must be attained at least twice
                if s[1] != s[2]:
                    violations.append((i, j, k))
    return UltrametricReport(ok=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class MergeEvent:
    radius: Fraction
    clusters: tuple[tuple[int, ...], ...]  # leaf-index groups merging at this radius


@dataclass(frozen=True)
class Dendrogram:
    points: tuple[GraphPoint, ...]
    events: tuple[MergeEvent, ...]

    def clusters_at(self, r: Fraction) -> list[tuple[int, ...]]:
        """Partition of leaf indices into clusters of merge radius <= r."""
        parent = list(range(len(self.points)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ev in self.events:
            if ev.radius > r:
                break
            for group in ev.clusters:
                root = find(group[0])
                for i in group[1:]:
                    ri = find(i)
                    if ri != root:
                        parent[ri] = root
        classes: dict[int, list[int]] = {}
        for i in range(len(self.points)):
            classes.setdefault(find(i), []).append(i)
        return sorted((tuple(v) for v in classes.values()), key=lambda c: c[0])

    @property
    def root_radius(self) -> Fraction:
        return self.events[-1].radius if self.events else Fraction(0)


def build_merge_tree(g: MetricGraph, points: list[GraphPoint]) -> Dendrogram:
    """Single-linkage dendrogram of the pairwise merge radii, with all merges
    at a common radius grouped into one event."""
    if len(points) < 2:
        raise ValidationError("merge tree needs at least 2 points")
    return dendrogram_from_matrix(merge_matrix(g, points))


def dendrogram_from_matrix(m: MergeMatrix) -> Dendrogram:
    n = len(m.points)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pairs = sorted(
        ((m.mu[i][j], i, j) for i in range(n) for j in range(i + 1, n)),
        key=lambda t: (t[0], t[1], t[2]),
    )
    events = []
    idx = 0
    while idx < len(pairs):
        r = pairs[idx][0]
        changed: set[int] = set()
        while idx < len(pairs) and pairs[idx][0] == r:
            _, i, j = pairs[idx]
            idx += 1
            ri, rj = find(i), find(j)
            if ri == rj:
                continue
            changed.discard(rj)
            parent[rj] = ri
            changed.add(ri)
        if changed:
            leaf_of: dict[int, list[int]] = {}
            for leaf in range(n):
                leaf_of.setdefault(find(leaf), []).append(leaf)
            clusters = sorted(
                (tuple(leaf_of[root]) for root in changed), key=lambda c: c[0]
            )
            events.append(MergeEvent(r, tuple(clusters)))
    return Dendrogram(m.points, tuple(events))
