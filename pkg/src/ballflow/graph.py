"""Finite metric graphs with exact rational arithmetic.

A graph document (arbitrary positive rational edge lengths) is normalized to
a unit-edge multigraph: all lengths are multiplied by the lcm L of the length
denominators and every edge is subdivided into length-1 pieces.  The stored
scale factor 1/L maps internal distances back to user units.  All distance,
eccentricity and potential computations are exact.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import InternalConsistencyError, ValidationError
from .piecewise import PiecewiseLinear, pl_max, pl_max_all, pl_min

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' with decimal digits into an exact Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValidationError(f"rational must be a string, got {text!r}")
    parts = text.strip().split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            return Fraction(int(parts[0]), int(parts[1]))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed rational {text!r}") from exc
    raise ValidationError(f"malformed rational {text!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class GraphPoint:
    """A location on the graph: edge index plus rational offset from the tail."""

    edge: int
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if not ZERO <= self.t <= ONE:
            raise ValidationError(f"offset {self.t} outside [0,1]")


class MetricGraph:
    """Normalized unit-edge multigraph (loops and parallel edges allowed)."""

    def __init__(
        self,
        name: str,
        vertex_names: Sequence[str],
        edges: Sequence[tuple[int, int]],
        scale: Fraction,
        edge_provenance: Sequence[str] | None = None,
    ):
        if not edges:
            raise ValidationError("graph has no edges")
        self.name = name
        self.vertex_names = list(vertex_names)
        self.edges = [(int(u), int(v)) for u, v in edges]
        self.scale = Fraction(scale)
        self.edge_provenance = (
            list(edge_provenance) if edge_provenance is not None else ["" for _ in edges]
        )
        n = len(self.vertex_names)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError("edge endpoint out of range")
        self._incidence: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            self._incidence[u].append((i, 0))
            if v != u:
                self._incidence[v].append((i, 1))
            else:
                self._incidence[u].append((i, 1))
        self._check_connected()
        self._dist: list[list[int]] | None = None
        self._dist_np: np.ndarray | None = None
        self._diameter: Fraction | None = None
        self._user_map: list[tuple[int, int, int]] | None = None

    # -- basic structure ---------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident(self, vertex: int) -> list[tuple[int, int]]:
        """(edge index, endpoint slot 0=tail/1=head) pairs at a vertex."""
        return self._incidence[vertex]

    def _check_connected(self):
        n = self.num_vertices
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for e, _slot in self._incidence[u]:
                a, b = self.edges[e]
                for w in (a, b):
                    if not seen[w]:
                        seen[w] = True
                        count += 1
                        stack.append(w)
        if count != n:
            raise ValidationError("graph is disconnected")

    # -- points ------------------------------------------------------------

    def canonical_point(self, p: GraphPoint) -> GraphPoint:
        """Canonical representative: vertex points use the lexicographically
        smallest (edge, endpoint) incidence; interior points are unchanged."""
        if not 0 <= p.edge < self.num_edges:
            raise ValidationError(f"invalid edge index {p.edge}")
        if p.t == ZERO or p.t == ONE:
            v = self.edges[p.edge][0 if p.t == ZERO else 1]
            return self.vertex_point(v)
        return p

    def vertex_point(self, vertex: int) -> GraphPoint:
        e, slot = min(self._incidence[vertex])
        return GraphPoint(e, ZERO if slot == 0 else ONE)

    def point_vertex(self, p: GraphPoint) -> int | None:
        """The vertex id if p sits at an edge endpoint, else None."""
        if p.t == ZERO:
            return self.edges[p.edge][0]
        if p.t == ONE:
            return self.edges[p.edge][1]
        return None

    def same_point(self, p: GraphPoint, q: GraphPoint) -> bool:
        return self.canonical_point(p) == self.canonical_point(q)

    # -- vertex distances --------------------------------------------------

    def vertex_distances(self) -> list[list[int]]:
        """All-pairs graph distance on unit edges (BFS per vertex)."""
        if self._dist is None:
            n = self.num_vertices
            adj: list[list[int]] = [[] for _ in range(n)]
            for u, v in self.edges:
                if u != v:
                    adj[u].append(v)
                    adj[v].append(u)
            dist = []
            for s in range(n):
                row = [-1] * n
                row[s] = 0
                dq = deque([s])
                while dq:
                    u = dq.popleft()
                    for w in adj[u]:
                        if row[w] < 0:
                            row[w] = row[u] + 1
                            dq.append(w)
                dist.append(row)
            self._dist = dist
        return self._dist

    def vertex_distance_matrix(self) -> np.ndarray:
        if self._dist_np is None:
            self._dist_np = np.array(self.vertex_distances(), dtype=np.int64)
        return self._dist_np

    def point_vertex_distances(self, p: GraphPoint) -> list[Fraction]:
        """Exact distance from p to every vertex."""
        p = self.canonical_point(p)
        D = self.vertex_distances()
        u, v = self.edges[p.edge]
        du, dv = D[u], D[v]
        t, s = p.t, ONE - p.t
        return [min(t + du[w], s + dv[w]) for w in range(self.num_vertices)]

    # -- point-to-point distance -------------------------------------------

    def point_distance(self, p: GraphPoint, q: GraphPoint) -> Fraction:
        """Exact geodesic distance between two points."""
        p = self.canonical_point(p)
        q = self.canonical_point(q)
        D = self.vertex_distances()
        pu, pv = self.edges[p.edge]
        qu, qv = self.edges[q.edge]
        tp, sp = p.t, ONE - p.t
        tq, sq = q.t, ONE - q.t
        best = min(
            tp + D[pu][qu] + tq,
            tp + D[pu][qv] + sq,
            sp + D[pv][qu] + tq,
            sp + D[pv][qv] + sq,
        )
        if p.edge == q.edge:
            best = min(best, abs(tp - tq))
        return best

    # -- eccentricity (potential at a point) --------------------------------

    def eccentricity(self, p: GraphPoint) -> Fraction:
        """Phi(p): the maximal distance from p, via exact per-edge tent peaks.

        For a target edge f with endpoint distances a, b, the farthest point
        of f lies at the crossing of the two tents (or an endpoint), giving
        max = min(a+1, b+1, (a+b+1)/2); the edge containing p additionally
        offers the direct within-edge route, handled by splitting at p.
        """
        p = self.canonical_point(p)
        dp = self.point_vertex_distances(p)
        best = ZERO
        for f, (u, v) in enumerate(self.edges):
            a, b = dp[u], dp[v]
            if f == p.edge and ZERO < p.t < ONE:
                t = p.t
                beta = min(t, b + 1)
                left = min(a + t, beta, (a + beta) / 2)
                right = min(ONE - t, b + 1 - t, (b + 1 - t) / 2)
                val = max(left, right)
            else:
                val = min(a + 1, b + 1, (a + b + 1) / 2)
            if val > best:
                best = val
        return best

    # -- potential profile over the whole graph ------------------------------

    def _edge_potential(self, e: int) -> PiecewiseLinear:
        """Phi restricted to edge e as an exact piecewise-linear function."""
        D = self.vertex_distances()
        eu, ev = self.edges[e]
        s = PiecewiseLinear.identity()
        # distance from (e, s) to each vertex, as PL functions of s
        dists = [
            pl_min(
                PiecewiseLinear.line(Fraction(D[eu][w]), Fraction(D[eu][w]) + 1),
                PiecewiseLinear.line(Fraction(D[ev][w]) + 1, Fraction(D[ev][w])),
            )
            for w in range(self.num_vertices)
        ]
        parts: list[PiecewiseLinear] = []
        for f, (u, v) in enumerate(self.edges):
            a, b = dists[u], dists[v]
            if f == e:
                # within-edge farthest point, split at the moving point s
                beta = pl_min(s, b + 1)
                left = pl_min(a + s, beta, (a + beta) / 2)
                right = pl_min(ONE - s, b + 1 - s, (b + 1 - s) / 2)
                parts.append(pl_max(left, right))
            else:
                parts.append(pl_min(a + 1, b + 1, (a + b + 1) / 2))
        return pl_max_all(parts)

    def potential_profile(self) -> "PotentialProfile":
        """Exact global min m and max M of the potential with solution sets."""
        profiles = [self._edge_potential(e) for e in range(self.num_edges)]
        m = min(f.min_value() for f in profiles)
        M = max(f.max_value() for f in profiles)
        centers = tuple(tuple(f.level_intervals(m)) for f in profiles)
        extrema = tuple(tuple(f.level_intervals(M)) for f in profiles)
        if 2 * m < M:
            raise InternalConsistencyError(f"potential min {m} < half of max {M}")
        return PotentialProfile(m=m, M=M, centers=centers, extrema=extrema)

    # -- diameter ------------------------------------------------------------

    def diameter(self) -> Fraction:
        """Exact diameter.

        For unit-edge graphs the pairwise max-min of the four endpoint
        routings over a pair of edges is attained at quarter-rational offsets
        (all crossing lines have half-integer constants and slopes +-1), so
        evaluating the routing minimum on the 5x5 quarter grid per edge pair
        is exact.  Same-edge pairs via routings alone are capped at 1 <= diam,
        hence harmless.
        """
        if self._diameter is None:
            D4 = 4 * self.vertex_distance_matrix()
            tails = np.array([u for u, _ in self.edges], dtype=np.int64)
            heads = np.array([v for _, v in self.edges], dtype=np.int64)
            A = D4[np.ix_(tails, tails)]
            B = D4[np.ix_(tails, heads)]
            C = D4[np.ix_(heads, tails)]
            E = D4[np.ix_(heads, heads)]
            best = 0
            for s in range(5):
                for sp in range(5):
                    val = np.minimum.reduce(
                        [
                            A + s + sp,
                            B + s + (4 - sp),
                            C + (4 - s) + sp,
                            E + (8 - s - sp),
                        ]
                    )
                    m = int(val.max())
                    if m > best:
                        best = m
            self._diameter = Fraction(best, 4)
        return self._diameter

    # -- conversions ---------------------------------------------------------

    def to_user(self, x: Fraction) -> Fraction:
        return Fraction(x) * self.scale

    def from_user(self, x: Fraction) -> Fraction:
        return Fraction(x) / self.scale

    def _user_edge_map(self) -> list[tuple[int, int, int]]:
        """Per internal edge: (user edge index, segment index, segment count),
        recovered from provenance; standalone edges map to themselves."""
        if self._user_map is None:
            pat = re.compile(r"^edge (\d+) .* segment (\d+)/(\d+)$")
            out = []
            for i, prov in enumerate(self.edge_provenance):
                m = pat.match(prov)
                if m:
                    out.append((int(m.group(1)), int(m.group(2)) - 1, int(m.group(3))))
                else:
                    out.append((i, 0, 1))
            self._user_map = out
        return self._user_map

    def point_from_user(self, user_edge: int, t_user: Fraction) -> GraphPoint:
        """Point at user-unit offset t along an edge of the input document."""
        segs = [
            (k, i)
            for i, (e, k, _n) in enumerate(self._user_edge_map())
            if e == user_edge
        ]
        if not segs:
            raise ValidationError(f"unknown user edge index {user_edge}")
        segs.sort()
        n = len(segs)
        t_int = self.from_user(Fraction(t_user))
        if not ZERO <= t_int <= n:
            raise ValidationError(
                f"offset {t_user} outside user edge {user_edge}"
                f" of length {self.to_user(Fraction(n))}"
            )
        k = min(int(t_int), n - 1)
        return self.canonical_point(GraphPoint(segs[k][1], t_int - k))

    def point_to_user(self, p: GraphPoint) -> tuple[int, Fraction]:
        """(user edge index, user-unit offset) of a point."""
        e, k, _n = self._user_edge_map()[p.edge]
        return e, self.to_user(k + p.t)

    def describe_interval(self, edge: int, lo: Fraction, hi: Fraction) -> str:
        e, k, _n = self._user_edge_map()[edge]
        a = format_rational(self.to_user(k + lo))
        b = format_rational(self.to_user(k + hi))
        return f"e{e}@{a}" if lo == hi else f"e{e}[{a}, {b}]"

    def info_lines(self) -> list[str]:
        lines = [
            f"name: {self.name}",
            f"scale: {format_rational(self.scale)}",
            f"vertices: {self.num_vertices}",
            f"unit-edges: {self.num_edges}",
            f"diameter: {format_rational(self.to_user(self.diameter()))}"
            f" (internal {format_rational(self.diameter())})",
            "edge table (index, tail, head, provenance):",
        ]
        for i, (u, v) in enumerate(self.edges):
            lines.append(
                f"  {i}  {self.vertex_names[u]}  {self.vertex_names[v]}"
                f"  {self.edge_provenance[i]}"
            )
        return lines


@dataclass(frozen=True)
class PotentialProfile:
    """Exact extremes of the potential with per-edge solution regions."""

    m: Fraction
    M: Fraction
    centers: tuple[tuple[tuple[Fraction, Fraction], ...], ...]
    extrema: tuple[tuple[tuple[Fraction, Fraction], ...], ...]


# -- ingestion ---------------------------------------------------------------


def load_graph(document) -> MetricGraph:
    """Build the normalized unit-edge graph from a graph-description document.

    Accepts a dict, a JSON string, or a path-like from which JSON is read via
    load_graph_file.  Lengths are positive rationals; default length "1".
    """
    if isinstance(document, str):
        document = json.loads(document)
    if not isinstance(document, dict):
        raise ValidationError("graph document must be a JSON object")
    name = document.get("name", "graph")
    vertices = document.get("vertices")
    edges_doc = document.get("edges")
    if not isinstance(vertices, list) or not vertices:
        raise ValidationError("document must list vertices")
    if not isinstance(edges_doc, list) or not edges_doc:
        raise ValidationError("document must list at least one edge")
    if len(set(vertices)) != len(vertices):
        raise ValidationError("duplicate vertex names")
    index = {str(v): i for i, v in enumerate(vertices)}

    parsed = []
    for item in edges_doc:
        try:
            u = index[str(item["u"])]
            v = index[str(item["v"])]
        except KeyError as exc:
            raise ValidationError(f"edge references unknown vertex: {item}") from exc
        raw_len = item.get("len", item.get("length", "1"))
        length = parse_rational(raw_len)
        if length <= 0:
            raise ValidationError(f"non-positive edge length {raw_len}")
        parsed.append((u, v, length))

    L = lcm(*[length.denominator for _, _, length in parsed])
    scale = Fraction(1, L)

    vertex_names = [str(v) for v in vertices]
    new_edges: list[tuple[int, int]] = []
    provenance: list[str] = []
    for eidx, (u, v, length) in enumerate(parsed):
        n_units = length * L
        assert n_units.denominator == 1
        n_units = n_units.numerator
        chain = [u]
        for k in range(1, n_units):
            vertex_names.append(f"{vertices[u]}~{vertices[v]}.{eidx}.{k}")
            chain.append(len(vertex_names) - 1)
        chain.append(v)
        for k in range(n_units):
            new_edges.append((chain[k], chain[k + 1]))
            provenance.append(
                f"edge {eidx} ({vertices[u]}-{vertices[v]}, len {format_rational(length)})"
                f" segment {k + 1}/{n_units}"
            )
    return MetricGraph(name, vertex_names, new_edges, scale, provenance)


def load_graph_file(path) -> MetricGraph:
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read graph file {path}: {exc}") from exc
    with fh:
        try:
            document = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON in {path}: {exc}") from exc
    return load_graph(document)
