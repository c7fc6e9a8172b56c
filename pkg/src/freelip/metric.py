"""Finite pointed metric spaces, molecules, and Lipschitz functions.

A molecule is a finitely supported real function on the points summing to
zero; these are the elements whose transportation norm the rest of the
package computes.  All coefficients and distances are Fractions unless a
caller explicitly works in float mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .errors import (AsymmetryError, DisconnectedGraph, SamePoint,
                     TriangleViolation, ValidationError, ZeroOffDiagonal)
from .rational import ZERO, num_from_json, num_to_json, to_fraction

FLOAT_ZERO_SUM_TOL = 1e-12


@dataclass(frozen=True)
class MetricSpace:
    """Finite metric space with an optional distinguished basepoint."""

    points: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]
    basepoint: str | None = None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, p: str) -> int:
        return self._index[p]

    def d(self, p: str, q: str) -> Fraction:
        return self.dist[self._index[p]][self._index[q]]

    @cached_property
    def diameter(self) -> Fraction:
        return max(max(row) for row in self.dist)

    def submatrix(self, pts: list[str]) -> list[list[Fraction]]:
        idx = [self._index[p] for p in pts]
        return [[self.dist[i][j] for j in idx] for i in idx]

    def with_basepoint(self, p: str) -> "MetricSpace":
        if p not in self._index:
            raise ValidationError(f"unknown basepoint {p!r}")
        return MetricSpace(self.points, self.dist, p)

    def to_json(self) -> dict:
        out = {
            "points": list(self.points),
            "dist": [[num_to_json(x) for x in row] for row in self.dist],
        }
        if self.basepoint is not None:
            out["basepoint"] = self.basepoint
        return out

    @staticmethod
    def from_json(obj: dict) -> "MetricSpace":
        points = [str(p) for p in obj["points"]]
        dist = [[num_from_json(x) for x in row] for row in obj["dist"]]
        return validate_metric(dist, points=points, basepoint=obj.get("basepoint"))


def validate_metric(dist, points=None, basepoint=None) -> MetricSpace:
    """Check the metric axioms and return the validated space.

    Reports the first violated axiom: squareness, zero diagonal, symmetry,
    positivity off the diagonal, then an exhaustive triangle scan.
    """
    n = len(dist)
    rows = [[to_fraction(x) for x in row] for row in dist]
    for row in rows:
        if len(row) != n:
            raise ValidationError("distance matrix is not square")
    if points is None:
        points = [f"p{i}" for i in range(n)]
    if len(points) != n:
        raise ValidationError("points list does not match matrix size")
    for i in range(n):
        if rows[i][i] != 0:
            raise ValidationError(f"nonzero diagonal entry at {points[i]}")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise AsymmetryError(f"dist({points[i]},{points[j]}) != dist({points[j]},{points[i]})")
            if rows[i][j] < 0:
                raise ValidationError(f"negative distance at ({points[i]},{points[j]})")
            if rows[i][j] == 0:
                raise ZeroOffDiagonal(f"zero distance between distinct points {points[i]}, {points[j]}")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if rows[i][j] > rows[i][k] + rows[k][j]:
                    raise TriangleViolation(points[i], points[j], points[k])
    if basepoint is not None and basepoint not in points:
        raise ValidationError(f"basepoint {basepoint!r} not among points")
    return MetricSpace(tuple(points), tuple(tuple(r) for r in rows), basepoint)


@dataclass(frozen=True)
class Molecule:
    """Zero-sum finitely supported function on the points of a space."""

    coeffs: Mapping[str, Fraction]

    def __post_init__(self):
        clean = {p: to_fraction(v) for p, v in self.coeffs.items() if v != 0}
        object.__setattr__(self, "coeffs", clean)
        total = sum(clean.values(), start=ZERO)
        if total != 0:
            raise ValidationError(f"molecule coefficients sum to {total}, not 0")

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(sorted(self.coeffs))

    def __add__(self, other: "Molecule") -> "Molecule":
        out = dict(self.coeffs)
        for p, v in other.coeffs.items():
            out[p] = out.get(p, ZERO) + v
        return Molecule(out)

    def __neg__(self) -> "Molecule":
        return Molecule({p: -v for p, v in self.coeffs.items()})

    def __sub__(self, other: "Molecule") -> "Molecule":
        return self + (-other)

    def scale(self, c) -> "Molecule":
        c = to_fraction(c)
        return Molecule({p: c * v for p, v in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_json(self) -> dict:
        return {"coeffs": {p: num_to_json(v) for p, v in sorted(self.coeffs.items())}}

    @staticmethod
    def from_json(obj: dict) -> "Molecule":
        return Molecule({p: num_from_json(v) for p, v in obj["coeffs"].items()})


def molecule_float(coeffs: Mapping[str, float]) -> Molecule:
    """Build a molecule from float coefficients, absorbing rounding dust.

    The zero-sum defect must be below 1e-12; it is subtracted from the
    largest-coefficient point so the exact invariant still holds.
    """
    total = sum(coeffs.values())
    if abs(total) > FLOAT_ZERO_SUM_TOL:
        raise ValidationError(f"float molecule sums to {total}, above tolerance")
    vals = {p: to_fraction(v) for p, v in coeffs.items()}
    defect = sum(vals.values(), start=ZERO)
    if defect != 0 and vals:
        top = max(vals, key=lambda p: abs(vals[p]))
        vals[top] -= defect
    return Molecule(vals)


def elementary_molecule(p: str, q: str) -> Molecule:
    """The molecule with +1 at p and -1 at q."""
    if p == q:
        raise SamePoint(f"elementary molecule needs two distinct points, got {p!r}")
    return Molecule({p: Fraction(1), q: Fraction(-1)})


@dataclass(frozen=True)
class LipschitzFunction:
    """Real function on the points; value at the basepoint must be 0 if set."""

    values: Mapping[str, Fraction]
    basepoint: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", {p: to_fraction(v) for p, v in self.values.items()})
        if self.basepoint is not None and self.values.get(self.basepoint, ZERO) != 0:
            raise ValidationError("Lipschitz function must vanish at the basepoint")

    def __call__(self, p: str) -> Fraction:
        return self.values[p]

    def pair(self, m: Molecule) -> Fraction:
        return sum((v * self.values[p] for p, v in m.coeffs.items()), start=ZERO)

    def lipschitz_constant(self, space: MetricSpace) -> Fraction:
        best = ZERO
        pts = [p for p in space.points if p in self.values]
        for i, p in enumerate(pts):
            for q in pts[i + 1:]:
                ratio = abs(self.values[p] - self.values[q]) / space.d(p, q)
                if ratio > best:
                    best = ratio
        return best

    def to_json(self) -> dict:
        out = {"values": {p: num_to_json(v) for p, v in sorted(self.values.items())}}
        if self.basepoint is not None:
            out["basepoint"] = self.basepoint
        return out


def graph_metric(g) -> MetricSpace:
    """Shortest-path metric of a two-pole graph, ignoring edge directions.

    BFS per source for unit weights, Dijkstra otherwise.
    """
    import heapq

    verts = list(g.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    adj: list[list[tuple[int, Fraction]]] = [[] for _ in verts]
    unit = True
    for e in g.edges:
        w = to_fraction(e.weight)
        if w != 1:
            unit = False
        adj[idx[e.tail]].append((idx[e.head], w))
        adj[idx[e.head]].append((idx[e.tail], w))
    n = len(verts)
    dist = [[None] * n for _ in range(n)]
    for s in range(n):
        if unit:
            d = [None] * n
            d[s] = ZERO
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    for v, _ in adj[u]:
                        if d[v] is None:
                            d[v] = d[u] + 1
                            nxt.append(v)
                frontier = nxt
        else:
            d = [None] * n
            heap = [(ZERO, s)]
            while heap:
                du, u = heapq.heappop(heap)
                if d[u] is not None:
                    continue
                d[u] = du
                for v, w in adj[u]:
                    if d[v] is None:
                        heapq.heappush(heap, (du + w, v))
        if any(x is None for x in d):
            missing = verts[d.index(None)]
            raise DisconnectedGraph(f"vertex {missing!r} unreachable from {verts[s]!r}")
        dist[s] = d
    return MetricSpace(tuple(verts), tuple(tuple(row) for row in dist), basepoint=g.bottom)
