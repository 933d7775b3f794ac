"""Finite metric spaces with exact rational distances.

Points carry opaque labels; all internal computation is index-based.
Subsets of a space ("point sets") are plain ``frozenset`` objects over
point indices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .rational import UNBOUNDED, parse_rational

PointSet = frozenset


class FiniteMetricSpace:
    """An ordered finite point set together with an exact metric matrix.

    The metric axioms (zero diagonal, positivity, symmetry, triangle
    inequality) are validated at construction; a violation is a hard
    error because every verdict downstream assumes a genuine metric.
    Instances are immutable and safe to share between threads.
    """

    __slots__ = ("points", "dist", "_index", "_grid", "_ball_masks")

    def __init__(self, points: Sequence, dist: Sequence[Sequence]):
        pts = tuple(points)
        if not pts:
            raise InputError("a metric space needs at least one point")
        if len(set(pts)) != len(pts):
            raise InputError("duplicate point labels")
        n = len(pts)
        if len(dist) != n or any(len(row) != n for row in dist):
            raise InputError(f"distance matrix must be {n}x{n}")
        matrix = tuple(tuple(parse_rational(v) for v in row) for row in dist)
        for i in range(n):
            if matrix[i][i] != 0:
                raise InputError(f"dist({pts[i]},{pts[i]}) must be 0")
            for j in range(i + 1, n):
                if matrix[i][j] != matrix[j][i]:
                    raise InputError(
                        f"symmetry violated at ({pts[i]},{pts[j]}): "
                        f"{matrix[i][j]} != {matrix[j][i]}"
                    )
                if matrix[i][j] <= 0:
                    raise InputError(
                        f"distinct points need positive distance: ({pts[i]},{pts[j]})"
                    )
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if matrix[i][k] > matrix[i][j] + matrix[j][k]:
                        raise InputError(
                            "triangle inequality violated at "
                            f"({pts[i]},{pts[j]},{pts[k]})"
                        )
        self.points = pts
        self.dist = matrix
        self._index = {p: i for i, p in enumerate(pts)}
        self._grid = None
        self._ball_masks = {}

    # -- basic queries ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, x) -> int:
        """Resolve a point label (or an already-resolved index) to an index."""
        if x in self._index:
            return self._index[x]
        if isinstance(x, int) and 0 <= x < len(self.points):
            return x
        raise InputError(f"unknown point {x!r}")

    def label(self, i: int):
        return self.points[i]

    def d(self, i: int, j: int) -> Fraction:
        return self.dist[i][j]

    def full_set(self) -> PointSet:
        return frozenset(range(len(self.points)))

    def complement(self, s: Iterable[int]) -> PointSet:
        return frozenset(range(len(self.points))) - frozenset(s)

    def labels_of(self, s: Iterable[int]) -> tuple:
        return tuple(self.points[i] for i in sorted(s))

    def diameter(self) -> Fraction:
        return max((self.dist[i][j] for i in range(self.n) for j in range(self.n)),
                   default=Fraction(0))

    # -- operations --------------------------------------------------------

    def distance_grid(self) -> list[Fraction]:
        """Strictly increasing list of the distinct positive pairwise distances.

        Every comparison-based verdict in the library is piecewise constant
        between consecutive grid values, so this is the canonical candidate
        list for radii and thresholds.
        """
        if self._grid is None:
            vals = {self.dist[i][j] for i in range(self.n) for j in range(self.n)} - {Fraction(0)}
            self._grid = sorted(vals)
        return list(self._grid)

    def ball_ix(self, i: int, r, closed: bool = False) -> PointSet:
        r = parse_rational(r)
        row = self.dist[i]
        if closed:
            return frozenset(j for j in range(self.n) if row[j] <= r)
        return frozenset(j for j in range(self.n) if row[j] < r)

    def ball_mask(self, i: int, r, closed: bool = False) -> int:
        """The metric ball as a bitmask over point indices, memoized."""
        key = (i, r, closed)
        mask = self._ball_masks.get(key)
        if mask is None:
            row = self.dist[i]
            mask = 0
            if closed:
                for j in range(self.n):
                    if row[j] <= r:
                        mask |= 1 << j
            else:
                for j in range(self.n):
                    if row[j] < r:
                        mask |= 1 << j
            self._ball_masks[key] = mask
        return mask

    def metric_ball(self, x, r, closed: bool = False) -> PointSet:
        """Open (default) or closed metric ball around point ``x``."""
        r = parse_rational(r)
        if r < 0:
            raise InputError("ball radius must be nonnegative")
        return self.ball_ix(self.index(x), r, closed)

    def lebesgue_number(self, cover: Sequence[Iterable[int]]):
        """Largest grid value delta such that every open ball of radius delta
        fits inside one cover element; ``UNBOUNDED`` if a cover element is
        the whole space.
        """
        sets = [frozenset(c) for c in cover]
        union = frozenset().union(*sets) if sets else frozenset()
        if union != self.full_set():
            missing = self.labels_of(self.full_set() - union)
            raise InputError(f"cover misses points {missing}")
        full = self.full_set()
        if any(c == full for c in sets):
            return UNBOUNDED
        for delta in reversed(self.distance_grid()):
            if all(
                any(self.ball_ix(i, delta) <= c for c in sets)
                for i in range(self.n)
            ):
                return delta
        # Unreachable for a valid cover: at the smallest grid value every
        # open ball is a singleton and the cover contains each point.
        raise AssertionError("no Lebesgue number found for a valid cover")
