"""Dynamical n-balls, stabilized Bowen balls, separated sets, entropy tables.

A point ``y`` lies in the n-ball around ``x`` when every word of length n
defined at both points keeps the images within the radius; maps defined at
only one of the two impose no constraint.  On finite spaces the word sets
stabilize, so Bowen balls (the all-n intersection) are computed exactly at
the stabilization index rather than truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapabilityError, InputError
from .pseudogroup import GeneratingSystem, PartialMap, WordClosure
from .rational import parse_rational
from .space import PointSet

EXACT_CLIQUE_CAP = 20


@dataclass(frozen=True)
class BallReport:
    """A computed dynamical ball with its exclusion evidence.

    ``exclusions`` maps each non-member to one (map, distance) constraint
    that rules it out; ``stabilized`` marks balls computed at the word
    closure's stabilization index (i.e. Bowen balls).
    """

    center: object
    radius: Fraction
    n: int
    closed: bool
    stabilized: bool
    members: PointSet
    exclusions: dict[int, tuple[PartialMap, Fraction]] = field(repr=False)

    def member_labels(self, space) -> tuple:
        return space.labels_of(self.members)


def dyn_ball(sys: GeneratingSystem, x, n: int, eps, closed: bool = False,
             closure: WordClosure | None = None) -> BallReport:
    """Dynamical n-ball around ``x`` with radius ``eps``."""
    eps = parse_rational(eps)
    if n < 1:
        raise InputError("n must be at least 1")
    if eps < 0:
        raise InputError("radius must be nonnegative")
    space = sys.space
    xi = space.index(x)
    closure = closure or sys.word_closure()
    maps = closure.maps_at(n)
    members = set()
    exclusions: dict[int, tuple[PartialMap, Fraction]] = {}
    for y in range(space.n):
        blocker = None
        for g in maps:
            gv = g.vals
            gx = gv[xi]
            gy = gv[y]
            if gx is None or gy is None:
                continue
            d = space.dist[gx][gy]
            if (d >= eps) if not closed else (d > eps):
                blocker = (g, d)
                break
        if blocker is None:
            members.add(y)
        else:
            exclusions[y] = blocker
    return BallReport(center=space.label(xi), radius=eps, n=n, closed=closed,
                      stabilized=(n >= closure.stable_index),
                      members=frozenset(members), exclusions=exclusions)


def dyn_ball_via_formula(sys: GeneratingSystem, x, n: int, eps,
                         closed: bool = False,
                         closure: WordClosure | None = None) -> PointSet:
    """The same ball through the set-algebra route: intersect, over the
    words defined at ``x``, the preimage of the metric ball around the
    image with the domain complement.  Serves as the independent oracle
    for :func:`dyn_ball`.
    """
    eps = parse_rational(eps)
    if n < 1:
        raise InputError("n must be at least 1")
    space = sys.space
    xi = space.index(x)
    closure = closure or sys.word_closure()
    full = (1 << space.n) - 1
    result = full
    for g in closure.maps_at(n):
        gx = g.vals[xi]
        if gx is None:
            continue
        target = space.ball_mask(gx, eps, closed=closed)
        preimage = 0
        for i, v in enumerate(g.vals):
            if v is not None and target >> v & 1:
                preimage |= 1 << i
        result &= preimage | (full ^ g.dom_mask)
        if not result:
            break
    return frozenset(i for i in range(space.n) if result >> i & 1)


def bowen_ball(sys: GeneratingSystem, x, delta,
               closure: WordClosure | None = None) -> BallReport:
    """Exact Bowen ball: the closed dynamical ball at the stabilization
    index, where the nested intersection over all n becomes constant."""
    delta = parse_rational(delta)
    if delta < 0:
        raise InputError("radius must be nonnegative")
    closure = closure or sys.word_closure()
    return dyn_ball(sys, x, closure.stable_index, delta, closed=True,
                    closure=closure)


def bowen_members(sys: GeneratingSystem, x, delta,
                  closure: WordClosure | None = None) -> PointSet:
    closure = closure or sys.word_closure()
    space = sys.space
    xi = space.index(x)
    table = closure.constraint_table(closure.stable_index)
    delta = parse_rational(delta)
    return frozenset(y for y in range(space.n) if table[xi][y] <= delta)


@dataclass(frozen=True)
class SeparationReport:
    n: int
    eps: Fraction
    lower: int
    upper: int
    witness: PointSet
    exact: bool


def separation_graph(sys: GeneratingSystem, n: int, eps,
                     closure: WordClosure | None = None) -> list[int]:
    """Adjacency bitmasks: an edge joins two points some shared word pushes
    at least ``eps`` apart."""
    eps = parse_rational(eps)
    closure = closure or sys.word_closure()
    table = closure.constraint_table(n)
    npts = sys.space.n
    adj = [0] * npts
    for i in range(npts):
        for j in range(i + 1, npts):
            if table[i][j] >= eps:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def separated_count(sys: GeneratingSystem, n: int, eps,
                    mode: str = "exact",
                    closure: WordClosure | None = None) -> SeparationReport:
    """Maximal cardinality of an (n, eps)-separated subset.

    Separated sets are cliques of the separation graph.  ``exact`` runs a
    branch-and-bound maximum clique (instances up to 20 points); ``greedy``
    reports a maximal clique as the lower bound and |X| as the upper.
    """
    eps = parse_rational(eps)
    if n < 1:
        raise InputError("n must be at least 1")
    if eps <= 0:
        raise InputError("separation scale must be positive")
    npts = sys.space.n
    adj = separation_graph(sys, n, eps, closure=closure)
    if mode == "exact":
        if npts > EXACT_CLIQUE_CAP:
            raise CapabilityError(
                f"exact separated-set search is capped at {EXACT_CLIQUE_CAP} "
                f"points (got {npts}); use mode='greedy'"
            )
        size, mask = _max_clique(adj, npts)
        members = frozenset(i for i in range(npts) if mask >> i & 1)
        return SeparationReport(n=n, eps=eps, lower=size, upper=size,
                                witness=members, exact=True)
    if mode == "greedy":
        mask = _greedy_clique(adj, npts)
        size = bin(mask).count("1")
        members = frozenset(i for i in range(npts) if mask >> i & 1)
        return SeparationReport(n=n, eps=eps, lower=size, upper=npts,
                                witness=members, exact=False)
    raise InputError(f"unknown mode {mode!r}")


def _greedy_clique(adj: list[int], npts: int) -> int:
    order = sorted(range(npts), key=lambda i: -bin(adj[i]).count("1"))
    mask = 0
    for v in order:
        if mask & ~adj[v] == 0:
            mask |= 1 << v
    return mask


def _max_clique(adj: list[int], npts: int) -> tuple[int, int]:
    best_size = 0
    best_mask = 0

    def expand(current: int, size: int, cand: int):
        nonlocal best_size, best_mask
        if size + bin(cand).count("1") <= best_size:
            return
        if cand == 0:
            if size > best_size:
                best_size, best_mask = size, current
            return
        while cand:
            if size + bin(cand).count("1") <= best_size:
                return
            v = (cand & -cand).bit_length() - 1
            bit = 1 << v
            cand &= ~bit
            expand(current | bit, size + 1, cand & adj[v])

    expand(0, 0, (1 << npts) - 1)
    if best_size == 0 and npts > 0:
        best_size, best_mask = 1, 1
    return best_size, best_mask


def brute_force_separated(sys: GeneratingSystem, n: int, eps) -> int:
    """Exhaustive maximum over all subsets; oracle for small instances."""
    eps = parse_rational(eps)
    npts = sys.space.n
    if npts > 14:
        raise CapabilityError("brute-force oracle is for small instances only")
    adj = separation_graph(sys, n, eps)
    closed = [adj[i] | (1 << i) for i in range(npts)]
    best = 0
    for subset in range(1, 1 << npts):
        m = subset
        ok = True
        while m:
            i = (m & -m).bit_length() - 1
            if subset & ~closed[i]:
                ok = False
                break
            m &= m - 1
        if ok:
            c = bin(subset).count("1")
            if c > best:
                best = c
    return best


@dataclass(frozen=True)
class HTopRow:
    eps: Fraction
    n: int
    count_lower: int
    count_upper: int
    rate: float


@dataclass(frozen=True)
class HTopTable:
    rows: list[HTopRow]
    limit: float
    note: str


def h_top_table(sys: GeneratingSystem, eps_grid=None, n_max: int = 8,
                mode: str | None = None) -> HTopTable:
    """Separated-count table with growth rates.

    On a finite space the counts are bounded by |X|, so the reported limit
    is 0; the rows still show the per-(n, eps) structure.
    """
    if eps_grid is None:
        eps_grid = sys.space.distance_grid()
    eps_grid = [parse_rational(e) for e in eps_grid]
    if not eps_grid or n_max < 1:
        raise InputError("need a nonempty eps grid and n_max >= 1")
    if mode is None:
        mode = "exact" if sys.space.n <= EXACT_CLIQUE_CAP else "greedy"
    closure = sys.word_closure()
    rows = []
    for eps in eps_grid:
        for n in range(1, n_max + 1):
            rep = separated_count(sys, n, eps, mode=mode, closure=closure)
            rate = math.log(rep.lower) / n if rep.lower > 0 else float("-inf")
            rows.append(HTopRow(eps=eps, n=n, count_lower=rep.lower,
                                count_upper=rep.upper, rate=rate))
    note = (f"counts are bounded by |X| = {sys.space.n}, so the large-n "
            "limit of (1/n) log s is 0 on this finite space")
    return HTopTable(rows=rows, limit=0.0, note=note)
