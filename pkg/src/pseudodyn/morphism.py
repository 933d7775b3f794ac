"""Global space bijections, conjugated systems, and transfer of verdicts.

A ``SpaceIso`` is a bijection between two finite metric spaces together
with exact moduli of continuity read off the distance grids.  Conjugation
transports generating systems, cores and measures pointwise; the transfer
constants implement the uniform-continuity bookkeeping needed to move
expansiveness radii and separated counts across the bijection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dynamics import separated_count
from .errors import InputError
from .measure import FiniteMeasure, LocalEntropyTable, local_entropy
from .pseudogroup import GeneratingSystem, PartialMap
from .rational import UNBOUNDED, is_unbounded, parse_rational
from .space import FiniteMetricSpace, PointSet


class SpaceIso:
    """Bijection between the point sets of two finite metric spaces."""

    __slots__ = ("src", "dst", "fwd", "inv")

    def __init__(self, src: FiniteMetricSpace, dst: FiniteMetricSpace, fwd):
        if src.n != dst.n:
            raise InputError("spaces must have the same cardinality")
        fwd = tuple(fwd)
        if sorted(fwd) != list(range(dst.n)):
            raise InputError("mapping is not a bijection")
        inv = [0] * dst.n
        for i, v in enumerate(fwd):
            inv[v] = i
        self.src = src
        self.dst = dst
        self.fwd = fwd
        self.inv = tuple(inv)

    @classmethod
    def from_dict(cls, src: FiniteMetricSpace, dst: FiniteMetricSpace,
                  mapping: dict) -> "SpaceIso":
        fwd = [None] * src.n
        for a, b in mapping.items():
            fwd[src.index(a)] = dst.index(b)
        if any(v is None for v in fwd):
            missing = [src.label(i) for i, v in enumerate(fwd) if v is None]
            raise InputError(f"mapping misses points {missing}")
        return cls(src, dst, fwd)

    @classmethod
    def relabel(cls, src: FiniteMetricSpace, new_labels,
                scale=Fraction(1)) -> "SpaceIso":
        """Fresh copy of ``src`` with new labels and optionally scaled
        distances; the identity index map is then an iso onto it."""
        scale = parse_rational(scale)
        dst = FiniteMetricSpace(
            new_labels,
            [[src.dist[i][j] * scale for j in range(src.n)] for i in range(src.n)],
        )
        return cls(src, dst, range(src.n))

    def apply(self, i: int) -> int:
        return self.fwd[i]

    def unapply(self, j: int) -> int:
        return self.inv[j]

    def apply_set(self, s) -> PointSet:
        return frozenset(self.fwd[i] for i in s)

    def is_isometric(self) -> bool:
        return all(
            self.src.dist[i][j] == self.dst.dist[self.fwd[i]][self.fwd[j]]
            for i in range(self.src.n) for j in range(self.src.n)
        )

    def inverted(self) -> "SpaceIso":
        return SpaceIso(self.dst, self.src, self.inv)

    # -- exact moduli ------------------------------------------------------

    def forward_modulus(self, eps):
        """Largest threshold delta with d_src(u,v) < delta implying
        d_dst(phi u, phi v) < eps: the least source distance among pairs
        whose images are eps or farther apart (UNBOUNDED if none)."""
        eps = parse_rational(eps)
        best = None
        for i in range(self.src.n):
            for j in range(i + 1, self.src.n):
                if self.dst.dist[self.fwd[i]][self.fwd[j]] >= eps:
                    d = self.src.dist[i][j]
                    if best is None or d < best:
                        best = d
        return UNBOUNDED if best is None else best

    def inverse_modulus(self, eps):
        return self.inverted().forward_modulus(eps)

    def modulus_table(self) -> dict:
        """Forward and inverse moduli across the relevant distance grids."""
        return {
            "forward": {eps: self.forward_modulus(eps)
                        for eps in self.dst.distance_grid()},
            "inverse": {eps: self.inverse_modulus(eps)
                        for eps in self.src.distance_grid()},
        }


def conjugate_map(g: PartialMap, iso: SpaceIso) -> PartialMap:
    """phi o g o phi^{-1}: domain is the image of the domain."""
    vals: list[Optional[int]] = [None] * iso.dst.n
    for i, v in enumerate(g.vals):
        if v is not None:
            vals[iso.fwd[i]] = iso.fwd[v]
    return PartialMap(iso.dst, vals, name=g.name, word=g.word)


def conjugate_system(sys: GeneratingSystem, iso: SpaceIso) -> GeneratingSystem:
    gens = [conjugate_map(g, iso) for g in sys.generators]
    cores = None
    if sys.cores is not None:
        cores = tuple(iso.apply_set(c) for c in sys.cores)
    return GeneratingSystem(iso.dst, gens, cores=cores, check_symmetric=False)


def pushforward(mu: FiniteMeasure, iso: SpaceIso) -> FiniteMeasure:
    weights = [Fraction(0)] * iso.dst.n
    for i, w in enumerate(mu.weights):
        weights[iso.fwd[i]] = w
    return FiniteMeasure(iso.dst, weights)


class CrossMap:
    """Injective partial map between two (possibly different) spaces;
    the pieces of a finite isomorphism family."""

    __slots__ = ("src", "dst", "mapping", "name")

    def __init__(self, src: FiniteMetricSpace, dst: FiniteMetricSpace,
                 mapping: dict, name: str | None = None):
        pairs = {src.index(a): dst.index(b) for a, b in mapping.items()}
        if len(set(pairs.values())) != len(pairs):
            raise InputError("cross map is not injective")
        self.src = src
        self.dst = dst
        self.mapping = pairs
        self.name = name

    @property
    def dom(self) -> PointSet:
        return frozenset(self.mapping)

    @property
    def ran(self) -> PointSet:
        return frozenset(self.mapping.values())

    def apply(self, i: int) -> int:
        return self.mapping[i]

    def inverse_mapping(self) -> dict:
        return {v: k for k, v in self.mapping.items()}

    @classmethod
    def from_iso_restriction(cls, iso: SpaceIso, subset,
                             name: str | None = None) -> "CrossMap":
        subset = frozenset(iso.src.index(x) for x in subset)
        return cls(iso.src, iso.dst,
                   {iso.src.label(i): iso.dst.label(iso.fwd[i]) for i in subset},
                   name=name)


@dataclass(frozen=True)
class FamilyConjugationReport:
    system: GeneratingSystem
    germ_checked: bool
    germ_equal: Optional[bool]


def conjugate_family(sys: GeneratingSystem, family: list[CrossMap],
                     reference: SpaceIso | None = None) -> FamilyConjugationReport:
    """Generating system built from phi_j o f o phi_i^{-1} over all family
    pieces and generators.

    The family's domains must cover the source and its ranges the target.
    When the pieces are restrictions of a single bijection (passed as
    ``reference`` or reconstructible from the pieces), the result is
    checked at germ level against the directly conjugated system.
    """
    if not family:
        raise InputError("family must be nonempty")
    dst = family[0].dst
    dom_union = frozenset().union(*(f.dom for f in family))
    ran_union = frozenset().union(*(f.ran for f in family))
    if dom_union != sys.space.full_set():
        raise InputError("family domains do not cover the source space")
    if ran_union != frozenset(range(dst.n)):
        raise InputError("family ranges do not cover the target space")

    gens = []
    for f in sys.generators:
        for phi_i in family:
            inv_i = phi_i.inverse_mapping()
            for phi_j in family:
                vals: list[Optional[int]] = [None] * dst.n
                for y, x in inv_i.items():
                    v = f.vals[x]
                    if v is not None and v in phi_j.mapping:
                        vals[y] = phi_j.mapping[v]
                m = PartialMap(dst, vals, name=f.name)
                if m.dom:
                    gens.append(m)
    system = GeneratingSystem.build(dst, gens)

    if reference is None:
        reference = _family_as_single_bijection(sys.space, dst, family)
    if reference is None:
        return FamilyConjugationReport(system=system, germ_checked=False,
                                       germ_equal=None)
    direct = conjugate_system(sys, reference)
    equal = system.germ_relation().pairs == direct.germ_relation().pairs
    return FamilyConjugationReport(system=system, germ_checked=True,
                                   germ_equal=equal)


def _family_as_single_bijection(src, dst, family) -> SpaceIso | None:
    fwd: list[Optional[int]] = [None] * src.n
    for f in family:
        for i, v in f.mapping.items():
            if fwd[i] is not None and fwd[i] != v:
                return None
            fwd[i] = v
    if any(v is None for v in fwd) or sorted(fwd) != list(range(dst.n)):
        return None
    return SpaceIso(src, dst, fwd)


def transfer_expansive_constant(eta, iso: SpaceIso) -> Fraction:
    """Largest grid radius delta on the target such that target distances
    <= delta pull back strictly below eta; any expansiveness constant eta
    on the source then transfers to delta on the target.

    Falls back to half the inverse modulus when no grid value qualifies,
    and caps at the target diameter when every grid value does.
    """
    eta = parse_rational(eta)
    if eta <= 0:
        raise InputError("eta must be positive")

    def valid(delta: Fraction) -> bool:
        for u in range(iso.dst.n):
            for v in range(u + 1, iso.dst.n):
                if iso.dst.dist[u][v] <= delta:
                    if iso.src.dist[iso.inv[u]][iso.inv[v]] >= eta:
                        return False
        return True

    for delta in reversed(iso.dst.distance_grid()):
        if valid(delta):
            return delta
    bound = iso.inverse_modulus(eta)
    if is_unbounded(bound):
        return iso.dst.diameter()
    return bound / 2


def separation_transfer_scale(eps, iso: SpaceIso):
    """Least target distance among image pairs of source pairs that are at
    least eps apart; a separated set therefore stays separated at this
    scale after the bijection."""
    eps = parse_rational(eps)
    best = None
    for i in range(iso.src.n):
        for j in range(i + 1, iso.src.n):
            if iso.src.dist[i][j] >= eps:
                d = iso.dst.dist[iso.fwd[i]][iso.fwd[j]]
                if best is None or d < best:
                    best = d
    return UNBOUNDED if best is None else best


@dataclass(frozen=True)
class EntropyComparison:
    isometric: bool
    counts_src: dict
    counts_dst: dict
    forward_ok: bool
    backward_ok: bool
    tables_equal: Optional[bool]
    local_src: Optional[LocalEntropyTable]
    local_dst: Optional[LocalEntropyTable]
    local_equal: Optional[bool]


def compare_entropy(sys: GeneratingSystem, iso: SpaceIso,
                    mu: FiniteMeasure | None = None,
                    eps_grid=None, n_list=None,
                    x=None) -> EntropyComparison:
    """Separated-count tables on both sides of the bijection.

    For every (n, eps) the source count is bounded by the target count at
    the transferred scale and vice versa; for an isometric bijection the
    tables agree cell by cell (and so do local entropy tables when a
    measure and a basepoint are supplied).
    """
    conj = conjugate_system(sys, iso)
    if eps_grid is None:
        eps_grid = sys.space.distance_grid()
    eps_grid = [parse_rational(e) for e in eps_grid]
    if n_list is None:
        n_list = [1, 2, 3]
    counts_src = {}
    counts_dst = {}
    for eps in eps_grid:
        for n in n_list:
            counts_src[(n, eps)] = separated_count(sys, n, eps).lower
    dst_grid = iso.dst.distance_grid()
    for eps in dst_grid:
        for n in n_list:
            counts_dst[(n, eps)] = separated_count(conj, n, eps).lower

    def dst_count_at(n, scale) -> int:
        if is_unbounded(scale):
            return 1
        return separated_count(conj, n, scale).lower

    def src_count_at(n, scale) -> int:
        if is_unbounded(scale):
            return 1
        return separated_count(sys, n, scale).lower

    forward_ok = True
    backward_ok = True
    inv_iso = iso.inverted()
    for eps in eps_grid:
        for n in n_list:
            scale = separation_transfer_scale(eps, iso)
            if not is_unbounded(scale):
                if counts_src[(n, eps)] > dst_count_at(n, scale):
                    forward_ok = False
    for eps in dst_grid:
        for n in n_list:
            scale = separation_transfer_scale(eps, inv_iso)
            if not is_unbounded(scale):
                if counts_dst[(n, eps)] > src_count_at(n, scale):
                    backward_ok = False

    isometric = iso.is_isometric()
    tables_equal = None
    if isometric:
        tables_equal = all(
            counts_src[(n, eps)] == counts_dst[(n, eps)]
            for n in n_list for eps in eps_grid
        )
    local_src = local_dst = None
    local_equal = None
    if mu is not None and x is not None:
        local_src = local_entropy(mu, sys, x, eps_grid=eps_grid)
        push = pushforward(mu, iso)
        dst_eps = dst_grid if not isometric else eps_grid
        local_dst = local_entropy(push, conj, iso.dst.label(iso.fwd[sys.space.index(x)]),
                                  eps_grid=dst_eps)
        if isometric:
            local_equal = (
                [(c.eps, c.n, c.ball_measure) for c in local_src.cells]
                == [(c.eps, c.n, c.ball_measure) for c in local_dst.cells]
            )
    return EntropyComparison(isometric=isometric, counts_src=counts_src,
                             counts_dst=counts_dst, forward_ok=forward_ok,
                             backward_ok=backward_ok, tables_equal=tables_equal,
                             local_src=local_src, local_dst=local_dst,
                             local_equal=local_equal)
