"""Exact probability measures and the expansiveness/entropy verdict suite.

Everything verdict-shaped here is exact rational arithmetic; floats only
appear in rendered entropy columns.  Ergodicity goes through the orbit
components of the germ relation (linear) with an exhaustive bitset oracle
retained for cross-checking at small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .errors import InputError, PreconditionError
from .pseudogroup import GeneratingSystem, compacted_system, separation_radius
from .rational import is_unbounded, parse_rational
from .space import FiniteMetricSpace, PointSet

HOMOGENEITY_LADDER_CAP = Fraction(2) ** 20


class FiniteMeasure:
    """Per-point rational weights, nonnegative and summing to one."""

    __slots__ = ("space", "weights")

    def __init__(self, space: FiniteMetricSpace, weights):
        ws = tuple(parse_rational(w) for w in weights)
        if len(ws) != space.n:
            raise InputError("weight vector length must match the space")
        if any(w < 0 for w in ws):
            raise InputError("weights must be nonnegative")
        total = sum(ws)
        if total != 1:
            raise InputError(f"weights must sum to 1 (got {total})")
        self.space = space
        self.weights = ws

    @classmethod
    def uniform(cls, space: FiniteMetricSpace) -> "FiniteMeasure":
        n = space.n
        return cls(space, [Fraction(1, n)] * n)

    @classmethod
    def point_mass(cls, space: FiniteMetricSpace, x) -> "FiniteMeasure":
        i = space.index(x)
        return cls(space, [Fraction(1) if j == i else Fraction(0)
                           for j in range(space.n)])

    @classmethod
    def from_dict(cls, space: FiniteMetricSpace, mapping: dict) -> "FiniteMeasure":
        weights = [Fraction(0)] * space.n
        for label, w in mapping.items():
            weights[space.index(label)] = parse_rational(w)
        return cls(space, weights)

    def __call__(self, subset) -> Fraction:
        return sum((self.weights[i] for i in subset), Fraction(0))

    def weight(self, x) -> Fraction:
        return self.weights[self.space.index(x)]

    def atoms(self) -> PointSet:
        return frozenset(i for i, w in enumerate(self.weights) if w > 0)

    def as_dict(self) -> dict:
        return {self.space.label(i): w for i, w in enumerate(self.weights)}


# -- invariance and ergodicity -------------------------------------------------


@dataclass(frozen=True)
class InvarianceReport:
    ok: bool
    witness: Optional[tuple]  # (generator name, point label) on failure


def is_invariant_measure(mu: FiniteMeasure, sys: GeneratingSystem) -> InvarianceReport:
    """Pointwise weight preservation under every generator.

    On a finite space this is equivalent to invariance under the whole
    generated family: weights transport along words one letter at a time.
    """
    if mu.space is not sys.space and mu.space.points != sys.space.points:
        raise InputError("measure and system live on different spaces")
    for g in sys.generators:
        for i, v in enumerate(g.vals):
            if v is None:
                continue
            if mu.weights[i] != mu.weights[v]:
                return InvarianceReport(False, (g.name or repr(g), sys.space.label(i)))
    return InvarianceReport(True, None)


def orbit_components(sys: GeneratingSystem) -> list[PointSet]:
    """Orbit classes of the germ relation; invariant sets are exactly the
    unions of these."""
    return sys.germ_relation().components()


def invariant_sets(sys: GeneratingSystem) -> list[PointSet]:
    """All invariant subsets (every union of orbit components, including
    the empty set).  Exponential in the component count."""
    comps = orbit_components(sys)
    out = []
    for r in range(len(comps) + 1):
        for combo in combinations(comps, r):
            out.append(frozenset().union(*combo) if combo else frozenset())
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def brute_force_invariant_sets(sys: GeneratingSystem) -> list[PointSet]:
    """Exhaustive oracle: test every one of the 2^|X| subsets directly
    against every generator, using bit-parallel subset arithmetic.

    A subset A is invariant iff no generator moves a member of A out of A;
    by the one-letter transport argument this settles invariance under the
    full generated family as well.
    """
    n = sys.space.n
    if n > 22:
        raise InputError("exhaustive invariance oracle is for small spaces")
    total_bits = 1 << n
    all_ones = (1 << total_bits) - 1

    def column(i: int) -> int:
        # bit A of the result is set iff subset-index A contains point i
        period = 1 << (i + 1)
        block = ((1 << (1 << i)) - 1) << (1 << i)
        return block * (all_ones // ((1 << period) - 1))

    cols = [column(i) for i in range(n)]
    flags = all_ones
    for g in sys.generators:
        for i, v in enumerate(g.vals):
            if v is None or v == i:
                continue
            flags &= ~(cols[i] & ~cols[v])
    result = []
    a = flags
    while a:
        low = a & -a
        idx = low.bit_length() - 1
        result.append(frozenset(j for j in range(n) if idx >> j & 1))
        a ^= low
    return sorted(result, key=lambda s: (len(s), sorted(s)))


@dataclass(frozen=True)
class ErgodicityReport:
    ok: bool
    components: list[PointSet]
    witness: Optional[PointSet]  # a component of measure strictly inside (0,1)


def is_ergodic(mu: FiniteMeasure, sys: GeneratingSystem) -> ErgodicityReport:
    """Ergodic iff exactly one orbit component carries full measure."""
    inv = is_invariant_measure(mu, sys)
    if not inv.ok:
        raise PreconditionError(
            f"measure is not invariant (witness {inv.witness})"
        )
    comps = orbit_components(sys)
    for comp in comps:
        m = mu(comp)
        if 0 < m < 1:
            return ErgodicityReport(False, comps, comp)
    return ErgodicityReport(True, comps, None)


# -- local measure entropy ------------------------------------------------------


@dataclass(frozen=True)
class EntropyCell:
    eps: Fraction
    n: int
    ball_measure: Fraction
    value: float  # -(1/n) log mu(ball); +inf on zero-measure balls


@dataclass(frozen=True)
class LocalEntropyTable:
    x: object
    side: str
    cells: list[EntropyCell]
    limit: float  # 0.0 when the stabilized ball keeps positive measure


def _ball_measure_open(mu: FiniteMeasure, table, xi: int, eps: Fraction) -> Fraction:
    row = table[xi]
    return sum((mu.weights[y] for y in range(len(row)) if row[y] < eps), Fraction(0))


def local_entropy(mu: FiniteMeasure, sys: GeneratingSystem, x,
                  side: str = "upper", eps_grid=None,
                  n_max: int | None = None) -> LocalEntropyTable:
    """Table of -(1/n) log mu(B_n(x, eps)) over the (eps, n) grid.

    Balls stabilize with n on a finite space, so the large-n limit is 0
    whenever the stabilized ball keeps positive measure and +inf otherwise;
    liminf and limsup coincide and the ``side`` tag is informational.
    """
    if side not in ("lower", "upper"):
        raise InputError("side must be 'lower' or 'upper'")
    space = sys.space
    xi = space.index(x)
    closure = sys.word_closure()
    if eps_grid is None:
        eps_grid = space.distance_grid()
    eps_grid = [parse_rational(e) for e in eps_grid]
    if n_max is None:
        n_max = closure.stable_index
    cells = []
    for eps in sorted(eps_grid):
        for n in range(1, n_max + 1):
            table = closure.constraint_table(n)
            m = _ball_measure_open(mu, table, xi, eps)
            value = math.inf if m == 0 else -math.log(m) / n
            cells.append(EntropyCell(eps=eps, n=n, ball_measure=m, value=value))
    smallest = min(eps_grid)
    stab_m = _ball_measure_open(
        mu, closure.constraint_table(closure.stable_index), xi, smallest)
    limit = 0.0 if stab_m > 0 else math.inf
    return LocalEntropyTable(x=space.label(xi), side=side, cells=cells, limit=limit)


# -- homogeneity -----------------------------------------------------------------


@dataclass(frozen=True)
class HomogeneityWitness:
    eps: Fraction
    delta: Fraction
    c_exact: Fraction
    c_ladder: Fraction


@dataclass(frozen=True)
class HomogeneityReport:
    ok: bool
    witnesses: dict
    degenerate: bool  # some comparison cell had measure zero on both sides
    counterexample: Optional[tuple]  # (eps, x label, y label, n)
    finite_mass: bool = True     # compact subsets have finite measure
    positive_core: bool = True   # some compact subset has positive measure


def is_homogeneous(mu: FiniteMeasure, sys: GeneratingSystem, eps_grid=None,
                   n_max: int | None = None) -> HomogeneityReport:
    """Search, per grid eps, for (delta, c) with
    mu(B_n(y, delta)) <= c * mu(B_n(x, eps)) for all x, y, n.

    delta = eps is tried first, then the distance grid downward; c is the
    exact maximal measure ratio, capped by the 2^20 search ladder.  Cells
    where both sides vanish pass vacuously and set the degenerate flag.
    """
    space = sys.space
    closure = sys.word_closure()
    grid = space.distance_grid()
    if eps_grid is None:
        eps_grid = grid
    eps_grid = [parse_rational(e) for e in eps_grid]
    if n_max is None:
        n_max = closure.stable_index
    n_range = range(1, min(n_max, closure.stable_index) + 1)

    def measures(radius: Fraction, n: int) -> list[Fraction]:
        table = closure.constraint_table(n)
        return [_ball_measure_open(mu, table, i, radius) for i in range(space.n)]

    witnesses: dict = {}
    degenerate = False
    counterexample = None
    ok = True
    for eps in eps_grid:
        candidates = [eps] + [d for d in reversed(grid) if d != eps]
        found = None
        fail_cell = None
        for delta in candidates:
            c_needed = Fraction(0)
            feasible = True
            for n in n_range:
                denom = measures(eps, n)
                numer = measures(delta, n)
                lo = min(denom)
                hi = max(numer)
                if lo == 0:
                    if hi == 0:
                        degenerate = True
                        continue
                    feasible = False
                    xi = denom.index(lo)
                    yi = numer.index(hi)
                    fail_cell = (eps, space.label(xi), space.label(yi), n)
                    break
                ratio = hi / lo
                if ratio > c_needed:
                    c_needed = ratio
            if not feasible:
                continue
            if c_needed > HOMOGENEITY_LADDER_CAP:
                fail_cell = fail_cell or (eps, None, None, None)
                continue
            c_exact = max(c_needed, Fraction(1))
            ladder = Fraction(1)
            while ladder < c_exact:
                ladder *= 2
            found = HomogeneityWitness(eps=eps, delta=delta,
                                       c_exact=c_exact, c_ladder=ladder)
            break
        if found is None:
            ok = False
            counterexample = counterexample or fail_cell
        else:
            witnesses[eps] = found
    return HomogeneityReport(ok=ok, witnesses=witnesses, degenerate=degenerate,
                             counterexample=counterexample)


# -- expansiveness ----------------------------------------------------------------


@dataclass(frozen=True)
class ExpansivenessVerdict:
    """Exact Bowen-ball measures and the induced classification.

    ``zero_set`` collects the centers whose Bowen ball has measure zero.
    A point with an atom is never in the zero set (the ball contains its
    center), so finite-space measures are never expansive; the verdict
    reports that structural fact rather than hiding it.
    """

    delta: Fraction
    classification: str  # 'expansive' | 'weakly-expansive-only' | 'neither'
    ball_measures: dict
    zero_set: PointSet
    atoms: PointSet
    zero_set_measure: Fraction
    note: str = ""

    @property
    def expansive(self) -> bool:
        return self.classification == "expansive"

    @property
    def weakly_expansive(self) -> bool:
        return self.classification in ("expansive", "weakly-expansive-only")


def expansiveness_verdict(mu: FiniteMeasure, sys: GeneratingSystem,
                          delta) -> ExpansivenessVerdict:
    delta = parse_rational(delta)
    space = sys.space
    closure = sys.word_closure()
    table = closure.constraint_table(closure.stable_index)
    measures = {}
    zero = set()
    for xi in range(space.n):
        row = table[xi]
        m = sum((mu.weights[y] for y in range(space.n) if row[y] <= delta),
                Fraction(0))
        measures[space.label(xi)] = m
        if m == 0:
            zero.add(xi)
    zero_set = frozenset(zero)
    zmass = mu(zero_set)
    atoms = mu.atoms()
    if len(zero_set) == space.n:
        cls = "expansive"
    elif zmass == 1:
        cls = "weakly-expansive-only"
    else:
        cls = "neither"
    note = ""
    if atoms and cls != "expansive":
        note = ("atoms pin positive ball measure at their own centers, so no "
                "finite-space measure is expansive at any scale")
    return ExpansivenessVerdict(delta=delta, classification=cls,
                                ball_measures=measures, zero_set=zero_set,
                                atoms=atoms, zero_set_measure=zmass, note=note)


def countably_expansive(sys: GeneratingSystem, delta) -> bool:
    """Every subset of a finite space is countable; kept for interface
    parity with the symbolic shift backend."""
    parse_rational(delta)
    return True


# -- statement-level checks --------------------------------------------------------


@dataclass(frozen=True)
class UpgradeReport:
    """Outcome of the weak-to-strong expansiveness upgrade check: weak
    expansiveness for the core-restricted system at rho must imply
    expansiveness for the original system at rho/2."""

    rho: object
    vacuous: bool
    hypothesis: Optional[bool]
    conclusion: Optional[bool]
    violated: bool
    note: str = ""


def expansiveness_upgrade_check(mu: FiniteMeasure,
                                sys: GeneratingSystem) -> UpgradeReport:
    if not sys.has_cores:
        raise PreconditionError("upgrade check requires cores")
    rho = separation_radius(sys)
    if is_unbounded(rho):
        return UpgradeReport(rho=rho, vacuous=True, hypothesis=None,
                             conclusion=None, violated=False,
                             note="all generators are total; no separation "
                                  "radius constrains the instance")
    compacted = compacted_system(sys)
    hyp = expansiveness_verdict(mu, compacted, rho).weakly_expansive
    concl = expansiveness_verdict(mu, sys, rho / 2).expansive
    violated = hyp and not concl
    return UpgradeReport(rho=rho, vacuous=not hyp, hypothesis=hyp,
                         conclusion=concl, violated=violated)


@dataclass(frozen=True)
class CriterionReport:
    """Entropy criterion: ergodic + invariant + homogeneous + positive upper
    local entropy must imply weak expansiveness at some grid radius."""

    invariant: bool
    ergodic: Optional[bool]
    homogeneous: bool
    entropy_positive: bool
    entropy_limits: dict
    entropy_constant: Optional[bool]
    conclusion: Optional[bool]
    vacuous: bool
    violated: bool


def entropy_criterion_check(mu: FiniteMeasure, sys: GeneratingSystem,
                            eps_grid=None, n_max: int | None = None) -> CriterionReport:
    inv = is_invariant_measure(mu, sys).ok
    erg = is_ergodic(mu, sys).ok if inv else None
    hom_report = is_homogeneous(mu, sys, eps_grid=eps_grid, n_max=n_max)
    limits = {}
    for xi in range(sys.space.n):
        limits[sys.space.label(xi)] = local_entropy(
            mu, sys, xi, side="upper", eps_grid=eps_grid, n_max=1).limit
    values = list(limits.values())
    constant = (len(set(values)) == 1) if hom_report.ok else None
    positive = bool(values) and min(values) > 0
    hyp = bool(inv and erg and hom_report.ok and positive)
    conclusion = None
    if hyp:
        conclusion = any(
            expansiveness_verdict(mu, sys, d).weakly_expansive
            for d in sys.space.distance_grid()
        )
    violated = hyp and conclusion is False
    constancy_violated = hom_report.ok and constant is False
    return CriterionReport(invariant=inv, ergodic=erg, homogeneous=hom_report.ok,
                           entropy_positive=positive, entropy_limits=limits,
                           entropy_constant=constant, conclusion=conclusion,
                           vacuous=not hyp, violated=violated or constancy_violated)
