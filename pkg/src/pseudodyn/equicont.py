"""Uniform equicontinuity certificates and no-expansive-measure reports.

On a finite space a modulus always exists (the least distance among pairs
some map spreads past the scale is positive), so the content is the exact
table: isometry families certify with delta(eps) = eps, while distortion
shows up as a smaller modulus with an explicit witness pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import CapabilityError, PreconditionError
from .measure import expansiveness_verdict
from .pseudogroup import GeneratingSystem, PartialMap, compacted_system
from .rational import UNBOUNDED, is_unbounded, parse_rational
from .space import FiniteMetricSpace


@dataclass(frozen=True)
class EquicontinuityCertificate:
    """Exact modulus table: for each grid eps the largest delta such that
    pairs closer than delta are never spread to eps or beyond by any map
    in scope, with the witness pair that pins each finite delta."""

    scope: str
    table: dict
    witnesses: dict
    isometric: bool

    def delta_for(self, eps):
        eps = parse_rational(eps)
        if eps in self.table:
            return self.table[eps]
        finite = [d for e, d in self.table.items()
                  if e >= eps and not is_unbounded(d)]
        if not finite:
            return UNBOUNDED
        return min(finite)

    def audit(self, maps, space: FiniteMetricSpace) -> bool:
        """Re-verify the defining implication over every map and pair."""
        for eps, delta in self.table.items():
            if is_unbounded(delta):
                continue
            for g in maps:
                dom = sorted(g.dom)
                for ai, i in enumerate(dom):
                    for j in dom[ai + 1:]:
                        if space.dist[i][j] < delta:
                            if space.dist[g.vals[i]][g.vals[j]] >= eps:
                                return False
        return True


def modulus_at(maps, space: FiniteMetricSpace, eps):
    """Least distance among pairs some map spreads to eps or beyond;
    UNBOUNDED when no map ever does."""
    eps = parse_rational(eps)
    best = None
    for g in maps:
        vals = g.vals
        dom = sorted(g.dom)
        for ai, i in enumerate(dom):
            for j in dom[ai + 1:]:
                if space.dist[vals[i]][vals[j]] >= eps:
                    d = space.dist[i][j]
                    if best is None or d < best:
                        best = d
    return UNBOUNDED if best is None else best


def equicontinuity_modulus(maps, space: FiniteMetricSpace,
                           eps_grid=None, scope: str = "closure") -> EquicontinuityCertificate:
    if eps_grid is None:
        eps_grid = space.distance_grid()
    eps_grid = [parse_rational(e) for e in eps_grid]
    table = {}
    witnesses = {}
    for eps in eps_grid:
        delta = modulus_at(maps, space, eps)
        table[eps] = delta
        wit = None
        if not is_unbounded(delta):
            for g in maps:
                vals = g.vals
                dom = sorted(g.dom)
                for ai, i in enumerate(dom):
                    for j in dom[ai + 1:]:
                        if (space.dist[i][j] == delta
                                and space.dist[vals[i]][vals[j]] >= eps):
                            wit = (g, space.label(i), space.label(j))
                            break
                    if wit:
                        break
                if wit:
                    break
        witnesses[eps] = wit
    isometric = all(table.get(e) == e for e in eps_grid)
    return EquicontinuityCertificate(scope=scope, table=table,
                                     witnesses=witnesses, isometric=isometric)


@dataclass(frozen=True)
class GroupInclusionReport:
    """For a group of total maps: open delta-balls sit inside the Bowen
    rho-balls, hence any measure puts positive mass on some Bowen ball
    (take a ball around an atom) and none is weakly expansive at rho."""

    rho: Fraction
    delta: object
    inclusions: dict
    inclusion_ok: bool
    conclusion: str


def no_expansive_certificate_group(sys: GeneratingSystem, rho) -> GroupInclusionReport:
    rho = parse_rational(rho)
    if not all(g.is_total() for g in sys.generators):
        raise CapabilityError(
            "generators are not all total; use the core-restricted variant"
        )
    closure = sys.word_closure()
    maps = closure.stabilized_maps
    space = sys.space
    delta = modulus_at(maps, space, rho)
    delta_used = space.diameter() if is_unbounded(delta) else delta
    table = closure.constraint_table(closure.stable_index)
    inclusions = {}
    ok = True
    for x in range(space.n):
        ball = space.ball_ix(x, delta_used, closed=False)
        bowen = frozenset(y for y in range(space.n) if table[x][y] <= rho)
        inside = ball <= bowen
        inclusions[space.label(x)] = inside
        ok = ok and inside
    conclusion = (
        "every Bowen ball at rho contains the open delta-ball around its "
        "center; a ball around any atom has positive measure, so no measure "
        "is weakly expansive at this scale"
        if ok else "inclusion failed; no conclusion"
    )
    return GroupInclusionReport(rho=rho, delta=delta, inclusions=inclusions,
                                inclusion_ok=ok, conclusion=conclusion)


@dataclass(frozen=True)
class AgreementRadiusReport:
    value: object  # Fraction or UNBOUNDED
    counterexample: Optional[tuple]  # (map, x label, y label) with no agreeing extension


def local_agreement_radius(sys: GeneratingSystem,
                           closure_maps=None) -> AgreementRadiusReport:
    """Largest grid radius under which every core-restricted word agrees,
    at any two sufficiently close domain points, with a single map of the
    ambient closure.

    With the ambient closure itself as the reference family every
    restricted word is matched by its unrestricted extension, so the
    radius is unbounded; a genuinely smaller reference family can fail,
    and then the report carries the witnessing (map, pair).
    """
    if not sys.has_cores:
        raise PreconditionError("agreement radius requires cores")
    space = sys.space
    compacted = compacted_system(sys)
    small = compacted.word_closure().stabilized_maps
    if closure_maps is None:
        closure_maps = sys.word_closure().stabilized_maps
    closure_list = list(closure_maps)

    def pair_ok(g: PartialMap, i: int, j: int) -> bool:
        gi, gj = g.vals[i], g.vals[j]
        for h in closure_list:
            if h.vals[i] == gi and h.vals[j] == gj:
                return True
        return False

    def works(lam) -> Optional[tuple]:
        for g in small:
            dom = sorted(g.dom)
            for i in dom:
                for j in dom:
                    if lam is not None and space.dist[i][j] >= lam:
                        continue
                    if not pair_ok(g, i, j):
                        return (g, space.label(i), space.label(j))
        return None

    if works(None) is None:
        return AgreementRadiusReport(value=UNBOUNDED, counterexample=None)
    grid = space.distance_grid()
    for lam in reversed(grid):
        if works(lam) is None:
            return AgreementRadiusReport(value=lam, counterexample=None)
    witness = works(grid[0]) if grid else works(None)
    return AgreementRadiusReport(value=None, counterexample=witness)


@dataclass(frozen=True)
class GoodInclusionRow:
    rho: Fraction
    delta: object
    lam: object
    xi: object
    inclusion_ok: bool


@dataclass(frozen=True)
class GoodInclusionReport:
    rows: list[GoodInclusionRow]
    all_ok: bool
    agreement: AgreementRadiusReport
    conclusion: str


def no_expansive_certificate_good(sys: GeneratingSystem,
                                  rho_grid=None) -> GoodInclusionReport:
    """Core-restricted analogue: with xi = min(modulus(rho), agreement
    radius), open xi-balls sit inside the core-restricted Bowen rho-balls,
    point by point and for every grid rho."""
    if not sys.has_cores:
        raise PreconditionError("this certificate requires cores")
    space = sys.space
    closure = sys.word_closure()
    gamma = closure.stabilized_maps
    agreement = local_agreement_radius(sys, gamma)
    if agreement.value is None:
        raise PreconditionError(
            f"no agreement radius exists: witness {agreement.counterexample}"
        )
    compacted = compacted_system(sys)
    ctable = compacted.word_closure().constraint_table(
        compacted.word_closure().stable_index)
    if rho_grid is None:
        rho_grid = space.distance_grid()
    rows = []
    all_ok = True
    diameter = space.diameter()
    for rho in [parse_rational(r) for r in rho_grid]:
        delta = modulus_at(gamma, space, rho)
        finite = [v for v in (delta, agreement.value) if not is_unbounded(v)]
        xi = min(finite) if finite else diameter
        ok = True
        for x in range(space.n):
            ball = space.ball_ix(x, xi, closed=False)
            bowen2 = frozenset(y for y in range(space.n) if ctable[x][y] <= rho)
            if not ball <= bowen2:
                ok = False
                break
        rows.append(GoodInclusionRow(rho=rho, delta=delta, lam=agreement.value,
                                     xi=xi, inclusion_ok=ok))
        all_ok = all_ok and ok
    conclusion = (
        "open xi-balls land inside the core-restricted Bowen balls at every "
        "grid rho; a ball around any atom has positive measure, so no "
        "measure is weakly expansive for the core-restricted system"
        if all_ok else "an inclusion failed; no conclusion"
    )
    return GoodInclusionReport(rows=rows, all_ok=all_ok, agreement=agreement,
                               conclusion=conclusion)


def sweep_measures_never_weakly_expansive(sys: GeneratingSystem, measures,
                                          rho_grid=None) -> bool:
    """Cross-check against the measure module: every supplied measure gets
    verdict 'neither' at every grid rho."""
    if rho_grid is None:
        rho_grid = sys.space.distance_grid()
    for mu in measures:
        for rho in rho_grid:
            if expansiveness_verdict(mu, sys, rho).weakly_expansive:
                return False
    return True
