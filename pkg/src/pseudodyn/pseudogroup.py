"""Partial injective maps, symmetric generating systems, word closures.

On a finite discrete space every injective partial map is a homeomorphism
between open subsets, and membership in the generated pseudogroup reduces
to pointwise realizability.  Two words are therefore identified exactly
when they have equal domain and equal values ("extensional identity");
witness words are carried as metadata only.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InputError, PreconditionError
from .rational import UNBOUNDED
from .space import FiniteMetricSpace, PointSet


class PartialMap:
    """Injective partial self-map of a finite space.

    ``vals[i]`` is the image index of point ``i``, or ``None`` when ``i``
    is outside the domain.  Equality and hashing are extensional (values
    only); ``name``/``word`` are display metadata.
    """

    __slots__ = ("space", "vals", "name", "word", "_hash", "_dom_mask")

    def __init__(self, space: FiniteMetricSpace, vals: Sequence[Optional[int]],
                 name: str | None = None, word: tuple[str, ...] | None = None):
        vals = tuple(vals)
        n = space.n
        if len(vals) != n:
            raise InputError("value table length must match the space")
        seen = set()
        for v in vals:
            if v is None:
                continue
            if not (0 <= v < n):
                raise InputError(f"image index {v} out of range")
            if v in seen:
                raise InputError("map is not injective")
            seen.add(v)
        self.space = space
        self.vals = vals
        self.name = name
        self.word = word
        self._hash = hash(vals)
        self._dom_mask = None

    @classmethod
    def _raw(cls, space, vals: tuple, name=None, word=None) -> "PartialMap":
        """Unvalidated constructor for internal algebra, where injectivity
        is guaranteed by construction."""
        self = object.__new__(cls)
        self.space = space
        self.vals = vals
        self.name = name
        self.word = word
        self._hash = hash(vals)
        self._dom_mask = None
        return self

    # -- construction helpers ----------------------------------------------

    @classmethod
    def from_dict(cls, space: FiniteMetricSpace, mapping: dict,
                  name: str | None = None) -> "PartialMap":
        vals: list[Optional[int]] = [None] * space.n
        for src, dst in mapping.items():
            i = space.index(src)
            if vals[i] is not None:
                raise InputError(f"duplicate assignment for point {src!r}")
            vals[i] = space.index(dst)
        return cls(space, vals, name=name)

    @classmethod
    def identity(cls, space: FiniteMetricSpace) -> "PartialMap":
        return cls(space, tuple(range(space.n)), name="id", word=())

    @classmethod
    def empty(cls, space: FiniteMetricSpace, name: str | None = None) -> "PartialMap":
        return cls(space, (None,) * space.n, name=name)

    # -- extensional identity ------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, PartialMap) and self.vals == other.vals

    def __hash__(self):
        return self._hash

    def __repr__(self):
        pairs = ", ".join(
            f"{self.space.label(i)}->{self.space.label(v)}"
            for i, v in enumerate(self.vals) if v is not None
        )
        tag = self.name or self.word_str() or "map"
        return f"<{tag}: {pairs or 'empty'}>"

    def word_str(self) -> str | None:
        if self.word is None:
            return None
        if not self.word:
            return "id"
        # words are stored in application order; render as right-to-left
        # composition, the conventional reading.
        return "∘".join(reversed(self.word))

    # -- structure -----------------------------------------------------------

    @property
    def dom(self) -> PointSet:
        return frozenset(i for i, v in enumerate(self.vals) if v is not None)

    @property
    def dom_mask(self) -> int:
        if self._dom_mask is None:
            mask = 0
            for i, v in enumerate(self.vals):
                if v is not None:
                    mask |= 1 << i
            self._dom_mask = mask
        return self._dom_mask

    @property
    def ran(self) -> PointSet:
        return frozenset(v for v in self.vals if v is not None)

    def defined_at(self, i: int) -> bool:
        return self.vals[i] is not None

    def apply(self, i: int) -> int:
        v = self.vals[i]
        if v is None:
            raise InputError(f"point {self.space.label(i)!r} outside the domain")
        return v

    def is_total(self) -> bool:
        return all(v is not None for v in self.vals)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.vals))

    def graph(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, v) for i, v in enumerate(self.vals) if v is not None)

    # -- algebra ---------------------------------------------------------------

    def inverse(self, name: str | None = None) -> "PartialMap":
        vals: list[Optional[int]] = [None] * self.space.n
        for i, v in enumerate(self.vals):
            if v is not None:
                vals[v] = i
        if name is None and self.name is not None:
            name = self.name[:-3] if self.name.endswith("^-1") else self.name + "^-1"
        word = None
        if self.word is not None:
            word = tuple(_invert_letter(w) for w in reversed(self.word))
        return PartialMap._raw(self.space, tuple(vals), name=name, word=word)

    def then(self, other: "PartialMap") -> "PartialMap":
        """``other`` after ``self``: domain is the set of points whose image
        under ``self`` lands in the domain of ``other``."""
        if other.space is not self.space and other.space.points != self.space.points:
            raise InputError("maps live on different spaces")
        ovals = other.vals
        vals = tuple(
            ovals[v] if v is not None else None
            for v in self.vals
        )
        word = None
        if self.word is not None and other.word is not None:
            word = self.word + other.word
        return PartialMap._raw(self.space, vals, word=word)

    def restrict(self, subset: Iterable[int]) -> "PartialMap":
        keep = frozenset(subset)
        vals = tuple(v if i in keep else None for i, v in enumerate(self.vals))
        name = f"{self.name}|" if self.name else None
        return PartialMap._raw(self.space, vals, name=name, word=None)


def _invert_letter(letter: str) -> str:
    return letter[:-3] if letter.endswith("^-1") else letter + "^-1"


def compose(g: PartialMap, h: PartialMap) -> PartialMap:
    """Composite ``h`` after ``g``; the empty-domain result is legal output."""
    return g.then(h)


def invert(g: PartialMap) -> PartialMap:
    return g.inverse()


def restrict(g: PartialMap, subset: Iterable[int]) -> PartialMap:
    return g.restrict(subset)


class GeneratingSystem:
    """Finite symmetric generator family containing the identity.

    ``cores`` is an optional parallel tuple of subsets ``K_g`` of the
    generator domains; the identity's core defaults to the whole space.
    Derived systems (e.g. core-restricted ones) may be non-symmetric and
    are built with ``check_symmetric=False``.
    """

    __slots__ = ("space", "generators", "cores", "_closure", "_germ")

    def __init__(self, space: FiniteMetricSpace, generators: Sequence[PartialMap],
                 cores: Sequence[Optional[PointSet]] | None = None,
                 check_symmetric: bool = True):
        gens = tuple(generators)
        if not any(g.is_identity() and g.is_total() for g in gens):
            raise InputError("generating system must contain the total identity")
        ext = set(gens)
        if check_symmetric:
            for g in gens:
                if g.inverse() not in ext:
                    raise InputError(
                        f"system is not symmetric: inverse of {g!r} is missing"
                    )
        covered = frozenset().union(*(g.dom | g.ran for g in gens))
        if covered != space.full_set():
            missing = space.labels_of(space.full_set() - covered)
            raise InputError(f"generator domains and ranges miss points {missing}")
        if cores is not None:
            cores = tuple(None if c is None else frozenset(c) for c in cores)
            if len(cores) != len(gens):
                raise InputError("cores must parallel the generator list")
            fixed = []
            for g, core in zip(gens, cores):
                if g.is_identity() and core is None:
                    core = space.full_set()
                if core is None:
                    raise InputError(f"generator {g!r} is missing its core")
                if not core <= g.dom:
                    raise InputError(f"core of {g!r} is not inside its domain")
                fixed.append(core)
            cores = tuple(fixed)
        self.space = space
        self.generators = gens
        self.cores = cores
        self._closure = None
        self._germ = None

    # -- construction ----------------------------------------------------------

    @classmethod
    def build(cls, space: FiniteMetricSpace, maps: Sequence[PartialMap],
              cores: dict | None = None) -> "GeneratingSystem":
        """Assemble a symmetric system: the total identity is added when
        missing and so is the inverse of any generator (named ``g^-1``).

        ``cores`` maps generator names to point-index sets; the core of an
        auto-added inverse defaults to the image of the original core so
        that core restriction commutes with inversion.
        """
        gens: list[PartialMap] = []
        seen: dict[PartialMap, PartialMap] = {}
        alias: dict[str, PartialMap] = {}

        def push(m: PartialMap) -> PartialMap:
            kept = seen.get(m)
            if kept is None:
                gens.append(m)
                seen[m] = m
                kept = m
            if m.name and m.name not in alias:
                alias[m.name] = kept
            return kept

        identity = PartialMap.identity(space)
        push(identity)
        for g in maps:
            if g.word is None:
                g = PartialMap(space, g.vals, name=g.name,
                               word=(g.name,) if g.name else None)
            push(g)
        for g in list(gens):
            push(g.inverse())

        core_tuple = None
        if cores is not None:
            by_map: dict[PartialMap, PointSet] = {}
            for gname, core in cores.items():
                if gname not in alias:
                    raise InputError(f"core given for unknown generator {gname!r}")
                target = alias[gname]
                if target not in by_map:  # first core wins for deduped names
                    by_map[target] = frozenset(core)
            core_tuple = []
            for g in gens:
                if g.is_identity():
                    core_tuple.append(space.full_set())
                elif g in by_map:
                    core_tuple.append(by_map[g])
                else:
                    inv = g.inverse()
                    if inv in by_map:
                        core_tuple.append(frozenset(inv.apply(i) for i in by_map[inv]))
                    else:
                        core_tuple.append(g.dom)
            core_tuple = tuple(core_tuple)
        return cls(space, gens, cores=core_tuple)

    @property
    def has_cores(self) -> bool:
        return self.cores is not None

    def core_of(self, k: int) -> PointSet:
        if self.cores is None:
            raise PreconditionError("system has no cores")
        return self.cores[k]

    def generator_names(self) -> tuple:
        return tuple(g.name or f"g{k}" for k, g in enumerate(self.generators))

    # -- closure ----------------------------------------------------------------

    def word_closure(self, n_max: int | str = "auto") -> "WordClosure":
        if n_max == "auto" and self._closure is not None:
            return self._closure
        closure = word_closure(self, n_max)
        if n_max == "auto":
            self._closure = closure
        return closure

    def germ_relation(self) -> "GermRelation":
        if self._germ is None:
            self._germ = germ_relation(self)
        return self._germ

    def compacted(self) -> "GeneratingSystem":
        return compacted_system(self)

    def separation_radius(self):
        return separation_radius(self)


class WordClosure:
    """Extensionally deduplicated word sets, level by level, to stabilization.

    ``level_maps[k]`` lists the distinct maps realizable by words of length
    ``k+1`` (cumulative, since the identity pads any shorter word).  Each
    map records one shortest witness word.
    """

    __slots__ = ("system", "level_maps", "stable_index", "first_level", "_m_cache")

    def __init__(self, system: GeneratingSystem, level_maps: list[list[PartialMap]],
                 stable_index: int, first_level: dict[PartialMap, int]):
        self.system = system
        self.level_maps = level_maps
        self.stable_index = stable_index
        self.first_level = first_level
        self._m_cache: dict[tuple[int, bool], list[list[Fraction]]] = {}

    def maps_at(self, n: int) -> list[PartialMap]:
        """The word set at length ``n`` (constant from the stabilization on)."""
        if n < 1:
            raise InputError("word length must be at least 1")
        return self.level_maps[min(n, self.stable_index) - 1]

    @property
    def stabilized_maps(self) -> list[PartialMap]:
        return self.level_maps[self.stable_index - 1]

    def constraint_table(self, n: int) -> list[list[Fraction]]:
        """``M[i][j]`` = max over shared-domain maps of d(g(i), g(j)).

        The dynamical ball membership test is exactly ``M[i][j] < eps``
        (open) or ``<= eps`` (closed); computing the max once serves every
        radius.
        """
        level = min(n, self.stable_index)
        key = (level, True)
        if key in self._m_cache:
            return self._m_cache[key]
        space = self.system.space
        npts = space.n
        dist = space.dist
        table = [[Fraction(0)] * npts for _ in range(npts)]
        for g in self.level_maps[level - 1]:
            vals = g.vals
            dom = [i for i, v in enumerate(vals) if v is not None]
            for a_pos, i in enumerate(dom):
                gi = vals[i]
                row = table[i]
                for j in dom[a_pos + 1:]:
                    d = dist[gi][vals[j]]
                    if d > row[j]:
                        row[j] = d
                        table[j][i] = d
        self._m_cache[key] = table
        return table


def word_closure(sys: GeneratingSystem, n_max: int | str = "auto") -> WordClosure:
    """Breadth-first closure of the generators under composition with
    extensional deduplication; ``auto`` runs until a round adds nothing."""
    limit = None if n_max == "auto" else int(n_max)
    if limit is not None and limit < 1:
        raise InputError("n_max must be at least 1")
    seen: dict[PartialMap, PartialMap] = {}
    first_level: dict[PartialMap, int] = {}
    level1: list[PartialMap] = []
    for g in sys.generators:
        if g.word is None:
            g = PartialMap(sys.space, g.vals, name=g.name,
                           word=(g.name,) if g.name else ("?",))
        if g not in seen:
            seen[g] = g
            first_level[g] = 1
            level1.append(g)
    levels = [list(level1)]
    frontier = list(level1)
    n = 1
    stable = None
    while True:
        if limit is not None and n >= limit:
            break
        new: list[PartialMap] = []
        for b in frontier:
            for a in levels[0]:
                c = b.then(a)
                if c not in seen:
                    seen[c] = c
                    first_level[c] = n + 1
                    new.append(c)
        if not new:
            stable = n
            break
        levels.append(levels[-1] + new)
        frontier = new
        n += 1
    if stable is None:
        # truncated run: report the last computed level as the horizon
        stable = n
    return WordClosure(sys, levels, stable, first_level)


class GermRelation:
    """All realized pairs (x, w(x)) over the stabilized closure, each tagged
    with a shortest realizing word."""

    __slots__ = ("space", "pairs", "witness")

    def __init__(self, space: FiniteMetricSpace,
                 pairs: frozenset[tuple[int, int]],
                 witness: dict[tuple[int, int], tuple[str, ...]]):
        self.space = space
        self.pairs = pairs
        self.witness = witness

    def __eq__(self, other):
        return isinstance(other, GermRelation) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __contains__(self, pair):
        return pair in self.pairs

    def is_reflexive(self) -> bool:
        return all((i, i) in self.pairs for i in range(self.space.n))

    def is_symmetric(self) -> bool:
        return all((j, i) in self.pairs for (i, j) in self.pairs)

    def is_transitive(self) -> bool:
        succ: dict[int, set[int]] = {}
        for i, j in self.pairs:
            succ.setdefault(i, set()).add(j)
        for i, js in succ.items():
            for j in js:
                if not succ.get(j, set()) <= js:
                    return False
        return True

    def components(self) -> list[frozenset[int]]:
        """Connected components of the relation viewed as an undirected graph."""
        n = self.space.n
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in self.pairs:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
        groups: dict[int, set[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), set()).add(i)
        return sorted((frozenset(v) for v in groups.values()), key=min)


def germ_relation(sys: GeneratingSystem) -> GermRelation:
    closure = sys.word_closure()
    pairs: set[tuple[int, int]] = set()
    witness: dict[tuple[int, int], tuple[str, ...]] = {}
    prev_len = 0
    for level_list in closure.level_maps:
        for g in level_list[prev_len:]:
            for i, v in enumerate(g.vals):
                if v is None:
                    continue
                if (i, v) not in pairs:
                    pairs.add((i, v))
                    witness[(i, v)] = g.word or ()
        prev_len = len(level_list)
    return GermRelation(sys.space, frozenset(pairs), witness)


def compacted_system(sys: GeneratingSystem) -> GeneratingSystem:
    """Restrict every generator to its core (the identity stays total).

    The result keeps the generator names and sets each core equal to the
    new domain.  It is not forced to be symmetric: symmetry of the
    restricted family holds exactly when inverse cores are images of each
    other, which callers may or may not have arranged.
    """
    if not sys.has_cores:
        raise PreconditionError("compaction requires cores")
    gens = []
    cores = []
    for g, core in zip(sys.generators, sys.cores):
        if g.is_identity():
            gens.append(g)
            cores.append(sys.space.full_set())
            continue
        r = g.restrict(core)
        r = PartialMap(sys.space, r.vals, name=g.name,
                       word=(g.name,) if g.name else None)
        gens.append(r)
        cores.append(r.dom)
    return GeneratingSystem(sys.space, gens, cores=tuple(cores),
                            check_symmetric=False)


def goodness_check(sys: GeneratingSystem):
    """True when core restriction preserves the germ relation; on failure
    returns a pair in the difference."""
    if not sys.has_cores:
        raise PreconditionError("goodness check requires cores")
    full = sys.germ_relation()
    small = compacted_system(sys).germ_relation()
    if small.pairs == full.pairs:
        return True, None
    diff = sorted(full.pairs - small.pairs) or sorted(small.pairs - full.pairs)
    i, j = diff[0]
    return False, (sys.space.label(i), sys.space.label(j))


def separation_radius(sys: GeneratingSystem):
    """Minimal distance from a core to the complement of its domain,
    over the non-total generators; ``UNBOUNDED`` when all are total.

    Downstream comparisons use ``d >= rho``: on a finite distance grid this
    is equivalent to picking any constant strictly below the minimum and
    comparing strictly.
    """
    if not sys.has_cores:
        raise PreconditionError("separation radius requires cores")
    best = None
    for g, core in zip(sys.generators, sys.cores):
        outside = sys.space.full_set() - g.dom
        if not outside or not core:
            continue
        for z in outside:
            for y in core:
                d = sys.space.d(z, y)
                if best is None or d < best:
                    best = d
    return UNBOUNDED if best is None else best


def raw_word_maps(sys: GeneratingSystem, n: int) -> list[PartialMap]:
    """Every length-``n`` word as a map, with no deduplication.

    Exponential in ``n``; exists as the independent oracle for closure
    soundness at desk scale.
    """
    if n < 1:
        raise InputError("word length must be at least 1")
    words = [g for g in sys.generators]
    for _ in range(n - 1):
        words = [w.then(g) for w in words for g in sys.generators]
    return words
