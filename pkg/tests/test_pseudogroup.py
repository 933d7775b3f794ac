import pytest

from pseudodyn import (GeneratingSystem, InputError, PartialMap,
                       PreconditionError, compacted_system, compose,
                       goodness_check, invert, is_unbounded, raw_word_maps,
                       restrict, separation_radius)
from pseudodyn.probes import InstanceSpec, random_genome

from conftest import rotation_system


def _g(line):
    return PartialMap.from_dict(line, {"a": "b", "b": "c"}, name="g")


def test_compose_examples(line):
    g = _g(line)
    gg = compose(g, g)
    assert gg.dom == {0}
    assert gg.apply(0) == 2
    assert compose(g, invert(g)) == PartialMap.identity(line).restrict({0, 1})
    empty = PartialMap.empty(line)
    assert compose(empty, g) == empty


def test_invert_restrict(line):
    g = _g(line)
    assert invert(g) == PartialMap.from_dict(line, {"b": "a", "c": "b"})
    assert restrict(g, {0}) == PartialMap.from_dict(line, {"a": "b"})
    assert invert(invert(g)) == g


def test_partial_map_injectivity_enforced(line):
    with pytest.raises(InputError, match="injective"):
        PartialMap.from_dict(line, {"a": "b", "c": "b"})


def test_extensional_equality_ignores_names(line):
    g1 = PartialMap.from_dict(line, {"a": "b"}, name="one")
    g2 = PartialMap.from_dict(line, {"a": "b"}, name="two")
    assert g1 == g2 and hash(g1) == hash(g2)


def test_system_requires_symmetry(line):
    g = _g(line)
    with pytest.raises(InputError, match="symmetric"):
        GeneratingSystem(line, [PartialMap.identity(line), g])


def test_build_adds_identity_and_inverses(line, line_system):
    names = [m.name for m in line_system.generators]
    assert names == ["id", "g", "g^-1"]


def test_word_closure_line(line_system):
    closure = line_system.word_closure()
    e2 = set(closure.maps_at(2))
    assert PartialMap.from_dict(line_system.space, {"a": "c"}) in e2
    assert PartialMap.from_dict(line_system.space, {"a": "a", "b": "b"}) in e2
    assert set(closure.maps_at(1)) <= e2


def test_word_closure_identity_only(identity_system):
    closure = identity_system.word_closure()
    assert closure.stable_index == 1
    assert closure.stabilized_maps == [PartialMap.identity(identity_system.space)]


def test_word_closure_rotations():
    sys6 = rotation_system(6)
    closure = sys6.word_closure()
    assert closure.stable_index == 3
    assert len(closure.stabilized_maps) == 6
    assert [len(level) for level in closure.level_maps] == [3, 5, 6]


def test_closure_monotone_and_stable(line_system):
    closure = line_system.word_closure()
    for n in range(1, closure.stable_index):
        assert set(closure.maps_at(n)) <= set(closure.maps_at(n + 1))
    assert closure.maps_at(closure.stable_index) \
        == closure.maps_at(closure.stable_index + 5)


def test_truncated_closure(line_system):
    partial = line_system.word_closure(n_max=1)
    assert len(partial.level_maps) == 1


def test_germ_relation_examples(line, line_system, identity_system):
    germ = line_system.germ_relation()
    assert germ.pairs == {(i, j) for i in range(3) for j in range(3)}
    assert identity_system.germ_relation().pairs == {(i, i) for i in range(3)}

    two = rotation_system(2)
    assert two.germ_relation().pairs == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_germ_relation_is_equivalence(line_system):
    germ = line_system.germ_relation()
    assert germ.is_reflexive() and germ.is_symmetric() and germ.is_transitive()


def test_germ_witness_words_are_shortest(line_system):
    germ = line_system.germ_relation()
    assert germ.witness[(0, 0)] == ()       # identity
    assert germ.witness[(0, 1)] == ("g",)
    assert len(germ.witness[(0, 2)]) == 2   # a -> c needs two letters


def test_compose_associative_on_closure(line_system):
    maps = line_system.word_closure().stabilized_maps
    for f in maps[:6]:
        for g in maps[:6]:
            for h in maps[:6]:
                assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_closure_realizes_pseudogroup_operations(line_system):
    """Composites, inverses and restrictions of realized maps stay inside
    the germ relation (pointwise realizability)."""
    maps = line_system.word_closure().stabilized_maps
    pairs = line_system.germ_relation().pairs
    for f in maps:
        assert f.inverse().graph() <= {(b, a) for a, b in pairs}
        assert f.restrict({0, 1}).graph() <= pairs
        for g in maps[:5]:
            assert compose(f, g).graph() <= pairs


def test_compacted_system(line, line_system_cores):
    comp = compacted_system(line_system_cores)
    by_name = {m.name: m for m in comp.generators}
    assert by_name["g"].dom == {0}
    assert by_name["g^-1"].dom == {2}
    assert comp.cores[1] == by_name["g"].dom


def test_compacted_requires_cores(line_system):
    with pytest.raises(PreconditionError):
        compacted_system(line_system)


def test_compacted_noop_when_cores_equal_domains(line):
    g = PartialMap.from_dict(line, {"a": "b", "b": "c"}, name="g")
    sys_full = GeneratingSystem.build(line, [g], cores={"g": {0, 1}})
    comp = compacted_system(sys_full)
    assert set(comp.generators) == set(sys_full.generators)


def test_goodness_check(line, line_system_cores):
    ok, witness = goodness_check(line_system_cores)
    assert not ok
    assert witness is not None

    g = PartialMap.from_dict(line, {"a": "b", "b": "c"}, name="g")
    sys_full = GeneratingSystem.build(line, [g], cores={"g": {0, 1}})
    assert goodness_check(sys_full) == (True, None)

    ident = GeneratingSystem(line, [PartialMap.identity(line)],
                             cores=(line.full_set(),))
    assert goodness_check(ident) == (True, None)


def test_goodness_witness_unreachable_pair(line, line_system_cores):
    """With cores {a} and {c}, the compacted words only realize a->b and
    c->b beyond the diagonal."""
    small = compacted_system(line_system_cores).germ_relation()
    assert (1, 2) not in small.pairs
    assert (0, 1) in small.pairs


def test_separation_radius_examples(line, line_system_cores):
    assert separation_radius(line_system_cores) == 2

    g = PartialMap.from_dict(line, {"a": "b", "b": "c"}, name="g")
    total = GeneratingSystem.build(
        line, [PartialMap.from_dict(line, {"a": "b", "b": "c", "c": "a"},
                                    name="p")],
        cores={"p": {0}})
    assert is_unbounded(separation_radius(total))

    z6 = rotation_system(6).space
    q = PartialMap.from_dict(z6, {i: (i + 1) % 6 for i in range(5)}, name="q")
    sys_q = GeneratingSystem.build(z6, [q], cores={"q": {0, 1, 2}})
    assert separation_radius(sys_q) == 1


def test_dedup_soundness_against_raw_enumeration():
    """Dynamical balls computed from the deduplicated closure match the
    raw no-dedup word enumeration, over random small instances."""
    from pseudodyn.dynamics import dyn_ball
    spec = InstanceSpec(seed="dedup-module", count=12, n_points=(3, 6),
                        n_generators=(1, 2))
    for idx in range(spec.count):
        sys_i, _ = random_genome(spec, idx).build()
        closure = sys_i.word_closure()
        space = sys_i.space
        for n in (1, 2, 3):
            raw = raw_word_maps(sys_i, n)
            for xi in range(space.n):
                for eps in space.distance_grid():
                    members = dyn_ball(sys_i, xi, n, eps, closed=True,
                                       closure=closure).members
                    expected = frozenset(
                        y for y in range(space.n)
                        if all(space.dist[w.vals[xi]][w.vals[y]] <= eps
                               for w in raw
                               if w.vals[xi] is not None
                               and w.vals[y] is not None)
                    )
                    assert members == expected
