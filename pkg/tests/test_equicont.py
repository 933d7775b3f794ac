from fractions import Fraction

import pytest

from pseudodyn import (CapabilityError, FiniteMeasure, FiniteMetricSpace,
                       GeneratingSystem, PartialMap, bowen_ball,
                       equicontinuity_modulus, expansiveness_verdict,
                       is_unbounded, local_agreement_radius,
                       no_expansive_certificate_good,
                       no_expansive_certificate_group)
from pseudodyn.equicont import (modulus_at,
                                sweep_measures_never_weakly_expansive)

from conftest import cyclic_space, rotation_system


def closure_maps(sys):
    return sys.word_closure().stabilized_maps


def test_isometries_certify_identity_modulus(z6_rotations):
    cert = equicontinuity_modulus(closure_maps(z6_rotations),
                                  z6_rotations.space)
    assert cert.isometric
    assert all(cert.table[e] == e for e in z6_rotations.space.distance_grid())
    assert cert.audit(closure_maps(z6_rotations), z6_rotations.space)


def test_identity_only_modulus(line, identity_system):
    cert = equicontinuity_modulus(closure_maps(identity_system), line)
    assert all(cert.table[e] == e for e in line.distance_grid())


def test_distorting_map_shrinks_modulus():
    """d(a,b) = 1 but the image pair sits at distance 2: the scale-2 modulus
    drops to 1 with that witness pair."""
    vline = FiniteMetricSpace(["a", "b", "c"], [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    g = PartialMap.from_dict(vline, {"a": "b", "b": "c"}, name="g")
    sysv = GeneratingSystem.build(vline, [g])
    cert = equicontinuity_modulus(closure_maps(sysv), vline)
    assert cert.table[Fraction(2)] == 1
    wmap, wx, wy = cert.witnesses[Fraction(2)]
    assert {wx, wy} == {"a", "b"}
    assert not cert.isometric
    assert cert.audit(closure_maps(sysv), vline)


def test_group_certificate_rotations(z6_rotations):
    rep = no_expansive_certificate_group(z6_rotations, 1)
    assert rep.delta == 1
    assert rep.inclusion_ok
    # B(x, 1) = {x} sits inside the three-point Bowen ball at every center
    for x in range(6):
        assert bowen_ball(z6_rotations, x, 1).members \
            == {(x - 1) % 6, x, (x + 1) % 6}


def test_group_certificate_trivial_group(line, identity_system):
    rep = no_expansive_certificate_group(identity_system, 1)
    assert rep.inclusion_ok  # B(x, delta) subset of B[x, rho]


def test_group_certificate_requires_total(line_system):
    with pytest.raises(CapabilityError, match="total"):
        no_expansive_certificate_group(line_system, 1)


def test_group_conclusion_cross_checked_with_measures(z6_rotations):
    import random
    rng = random.Random(0)
    space = z6_rotations.space
    measures = [FiniteMeasure.uniform(space)]
    for _ in range(20):
        raw = [rng.randint(1, 6) for _ in range(6)]
        total = sum(raw)
        measures.append(FiniteMeasure(space, [Fraction(v, total) for v in raw]))
    assert sweep_measures_never_weakly_expansive(z6_rotations, measures)
    assert expansiveness_verdict(FiniteMeasure.uniform(space),
                                 z6_rotations, 1).ball_measures[0] \
        == Fraction(1, 2)


def test_agreement_radius_unbounded_with_ambient_closure():
    z6 = cyclic_space(6)
    q = PartialMap.from_dict(z6, {i: (i + 1) % 6 for i in range(5)}, name="q")
    sys_q = GeneratingSystem.build(z6, [q], cores={"q": {0, 1, 2}})
    rep = local_agreement_radius(sys_q)
    assert is_unbounded(rep.value)


def test_agreement_radius_full_group_closure():
    """Core-restricted rotations extend to the full rotations, so any
    reference family containing those is enough."""
    z6 = cyclic_space(6)
    q = PartialMap.from_dict(z6, {i: (i + 1) % 6 for i in range(5)}, name="q")
    sys_q = GeneratingSystem.build(z6, [q], cores={"q": {0, 1, 2}})
    rotations = closure_maps(rotation_system(6))
    rep = local_agreement_radius(sys_q, rotations)
    assert is_unbounded(rep.value)


def test_agreement_radius_counterexample_with_poor_family():
    """A reference family missing the needed germs is flagged."""
    z6 = cyclic_space(6)
    q = PartialMap.from_dict(z6, {i: (i + 1) % 6 for i in range(5)}, name="q")
    sys_q = GeneratingSystem.build(z6, [q], cores={"q": {0, 1, 2}})
    rep = local_agreement_radius(sys_q, [PartialMap.identity(z6)])
    assert rep.value is None and rep.counterexample is not None


def test_good_certificate_rotations():
    z6 = cyclic_space(6)
    q = PartialMap.from_dict(z6, {i: (i + 1) % 6 for i in range(5)}, name="q")
    sys_q = GeneratingSystem.build(z6, [q], cores={"q": {0, 1, 2}})
    rep = no_expansive_certificate_good(sys_q)
    assert rep.all_ok
    assert [r.inclusion_ok for r in rep.rows] == [True] * len(rep.rows)
    wide = [r for r in rep.rows if r.rho >= z6.diameter()]
    assert wide and all(r.inclusion_ok for r in wide)


def test_modulus_at_direct(z6_rotations):
    maps = closure_maps(z6_rotations)
    assert modulus_at(maps, z6_rotations.space, 2) == 2
    assert is_unbounded(modulus_at(maps, z6_rotations.space, 4))
