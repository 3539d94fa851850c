"""Tests for src/core/cohomology.py against brute-force oracles."""

import functools
import math

import pytest

from src.core.cohomology import (Cocycle1, Cocycle2, DualModuleSpec,
                                 add_classes2, are_cohomologous,
                                 class2_from_values, class_from_values,
                                 coboundary_witness, delta_central,
                                 dual_h1, dual_module, enumerate_cocycles,
                                 enumerate_cocycles_exhaustive, h1_enumerate,
                                 h2_abelian_enumerate, inflate_class,
                                 is_coboundary, lift_class, make_action,
                                 negate_class2, pushforward_class,
                                 quotient_action, restrict_class,
                                 restrict_class2, springer_obstruction,
                                 sub_action, trivial_action, twist_action,
                                 twist_bijection,
                                 zero_class2)
from src.core.groups import (automorphisms, center, cyclic_group,
                             dihedral_group, direct_product, heisenberg_group,
                             is_normal, quaternion_group, quotient_group,
                             subgroup_from_elements, subgroups,
                             symmetric_group_3)
from src.utils.errors import (ActionMismatch, BudgetExceeded, ChiNotHom,
                              CocycleInvalid, NotAbelian, NotCentral,
                              NotCharacteristic)
from src.utils.settings import Settings, use_settings
from tests.conftest import negation_perms
from tests.test_utils import (automorphism_actions, brute_force_h1,
                              brute_force_h2_count, cyclic_cocycles,
                              cyclic_cohomology_orders, power_action,
                              unit_action)


def _herbrand_battery():
    # C_m acting on Z/n through σ^k ↦ multiplication by u^k
    return [
        (m, n, u)
        for m in (2, 3, 4, 6)
        for n in range(2, 10)
        for u in range(1, n)
        if math.gcd(u, n) == 1 and pow(u, m, n) == 1
    ]


HERBRAND_CASES = _herbrand_battery()
TINY_CASES = [(2, 2, 1), (2, 3, 1), (2, 3, 2), (2, 4, 3), (2, 5, 4), (3, 2, 1), (3, 3, 1)]


def test_h1_trivial_action_counts_homs(c2, c3, s3):
    assert len(h1_enumerate(trivial_action(c2, c2))) == 2
    assert len(h1_enumerate(trivial_action(c3, c3))) == 3
    # Hom(C2, S3)/conj: trivial and the reflections
    assert len(h1_enumerate(trivial_action(c2, s3))) == 2
    # Hom(C3, S3)/conj: r and r² are conjugate
    assert len(h1_enumerate(trivial_action(c3, s3))) == 2


def test_h1_and_h2_of_inversion(c2_on_c3_by_inversion):
    assert len(h1_enumerate(c2_on_c3_by_inversion)) == 1
    assert len(h2_abelian_enumerate(c2_on_c3_by_inversion)) == 1


def test_h2_trivial_c2_on_z2_and_z4(c2, c4):
    assert len(h2_abelian_enumerate(trivial_action(c2, c2))) == 2
    assert len(h2_abelian_enumerate(trivial_action(c2, c4))) == 2


@pytest.mark.parametrize("m, n, u", HERBRAND_CASES)
def test_cyclic_groups_have_equal_h1_and_h2(m, n, u):
    ctx = unit_action(m, n, u)
    assert len(h1_enumerate(ctx)) == len(h2_abelian_enumerate(ctx))


@pytest.mark.parametrize("m, n, u", TINY_CASES)
def test_h2_matches_full_cochain_scan(m, n, u):
    ctx = unit_action(m, n, u)
    assert len(h2_abelian_enumerate(ctx)) == brute_force_h2_count(ctx)


def test_fast_enumeration_matches_exhaustive(s3, q8, c2, c4, heis27):
    cases = [
        trivial_action(c2, s3),
        trivial_action(c4, q8),
        trivial_action(c2, heis27),
        unit_action(4, 5, 2),
    ]
    for ctx in cases:
        assert sorted(enumerate_cocycles(ctx)) == sorted(enumerate_cocycles_exhaustive(ctx))
        fast = {c.values for c in h1_enumerate(ctx)}
        assert fast == brute_force_h1(ctx)


def test_threads_do_not_change_enumeration(c4, q8):
    ctx = trivial_action(c4, q8)
    single = enumerate_cocycles(ctx)
    with use_settings(Settings(threads=4)):
        assert enumerate_cocycles(ctx) == single


def test_cocycle_validation(c2, c3):
    ctx = trivial_action(c3, c3)
    assert Cocycle1(ctx, (0, 1, 2)).values == (0, 1, 2)
    with pytest.raises(CocycleInvalid):
        Cocycle1(ctx, (0, 1, 1))
    with pytest.raises(CocycleInvalid):
        Cocycle1(trivial_action(c2, c2), (1, 0))
    with pytest.raises(CocycleInvalid):
        Cocycle1(ctx, (0, 1))


def test_make_action_rejects_non_actions(c2, c3, s3):
    with pytest.raises(ActionMismatch):
        make_action(c2, c3, [[0, 1, 2]])
    with pytest.raises(ActionMismatch):
        make_action(c2, c3, [[0, 2, 1], [0, 2, 1]])
    # a transposition of S3's elements is not an automorphism
    with pytest.raises(ActionMismatch):
        make_action(c2, s3, [list(range(6)), [0, 2, 1, 3, 4, 5]])


def test_are_cohomologous_returns_witness(c2, s3):
    ctx = trivial_action(c2, s3)
    reflections = [x for x in range(1, 6) if int(s3.element_orders[x]) == 2]
    a = Cocycle1(ctx, (0, reflections[0]))
    b = Cocycle1(ctx, (0, reflections[1]))
    ok, g = are_cohomologous(a, b)
    assert ok
    # b_σ = g⁻¹·a_σ·σ(g) with σ acting trivially
    assert s3.mul(s3.mul(s3.inv(g), a.values[1]), g) == b.values[1]
    ok, g = are_cohomologous(a, Cocycle1(ctx, (0, 0)))
    assert not ok and g is None


def test_canonical_representative_is_class_invariant(c2, s3):
    ctx = trivial_action(c2, s3)
    reps = {class_from_values(ctx, (0, x)).values for x in range(6) if int(s3.element_orders[x]) == 2}
    assert len(reps) == 1


def test_inflation_restriction_exactness(c6, c2):
    N = subgroup_from_elements(c6, [2, 4])
    Q, proj = quotient_group(c6, N)
    ctx = trivial_action(c6, c2)
    inflated = [inflate_class(c, proj, ctx) for c in h1_enumerate(trivial_action(Q, c2))]
    assert len({c.values for c in inflated}) == len(inflated) == 2
    killed = [c for c in h1_enumerate(ctx) if restrict_class(c, N).is_trivial]
    assert {c.values for c in killed} == {c.values for c in inflated}


def test_inflation_checks_the_action(c6, c2, c3):
    N = subgroup_from_elements(c6, [2, 4])
    Q, proj = quotient_group(c6, N)
    cls = h1_enumerate(trivial_action(Q, c3))[0]
    wrong = make_action(c6, c3, [[0, 1, 2] if k % 2 == 0 else [0, 2, 1] for k in range(6)])
    with pytest.raises(ActionMismatch):
        inflate_class(cls, proj, wrong)


def test_twist_bijection_roundtrip(c2, s3, c3):
    for ctx in (trivial_action(c2, s3), trivial_action(c3, s3)):
        for c in h1_enumerate(ctx):
            bij = twist_bijection(ctx, c.representative)
            twisted_classes = h1_enumerate(bij.twisted)
            assert len(twisted_classes) == len(h1_enumerate(ctx))
            images = {bij.forward(t).values for t in twisted_classes}
            assert images == {x.values for x in h1_enumerate(ctx)}
            for t in twisted_classes:
                assert bij.inverse(bij.forward(t)) == t
            # the base point goes to the trivial class of the twist
            assert bij.inverse(c).is_trivial


def test_twist_action_by_conjugation(c2, s3, c3):
    ctx = trivial_action(c2, s3)
    transposition = [x for x in range(6) if int(s3.element_orders[x]) == 2][0]
    twisted = twist_action(ctx, Cocycle1(ctx, (0, transposition)))
    assert twisted.perms[1] == tuple(s3.conj(transposition, x) for x in range(6))
    assert twist_action(ctx, Cocycle1(ctx, (0, 0))) == ctx
    abelian = trivial_action(c2, c3)
    for c in enumerate_cocycles(abelian):
        assert twist_action(abelian, Cocycle1(abelian, c)) == abelian


def test_twist_action_through_an_operator(c2, c3, c2_on_c3_by_inversion):
    base = trivial_action(c2, c3)
    signs = trivial_action(c2, c2)
    twisted = twist_action(base, Cocycle1(signs, (0, 1)), operator=lambda h: negation_perms(3)[h])
    assert twisted == c2_on_c3_by_inversion
    with pytest.raises(CocycleInvalid):
        twist_action(base, Cocycle1(trivial_action(c3, c3), (0, 1, 2)))


def test_springer_obstruction_z9_to_z3(c3, c9):
    ctx = trivial_action(c3, c9)
    A = subgroup_from_elements(c9, [3, 6])
    h_ctx, _ = quotient_action(ctx, A)
    for gamma_cls in h1_enumerate(h_ctx):
        obstruction = springer_obstruction(gamma_cls, ctx, A)
        lifted = lift_class(gamma_cls, ctx, A)
        assert obstruction.is_zero == gamma_cls.is_trivial
        assert (lifted is not None) == obstruction.is_zero


def test_springer_criterion_on_heisenberg(c3, heis27):
    ctx = trivial_action(c3, heis27)
    Z = center(heis27)
    h_ctx, proj = quotient_action(ctx, Z)
    images = {pushforward_class(c, proj, h_ctx).values for c in h1_enumerate(ctx)}
    for gamma_cls in h1_enumerate(h_ctx):
        lifts = springer_obstruction(gamma_cls, ctx, Z).is_zero
        assert lifts == (gamma_cls.values in images)
        lifted = lift_class(gamma_cls, ctx, Z)
        if lifted is not None:
            assert tuple(proj(v) for v in lifted.values) == gamma_cls.values


def test_springer_requires_stable_subgroup(c2, s3):
    ctx = trivial_action(c2, s3)
    reflection = subgroup_from_elements(s3, [x for x in range(1, 6) if int(s3.element_orders[x]) == 2][:1])
    with pytest.raises(NotCharacteristic):
        quotient_action(ctx, reflection)


def test_delta_central_requires_central_subgroup(c2, s3):
    ctx = trivial_action(c2, s3)
    rotations = subgroup_from_elements(s3, [x for x in range(1, 6) if int(s3.element_orders[x]) == 3])
    psi = h1_enumerate(trivial_action(c2, s3))[0]
    with pytest.raises(NotCentral):
        delta_central(psi, ctx, rotations)


def test_h2_class_arithmetic(c2):
    ctx = trivial_action(c2, c2)
    zero = zero_class2(ctx)
    other = [c for c in h2_abelian_enumerate(ctx) if not c.is_zero][0]
    assert add_classes2(other, other) == zero
    assert negate_class2(other) == other
    assert add_classes2(zero, other) == other
    assert not is_coboundary(other.representative)
    assert coboundary_witness(Cocycle2(ctx, (0, 0, 0, 0))) == (0, 0)


def test_2_cocycle_validation(c3):
    ctx = trivial_action(c3, c3)
    with pytest.raises(CocycleInvalid):
        Cocycle2(ctx, (0, 0, 0, 0, 1, 0, 0, 0, 0))


def test_restrict_class2_to_trivial_subgroup(c2):
    ctx = trivial_action(c2, c2)
    for c in h2_abelian_enumerate(ctx):
        assert restrict_class2(c, c2.trivial_subgroup()).is_zero


def test_h2_rejects_nonabelian_targets(c2, s3):
    with pytest.raises(NotAbelian):
        h2_abelian_enumerate(trivial_action(c2, s3))


def test_bounds_are_enforced(c3):
    with use_settings(Settings(max_gamma=2)):
        with pytest.raises(BudgetExceeded):
            h1_enumerate(trivial_action(c3, cyclic_group(5)))


def test_tighter_budget_applies_after_a_cached_call(klein, c3):
    ctx = trivial_action(klein, c3)
    assert len(h1_enumerate(ctx)) == 1
    assert len(h2_abelian_enumerate(ctx)) == 1
    with use_settings(Settings(budget=2)):
        with pytest.raises(BudgetExceeded):
            h1_enumerate(ctx)
        with pytest.raises(BudgetExceeded):
            h2_abelian_enumerate(ctx)
    with use_settings(Settings(max_order=2)):
        with pytest.raises(BudgetExceeded):
            h1_enumerate(ctx)
    assert len(h1_enumerate(ctx)) == 1


def test_class2_from_values_canonicalises(c2):
    ctx = trivial_action(c2, c2)
    assert class2_from_values(ctx, (0, 0, 0, 0)).is_zero


def test_sub_action_restricts_to_stable_subgroup(c2, c6):
    ctx = make_action(c2, c6, [list(range(6)), [(-x) % 6 for x in range(6)]])
    A = subgroup_from_elements(c6, [2, 4])
    sub = sub_action(ctx, A)
    assert sub.target.order == 3
    assert not sub.is_trivial


def test_dual_module_of_trivial_z3(c2, c3):
    spec = DualModuleSpec(trivial_action(c2, c3), (1, 2), 3)
    dual = dual_module(spec)
    assert dual.target.order == 3
    assert not dual.is_trivial
    assert len(dual_h1(spec)) == 1
    with pytest.raises(ChiNotHom):
        dual_module(DualModuleSpec(trivial_action(c2, c3), (1, 0), 3))


# ---------------------------------------------------------------------------
# batteries over small acting and coefficient groups


def _klein():
    return direct_product(cyclic_group(2), cyclic_group(2))


ACTING_GROUPS = {
    **{f"C{m}": functools.partial(cyclic_group, m) for m in range(2, 13)},
    "C2xC2": _klein,
    "S3": symmetric_group_3,
}
COEFFICIENT_GROUPS = {
    "C4": functools.partial(cyclic_group, 4),
    "C9": functools.partial(cyclic_group, 9),
    "S3": symmetric_group_3,
    "D4": functools.partial(dihedral_group, 4),
    "Q8": quaternion_group,
    "Heis27": functools.partial(heisenberg_group, 3),
}
CYCLIC_MODULES = {
    "C2": functools.partial(cyclic_group, 2),
    "C3": functools.partial(cyclic_group, 3),
    "C4": functools.partial(cyclic_group, 4),
    "C5": functools.partial(cyclic_group, 5),
    "C8": functools.partial(cyclic_group, 8),
    "C9": functools.partial(cyclic_group, 9),
    "C2xC2": _klein,
    "C2xC4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
    "C3xC3": lambda: direct_product(cyclic_group(3), cyclic_group(3)),
    "C4xC4": lambda: direct_product(cyclic_group(4), cyclic_group(4)),
}
# coordinate permutations of (Z/2)^4 of orders 2, 3, 4 and 2
COORDINATE_PERMUTATIONS = ((1, 0, 2, 3), (1, 2, 0, 3), (1, 2, 3, 0), (1, 0, 3, 2))
EXHAUSTIVE_LIMIT = 5000


def _module_actions(m, target):
    """C_m acting through one automorphism per conjugacy class of order dividing m."""
    aut = automorphisms(target)
    A = aut.aut
    reps = sorted({
        min(A.conj(b, a) for b in range(A.order))
        for a in range(A.order)
        if m % int(A.element_orders[a]) == 0
    })
    return [power_action(m, target, aut.perms[a].tolist()) for a in reps[:4]]


def _coordinate_actions(m, target):
    def move(x, positions):
        y = 0
        for i, p in enumerate(positions):
            y |= ((x >> (3 - i)) & 1) << (3 - p)
        return y

    actions = [power_action(m, target, list(range(16)))]
    for positions in COORDINATE_PERMUTATIONS:
        perm = [move(x, positions) for x in range(16)]
        order = 1
        power = perm
        while any(power[x] != x for x in range(16)):
            power = [perm[x] for x in power]
            order += 1
        if m % order == 0:
            actions.append(power_action(m, target, perm))
    return actions


def _check_cyclic_module(ctx):
    h1, h2 = cyclic_cohomology_orders(ctx)
    assert h1 == h2
    cocycles = cyclic_cocycles(ctx)
    assert enumerate_cocycles(ctx) == cocycles
    assert len(h1_enumerate(ctx)) == h1
    assert len(h2_abelian_enumerate(ctx)) == h2
    if ctx.target.order ** (ctx.gamma.order - 1) <= EXHAUSTIVE_LIMIT:
        assert enumerate_cocycles_exhaustive(ctx) == cocycles


@pytest.mark.parametrize("name", sorted(CYCLIC_MODULES))
@pytest.mark.parametrize("m", range(2, 13))
def test_cyclic_cohomology_matches_norm_formulas(m, name):
    for ctx in _module_actions(m, CYCLIC_MODULES[name]()):
        _check_cyclic_module(ctx)


@pytest.mark.parametrize("m", range(2, 9))
def test_cyclic_cohomology_of_coordinate_permutations(m):
    target = direct_product(*[cyclic_group(2)] * 4)
    for ctx in _coordinate_actions(m, target):
        _check_cyclic_module(ctx)


def test_cyclic_battery_covers_two_hundred_modules():
    total = sum(
        len(_module_actions(m, factory()))
        for m in range(2, 13)
        for factory in CYCLIC_MODULES.values()
    )
    target = direct_product(*[cyclic_group(2)] * 4)
    total += sum(len(_coordinate_actions(m, target)) for m in range(2, 9))
    assert total >= 200


def _check_inflation_restriction(ctx, N):
    gamma, G = ctx.gamma, ctx.target
    Q, proj = quotient_group(gamma, N)
    fixed = subgroup_from_elements(
        G, [x for x in range(G.order) if all(ctx.act(n, x) == x for n in N)]
    )
    local = fixed.local_index
    reps = [proj.preimages(q)[0] for q in range(Q.order)]
    q_ctx = make_action(
        Q, fixed.group, [[local[ctx.act(r, x)] for x in fixed.elements] for r in reps]
    )
    base = h1_enumerate(q_ctx)
    images = {
        pushforward_class(inflate_class(c, proj), fixed.embedding, ctx).values for c in base
    }
    assert len(images) == len(base)
    kernel = {c.values for c in h1_enumerate(ctx) if restrict_class(c, N).is_trivial}
    assert images == kernel


@pytest.mark.parametrize("g_name", sorted(COEFFICIENT_GROUPS))
@pytest.mark.parametrize("gamma_name", sorted(ACTING_GROUPS))
def test_inflation_restriction_sequence_is_exact(gamma_name, g_name):
    gamma = ACTING_GROUPS[gamma_name]()
    G = COEFFICIENT_GROUPS[g_name]()
    normals = [N for N in subgroups(gamma) if 1 < N.order < gamma.order and is_normal(gamma, N)]
    for ctx in automorphism_actions(gamma, G):
        for N in normals:
            _check_inflation_restriction(ctx, N)


@pytest.mark.parametrize("g_name", sorted(COEFFICIENT_GROUPS))
@pytest.mark.parametrize("gamma_name", sorted(ACTING_GROUPS))
def test_twisting_is_a_bijection_based_at_the_class(gamma_name, g_name):
    gamma = ACTING_GROUPS[gamma_name]()
    G = COEFFICIENT_GROUPS[g_name]()
    for ctx in automorphism_actions(gamma, G):
        classes = h1_enumerate(ctx)
        everything = {c.values for c in classes}
        for c in classes:
            bij = twist_bijection(ctx, c.representative)
            twisted = h1_enumerate(bij.twisted)
            assert len(twisted) == len(classes)
            assert {bij.forward(t).values for t in twisted} == everything
            for t in twisted:
                assert bij.inverse(bij.forward(t)) == t
            base = class_from_values(bij.twisted, (0,) * gamma.order)
            assert bij.forward(base).values == c.values
            assert bij.inverse(c).is_trivial


SPRINGER_ACTING = ("C2", "C3", "C4", "C2xC2")
SPRINGER_TARGETS = {
    **COEFFICIENT_GROUPS,
    "C2xC4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
}


def _stable_abelian_normals(ctx):
    G = ctx.target
    return [
        A for A in subgroups(G)
        if 1 < A.order < G.order
        and is_normal(G, A)
        and A.group.is_abelian
        and all(ctx.act(s, x) in A.element_set for s in range(ctx.gamma.order) for x in A)
    ]


@pytest.mark.parametrize("g_name", sorted(SPRINGER_TARGETS))
@pytest.mark.parametrize("gamma_name", SPRINGER_ACTING)
def test_obstruction_vanishes_exactly_on_the_image(gamma_name, g_name):
    gamma = ACTING_GROUPS[gamma_name]()
    G = SPRINGER_TARGETS[g_name]()
    for ctx in automorphism_actions(gamma, G, limit=3):
        for A in _stable_abelian_normals(ctx):
            h_ctx, proj = quotient_action(ctx, A)
            images = {pushforward_class(c, proj, h_ctx).values for c in h1_enumerate(ctx)}
            for cls in h1_enumerate(h_ctx):
                vanishes = springer_obstruction(cls, ctx, A).is_zero
                lifted = lift_class(cls, ctx, A)
                if vanishes != (cls.values in images):
                    raise AssertionError(f"obstruction of {cls.values} disagrees with the image")
                assert (lifted is not None) == vanishes
                if lifted is not None:
                    assert tuple(proj(v) for v in lifted.values) == cls.values
