"""Tests for src/core/global_datum.py: validation, localization and the solvers."""

import itertools

import pytest

from src.core.cohomology import (DualModuleSpec, class_from_values,
                                 dual_module, h1_enumerate, make_action,
                                 restrict_action, restrict_class,
                                 trivial_action)
from src.core.global_datum import (Infeasible, NeutralityCertificate,
                                   Obstruction, PlaceSpec, Solution,
                                   control_splitting, datum_validate,
                                   devissage_solve, hasse_solve,
                                   injectivity_on_P, is_simple_module,
                                   localize, make_datum, make_targets,
                                   minimal_submodule, p_places, sha,
                                   simple_module_solve, solve_by_filter,
                                   weak_approx_check)
from src.core.groups import (automorphisms, cyclic_group, dihedral_group,
                             direct_product, heisenberg_group, is_cyclic,
                             make_hom, quaternion_group,
                             subgroup_from_elements, subgroups)
from src.core.liens import h2_lien_enumerate, is_neutral, make_lien, split_class, transform
from src.utils.errors import (ChiNotHom, CohomologyError, ContextMismatch,
                              HypothesesNotMet, NotHomomorphism, NotNormal,
                              NotSimple, PlaceUnknown)
from tests.conftest import negation_perms, place


# ---------------------------------------------------------------------------
# Γ = C2 × C2 × C3 with (a, b, c) at 6a + 3b + c, n = 3, χ(a, b, c) = 2^b.
# n_prime = {a = 0} acts trivially, n_L = {a = b = 0}.


def _battery_gamma():
    return direct_product(cyclic_group(2), cyclic_group(2), cyclic_group(3))


def _battery_datum(with_wild_place):
    gamma = _battery_gamma()
    chi = [pow(2, (x // 3) % 2, 3) for x in range(12)]
    places = []
    for h in subgroups(gamma):
        if not is_cyclic(h.group):
            continue
        gen = max(h.elements, key=lambda x: int(gamma.element_orders[x]))
        name = "u" + "_".join(str(x) for x in h.elements)
        places.append(place(gamma, name, [gen], frobenius=gen, q=chi[gen]))
    # totally ramified P-place: Γ_v = I_v = n_L, q ≡ 1 mod 3
    places.append(place(gamma, "ram", [1], inertia=[1], frobenius=0, q=1, tau=1))
    if with_wild_place:
        # ramified place outside P: Γ_v = I_v = ⟨(1, 0, 1)⟩
        places.append(place(gamma, "wild", [7], inertia=[7], frobenius=0, q=1, tau=7))
    return make_datum(
        gamma,
        3,
        chi,
        subgroup_from_elements(gamma, range(6)),
        subgroup_from_elements(gamma, [0, 1, 2]),
        places,
    )


def _battery_actions():
    gamma = _battery_gamma()
    c3 = cyclic_group(3)
    inversion = make_action(gamma, c3, [negation_perms(3)[x // 6] for x in range(12)])
    plane = direct_product(c3, c3)
    swap = [3 * (x % 3) + x // 3 for x in range(9)]
    swapped = make_action(gamma, plane, [list(range(9)) if x < 6 else swap for x in range(12)])
    return {
        "inversion": inversion,
        "swap": swapped,
        "heisenberg": trivial_action(gamma, heisenberg_group(3)),
    }


BATTERY = [
    (kind, wild) for kind in ("inversion", "swap", "heisenberg") for wild in (False, True)
]


def test_battery_datum_passes_validation():
    d = _battery_datum(True)
    for action in _battery_actions().values():
        report = datum_validate(d, action)
        assert report.passed, report.to_dict()
        assert report.checks["chebotarev"].ok
    assert p_places(d) == ("u0", "u0_1_2", "ram")


@pytest.mark.parametrize("kind, wild", BATTERY)
def test_devissage_agrees_with_exhaustive_filter(kind, wild):
    d = _battery_datum(wild)
    action = _battery_actions()[kind]
    target_place = d.place("u0_1_2")
    local_ctx = restrict_action(action, target_place.decomposition)
    for beta in h1_enumerate(local_ctx):
        targets = make_targets(d, action, {"u0_1_2": beta})
        expected = solve_by_filter(d, action, targets)
        result = devissage_solve(d, action, targets)
        if expected:
            assert isinstance(result, Solution), result.trace
            assert result.cls in expected
            assert restrict_class(result.cls, target_place.decomposition) == beta
        else:
            assert isinstance(result, Infeasible)


PLACE_PAIRS = (
    ("u0_1_2", "ram"),
    ("u0_1_2_3_4_5", "u0_6"),
    ("u0_1_2_9_10_11", "ram"),
    ("u0_1_2_6_7_8", "wild"),
)
MULTI_PLACE_CASES = [
    (kind, wild, pair)
    for kind in ("inversion", "swap", "heisenberg")
    for wild in (False, True)
    for pair in PLACE_PAIRS
    if wild or "wild" not in pair
]


def _check_local_conditions(d, cls, wanted):
    """Agreement on the targeted places and tame ramification elsewhere."""
    gamma = d.gamma
    allowed = set(p_places(d))
    for v in d.places:
        # every decomposition group here is cyclic, so the cyclic condition holds
        assert is_cyclic(v.decomposition.group)
        if v.name in wanted:
            assert restrict_class(cls, v.decomposition) == wanted[v.name]
            continue
        unramified = restrict_class(cls, v.inertia).is_trivial
        if v.name not in allowed:
            assert unramified, v.name
            continue
        covering = any(
            restrict_class(cls, h).is_trivial
            and len({gamma.mul(x, y) for x in h for y in v.inertia}) == v.decomposition.order
            for h in subgroups(gamma)
            if h.is_subset_of(v.decomposition)
        )
        assert unramified or covering, v.name


@pytest.mark.parametrize("kind, wild, pair", MULTI_PLACE_CASES)
def test_devissage_with_targets_at_two_places(kind, wild, pair):
    d = _battery_datum(wild)
    action = _battery_actions()[kind]
    local = [h1_enumerate(restrict_action(action, d.place(name).decomposition)) for name in pair]
    for combo in itertools.product(*local):
        wanted = dict(zip(pair, combo))
        targets = make_targets(d, action, wanted)
        expected = solve_by_filter(d, action, targets)
        for c in expected:
            _check_local_conditions(d, c, wanted)
        result = devissage_solve(d, action, targets)
        if not expected:
            assert isinstance(result, Infeasible)
            continue
        assert isinstance(result, Solution), result.trace
        assert result.cls in expected
        _check_local_conditions(d, result.cls, wanted)


def test_multi_place_battery_has_twenty_data():
    assert len(MULTI_PLACE_CASES) >= 20


def test_uncontrolled_candidates_are_marked_in_the_trace(s3):
    d = _battery_datum(False)
    action = trivial_action(_battery_gamma(), s3)
    local_ctx = restrict_action(action, d.place("u0_3").decomposition)
    reflection = [c for c in h1_enumerate(local_ctx) if not c.is_trivial][0]
    targets = make_targets(d, action, {"u0_3": reflection})
    result = devissage_solve(d, action, targets, strict=False)
    assert isinstance(result, Solution), result.trace
    assert result.cls in solve_by_filter(d, action, targets)
    # quotient classes meeting the target move (0, 1, 0), the only direction with χ ≠ 1
    assert any("deferred" in line for line in result.trace), result.trace


def test_wild_place_forces_trivial_local_condition():
    action = _battery_actions()["heisenberg"]
    tame, wild = _battery_datum(False), _battery_datum(True)
    no_targets = make_targets(tame, action, {})
    assert len(solve_by_filter(tame, action, no_targets)) > 1
    assert [c.is_trivial for c in solve_by_filter(wild, action, no_targets)] == [True]


def test_simple_module_solver_matches_filter():
    d = _battery_datum(True)
    action = _battery_actions()["inversion"]
    assert is_simple_module(action)
    targets = make_targets(d, action, {})
    result = simple_module_solve(d, action, targets)
    assert isinstance(result, Solution)
    assert result.cls in solve_by_filter(d, action, targets)
    with pytest.raises(NotSimple):
        simple_module_solve(d, _battery_actions()["heisenberg"], targets)


def test_minimal_submodule_of_swapped_plane():
    action = _battery_actions()["swap"]
    sub = minimal_submodule(action)
    assert sub.order == 3
    assert not is_simple_module(action)


def test_control_splitting_on_heisenberg():
    d = _battery_datum(False)
    action = _battery_actions()["heisenberg"]
    for alpha in h1_enumerate(action):
        report = control_splitting(d, action, alpha, [3])
        # χ(0, 1, 0) = 2 survives in every kernel
        assert report.ok
        assert 3 in report.delta_prime.elements


def test_injectivity_report_on_p_places():
    d = _battery_datum(False)
    action = _battery_actions()["inversion"]
    spec = DualModuleSpec(action, d.chi, 3)
    report = injectivity_on_P(d, spec)
    assert report.p_places == ("u0", "u0_1_2", "ram")
    unseen = [
        c for c in h1_enumerate(dual_module(spec))
        if not c.is_trivial
        and all(restrict_class(c, d.place(name).decomposition).is_trivial for name in report.p_places)
    ]
    assert report.injective == (not unseen)


# ---------------------------------------------------------------------------
# Klein four group with the trivial module Z/2


def test_klein_sha_and_weak_approximation(klein_datum, klein_trivial_c2):
    assert len(h1_enumerate(klein_trivial_c2)) == 4
    assert len(sha(klein_datum, klein_trivial_c2, 1)) == 1
    assert len(sha(klein_datum, klein_trivial_c2, 2)) == 1
    assert weak_approx_check(klein_datum, klein_trivial_c2, ["v1", "v2"]).surjective
    report = weak_approx_check(klein_datum, klein_trivial_c2, ["v1", "v2", "v3"])
    assert not report.surjective
    assert [name for name, _ in report.missing] == ["v1", "v2", "v3"]


def test_klein_validation_fails_on_coprimality(klein_datum, klein_trivial_c2):
    report = datum_validate(klein_datum, klein_trivial_c2)
    assert not report.passed
    assert report.failed() == ["coprimality"]
    assert report.checks["coprimality"].detail["primes"] == [2]
    with pytest.raises(HypothesesNotMet):
        devissage_solve(klein_datum, klein_trivial_c2, make_targets(klein_datum, klein_trivial_c2, {}))


def test_localize_flags(klein_datum, klein_trivial_c2):
    c = class_from_values(klein_trivial_c2, (0, 1, 0, 1))
    local = localize(klein_datum, klein_trivial_c2, c, "v1")
    assert local.cls.values == (0, 1)
    assert local.flags.unramified and local.flags.cyclic
    assert local.to_dict()["place"] == "v1"
    with pytest.raises(PlaceUnknown):
        localize(klein_datum, klein_trivial_c2, c, "nowhere")


def test_context_mismatch(klein_datum, c3, c2):
    with pytest.raises(ContextMismatch):
        datum_validate(klein_datum, trivial_action(c3, c2))


def test_c3_datum_has_no_p_places(c3_datum):
    assert p_places(c3_datum) == ()


# ---------------------------------------------------------------------------
# make_datum errors


def test_make_datum_rejects_bad_inputs(c2, s3):
    trivial = c2.trivial_subgroup()
    with pytest.raises(ChiNotHom):
        make_datum(c2, 3, [2, 2], trivial, trivial)
    reflection = [h for h in subgroups(s3) if h.order == 2][0]
    with pytest.raises(NotNormal):
        make_datum(s3, 2, [1] * 6, reflection, s3.trivial_subgroup())
    with pytest.raises(HypothesesNotMet):
        make_datum(c2, 3, [1, 2], c2.all_elements(), c2.all_elements())
    with pytest.raises(HypothesesNotMet):
        make_datum(c2, 3, [1, 2], trivial, trivial, [place(c2, "v", [0]), place(c2, "v", [0])])
    with pytest.raises(HypothesesNotMet):
        make_datum(
            c2, 3, [1, 2], trivial, trivial, [PlaceSpec("v", "finite", trivial, trivial, 1)]
        )


# ---------------------------------------------------------------------------
# Hasse principle: Γ = C2, G = Z/2, n = 3


@pytest.fixture
def hasse_setup(c2):
    lien = make_lien(c2, c2, [0, 0])
    d = make_datum(c2, 3, [1, 2], c2.all_elements(), c2.trivial_subgroup(), [place(c2, "v", [0])])
    return d, lien


def test_split_class_is_certified_neutral(hasse_setup):
    d, lien = hasse_setup
    eta = [e for e in h2_lien_enumerate(lien) if is_neutral(e)[0]][0]
    result = hasse_solve(d, lien, eta)
    assert isinstance(result, NeutralityCertificate)
    assert transform(eta, result.h) == split_class(lien, result.hom)
    assert result.to_dict()["status"] == "neutral"


def test_cyclic_class_is_obstructed(hasse_setup):
    d, lien = hasse_setup
    eta = [e for e in h2_lien_enumerate(lien) if not is_neutral(e)[0]][0]
    result = hasse_solve(d, lien, eta)
    assert isinstance(result, Obstruction)
    assert any(result.xi)


def test_hasse_requires_local_neutrality(c2):
    lien = make_lien(c2, c2, [0, 0])
    d = make_datum(c2, 3, [1, 2], c2.all_elements(), c2.trivial_subgroup(), [place(c2, "w", [1], q=2)])
    eta = [e for e in h2_lien_enumerate(lien) if not is_neutral(e)[0]][0]
    with pytest.raises(HypothesesNotMet):
        hasse_solve(d, lien, eta)


def test_hasse_requires_kernel_of_kappa(c2):
    lien = make_lien(c2, c2, [0, 0])
    trivial = c2.trivial_subgroup()
    d = make_datum(c2, 3, [1, 2], trivial, trivial, [place(c2, "v", [0])])
    with pytest.raises(HypothesesNotMet):
        hasse_solve(d, lien, h2_lien_enumerate(lien)[0])


# ---------------------------------------------------------------------------
# Hasse principle over the Klein four group, every outer action with a kernel


HASSE_CORES = {
    "Q8": quaternion_group,
    "D4": lambda: dihedral_group(4),
    "C4": lambda: cyclic_group(4),
    "C2xC2": lambda: direct_product(cyclic_group(2), cyclic_group(2)),
    "C2xC4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
}
# characters Γ → (Z/3)^× on (0,0), (0,1), (1,0), (1,1)
KLEIN_CHARACTERS = ((1, 2, 1, 2), (1, 1, 2, 2), (1, 2, 2, 1))
HASSE_LIEN_LIMIT = 6
HASSE_CLASS_LIMIT = 16


def _hasse_cases(core):
    klein = direct_product(cyclic_group(2), cyclic_group(2))
    g = HASSE_CORES[core]()
    out = automorphisms(g).out
    cases = []
    for tail in itertools.product(range(out.order), repeat=3):
        images = (0,) + tail
        try:
            make_hom(klein, out, images)
        except NotHomomorphism:
            continue
        ker = [s for s in range(4) if images[s] == 0]
        if len(ker) == 1:
            continue
        chi = next(c for c in KLEIN_CHARACTERS if any(c[s] == 2 for s in ker))
        places = []
        for h in subgroups(klein):
            if is_cyclic(h.group):
                gen = max(h.elements)
                name = "u" + "_".join(str(x) for x in h.elements)
                places.append(place(klein, name, [gen], frobenius=gen, q=chi[gen]))
        try:
            d = make_datum(
                klein, 3, chi, subgroup_from_elements(klein, ker), klein.trivial_subgroup(), places
            )
        except CohomologyError:
            continue
        cases.append((d, make_lien(klein, g, images)))
    return cases


def test_hasse_battery_has_ten_liens():
    assert sum(min(len(_hasse_cases(core)), HASSE_LIEN_LIMIT) for core in HASSE_CORES) >= 10


@pytest.mark.parametrize("core", sorted(HASSE_CORES))
def test_hasse_solver_agrees_with_neutrality(core):
    for d, lien in _hasse_cases(core)[:HASSE_LIEN_LIMIT]:
        for eta in h2_lien_enumerate(lien)[:HASSE_CLASS_LIMIT]:
            try:
                result = hasse_solve(d, lien, eta)
            except HypothesesNotMet:
                continue
            neutral = is_neutral(eta)[0]
            if isinstance(result, NeutralityCertificate):
                assert neutral
                assert transform(eta, result.h) == split_class(lien, result.hom)
            else:
                assert isinstance(result, Obstruction)
                assert not neutral, result.trace
