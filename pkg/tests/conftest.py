"""Shared test fixtures: standard groups, actions and global data."""

import pytest

from src.core.cohomology import make_action, trivial_action
from src.core.global_datum import PlaceSpec, make_datum
from src.core.groups import (cyclic_group, direct_product, heisenberg_group,
                             quaternion_group, subgroup_generated,
                             symmetric_group_3)
from src.utils.settings import Settings, use_settings


@pytest.fixture(autouse=True)
def default_settings():
    """Run every test under the documented defaults, whatever the environment says."""
    with use_settings(Settings()):
        yield


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def c3():
    return cyclic_group(3)


@pytest.fixture
def c4():
    return cyclic_group(4)


@pytest.fixture
def c6():
    return cyclic_group(6)


@pytest.fixture
def c9():
    return cyclic_group(9)


@pytest.fixture
def klein():
    return direct_product(cyclic_group(2), cyclic_group(2))


@pytest.fixture
def s3():
    return symmetric_group_3()


@pytest.fixture
def q8():
    return quaternion_group()


@pytest.fixture
def heis27():
    return heisenberg_group(3)


def negation_perms(n):
    """Permutations for C2 acting on Z/n by x ↦ −x."""
    return [list(range(n)), [(-x) % n for x in range(n)]]


@pytest.fixture
def c2_on_c3_by_inversion(c2, c3):
    return make_action(c2, c3, negation_perms(3))


def place(gamma, name, decomposition, inertia=(0,), frobenius=None, q=1, kind="finite", tau=None):
    """A place with Γ_v = ⟨decomposition⟩ and I_v = ⟨inertia⟩."""
    gv = subgroup_generated(gamma, decomposition)
    iv = subgroup_generated(gamma, inertia)
    if frobenius is None:
        frobenius = decomposition[0] if decomposition else 0
    return PlaceSpec(name, kind, gv, iv, frobenius, tau, q)


@pytest.fixture
def klein_datum(klein):
    """Γ = C2×C2 with n = 2, trivial χ and one unramified place per cyclic subgroup.

    Elements of C2×C2 are 0=(0,0), 1=(0,1), 2=(1,0), 3=(1,1).
    """
    chi = [1] * 4
    trivial = klein.trivial_subgroup()
    places = [
        place(klein, "v1", [1], q=1),
        place(klein, "v2", [2], q=1),
        place(klein, "v3", [3], q=1),
    ]
    return make_datum(klein, 2, chi, trivial, trivial, places)


@pytest.fixture
def klein_trivial_c2(klein, c2):
    return trivial_action(klein, c2)


@pytest.fixture
def c3_datum():
    """Γ = C3, n = 3, trivial χ; one inert place and one totally ramified P-place.

    The inert place has Γ_v = Γ and trivial inertia; the ramified place has
    Γ_v = I_v = Γ with q ≡ 1 mod 3.
    """
    gamma = cyclic_group(3)
    trivial = gamma.trivial_subgroup()
    places = [
        place(gamma, "inert", [1], q=1),
        PlaceSpec("ram", "finite", gamma.all_elements(), gamma.all_elements(), 0, 1, 1),
    ]
    return make_datum(gamma, 3, [1, 1, 1], trivial, trivial, places)

