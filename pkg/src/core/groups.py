"""Exact finite-group arithmetic over multiplication tables.

Groups are stored as validated ``order x order`` numpy tables with the
identity fixed at index 0; subgroups, homomorphisms and automorphisms all
refer to elements by index and store full arrays, so equality is array
equality.
"""

import functools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

from src.utils.errors import (BoundExceeded, IndexOutOfRange, NoIdentity,
                              NoInverse, NotAbelian, NotAssociative, NotClosed,
                              NotHomomorphism, NotNormal, NotSubgroup)
from src.utils.parallel import parallel_map
from src.utils.settings import Budget, current_settings

logger = logging.getLogger(__name__)

# Full associativity scan up to this order, generator test above it.
FULL_ASSOCIATIVITY_LIMIT = 256


class FiniteGroup:
    """A finite group given by its multiplication table (identity = 0).

    The constructor trusts its input; use :func:`validate_group` for tables
    coming from outside the library.
    """

    def __init__(
        self,
        table: Union[np.ndarray, Sequence[Sequence[int]]],
        labels: Optional[Sequence[str]] = None,
        name: Optional[str] = None,
    ):
        arr = np.array(table, dtype=np.int64)
        arr.setflags(write=False)
        self.table = arr
        self.order = int(arr.shape[0])
        self.labels = tuple(labels) if labels is not None else None
        self.name = name

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, name={self.name!r})"

    @cached_property
    def _key(self) -> bytes:
        return self.table.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.order, self._key))

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def conj(self, g: int, x: int) -> int:
        """Return g·x·g⁻¹."""
        return int(self.table[self.table[g, x], self.inverses[g]])

    def commutator(self, a: int, b: int) -> int:
        """Return a·b·a⁻¹·b⁻¹."""
        t = self.table
        return int(t[t[t[a, b], self.inverses[a]], self.inverses[b]])

    def power(self, x: int, k: int) -> int:
        k %= int(self.element_orders[x])
        result = 0
        for _ in range(k):
            result = int(self.table[result, x])
        return result

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)

    @cached_property
    def inverses(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        inv = np.empty(self.order, dtype=np.int64)
        inv[rows] = cols
        return inv

    @cached_property
    def element_orders(self) -> np.ndarray:
        orders = np.ones(self.order, dtype=np.int64)
        current = np.arange(self.order, dtype=np.int64)
        pending = current != 0
        k = 1
        while pending.any():
            k += 1
            current = self.table[current, np.arange(self.order)]
            done = pending & (current == 0)
            orders[done] = k
            pending &= ~done
        return orders

    @cached_property
    def exponent(self) -> int:
        return int(functools.reduce(math.lcm, self.element_orders.tolist(), 1))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def is_solvable(self) -> bool:
        return derived_series(self)[-1].order == 1

    def all_elements(self) -> "SubgroupHandle":
        return SubgroupHandle(self, tuple(range(self.order)))

    def trivial_subgroup(self) -> "SubgroupHandle":
        return SubgroupHandle(self, (0,))


@dataclass(frozen=True)
class SubgroupHandle:
    """A subgroup of ``parent`` given by its sorted element indices."""

    parent: FiniteGroup
    elements: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.element_set

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    @cached_property
    def local_index(self) -> Dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def group(self) -> FiniteGroup:
        """The subgroup as a standalone group, elements re-indexed in order."""
        elems = np.array(self.elements, dtype=np.int64)
        lookup = np.full(self.parent.order, -1, dtype=np.int64)
        lookup[elems] = np.arange(len(elems))
        table = lookup[self.parent.table[np.ix_(elems, elems)]]
        labels = None
        if self.parent.labels is not None:
            labels = [self.parent.labels[x] for x in self.elements]
        return FiniteGroup(table, labels=labels)

    @cached_property
    def embedding(self) -> "GroupHom":
        return GroupHom(self.group, self.parent, self.elements)

    def is_subset_of(self, other: "SubgroupHandle") -> bool:
        return self.element_set <= other.element_set


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism stored as the full array of images."""

    domain: FiniteGroup
    codomain: FiniteGroup
    images: Tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def kernel(self) -> SubgroupHandle:
        return SubgroupHandle(
            self.domain, tuple(x for x, y in enumerate(self.images) if y == 0)
        )

    def image(self) -> SubgroupHandle:
        return SubgroupHandle(self.codomain, tuple(sorted(set(self.images))))

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.codomain.order

    def compose(self, other: "GroupHom") -> "GroupHom":
        """Return ``other ∘ self``."""
        return GroupHom(
            self.domain, other.codomain, tuple(other.images[y] for y in self.images)
        )

    def preimages(self, y: int) -> List[int]:
        return [x for x, z in enumerate(self.images) if z == y]


def make_hom(domain: FiniteGroup, codomain: FiniteGroup, images: Sequence[int]) -> GroupHom:
    """Validate ``images`` as a homomorphism and wrap it.

    Raises IndexOutOfRange for bad indices and NotHomomorphism naming the
    first pair where the hom law fails.
    """
    imgs = np.array(images, dtype=np.int64)
    if imgs.shape != (domain.order,):
        raise IndexOutOfRange(
            "homomorphism must list one image per domain element",
            {"expected": domain.order, "got": int(imgs.size)},
        )
    if imgs.size and (imgs.min() < 0 or imgs.max() >= codomain.order):
        raise IndexOutOfRange("image index out of range", {"order": codomain.order})
    lhs = imgs[domain.table]
    rhs = codomain.table[imgs[:, None], imgs[None, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotHomomorphism(
            f"hom law fails at ({a}, {b})", {"pair": [a, b]}
        )
    return GroupHom(domain, codomain, tuple(int(v) for v in imgs))


@dataclass(frozen=True, eq=False)
class AutGroupData:
    """Aut(G) with its inner subgroup and the projection onto Out(G)."""

    group: FiniteGroup
    aut: FiniteGroup
    perms: np.ndarray
    inn: SubgroupHandle
    out_projection: GroupHom
    conjugation: Tuple[int, ...]

    @property
    def out(self) -> FiniteGroup:
        return self.out_projection.codomain

    @cached_property
    def _index(self) -> Dict[bytes, int]:
        return {row.tobytes(): i for i, row in enumerate(self.perms)}

    def index_of(self, perm: Sequence[int]) -> int:
        key = np.asarray(perm, dtype=np.int64).tobytes()
        try:
            return self._index[key]
        except KeyError as exc:
            raise IndexOutOfRange("permutation is not an automorphism") from exc

    def apply(self, a: int, x: int) -> int:
        return int(self.perms[a, x])

    def inner(self, g: int) -> int:
        """Index of conjugation by g."""
        return self.conjugation[g]


# ---------------------------------------------------------------------------
# validation


def validate_group(
    raw_table: Sequence[Sequence[int]],
    labels: Optional[Sequence[str]] = None,
    name: Optional[str] = None,
) -> FiniteGroup:
    """Validate a raw multiplication table and return the group.

    Raises NotClosed for entries outside ``0..order-1``, NoIdentity when row
    or column 0 is not the identity map, NoInverse when the table is not a
    Latin square and NotAssociative naming a failing triple.
    """
    try:
        arr = np.array(raw_table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotClosed(f"table is not an integer matrix: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise NotClosed("table must be a non-empty square matrix", {"shape": list(arr.shape)})
    n = arr.shape[0]
    bad = np.argwhere((arr < 0) | (arr >= n))
    if bad.size:
        r, c = (int(v) for v in bad[0])
        raise NotClosed(
            f"entry ({r}, {c}) = {int(arr[r, c])} is outside 0..{n - 1}",
            {"row": r, "column": c, "value": int(arr[r, c])},
        )
    expected = np.arange(n)
    if not np.array_equal(arr[0], expected) or not np.array_equal(arr[:, 0], expected):
        raise NoIdentity("row 0 and column 0 must be the identity map")
    for lines, what in ((arr, "row"), (arr.T, "column")):
        is_perm = (np.sort(lines, axis=1) == expected).all(axis=1)
        if not is_perm.all():
            line = int(np.nonzero(~is_perm)[0][0])
            raise NoInverse(
                f"{what} {line} is not a permutation (missing inverse)",
                {what: line},
            )
    triple = _find_non_associative(arr)
    if triple is not None:
        a, b, c = triple
        raise NotAssociative(
            f"({a}*{b})*{c} != {a}*({b}*{c})", {"triple": [a, b, c]}
        )
    group = FiniteGroup(arr, labels=labels, name=name)
    # warm the caches that every caller needs
    _ = group.element_orders, group.exponent
    return group


def _find_non_associative(arr: np.ndarray) -> Optional[Tuple[int, int, int]]:
    n = arr.shape[0]
    if n <= FULL_ASSOCIATIVITY_LIMIT:
        middles = range(n)
    else:
        middles = _raw_generators(arr)
    for b in middles:
        # (a*b)*c versus a*(b*c), all a and c at once
        left = arr[arr[:, b], :]
        right = arr[:, arr[b, :]]
        bad = np.argwhere(left != right)
        if bad.size:
            a, c = (int(v) for v in bad[0])
            return a, int(b), c
    return None


def _raw_generators(arr: np.ndarray) -> List[int]:
    gens: List[int] = []
    span = {0}
    for x in range(arr.shape[0]):
        if x not in span:
            gens.append(x)
            span = _closure(arr, gens)
    return gens


def _closure(table: np.ndarray, gens: Iterable[int]) -> set:
    gens = [int(g) for g in gens]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(table[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# subgroups


def _check_indices(G: FiniteGroup, elems: Iterable[int]) -> List[int]:
    out = []
    for x in elems:
        if not 0 <= int(x) < G.order:
            raise IndexOutOfRange(
                f"element {x} is not an index of a group of order {G.order}",
                {"index": int(x), "order": G.order},
            )
        out.append(int(x))
    return out


def subgroup_generated(G: FiniteGroup, gens: Iterable[int]) -> SubgroupHandle:
    """Return the smallest subgroup of G containing ``gens``."""
    gens = _check_indices(G, gens)
    return SubgroupHandle(G, tuple(sorted(_closure(G.table, gens))))


def subgroup_from_elements(G: FiniteGroup, elems: Iterable[int]) -> SubgroupHandle:
    """Wrap an explicit element list, checking it is a subgroup."""
    elems = sorted(set(_check_indices(G, elems)) | {0})
    span = _closure(G.table, elems)
    if len(span) != len(elems):
        raise NotSubgroup("element list is not closed under the group law", {"elements": elems})
    return SubgroupHandle(G, tuple(elems))


def conjugate_subgroup(G: FiniteGroup, H: SubgroupHandle, g: int) -> SubgroupHandle:
    return SubgroupHandle(G, tuple(sorted({G.conj(g, h) for h in H})))


def is_normal(G: FiniteGroup, H: SubgroupHandle) -> bool:
    hs = H.element_set
    return all(G.conj(g, h) in hs for g in range(G.order) for h in H)


def normal_core(G: FiniteGroup, H: SubgroupHandle) -> SubgroupHandle:
    """Largest normal subgroup of G inside H (intersection of conjugates)."""
    if H.parent != G:
        raise NotSubgroup("subgroup belongs to another group")
    core = set(H.elements)
    for g in range(G.order):
        core &= {G.conj(g, h) for h in H}
    return SubgroupHandle(G, tuple(sorted(core)))


def center(G: FiniteGroup) -> SubgroupHandle:
    t = G.table
    central = [x for x in range(G.order) if np.array_equal(t[x, :], t[:, x])]
    return SubgroupHandle(G, tuple(central))


def ell_torsion(A: Union[FiniteGroup, SubgroupHandle], ell: int) -> SubgroupHandle:
    """The ℓ-primary part of an abelian group (or abelian subgroup).

    Raises NotAbelian when the group is not abelian.
    """
    if isinstance(A, SubgroupHandle):
        parent, elems = A.parent, A.elements
        abelian = A.group.is_abelian
    else:
        parent, elems = A, tuple(range(A.order))
        abelian = A.is_abelian
    if not abelian:
        raise NotAbelian("ℓ-torsion is only defined here for abelian groups")
    orders = parent.element_orders
    keep = [x for x in elems if _is_power_of(int(orders[x]), ell)]
    return SubgroupHandle(parent, tuple(keep))


def _is_power_of(k: int, p: int) -> bool:
    while k % p == 0 and k > 1:
        k //= p
    return k == 1


def commutator_subgroup(G: FiniteGroup, H: SubgroupHandle) -> SubgroupHandle:
    comms = {G.commutator(a, b) for a in H for b in H}
    return subgroup_generated(G, comms)


def derived_series(G: FiniteGroup) -> List[SubgroupHandle]:
    """D⁰ = G ⊇ D¹ ⊇ … up to the first repetition."""
    series = [G.all_elements()]
    while True:
        nxt = commutator_subgroup(G, series[-1])
        if nxt.elements == series[-1].elements:
            return series
        series.append(nxt)


def quotient_group(G: FiniteGroup, N: SubgroupHandle) -> Tuple[FiniteGroup, GroupHom]:
    """G/N with cosets ordered by their least member.

    Raises NotNormal when N is not normal in G.
    """
    if not is_normal(G, N):
        raise NotNormal("subgroup is not normal", {"elements": list(N.elements)})
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps: List[int] = []
    for x in range(G.order):
        if coset_of[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for n in N:
            coset_of[G.mul(x, n)] = idx
    r = np.array(reps, dtype=np.int64)
    table = coset_of[G.table[np.ix_(r, r)]]
    quotient = FiniteGroup(table)
    return quotient, GroupHom(G, quotient, tuple(int(c) for c in coset_of))


def kernel(hom: GroupHom) -> SubgroupHandle:
    return hom.kernel()


@functools.lru_cache(maxsize=256)
def minimal_generating_set(G: FiniteGroup) -> Tuple[int, ...]:
    """A small generating set: greedy by element order, then pruned."""
    orders = G.element_orders
    candidates = sorted(range(1, G.order), key=lambda x: (-int(orders[x]), x))
    gens: List[int] = []
    span = {0}
    for x in candidates:
        if len(span) == G.order:
            break
        if x not in span:
            gens.append(x)
            span = _closure(G.table, gens)
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if len(_closure(G.table, rest)) == G.order:
            gens = rest
    return tuple(gens)


@functools.lru_cache(maxsize=64)
def subgroups(G: FiniteGroup) -> Tuple[SubgroupHandle, ...]:
    """Every subgroup of G, ordered by (order, elements)."""
    found = {frozenset(_closure(G.table, [x])) for x in range(G.order)}
    frontier = set(found)
    while frontier:
        new = set()
        for a in frontier:
            for b in found:
                if a <= b or b <= a:
                    continue
                joined = frozenset(_closure(G.table, a | b))
                if joined not in found:
                    new.add(joined)
        found |= new
        frontier = new
    return tuple(
        SubgroupHandle(G, tuple(sorted(s)))
        for s in sorted(found, key=lambda s: (len(s), sorted(s)))
    )


def is_cyclic(G: FiniteGroup) -> bool:
    return int(G.element_orders.max()) == G.order


# ---------------------------------------------------------------------------
# homomorphism search


def extend_on_generators(
    domain: FiniteGroup,
    gens: Sequence[int],
    gen_images: Sequence[int],
    codomain: FiniteGroup,
) -> Optional[np.ndarray]:
    """Extend generator images to a hom on ⟨gens⟩, or None if inconsistent.

    Images are propagated along Cayley-graph edges; consistency on every
    edge is equivalent to the hom law. Unreached elements stay -1.
    """
    images = np.full(domain.order, -1, dtype=np.int64)
    images[0] = 0
    frontier = [0]
    dt, ct = domain.table, codomain.table
    while frontier:
        nxt = []
        for x in frontier:
            ix = images[x]
            for g, img in zip(gens, gen_images):
                y = dt[x, g]
                val = ct[ix, img]
                if images[y] < 0:
                    images[y] = val
                    nxt.append(int(y))
                elif images[y] != val:
                    return None
        frontier = nxt
    return images


def _automorphism_branch(G: FiniteGroup, gens: Tuple[int, ...], first: int) -> List[Tuple[int, ...]]:
    orders = G.element_orders
    budget = Budget("automorphisms")
    found: List[Tuple[int, ...]] = []
    candidates = [
        [y for y in range(G.order) if orders[y] == orders[g]] for g in gens
    ]

    def search(prefix: List[int]) -> None:
        budget.charge()
        k = len(prefix)
        imgs = extend_on_generators(G, gens[:k], prefix, G)
        if imgs is None:
            return
        if k == len(gens):
            if len(set(imgs.tolist())) == G.order:
                found.append(tuple(int(v) for v in imgs))
            return
        for y in candidates[k]:
            search(prefix + [y])

    search([first])
    return found


def automorphism_permutations(G: FiniteGroup) -> np.ndarray:
    """All automorphisms of G as rows of a permutation array, sorted.

    Raises BoundExceeded when G is larger than the configured bound and
    BudgetExceeded when the search does not fit the active budget, also on
    repeated calls answered from the cache.
    """
    settings = current_settings()
    if G.order > settings.max_order:
        raise BoundExceeded(
            f"group order {G.order} exceeds the enumeration bound {settings.max_order}",
            {"order": G.order, "bound": settings.max_order},
        )
    return _automorphism_permutations(G, settings.budget)


# the budget is part of the key; a tighter limit reruns the search
@functools.lru_cache(maxsize=64)
def _automorphism_permutations(G: FiniteGroup, budget: int) -> np.ndarray:  # pylint: disable=unused-argument
    if G.order == 1:
        return np.zeros((1, 1), dtype=np.int64)
    gens = minimal_generating_set(G)
    orders = G.element_orders
    firsts = [y for y in range(G.order) if orders[y] == orders[gens[0]]]
    branches = parallel_map(lambda y: _automorphism_branch(G, gens, y), firsts)
    perms = sorted(p for branch in branches for p in branch)
    logger.debug("order %d group has %d automorphisms", G.order, len(perms))
    return np.array(perms, dtype=np.int64)


def automorphisms(G: FiniteGroup) -> AutGroupData:
    """Aut(G) as a permutation group table, with Inn(G) and Out(G).

    Raises BoundExceeded when |G| or |Aut(G)| exceeds the configured bounds.
    """
    perms = automorphism_permutations(G)
    settings = current_settings()
    m = perms.shape[0]
    if m > settings.max_aut:
        raise BoundExceeded(
            f"|Aut| = {m} exceeds the automorphism table bound {settings.max_aut}",
            {"aut_order": m, "bound": settings.max_aut},
        )
    return _automorphism_data(G)


@functools.lru_cache(maxsize=32)
def _automorphism_data(G: FiniteGroup) -> AutGroupData:
    perms = automorphism_permutations(G)
    m = perms.shape[0]
    index = {row.tobytes(): i for i, row in enumerate(perms)}
    # (a∘b)(x) = a(b(x)); row a composed with every b at once
    composed = perms[:, perms]  # composed[a, b, x] = perms[a, perms[b, x]]
    table = np.empty((m, m), dtype=np.int64)
    for a in range(m):
        for b in range(m):
            table[a, b] = index[composed[a, b].tobytes()]
    aut = FiniteGroup(table)
    conj_perm = np.array(
        [[G.conj(g, x) for x in range(G.order)] for g in range(G.order)],
        dtype=np.int64,
    )
    conjugation = tuple(index[row.tobytes()] for row in conj_perm)
    inn = SubgroupHandle(aut, tuple(sorted(set(conjugation))))
    _, projection = quotient_group(aut, inn)
    return AutGroupData(G, aut, perms, inn, projection, conjugation)


def is_characteristic(G: FiniteGroup, N: SubgroupHandle) -> bool:
    members = N.element_set
    return all(
        all(int(p[x]) in members for x in N) for p in automorphism_permutations(G)
    )


# ---------------------------------------------------------------------------
# constructors


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return FiniteGroup((idx[:, None] + idx[None, :]) % n, name=f"C{n}")


def direct_product(*groups: FiniteGroup) -> FiniteGroup:
    """Direct product, index = mixed radix with the first factor most significant."""
    table = np.zeros((1, 1), dtype=np.int64)
    for h in groups:
        m = h.order
        table = (table[:, None, :, None] * m + h.table[None, :, None, :]).reshape(
            table.shape[0] * m, table.shape[1] * m
        )
    name = "x".join(g.name or f"G{g.order}" for g in groups)
    return FiniteGroup(table, name=name)


def group_from_permutations(
    generators: Sequence[Sequence[Sequence[int]]], degree: int
) -> FiniteGroup:
    """Cayley table of the permutation group given by cycle-list generators.

    Elements are ordered by array form (identity first); the product a·b is
    the composite a∘b. Raises BoundExceeded above the configured order bound.
    """
    bound = current_settings().max_order
    perms = [Permutation([list(c) for c in gen], size=degree) for gen in generators]
    if not perms:
        perms = [Permutation(list(range(degree)))]
    pg = PermutationGroup(perms)
    order = int(pg.order())
    if order > bound:
        raise BoundExceeded(
            f"permutation group of order {order} exceeds the bound {bound}",
            {"order": order, "bound": bound},
        )
    elements = sorted(tuple(p.array_form) for p in pg.elements)
    index = {e: i for i, e in enumerate(elements)}
    arr = np.array(elements, dtype=np.int64)
    table = np.empty((order, order), dtype=np.int64)
    for i in range(order):
        composed = arr[i][arr]  # a∘b for every b
        for j in range(order):
            table[i, j] = index[tuple(composed[j].tolist())]
    labels = [str(Permutation(list(e)).cyclic_form) for e in elements]
    return FiniteGroup(table, labels=labels)


def symmetric_group_3() -> FiniteGroup:
    g = group_from_permutations([[[0, 1]], [[0, 1, 2]]], 3)
    g.name = "S3"
    return g


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    g = group_from_permutations([[list(range(n))], [[i, n - 1 - i] for i in range(n // 2)]], n)
    g.name = f"D{n}"
    return g


def heisenberg_group(p: int) -> FiniteGroup:
    """Upper unitriangular 3x3 matrices over Z/p, element (a, b, c) at a·p²+b·p+c."""
    n = p ** 3
    idx = np.arange(n)
    a, b, c = idx // (p * p), (idx // p) % p, idx % p
    ra, rb, rc = a[:, None], b[:, None], c[:, None]
    table = (
        ((ra + a[None, :]) % p) * p * p
        + ((rb + b[None, :]) % p) * p
        + (rc + c[None, :] + ra * b[None, :]) % p
    )
    return FiniteGroup(table, name=f"Heisenberg{n}")


def quaternion_group() -> FiniteGroup:
    """Q8 with element (unit, sign) at 2·unit + sign, units 1, i, j, k."""
    # unit products: (result unit, sign flip)
    rules = {
        (1, 1): (0, 1), (2, 2): (0, 1), (3, 3): (0, 1),
        (1, 2): (3, 0), (2, 3): (1, 0), (3, 1): (2, 0),
        (2, 1): (3, 1), (3, 2): (1, 1), (1, 3): (2, 1),
    }
    table = np.zeros((8, 8), dtype=np.int64)
    for x in range(8):
        for y in range(8):
            ux, sx, uy, sy = x // 2, x % 2, y // 2, y % 2
            if ux == 0 or uy == 0:
                u, s = ux + uy, 0
            else:
                u, s = rules[(ux, uy)]
            table[x, y] = 2 * u + (sx + sy + s) % 2
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return FiniteGroup(table, labels=names, name="Q8")


def trivial_group() -> FiniteGroup:
    return FiniteGroup([[0]], name="C1")
