"""Nonabelian H¹ and abelian H² of finite Γ-groups.

Cocycles are stored as full value arrays indexed by Γ; classes carry the
lexicographically least member of the class for H¹ and the canonical
remainder modulo coboundaries for H² (see :mod:`src.core.modular`).
"""

import functools
import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.groups import (AutGroupData, FiniteGroup, GroupHom,
                             SubgroupHandle, center,
                             is_normal, minimal_generating_set,
                             quotient_group)
from src.core.modular import AbelianCoordinates, ModuleComplex, module_complex
from src.utils.errors import (ActionMismatch, BudgetExceeded, ChiNotHom,
                              CocycleInvalid, ContextMismatch, NotAbelian,
                              NotAbelianKernel, NotCentral, NotCharacteristic,
                              NotSubgroup)
from src.utils.parallel import parallel_map
from src.utils.settings import Budget, current_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GammaAction:
    """Γ acting on ``target`` by automorphisms, one permutation per σ ∈ Γ."""

    gamma: FiniteGroup
    target: FiniteGroup
    perms: Tuple[Tuple[int, ...], ...]

    @cached_property
    def perm_array(self) -> np.ndarray:
        arr = np.array(self.perms, dtype=np.int64).reshape(self.gamma.order, self.target.order)
        arr.setflags(write=False)
        return arr

    def act(self, s: int, x: int) -> int:
        return self.perms[s][x]

    @cached_property
    def is_trivial(self) -> bool:
        ident = tuple(range(self.target.order))
        return all(p == ident for p in self.perms)


def make_action(gamma: FiniteGroup, target: FiniteGroup, perms: Sequence[Sequence[int]]) -> GammaAction:
    """Validate per-σ permutations as an action by automorphisms.

    Raises ActionMismatch naming the first failing σ (or pair).
    """
    arr = np.array(perms, dtype=np.int64)
    if arr.shape != (gamma.order, target.order):
        raise ActionMismatch(
            "need one permutation of the target per element of Γ",
            {"expected": [gamma.order, target.order], "got": list(arr.shape)},
        )
    ident = np.arange(target.order)
    if not np.array_equal(arr[0], ident):
        raise ActionMismatch("identity of Γ must act trivially")
    t = target.table
    for s in range(gamma.order):
        p = arr[s]
        if not np.array_equal(np.sort(p), ident):
            raise ActionMismatch(f"σ={s} does not act by a permutation", {"sigma": s})
        if not np.array_equal(p[t], t[p[:, None], p[None, :]]):
            raise ActionMismatch(f"σ={s} does not act by an automorphism", {"sigma": s})
    composed = arr[:, arr]  # composed[s, u, x] = perms[s][perms[u][x]]
    expected = arr[gamma.table]
    bad = np.argwhere((composed != expected).any(axis=2))
    if bad.size:
        s, u = (int(v) for v in bad[0])
        raise ActionMismatch(f"action is not a homomorphism at ({s}, {u})", {"pair": [s, u]})
    return GammaAction(gamma, target, tuple(tuple(int(v) for v in row) for row in arr))


def trivial_action(gamma: FiniteGroup, target: FiniteGroup) -> GammaAction:
    ident = tuple(range(target.order))
    return GammaAction(gamma, target, (ident,) * gamma.order)


def action_from_homs(gamma: FiniteGroup, aut: AutGroupData, images: Sequence[int]) -> GammaAction:
    """Action through a hom Γ → Aut(G) given by automorphism indices."""
    if len(images) != gamma.order or any(not 0 <= a < aut.aut.order for a in images):
        raise ActionMismatch(
            "need one automorphism index per element of Γ",
            {"expected": gamma.order, "aut_order": aut.aut.order},
        )
    return make_action(gamma, aut.group, aut.perms[list(images)])


def check_bounds(gamma: FiniteGroup, target: FiniteGroup) -> None:
    """Raise BudgetExceeded when |Γ| or |G| is outside the configured bounds."""
    settings = current_settings()
    if gamma.order > settings.max_gamma or target.order > settings.max_order:
        raise BudgetExceeded(
            f"instance |Γ|={gamma.order}, |G|={target.order} is outside the "
            f"bounds |Γ| ≤ {settings.max_gamma}, |G| ≤ {settings.max_order}",
            {
                "gamma_order": gamma.order,
                "target_order": target.order,
                "max_gamma": settings.max_gamma,
                "max_order": settings.max_order,
            },
        )


# ---------------------------------------------------------------------------
# 1-cocycles


def cocycle1_defect(ctx: GammaAction, values: Sequence[int]) -> Optional[Tuple[int, int]]:
    """First pair (σ, τ) where a_στ ≠ a_σ·σ(a_τ), or None."""
    a = np.asarray(values, dtype=np.int64)
    t, p = ctx.target.table, ctx.perm_array
    lhs = a[ctx.gamma.table]
    rhs = t[a[:, None], p[:, a]]  # rhs[s, u] = a_s · s(a_u)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        return int(bad[0][0]), int(bad[0][1])
    return None


@dataclass(frozen=True)
class Cocycle1:
    """A 1-cocycle Γ → G; the law is checked on construction."""

    ctx: GammaAction
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.ctx.gamma.order:
            raise CocycleInvalid(
                "cocycle needs one value per element of Γ",
                {"expected": self.ctx.gamma.order, "got": len(self.values)},
            )
        if any(not 0 <= v < self.ctx.target.order for v in self.values):
            raise CocycleInvalid("cocycle value out of range")
        if self.values[0] != 0:
            raise CocycleInvalid("a_1 must be the identity")
        defect = cocycle1_defect(self.ctx, self.values)
        if defect is not None:
            raise CocycleInvalid(
                f"cocycle law fails at (σ, τ) = {defect}", {"pair": list(defect)}
            )


def translates(ctx: GammaAction, values: Sequence[int]) -> np.ndarray:
    """Row g holds the cocycle σ ↦ g⁻¹·a_σ·σ(g)."""
    t, target = ctx.target.table, ctx.target
    a = np.asarray(values, dtype=np.int64)
    left = t[target.inverses[:, None], a[None, :]]
    return t[left, ctx.perm_array.T]


def canonical_values(ctx: GammaAction, values: Sequence[int]) -> Tuple[int, ...]:
    rows = translates(ctx, values)
    return min(tuple(r) for r in rows.tolist())


@dataclass(frozen=True)
class CohClass1:
    """A class of H¹(Γ, G) with its canonical representative."""

    ctx: GammaAction
    representative: Cocycle1

    @property
    def values(self) -> Tuple[int, ...]:
        return self.representative.values

    @property
    def is_trivial(self) -> bool:
        return not any(self.values)


def class_of(cocycle: Cocycle1) -> CohClass1:
    rep = canonical_values(cocycle.ctx, cocycle.values)
    return CohClass1(cocycle.ctx, Cocycle1(cocycle.ctx, rep))


def class_from_values(ctx: GammaAction, values: Sequence[int]) -> CohClass1:
    return class_of(Cocycle1(ctx, tuple(int(v) for v in values)))


def _cocycle_branch(ctx: GammaAction, gens: Tuple[int, ...], first: int) -> List[Tuple[int, ...]]:
    budget = Budget("cocycle enumeration")
    found: List[Tuple[int, ...]] = []
    gt, t, p = ctx.gamma.table, ctx.target.table, ctx.perm_array
    m = ctx.target.order

    def extend(prefix: List[int]) -> Optional[np.ndarray]:
        # values on the subgroup generated by the first len(prefix) generators
        vals = np.full(ctx.gamma.order, -1, dtype=np.int64)
        vals[0] = 0
        frontier = [0]
        active = list(zip(gens, prefix))
        while frontier:
            nxt = []
            for x in frontier:
                ax = vals[x]
                for g, ag in active:
                    y = gt[x, g]
                    val = t[ax, p[x, ag]]
                    if vals[y] < 0:
                        vals[y] = val
                        nxt.append(int(y))
                    elif vals[y] != val:
                        return None
            frontier = nxt
        return vals

    def search(prefix: List[int]) -> None:
        budget.charge()
        vals = extend(prefix)
        if vals is None:
            return
        if len(prefix) == len(gens):
            found.append(tuple(int(v) for v in vals))
            return
        for y in range(m):
            search(prefix + [y])

    search([first])
    return found


def enumerate_cocycles(ctx: GammaAction) -> List[Tuple[int, ...]]:
    """All 1-cocycles, found by backtracking over values on generators of Γ."""
    if ctx.gamma.order == 1:
        return [(0,)]
    gens = minimal_generating_set(ctx.gamma)
    branches = parallel_map(
        lambda y: _cocycle_branch(ctx, gens, y), range(ctx.target.order)
    )
    return sorted(c for branch in branches for c in branch)


def enumerate_cocycles_exhaustive(ctx: GammaAction) -> List[Tuple[int, ...]]:
    """All 1-cocycles by scanning every normalized map Γ → G."""
    n, m = ctx.gamma.order, ctx.target.order
    Budget("exhaustive cocycle scan").require(m ** (n - 1))
    found = []
    for tail in itertools.product(range(m), repeat=n - 1):
        values = (0,) + tail
        if cocycle1_defect(ctx, values) is None:
            found.append(values)
    return found


def h1_enumerate(ctx: GammaAction) -> List[CohClass1]:
    """Every class of H¹(Γ, G), sorted by canonical representative.

    Raises BudgetExceeded when the instance is outside the configured bounds
    or the search exceeds the candidate budget.
    """
    check_bounds(ctx.gamma, ctx.target)
    return _h1_cached(ctx, current_settings().budget)


@functools.lru_cache(maxsize=512)
def _h1_cached(ctx: GammaAction, budget: int) -> List[CohClass1]:  # pylint: disable=unused-argument
    reps = sorted({canonical_values(ctx, c) for c in enumerate_cocycles(ctx)})
    logger.debug("H^1 with |Γ|=%d, |G|=%d has %d classes", ctx.gamma.order, ctx.target.order, len(reps))
    return [CohClass1(ctx, Cocycle1(ctx, r)) for r in reps]


def are_cohomologous(a: Cocycle1, b: Cocycle1) -> Tuple[bool, Optional[int]]:
    """Whether b_σ = g⁻¹·a_σ·σ(g) for some g; the least such g is the witness.

    Raises ContextMismatch for cocycles of different actions.
    """
    if a.ctx != b.ctx:
        raise ContextMismatch("cocycles live over different actions")
    rows = translates(a.ctx, a.values)
    target = np.asarray(b.values, dtype=np.int64)
    hits = np.nonzero((rows == target[None, :]).all(axis=1))[0]
    if hits.size:
        return True, int(hits[0])
    return False, None


# ---------------------------------------------------------------------------
# derived actions


def _check_subgroup(ctx: GammaAction, sub: SubgroupHandle) -> None:
    if sub.parent != ctx.gamma:
        raise NotSubgroup("subgroup does not belong to the acting group")
    members = sub.element_set
    if 0 not in members or any(
        ctx.gamma.mul(x, y) not in members for x in sub for y in sub
    ):
        raise NotSubgroup("element list is not a subgroup", {"elements": list(sub.elements)})


def restrict_action(ctx: GammaAction, sub: SubgroupHandle) -> GammaAction:
    """The action of a subgroup Δ ≤ Γ (Δ re-indexed as a standalone group)."""
    _check_subgroup(ctx, sub)
    return GammaAction(sub.group, ctx.target, tuple(ctx.perms[s] for s in sub.elements))


def restrict_class(c: CohClass1, sub: SubgroupHandle) -> CohClass1:
    """Class of the restricted cocycle. Raises NotSubgroup."""
    rctx = restrict_action(c.ctx, sub)
    return class_from_values(rctx, [c.values[s] for s in sub.elements])


def inflate_class(
    c: CohClass1, proj: GroupHom, ctx: Optional[GammaAction] = None
) -> CohClass1:
    """Inflate a class over Γ/N along the projection Γ → Γ/N.

    ``ctx`` (the action on G over Γ) is optional; when given it must be the
    action factored through ``proj``, else ActionMismatch.
    """
    if proj.codomain != c.ctx.gamma:
        raise ActionMismatch("projection does not land in the class's acting group")
    inflated = GammaAction(
        proj.domain, c.ctx.target, tuple(c.ctx.perms[proj(s)] for s in range(proj.domain.order))
    )
    if ctx is not None and ctx != inflated:
        raise ActionMismatch("action on G does not factor through the quotient")
    return class_from_values(inflated, [c.values[proj(s)] for s in range(proj.domain.order)])


def check_stable(ctx: GammaAction, sub: SubgroupHandle) -> None:
    """Raise NotCharacteristic unless ``sub`` is normal and Γ-stable."""
    if sub.parent != ctx.target:
        raise NotSubgroup("subgroup does not belong to the coefficient group")
    members = sub.element_set
    if not is_normal(ctx.target, sub) or any(
        ctx.perms[s][x] not in members for s in range(ctx.gamma.order) for x in sub
    ):
        raise NotCharacteristic(
            "subgroup must be normal and stable under Γ", {"elements": list(sub.elements)}
        )


def quotient_action(ctx: GammaAction, N: SubgroupHandle) -> Tuple[GammaAction, GroupHom]:
    """Induced action on G/N with the projection G → G/N."""
    check_stable(ctx, N)
    quotient, proj = _quotient_cached(ctx.target, N)
    reps = [proj.preimages(c)[0] for c in range(quotient.order)]
    perms = tuple(
        tuple(proj(ctx.perms[s][r]) for r in reps) for s in range(ctx.gamma.order)
    )
    return GammaAction(ctx.gamma, quotient, perms), proj


@functools.lru_cache(maxsize=256)
def _quotient_cached(G: FiniteGroup, N: SubgroupHandle) -> Tuple[FiniteGroup, GroupHom]:
    return quotient_group(G, N)


def sub_action(ctx: GammaAction, A: SubgroupHandle) -> GammaAction:
    """Restriction of the action to a Γ-stable subgroup (re-indexed)."""
    check_stable(ctx, A)
    local = A.local_index
    perms = tuple(
        tuple(local[ctx.perms[s][x]] for x in A.elements) for s in range(ctx.gamma.order)
    )
    return GammaAction(ctx.gamma, A.group, perms)


def pushforward_class(c: CohClass1, hom: GroupHom, target_ctx: GammaAction) -> CohClass1:
    """Image of a class along a Γ-equivariant hom of coefficients.

    Raises CocycleInvalid when the hom is not equivariant for the actions.
    """
    if hom.domain != c.ctx.target or hom.codomain != target_ctx.target:
        raise ContextMismatch("hom does not connect the two coefficient groups")
    if target_ctx.gamma != c.ctx.gamma:
        raise ContextMismatch("actions are over different groups")
    return class_from_values(target_ctx, [hom(v) for v in c.values])


def twist_action(
    ctx: GammaAction,
    c: Cocycle1,
    operator: Optional[Callable[[int], Sequence[int]]] = None,
) -> GammaAction:
    """The twisted Γ-group ₍c₎G.

    Without ``operator`` the cocycle takes values in G itself and σ acts by
    x ↦ c_σ·σ(x)·c_σ⁻¹. Otherwise ``operator(h)`` is the permutation of G
    by which a value h of c acts, and σ acts by x ↦ operator(c_σ)(σ(x)).
    Raises CocycleInvalid when the result is not an action.
    """
    if c.ctx.gamma != ctx.gamma:
        raise CocycleInvalid("cocycle is over a different acting group")
    if operator is None:
        if c.ctx != ctx:
            raise CocycleInvalid("cocycle must be valued in G for the same action")
        G = ctx.target

        def operator(h: int) -> Sequence[int]:  # pylint: disable=function-redefined
            return [G.conj(h, x) for x in range(G.order)]

    perms = []
    for s in range(ctx.gamma.order):
        op = operator(c.values[s])
        perms.append([int(op[ctx.perms[s][x]]) for x in range(ctx.target.order)])
    try:
        return make_action(ctx.gamma, ctx.target, perms)
    except ActionMismatch as exc:
        raise CocycleInvalid(f"twisting does not give an action: {exc.message}") from exc


@dataclass(frozen=True)
class TwistBijection:
    """H¹(Γ, ₍c₎G) ↔ H¹(Γ, G), a′ ↦ a′·c with inverse a ↦ a·c⁻¹."""

    ctx: GammaAction
    twisted: GammaAction
    c: Cocycle1

    def forward(self, cls: CohClass1) -> CohClass1:
        if cls.ctx != self.twisted:
            raise ContextMismatch("class is not over the twisted action")
        t = self.ctx.target
        return class_from_values(
            self.ctx, [t.mul(a, b) for a, b in zip(cls.values, self.c.values)]
        )

    def inverse(self, cls: CohClass1) -> CohClass1:
        if cls.ctx != self.ctx:
            raise ContextMismatch("class is not over the untwisted action")
        t = self.ctx.target
        return class_from_values(
            self.twisted, [t.mul(a, t.inv(b)) for a, b in zip(cls.values, self.c.values)]
        )


def twist_bijection(ctx: GammaAction, c: Cocycle1) -> TwistBijection:
    return TwistBijection(ctx, twist_action(ctx, c), c)


# ---------------------------------------------------------------------------
# 2-cocycles of abelian modules


def cocycle2_defect(ctx: GammaAction, values: Sequence[int]) -> Optional[Tuple[int, int, int]]:
    """First (σ, τ, υ) violating the 2-cocycle identity, or None."""
    n = ctx.gamma.order
    xi = np.asarray(values, dtype=np.int64).reshape(n, n)
    gt, t, inv, p = ctx.gamma.table, ctx.target.table, ctx.target.inverses, ctx.perm_array
    for s in range(n):
        # σ·ξ(τ,υ) + ξ(σ,τυ) against ξ(στ,υ) + ξ(σ,τ)
        lhs = t[p[s][xi], xi[s][gt]]
        rhs = t[xi[gt[s]], xi[s][:, None]]
        bad = np.argwhere(t[lhs, inv[rhs]] != 0)
        if bad.size:
            return s, int(bad[0][0]), int(bad[0][1])
    return None


@dataclass(frozen=True)
class Cocycle2:
    """A normalized 2-cocycle with values in an abelian Γ-module (n*n array)."""

    ctx: GammaAction
    values: Tuple[int, ...]

    def __post_init__(self):
        n = self.ctx.gamma.order
        if not self.ctx.target.is_abelian:
            raise NotAbelian("2-cocycles need an abelian module")
        if len(self.values) != n * n:
            raise CocycleInvalid("2-cocycle needs |Γ|² values", {"expected": n * n})
        xi = np.asarray(self.values).reshape(n, n)
        if xi[0].any() or xi[:, 0].any():
            raise CocycleInvalid("2-cocycle is not normalized")
        defect = cocycle2_defect(self.ctx, self.values)
        if defect is not None:
            raise CocycleInvalid(
                f"2-cocycle identity fails at {defect}", {"triple": list(defect)}
            )

    def value(self, s: int, t: int) -> int:
        return self.values[s * self.ctx.gamma.order + t]


@dataclass(frozen=True)
class CohClass2:
    """A class of H²(Γ, A) with its canonical representative."""

    ctx: GammaAction
    representative: Cocycle2

    @property
    def values(self) -> Tuple[int, ...]:
        return self.representative.values

    @property
    def is_zero(self) -> bool:
        return not any(self.values)


def module_of(ctx: GammaAction) -> ModuleComplex:
    if not ctx.target.is_abelian:
        raise NotAbelian("module operations need an abelian target")
    return module_complex(
        ctx.gamma, ctx.target, ctx.perm_array.tobytes(), current_settings().budget
    )


def class2_of(cocycle: Cocycle2) -> CohClass2:
    rep = module_of(cocycle.ctx).canonical2(cocycle.values)
    return CohClass2(cocycle.ctx, Cocycle2(cocycle.ctx, rep))


def class2_from_values(ctx: GammaAction, values: Sequence[int]) -> CohClass2:
    return class2_of(Cocycle2(ctx, tuple(int(v) for v in values)))


def zero_class2(ctx: GammaAction) -> CohClass2:
    n = ctx.gamma.order
    return CohClass2(ctx, Cocycle2(ctx, (0,) * (n * n)))


def h2_abelian_enumerate(ctx: GammaAction) -> List[CohClass2]:
    """Every class of H²(Γ, A), sorted by canonical representative.

    Raises NotAbelian for a nonabelian target and BudgetExceeded outside the
    configured bounds.
    """
    if not ctx.target.is_abelian:
        raise NotAbelian("H² is computed for abelian modules only")
    check_bounds(ctx.gamma, ctx.target)
    module = module_of(ctx)
    return [CohClass2(ctx, Cocycle2(ctx, rep)) for rep in module.classes2]


def is_coboundary(xi: Cocycle2) -> bool:
    return module_of(xi.ctx).is_coboundary(xi.values)


def coboundary_witness(xi: Cocycle2) -> Optional[Tuple[int, ...]]:
    """Normalized h with ξ(σ,τ) = σ·h_τ − h_στ + h_σ, or None."""
    return module_of(xi.ctx).coboundary_witness(xi.values)


def add_classes2(a: CohClass2, b: CohClass2) -> CohClass2:
    if a.ctx != b.ctx:
        raise ContextMismatch("classes live over different modules")
    t = a.ctx.target
    return class2_from_values(a.ctx, [t.mul(x, y) for x, y in zip(a.values, b.values)])


def negate_class2(a: CohClass2) -> CohClass2:
    t = a.ctx.target
    return class2_from_values(a.ctx, [t.inv(x) for x in a.values])


def restrict_class2(c: CohClass2, sub: SubgroupHandle) -> CohClass2:
    rctx = restrict_action(c.ctx, sub)
    n = c.ctx.gamma.order
    vals = [c.values[s * n + t] for s in sub.elements for t in sub.elements]
    return class2_from_values(rctx, vals)


# ---------------------------------------------------------------------------
# obstruction maps


@dataclass(frozen=True)
class SpringerData:
    """Lift of a quotient cocycle together with its obstruction cocycle."""

    g_ctx: GammaAction
    kernel: SubgroupHandle
    lift: Tuple[int, ...]
    twisted: GammaAction
    obstruction: CohClass2
    raw: Tuple[int, ...]


def springer_data(
    gamma_cls: CohClass1,
    g_ctx: GammaAction,
    a_sub: SubgroupHandle,
    lift: Optional[Sequence[int]] = None,
) -> SpringerData:
    """Compute the lifting obstruction of a class of H¹(Γ, G/A).

    ``lift`` is an optional set-theoretic lift of the representative (b_1
    must be the identity); by default the least preimage is used.
    """
    if a_sub.parent != g_ctx.target:
        raise NotSubgroup("kernel does not belong to the coefficient group")
    if not a_sub.group.is_abelian:
        raise NotAbelianKernel("kernel must be abelian", {"elements": list(a_sub.elements)})
    h_ctx, proj = quotient_action(g_ctx, a_sub)
    if gamma_cls.ctx != h_ctx:
        raise ActionMismatch("class is not over the induced quotient action")
    G = g_ctx.target
    c = gamma_cls.values
    if lift is None:
        b = tuple(min(proj.preimages(v)) for v in c)
    else:
        b = tuple(int(v) for v in lift)
        if b[0] != 0 or any(proj(x) != v for x, v in zip(b, c)):
            raise CocycleInvalid("lift must start at the identity and map onto the class")
    n = g_ctx.gamma.order
    local = a_sub.local_index
    raw = []
    for s in range(n):
        for t in range(n):
            st = g_ctx.gamma.mul(s, t)
            x = G.mul(G.mul(b[s], g_ctx.act(s, b[t])), G.inv(b[st]))
            raw.append(local[x])
    twisted_perms = tuple(
        tuple(local[G.conj(b[s], g_ctx.act(s, x))] for x in a_sub.elements)
        for s in range(n)
    )
    twisted = GammaAction(g_ctx.gamma, a_sub.group, twisted_perms)
    obstruction = class2_from_values(twisted, raw)
    return SpringerData(g_ctx, a_sub, b, twisted, obstruction, tuple(raw))


def springer_obstruction(
    gamma_cls: CohClass1,
    g_ctx: GammaAction,
    a_sub: SubgroupHandle,
    lift: Optional[Sequence[int]] = None,
) -> CohClass2:
    """δ(γ) ∈ H²(Γ, ₍c₎A); zero exactly when γ lifts to H¹(Γ, G).

    Raises NotAbelianKernel for a nonabelian A and NotCharacteristic when A
    is not a normal Γ-stable subgroup.
    """
    return springer_data(gamma_cls, g_ctx, a_sub, lift).obstruction


def lift_class(
    gamma_cls: CohClass1, g_ctx: GammaAction, a_sub: SubgroupHandle
) -> Optional[Cocycle1]:
    """A cocycle of G lifting the representative of γ, or None if δ(γ) ≠ 0."""
    data = springer_data(gamma_cls, g_ctx, a_sub)
    A = a_sub.group
    neg = Cocycle2(data.twisted, tuple(A.inv(x) for x in data.raw))
    h = coboundary_witness(neg)
    if h is None:
        return None
    G = g_ctx.target
    values = tuple(G.mul(a_sub.elements[h[s]], data.lift[s]) for s in range(len(h)))
    return Cocycle1(g_ctx, values)


def delta_central(
    psi: CohClass1, g_ctx: GammaAction, z_sub: Optional[SubgroupHandle] = None
) -> CohClass2:
    """Connecting map H¹(Γ, G/Z) → H²(Γ, Z) for a central Γ-stable Z.

    Raises NotCentral when ``z_sub`` is not contained in the center.
    """
    Z = center(g_ctx.target) if z_sub is None else z_sub
    if not Z.element_set <= center(g_ctx.target).element_set:
        raise NotCentral("subgroup is not central", {"elements": list(Z.elements)})
    return springer_obstruction(psi, g_ctx, Z)


# ---------------------------------------------------------------------------
# dual modules


@dataclass(frozen=True)
class DualModuleSpec:
    """An abelian module A with a mod-n character χ (n defaults to exp A)."""

    base: GammaAction
    chi: Tuple[int, ...]
    n: int = 0

    @property
    def modulus(self) -> int:
        return self.n or self.base.target.exponent


def validate_chi(gamma: FiniteGroup, chi: Sequence[int], n: int) -> None:
    """Raise ChiNotHom unless χ is a homomorphism Γ → (Z/n)ˣ."""
    if len(chi) != gamma.order:
        raise ChiNotHom("χ needs one value per element of Γ", {"expected": gamma.order})
    if n > 1 and chi[0] % n != 1:
        raise ChiNotHom("χ(1) must be 1")
    for s, v in enumerate(chi):
        if math.gcd(v, n) != 1:
            raise ChiNotHom(f"χ({s}) = {v} is not a unit mod {n}", {"sigma": s})
    for s in range(gamma.order):
        for t in range(gamma.order):
            if (chi[s] * chi[t] - chi[gamma.mul(s, t)]) % n:
                raise ChiNotHom(f"χ is not multiplicative at ({s}, {t})", {"pair": [s, t]})


@functools.lru_cache(maxsize=64)
def dual_module(spec: DualModuleSpec) -> GammaAction:
    """A* = Hom(A, Z/n) with (σ·f)(a) = χ(σ)·f(σ⁻¹·a).

    Elements are homs listed by their value tuples, zero first.
    """
    base, n = spec.base, spec.modulus
    validate_chi(base.gamma, spec.chi, n)
    A = base.target
    coords = AbelianCoordinates(A)
    choices = [range(0, n, n // math.gcd(n, d)) for d in coords.orders]
    homs = []
    for combo in itertools.product(*choices):
        vals = (coords.coords @ np.array(combo, dtype=np.int64)) % n if combo else np.zeros(A.order, dtype=np.int64)
        homs.append(tuple(int(v) for v in vals))
    homs.sort()
    index = {h: i for i, h in enumerate(homs)}
    m = len(homs)
    table = [[index[tuple((x + y) % n for x, y in zip(homs[i], homs[j]))] for j in range(m)] for i in range(m)]
    dual = FiniteGroup(table, name=f"dual({A.name or A.order})")
    gamma = base.gamma
    perms = []
    for s in range(gamma.order):
        s_inv = gamma.inv(s)
        row = []
        for f in homs:
            g = tuple((spec.chi[s] * f[base.perms[s_inv][a]]) % n for a in range(A.order))
            row.append(index[g])
        perms.append(row)
    return make_action(gamma, dual, perms)


def dual_h1(spec: DualModuleSpec) -> List[CohClass1]:
    """H¹(Γ, A*) for the dual module. Raises ChiNotHom for a bad χ."""
    return h1_enumerate(dual_module(spec))
