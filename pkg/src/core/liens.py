"""Γ-liens, their extension classes and the neutrality criterion.

An extension class is stored as a pair (φ, g): per-σ automorphisms of G
lifting κ and a normalized map Γ×Γ → G with

    φ_σ∘φ_τ = inn(g_{σ,τ})∘φ_{στ}
    g_{σ,τ}·g_{στ,υ} = φ_σ(g_{τ,υ})·g_{σ,τυ}

Two pairs are equivalent when some h: Γ → G carries one to the other by
φ′_σ = inn(h_σ)∘φ_σ and g′_{σ,τ} = h_σ·φ_σ(h_τ)·g_{σ,τ}·h_{στ}⁻¹.
"""

import functools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.cohomology import (CohClass2, GammaAction,
                                 action_from_homs, check_bounds,
                                 class2_from_values, delta_central, h1_enumerate,
                                 module_of, quotient_action)
from src.core.groups import (AutGroupData, FiniteGroup, GroupHom,
                             SubgroupHandle, automorphisms, center,
                             extend_on_generators, make_hom,
                             minimal_generating_set, validate_group)
from src.utils.errors import (CocycleInvalid, ContextMismatch, LienMismatch,
                              NotComparable, NotHomomorphism, NotNeutralBase,
                              NotSubgroup)
from src.utils.settings import Budget, current_settings

logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=64)
def _least_inner(G: FiniteGroup) -> Dict[int, int]:
    """Inner automorphism index → least g inducing it."""
    aut = automorphisms(G)
    reps: Dict[int, int] = {}
    for g in range(G.order):
        reps.setdefault(aut.inner(g), g)
    return reps


@dataclass(frozen=True)
class Lien:
    """An outer action κ: Γ → Out(G)."""

    gamma: FiniteGroup
    g: FiniteGroup
    kappa: GroupHom

    @property
    def aut(self) -> AutGroupData:
        return automorphisms(self.g)

    @cached_property
    def lift_phi(self) -> Tuple[int, ...]:
        """Least automorphism index over κ(σ) for each σ."""
        proj = self.aut.out_projection
        least: Dict[int, int] = {}
        for a in range(self.aut.aut.order):
            least.setdefault(proj(a), a)
        return tuple(least[self.kappa(s)] for s in range(self.gamma.order))


def make_lien(gamma: FiniteGroup, g: FiniteGroup, kappa: Sequence[int]) -> Lien:
    """Build a lien from Out(G) indices, one per element of Γ.

    Raises NotHomomorphism when κ is not a homomorphism.
    """
    aut = automorphisms(g)
    return Lien(gamma, g, make_hom(gamma, aut.out, kappa))


def lien_from_action(ctx: GammaAction) -> Lien:
    """The lien of a Γ-group: σ ↦ class of its automorphism in Out(G)."""
    aut = automorphisms(ctx.target)
    images = [aut.out_projection(aut.index_of(p)) for p in ctx.perms]
    return make_lien(ctx.gamma, ctx.target, images)


@dataclass(frozen=True)
class CenterModule:
    """The center Z of G with the Γ-action induced by κ."""

    lien: Lien
    subgroup: SubgroupHandle
    ctx: GammaAction


@functools.lru_cache(maxsize=64)
def center_module(lien: Lien) -> CenterModule:
    Z = center(lien.g)
    aut = lien.aut
    local = Z.local_index
    perms = tuple(
        tuple(local[aut.apply(lien.lift_phi[s], z)] for z in Z.elements)
        for s in range(lien.gamma.order)
    )
    return CenterModule(lien, Z, GammaAction(lien.gamma, Z.group, perms))


def pair_defect(lien: Lien, phi: Sequence[int], gvals: Sequence[int]) -> Optional[str]:
    """Describe the first violated pair law, or None."""
    n, G, aut = lien.gamma.order, lien.g, lien.aut
    if phi[0] != 0:
        return "φ_1 must be the identity"
    for s in range(n):
        if aut.out_projection(phi[s]) != lien.kappa(s):
            return f"φ_{s} does not lie over κ({s})"
    gv = np.asarray(gvals, dtype=np.int64).reshape(n, n)
    if gv[0].any() or gv[:, 0].any():
        return "g is not normalized"
    at = aut.aut.table
    ph = np.asarray(phi, dtype=np.int64)
    conj = np.asarray(aut.conjugation, dtype=np.int64)
    gt, t = lien.gamma.table, G.table
    bad = np.argwhere(at[ph[:, None], ph[None, :]] != at[conj[gv], ph[gt]])
    if bad.size:
        return f"φ_σ∘φ_τ ≠ inn(g)∘φ_στ at {tuple(int(v) for v in bad[0])}"
    for s in range(n):
        lhs = t[gv[s][:, None], gv[gt[s]]]
        rhs = t[aut.perms[ph[s]][gv], gv[s][gt]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            return f"associativity of g fails at {(s, int(bad[0][0]), int(bad[0][1]))}"
    return None


@dataclass(frozen=True)
class ExtensionCocycle:
    """A pair (φ, g) for a lien; the pair laws are checked on construction."""

    lien: Lien
    phi: Tuple[int, ...]
    gvals: Tuple[int, ...]

    def __post_init__(self):
        n = self.lien.gamma.order
        if len(self.phi) != n or len(self.gvals) != n * n:
            raise CocycleInvalid(
                "extension cocycle has the wrong shape",
                {"phi": len(self.phi), "g": len(self.gvals), "gamma_order": n},
            )
        defect = pair_defect(self.lien, self.phi, self.gvals)
        if defect is not None:
            raise CocycleInvalid(defect)

    def g(self, s: int, t: int) -> int:
        return self.gvals[s * self.lien.gamma.order + t]


def transform(e: ExtensionCocycle, h: Sequence[int]) -> ExtensionCocycle:
    """Apply the equivalence given by h: Γ → G (h_1 must be the identity)."""
    lien, G, aut = e.lien, e.lien.g, e.lien.aut
    n = lien.gamma.order
    phi = tuple(aut.aut.mul(aut.inner(h[s]), e.phi[s]) for s in range(n))
    gvals = []
    for s in range(n):
        for t in range(n):
            st = lien.gamma.mul(s, t)
            x = G.mul(G.mul(h[s], aut.apply(e.phi[s], h[t])), e.g(s, t))
            gvals.append(G.mul(x, G.inv(h[st])))
    return ExtensionCocycle(lien, phi, tuple(gvals))


@functools.lru_cache(maxsize=64)
def base_cochain(lien: Lien) -> Tuple[int, ...]:
    """c_{σ,τ}: least g with inn(g) = φ_σφ_τφ_στ⁻¹ for φ = lift_phi."""
    aut, reps, phi = lien.aut.aut, _least_inner(lien.g), lien.lift_phi
    n = lien.gamma.order
    out = []
    for s in range(n):
        for t in range(n):
            st = lien.gamma.mul(s, t)
            out.append(reps[aut.mul(aut.mul(phi[s], phi[t]), aut.inv(phi[st]))])
    return tuple(out)


def _normalizer(e: ExtensionCocycle) -> Tuple[int, ...]:
    aut, reps, lift = e.lien.aut.aut, _least_inner(e.lien.g), e.lien.lift_phi
    return tuple(reps[aut.mul(lift[s], aut.inv(e.phi[s]))] for s in range(len(e.phi)))


def _central_part(e: ExtensionCocycle) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """(h, z) with h·e = (lift_phi, c·z), z given in local indices of Z."""
    h = _normalizer(e)
    normal = transform(e, h)
    G, c = e.lien.g, base_cochain(e.lien)
    local = center_module(e.lien).subgroup.local_index
    try:
        z = tuple(local[G.mul(G.inv(a), b)] for a, b in zip(c, normal.gvals))
    except KeyError as exc:
        raise NotComparable("normalized cocycle does not differ from the base by central values") from exc
    return h, z


def _from_central(lien: Lien, z: Sequence[int]) -> ExtensionCocycle:
    G, c, Z = lien.g, base_cochain(lien), center_module(lien).subgroup
    gvals = tuple(G.mul(a, Z.elements[b]) for a, b in zip(c, z))
    return ExtensionCocycle(lien, lien.lift_phi, gvals)


def canonical(e: ExtensionCocycle) -> ExtensionCocycle:
    """Canonical representative of the class of e."""
    _, z = _central_part(e)
    module = module_of(center_module(e.lien).ctx)
    return _from_central(e.lien, module.canonical2(z))


def same_class(e1: ExtensionCocycle, e2: ExtensionCocycle) -> bool:
    if e1.lien != e2.lien:
        raise LienMismatch("extension classes of different liens")
    return canonical(e1) == canonical(e2)


def h2_lien_enumerate(lien: Lien) -> List[ExtensionCocycle]:
    """Every class of H²(Γ, L), sorted; empty when κ is not realizable."""
    check_bounds(lien.gamma, lien.g)
    return _h2_lien_cached(lien, current_settings().budget)


@functools.lru_cache(maxsize=64)
def _h2_lien_cached(lien: Lien, budget: int) -> List[ExtensionCocycle]:  # pylint: disable=unused-argument
    G, aut, phi = lien.g, lien.aut, lien.lift_phi
    zmod = center_module(lien)
    local = zmod.subgroup.local_index
    Z = zmod.subgroup.group
    c = base_cochain(lien)
    n = lien.gamma.order
    gamma = lien.gamma

    def minus_omega(s: int, t: int, u: int) -> int:
        tu, st = gamma.mul(t, u), gamma.mul(s, t)
        left = G.mul(aut.apply(phi[s], c[t * n + u]), c[s * n + tu])
        right = G.mul(c[s * n + t], c[st * n + u])
        return Z.inv(local[G.mul(left, G.inv(right))])

    module = module_of(zmod.ctx)
    z0 = module.solve_cocycle_equation(minus_omega)
    if z0 is None:
        logger.info("lien over |Γ|=%d, |G|=%d is not realizable", n, G.order)
        return []
    reps = set()
    for xi in module.classes2:
        reps.add(module.canonical2([Z.mul(a, b) for a, b in zip(z0, xi)]))
    classes = sorted((_from_central(lien, z) for z in reps), key=lambda e: e.gvals)
    logger.debug("H^2 of the lien has %d classes", len(classes))
    return classes


def equivalence_witness(e1: ExtensionCocycle, e2: ExtensionCocycle) -> Optional[Tuple[int, ...]]:
    """h: Γ → G with h·e1 = e2, or None when the classes differ."""
    if e1.lien != e2.lien:
        raise LienMismatch("extension classes of different liens")
    h1, z1 = _central_part(e1)
    h2, z2 = _central_part(e2)
    zmod = center_module(e1.lien)
    Z = zmod.subgroup.group
    k = module_of(zmod.ctx).coboundary_witness([Z.mul(b, Z.inv(a)) for a, b in zip(z1, z2)])
    if k is None:
        return None
    G, zel = e1.lien.g, zmod.subgroup.elements
    return tuple(
        G.mul(G.mul(G.inv(b), zel[kk]), a) for a, b, kk in zip(h1, h2, k)
    )


def lifting_homs(lien: Lien) -> List[Tuple[int, ...]]:
    """All homs Γ → Aut(G) lying over κ, as automorphism index tuples."""
    return _lifting_homs_cached(lien, current_settings().budget)


@functools.lru_cache(maxsize=64)
def _lifting_homs_cached(lien: Lien, limit: int) -> List[Tuple[int, ...]]:  # pylint: disable=unused-argument
    gamma, aut = lien.gamma, lien.aut
    if gamma.order == 1:
        return [(0,)]
    gens = minimal_generating_set(gamma)
    fibres = {}
    for a in range(aut.aut.order):
        fibres.setdefault(aut.out_projection(a), []).append(a)
    candidates = [fibres[lien.kappa(g)] for g in gens]
    budget = Budget("lifting homs")
    found = []

    def search(prefix: List[int]) -> None:
        budget.charge()
        images = extend_on_generators(gamma, gens[:len(prefix)], prefix, aut.aut)
        if images is None:
            return
        if len(prefix) == len(gens):
            found.append(tuple(int(v) for v in images))
            return
        for a in candidates[len(prefix)]:
            search(prefix + [a])

    search([])
    return sorted(found)


def split_class(lien: Lien, f: Sequence[int]) -> ExtensionCocycle:
    """The neutral class (f, 1) of a hom f: Γ → Aut(G) over κ."""
    n = lien.gamma.order
    return ExtensionCocycle(lien, tuple(int(a) for a in f), (0,) * (n * n))


@functools.lru_cache(maxsize=64)
def _neutral_index(  # pylint: disable=unused-argument
    lien: Lien, budget: int
) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    index: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
    for f in lifting_homs(lien):
        index.setdefault(canonical(split_class(lien, f)).gvals, f)
    return index


@dataclass(frozen=True)
class NeutralWitness:
    """A hom f: Γ → Aut(G) over κ and h with h·e = (f, 1)."""

    hom: Tuple[int, ...]
    h: Tuple[int, ...]


def is_neutral(e: ExtensionCocycle) -> Tuple[bool, Optional[NeutralWitness]]:
    """Whether e is equivalent to some (f, 1) with f a homomorphism."""
    f = _neutral_index(e.lien, current_settings().budget).get(canonical(e).gvals)
    if f is None:
        return False, None
    h = equivalence_witness(e, split_class(e.lien, f))
    return True, NeutralWitness(f, h)


def act_by_h2z(xi: CohClass2, e: ExtensionCocycle) -> ExtensionCocycle:
    """(φ, ξ·g); raises LienMismatch unless ξ lives on the center of e's lien."""
    zmod = center_module(e.lien)
    if xi.ctx != zmod.ctx:
        raise LienMismatch("class does not live on the center module of the lien")
    G, zel = e.lien.g, zmod.subgroup.elements
    gvals = tuple(G.mul(zel[x], g) for x, g in zip(xi.values, e.gvals))
    return ExtensionCocycle(e.lien, e.phi, gvals)


def difference_class(e1: ExtensionCocycle, e2: ExtensionCocycle) -> CohClass2:
    """The unique ξ with ξ·e1 equivalent to e2."""
    if e1.lien != e2.lien:
        raise LienMismatch("extension classes of different liens")
    _, z1 = _central_part(e1)
    _, z2 = _central_part(e2)
    zmod = center_module(e1.lien)
    Z = zmod.subgroup.group
    try:
        return class2_from_values(zmod.ctx, [Z.mul(b, Z.inv(a)) for a, b in zip(z1, z2)])
    except CocycleInvalid as exc:
        raise NotComparable("difference of the two classes is not a cocycle") from exc


def delta_image(lien: Lien, f0: Sequence[int]) -> List[CohClass2]:
    """δ(H¹(Γ, G₀/Z)) ⊆ H²(Γ, Z) for the Γ-group G₀ given by f0, sorted."""
    g0 = action_from_homs(lien.gamma, lien.aut, f0)
    zmod = center_module(lien)
    quotient_ctx, _ = quotient_action(g0, zmod.subgroup)
    image = {delta_central(psi, g0, zmod.subgroup).values for psi in h1_enumerate(quotient_ctx)}
    return [class2_from_values(zmod.ctx, v) for v in sorted(image)]


def neutral_via_delta(e_neutral: ExtensionCocycle, xi: CohClass2) -> bool:
    """Whether ξ·e_neutral is neutral, decided through δ of the base Γ-group.

    With g ↦ ξ·g as the action and δ(ψ) = [b_σ·σ(b_τ)·b_στ⁻¹], the class
    ξ·e₀ is neutral exactly when −ξ lies in the image of δ.
    Raises NotNeutralBase when e_neutral is not neutral.
    """
    neutral, witness = is_neutral(e_neutral)
    if not neutral:
        raise NotNeutralBase("base class is not neutral")
    zmod = center_module(e_neutral.lien)
    if xi.ctx != zmod.ctx:
        raise LienMismatch("class does not live on the center module of the lien")
    Z = zmod.subgroup.group
    minus = class2_from_values(zmod.ctx, [Z.inv(x) for x in xi.values])
    return minus in delta_image(e_neutral.lien, witness.hom)


def restrict_lien(lien: Lien, sub: SubgroupHandle) -> Lien:
    if sub.parent != lien.gamma:
        raise NotSubgroup("subgroup does not belong to the acting group")
    kappa = GroupHom(sub.group, lien.kappa.codomain, tuple(lien.kappa(s) for s in sub.elements))
    return Lien(sub.group, lien.g, kappa)


def restrict_extension(e: ExtensionCocycle, sub: SubgroupHandle) -> ExtensionCocycle:
    """Restriction of a class to Δ ≤ Γ (Δ re-indexed)."""
    lien = restrict_lien(e.lien, sub)
    n, emb = e.lien.gamma.order, sub.elements
    gvals = tuple(e.gvals[s * n + t] for s in emb for t in emb)
    return ExtensionCocycle(lien, tuple(e.phi[s] for s in emb), gvals)


# ---------------------------------------------------------------------------
# explicit extension groups


@dataclass(frozen=True)
class ExtensionGroup:
    """E with 1 → G → E → Γ → 1; (x, σ) sits at index σ·|G| + x."""

    group: FiniteGroup
    proj: GroupHom
    incl: GroupHom


def extension_group(e: ExtensionCocycle) -> ExtensionGroup:
    """Build E with (x,σ)(y,τ) = (x·φ_σ(y)·g_{σ,τ}, στ)."""
    lien = e.lien
    G, gamma, aut = lien.g, lien.gamma, lien.aut
    m, n = G.order, gamma.order
    check_bounds(gamma, G)
    elems = [(x, s) for s in range(n) for x in range(m)]
    table = [
        [
            gamma.mul(s, t) * m + G.mul(G.mul(x, aut.apply(e.phi[s], y)), e.g(s, t))
            for (y, t) in elems
        ]
        for (x, s) in elems
    ]
    labels = [f"({G.label(x)},{gamma.label(s)})" for x, s in elems]
    E = validate_group(table, labels=labels, name="extension")
    proj = GroupHom(E, gamma, tuple(s for _, s in elems))
    incl = GroupHom(G, E, tuple(range(m)))
    return ExtensionGroup(E, proj, incl)


def class_from_extension(
    lien: Lien, E: FiniteGroup, proj: GroupHom, incl: GroupHom
) -> ExtensionCocycle:
    """Read off (φ, g) from an extension using the least-index section."""
    if proj.domain != E or proj.codomain != lien.gamma or incl.domain != lien.g or incl.codomain != E:
        raise ContextMismatch("extension maps do not match the lien")
    if set(incl.images) != set(proj.kernel().elements) or len(set(incl.images)) != lien.g.order:
        raise ContextMismatch("inclusion is not onto the kernel of the projection")
    back = {y: x for x, y in enumerate(incl.images)}
    section = [min(proj.preimages(s)) for s in range(lien.gamma.order)]
    aut = lien.aut
    phi = []
    for s in section:
        perm = [back[E.conj(s, incl(x))] for x in range(lien.g.order)]
        phi.append(aut.index_of(perm))
    gvals = []
    for s in range(lien.gamma.order):
        for t in range(lien.gamma.order):
            st = lien.gamma.mul(s, t)
            gvals.append(back[E.mul(E.mul(section[s], section[t]), E.inv(section[st]))])
    kappa = tuple(aut.out_projection(a) for a in phi)
    if kappa != lien.kappa.images:
        raise LienMismatch("extension induces a different outer action")
    return ExtensionCocycle(lien, tuple(phi), tuple(gvals))


def find_splitting(E: FiniteGroup, proj: GroupHom) -> Optional[Tuple[int, ...]]:
    """A hom section s: Γ → E of ``proj``, or None."""
    gamma = proj.codomain
    if gamma.order == 1:
        return (0,)
    gens = minimal_generating_set(gamma)
    candidates = [proj.preimages(g) for g in gens]
    budget = Budget("splitting search")

    def search(prefix: List[int]) -> Optional[Tuple[int, ...]]:
        budget.charge()
        images = extend_on_generators(gamma, gens[:len(prefix)], prefix, E)
        if images is None:
            return None
        if len(prefix) == len(gens):
            return tuple(int(v) for v in images)
        for y in candidates[len(prefix)]:
            found = search(prefix + [y])
            if found is not None:
                return found
        return None

    return search([])


def splitting_to_hom(lien: Lien, ext: ExtensionGroup, section: Sequence[int]) -> Tuple[int, ...]:
    """Automorphisms of G induced by conjugation with a hom section."""
    back = {y: x for x, y in enumerate(ext.incl.images)}
    E = ext.group
    try:
        return tuple(
            lien.aut.index_of([back[E.conj(s, ext.incl(x))] for x in range(lien.g.order)])
            for s in section
        )
    except KeyError as exc:
        raise NotHomomorphism("section does not normalize the kernel") from exc
