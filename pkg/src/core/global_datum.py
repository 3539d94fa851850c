"""A finite Galois quotient with places, and the solvers built on it.

Γ stands for Gal(M/K) of a finite extension; each place carries its
decomposition group, inertia group and Frobenius inside Γ. Local classes
are restrictions to decomposition groups.
"""

import dataclasses
import itertools
import logging
from dataclasses import dataclass, field
from typing import (Dict, Iterator, List, Mapping, Optional, Sequence, Set,
                    Tuple, Union)

from sympy import isprime, primefactors

from src.core.cohomology import (CohClass1, CohClass2, DualModuleSpec,
                                 GammaAction, action_from_homs, class_from_values,
                                 class2_from_values, delta_central,
                                 dual_module, h1_enumerate,
                                 h2_abelian_enumerate, lift_class,
                                 pushforward_class, quotient_action,
                                 restrict_action, restrict_class,
                                 restrict_class2, springer_data, sub_action,
                                 twist_action, validate_chi)
from src.core.groups import (FiniteGroup, SubgroupHandle,
                             derived_series, ell_torsion, is_cyclic, is_normal,
                             normal_core, quotient_group, subgroups)
from src.core.liens import (ExtensionCocycle, Lien, center_module,
                            difference_class, equivalence_witness, is_neutral,
                            lifting_homs, restrict_extension,
                            split_class)
from src.core.local_tame import LocalFlags
from src.utils.errors import (ActionMismatch, ContextMismatch,
                              HypothesesNotMet, NotAbelian,
                              NotHomOnSplittingGroup, NotNormal, NotSimple,
                              NotSolvable, NotSubgroup, PlaceUnknown)
from src.utils.settings import Budget

logger = logging.getLogger(__name__)

PLACE_KINDS = ("finite", "archimedean", "divides_n")


@dataclass(frozen=True)
class PlaceSpec:
    name: str
    kind: str
    decomposition: SubgroupHandle
    inertia: SubgroupHandle
    frobenius: int = 0
    tau: Optional[int] = None
    q_mod_n: int = 1


def check_place(gamma: FiniteGroup, place: PlaceSpec) -> None:
    """Raise HypothesesNotMet when a place is not a valid local datum."""

    def fail(reason: str) -> None:
        raise HypothesesNotMet(f"place {place.name}: {reason}", {"place": place.name})

    if place.kind not in PLACE_KINDS:
        fail(f"unknown kind {place.kind!r}")
    gv, iv = place.decomposition, place.inertia
    if gv.parent != gamma or iv.parent != gamma:
        fail("subgroups do not belong to Γ")
    if not iv.is_subset_of(gv):
        fail("inertia is not inside the decomposition group")
    local_i = SubgroupHandle(gv.group, tuple(sorted(gv.local_index[x] for x in iv)))
    if not is_normal(gv.group, local_i):
        fail("inertia is not normal in the decomposition group")
    if place.frobenius not in gv.element_set:
        fail("frobenius is not in the decomposition group")
    quotient, proj = quotient_group(gv.group, local_i)
    frob = proj(gv.local_index[place.frobenius])
    if quotient.order > 1 and int(quotient.element_orders[frob]) != quotient.order:
        fail("frobenius does not generate the quotient by inertia")
    if place.tau is not None:
        if place.tau not in iv.element_set:
            fail("tau is not in the inertia group")
        if int(gamma.element_orders[place.tau]) != iv.order:
            fail("tau does not generate the inertia group")
    if place.kind == "archimedean" and (gv.order > 2 or iv.elements != gv.elements):
        fail("archimedean places need |Γ_v| ≤ 2 and I_v = Γ_v")


@dataclass(frozen=True)
class GlobalDatum:
    gamma: FiniteGroup
    n: int
    chi: Tuple[int, ...]
    n_prime: SubgroupHandle
    n_L: SubgroupHandle
    places: Tuple[PlaceSpec, ...] = ()

    def place(self, name: str) -> PlaceSpec:
        for v in self.places:
            if v.name == name:
                return v
        raise PlaceUnknown(f"no place named {name!r}", {"place": name})

    @property
    def primes(self) -> List[int]:
        return [int(p) for p in primefactors(self.n)]


def make_datum(
    gamma: FiniteGroup,
    n: int,
    chi: Sequence[int],
    n_prime: SubgroupHandle,
    n_L: SubgroupHandle,
    places: Sequence[PlaceSpec] = (),
) -> GlobalDatum:
    """Check the structural invariants and build the datum.

    Raises ChiNotHom, NotNormal, NotSubgroup or HypothesesNotMet.
    """
    chi = tuple(int(x) % n for x in chi)
    validate_chi(gamma, chi, n)
    for label, sub in (("n_prime", n_prime), ("n_L", n_L)):
        if sub.parent != gamma:
            raise NotSubgroup(f"{label} does not belong to Γ")
        if not is_normal(gamma, sub):
            raise NotNormal(f"{label} is not normal in Γ", {"elements": list(sub.elements)})
    if not n_L.is_subset_of(n_prime):
        raise NotSubgroup("n_L must lie inside n_prime")
    if any(chi[s] != 1 % n for s in n_L):
        raise HypothesesNotMet("χ must be trivial on n_L")
    names = [v.name for v in places]
    if len(set(names)) != len(names):
        raise HypothesesNotMet("place names must be unique", {"places": names})
    for v in places:
        check_place(gamma, v)
    return GlobalDatum(gamma, n, chi, n_prime, n_L, tuple(places))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    detail: Mapping[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "detail": dict(self.detail)}


@dataclass(frozen=True)
class ValidationReport:
    checks: Mapping[str, CheckResult]
    p_places: Tuple[str, ...]
    warnings: Tuple[str, ...] = ()

    REQUIRED = ("splitting", "coprimality", "frobenius", "exponent")

    @property
    def passed(self) -> bool:
        return all(self.checks[k].ok for k in self.REQUIRED)

    def failed(self) -> List[str]:
        return [k for k in self.REQUIRED if not self.checks[k].ok]

    def to_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "checks": {k: v.to_dict() for k, v in sorted(self.checks.items())},
            "p_places": list(self.p_places),
            "warnings": list(self.warnings),
        }


def chi_failures(d: GlobalDatum, sub: SubgroupHandle) -> List[int]:
    """Primes ℓ | n for which χ mod ℓ is trivial on ``sub``."""
    return [ell for ell in d.primes if all(d.chi[s] % ell == 1 for s in sub)]


def p_places(d: GlobalDatum) -> Tuple[str, ...]:
    """Finite places, totally split in L, with q ≡ 1 mod n."""
    return tuple(
        v.name
        for v in d.places
        if v.kind == "finite"
        and v.decomposition.is_subset_of(d.n_L)
        and v.q_mod_n % d.n == 1 % d.n
    )


def _check_context(d: GlobalDatum, action: GammaAction) -> None:
    if action.gamma != d.gamma:
        raise ContextMismatch("action is over a different group than the datum")


def datum_validate(d: GlobalDatum, action: GammaAction) -> ValidationReport:
    """Check the hypotheses of the lifting theorem; never raises on failure."""
    _check_context(d, action)
    ident = tuple(range(action.target.order))
    moving = [s for s in d.n_prime if action.perms[s] != ident]
    checks = {"splitting": CheckResult(not moving, {"moving": moving[:5]})}

    bad_primes = chi_failures(d, d.n_prime)
    checks["coprimality"] = CheckResult(not bad_primes, {"primes": bad_primes})

    frob_bad = []
    for v in d.places:
        if v.kind == "archimedean":
            continue
        if d.chi[v.frobenius] != v.q_mod_n % d.n:
            frob_bad.append({"place": v.name, "reason": "χ(frobenius) ≠ q"})
        elif v.tau is not None and d.n % int(d.gamma.element_orders[v.tau]) == 0:
            g = d.gamma
            if g.conj(v.frobenius, v.tau) != g.power(v.tau, v.q_mod_n):
                frob_bad.append({"place": v.name, "reason": "frobenius·tau·frobenius⁻¹ ≠ tau^q"})
    checks["frobenius"] = CheckResult(not frob_bad, {"places": frob_bad})

    cyclic_subs = [h for h in subgroups(d.gamma) if is_cyclic(h.group)]
    covered = {v.decomposition.elements for v in d.places if v.inertia.order == 1}
    missing = [list(h.elements) for h in cyclic_subs if h.elements not in covered]
    checks["chebotarev"] = CheckResult(not missing, {"missing": missing[:5]})

    exp = action.target.exponent
    checks["exponent"] = CheckResult(d.n % exp == 0, {"exponent": exp, "n": d.n})

    arch_bad = []
    if d.n % 2:
        for v in d.places:
            if v.kind == "archimedean" and len(h1_enumerate(restrict_action(action, v.decomposition))) != 1:
                arch_bad.append(v.name)
    checks["archimedean"] = CheckResult(not arch_bad, {"places": arch_bad})

    warnings = []
    local_l = SubgroupHandle(d.n_prime.group, tuple(sorted(d.n_prime.local_index[x] for x in d.n_L)))
    if not quotient_group(d.n_prime.group, local_l)[0].is_abelian:
        warnings.append("n_prime/n_L is not abelian")
    report = ValidationReport(checks, p_places(d), tuple(warnings))
    if not report.passed:
        logger.warning("datum fails %s", ", ".join(report.failed()))
    return report


def _require_hypotheses(d: GlobalDatum, action: GammaAction) -> ValidationReport:
    report = datum_validate(d, action)
    if not report.passed:
        raise HypothesesNotMet(
            "datum does not satisfy the hypotheses: " + ", ".join(report.failed()),
            {"failed": report.failed()},
        )
    return report


# ---------------------------------------------------------------------------
# localization


def _resolve_place(d: GlobalDatum, v: Union[str, PlaceSpec]) -> PlaceSpec:
    if isinstance(v, str):
        return d.place(v)
    if v not in d.places:
        raise PlaceUnknown(f"place {v.name!r} is not part of the datum", {"place": v.name})
    return v


def _trivial_on(c: CohClass1, sub: SubgroupHandle) -> bool:
    return restrict_class(c, sub).is_trivial


def _in_local(gv: SubgroupHandle, h: SubgroupHandle) -> SubgroupHandle:
    return SubgroupHandle(gv.group, tuple(sorted(gv.local_index[x] for x in h)))


def _cyclic_quotient(gv: SubgroupHandle, h: SubgroupHandle) -> bool:
    local = _in_local(gv, h)
    if not is_normal(gv.group, local):
        return False
    return is_cyclic(quotient_group(gv.group, local)[0])


def _covers(gamma: FiniteGroup, gv: SubgroupHandle, h: SubgroupHandle, iv: SubgroupHandle) -> bool:
    return len({gamma.mul(x, y) for x in h for y in iv}) == gv.order


def class_flags(c: CohClass1, place: PlaceSpec) -> LocalFlags:
    """Local predicates of a global class at one place."""
    gv, iv = place.decomposition, place.inertia
    gamma = c.ctx.gamma
    unramified = _trivial_on(c, iv)
    killers = [h for h in subgroups(gamma) if h.is_subset_of(gv) and _trivial_on(c, h)]
    return LocalFlags(
        unramified=unramified,
        ramified=not unramified,
        cyclic=any(_cyclic_quotient(gv, h) for h in killers),
        totally_ramified=any(_covers(gamma, gv, h, iv) for h in killers),
    )


@dataclass(frozen=True)
class Localized:
    place: str
    cls: CohClass1
    flags: LocalFlags

    def to_dict(self) -> Dict[str, object]:
        return {"place": self.place, "class": list(self.cls.values), "flags": self.flags.to_dict()}


def localize(
    d: GlobalDatum, action: GammaAction, c: CohClass1, v: Union[str, PlaceSpec]
) -> Localized:
    """Restriction of c to Γ_v with its local predicates. Raises PlaceUnknown."""
    place = _resolve_place(d, v)
    if c.ctx != action:
        raise ContextMismatch("class is not over the given action")
    return Localized(place.name, restrict_class(c, place.decomposition), class_flags(c, place))


def sha(d: GlobalDatum, action: GammaAction, degree: int = 1) -> List[Union[CohClass1, CohClass2]]:
    """Classes of H^degree(Γ, A) that vanish at every place."""
    _check_context(d, action)
    if not action.target.is_abelian:
        raise NotAbelian("Sha is computed for abelian modules")
    if degree == 1:
        return [
            c for c in h1_enumerate(action)
            if all(_trivial_on(c, v.decomposition) for v in d.places)
        ]
    if degree == 2:
        return [
            c for c in h2_abelian_enumerate(action)
            if all(restrict_class2(c, v.decomposition).is_zero for v in d.places)
        ]
    raise HypothesesNotMet("degree must be 1 or 2", {"degree": degree})


# ---------------------------------------------------------------------------
# modules


def stable_subgroups(ctx: GammaAction) -> List[SubgroupHandle]:
    """Normal Γ-stable subgroups of the target, by (order, elements)."""
    G = ctx.target
    out = []
    for h in subgroups(G):
        members = h.element_set
        if is_normal(G, h) and all(
            ctx.perms[s][x] in members for s in range(ctx.gamma.order) for x in h
        ):
            out.append(h)
    return out


def minimal_submodule(ctx: GammaAction) -> Optional[SubgroupHandle]:
    """Least nonzero Γ-stable normal subgroup, or None for a trivial target."""
    for h in stable_subgroups(ctx):
        if h.order > 1:
            return h
    return None


def is_simple_module(ctx: GammaAction) -> bool:
    """Nontrivial elementary abelian ℓ-group with no proper nonzero submodule."""
    A = ctx.target
    if A.order == 1 or not A.is_abelian or not isprime(A.exponent):
        return False
    return minimal_submodule(ctx).order == A.order


@dataclass(frozen=True)
class InjectivityReport:
    injective: bool
    counterexample: Optional[CohClass1]
    p_places: Tuple[str, ...]
    devissage: Optional[Mapping[str, object]] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "injective": self.injective,
            "counterexample": None if self.counterexample is None else list(self.counterexample.values),
            "p_places": list(self.p_places),
            "devissage": None if self.devissage is None else dict(self.devissage),
        }


def _first_unseen(ctx: GammaAction, places: Sequence[PlaceSpec]) -> Optional[CohClass1]:
    for c in h1_enumerate(ctx):
        if c.is_trivial:
            continue
        if all(_trivial_on(c, v.decomposition) for v in places):
            return c
    return None


def injectivity_on_P(d: GlobalDatum, spec: DualModuleSpec) -> InjectivityReport:
    """Whether H¹(Γ, A*) → ∏_{v∈P} H¹(Γ_v, A*) is injective."""
    _require_hypotheses(d, spec.base)
    names = p_places(d)
    places = [d.place(name) for name in names]
    dual = dual_module(spec)
    bad = _first_unseen(dual, places)
    devissage = None
    sub = minimal_submodule(dual)
    if sub is not None and sub.order < dual.target.order:
        quotient, _ = quotient_action(dual, sub)
        devissage = {
            "submodule_order": sub.order,
            "submodule_injective": _first_unseen(sub_action(dual, sub), places) is None,
            "quotient_injective": _first_unseen(quotient, places) is None,
        }
    return InjectivityReport(bad is None, bad, names, devissage)


# ---------------------------------------------------------------------------
# local targets and the conditions of the lifting theorem


@dataclass(frozen=True)
class LocalTargets:
    """Prescribed local classes β_v for the places v ∈ S."""

    classes: Tuple[Tuple[str, CohClass1], ...] = ()

    @property
    def S(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.classes)

    def as_dict(self) -> Dict[str, CohClass1]:
        return dict(self.classes)


def make_targets(
    d: GlobalDatum, action: GammaAction, classes: Mapping[str, CohClass1]
) -> LocalTargets:
    """Check each β_v lives over the action restricted to Γ_v."""
    for name, c in classes.items():
        place = d.place(name)
        if c.ctx != restrict_action(action, place.decomposition):
            raise ActionMismatch(f"target at {name} is not over the restricted action", {"place": name})
    return LocalTargets(tuple(sorted(classes.items())))


def violations(
    d: GlobalDatum,
    c: CohClass1,
    targets: Mapping[str, CohClass1],
    p_set: Set[str],
) -> List[str]:
    """Failed conditions: agreement on S, and cyclic / tame ramification off S."""
    out = []
    for v in d.places:
        if v.name in targets:
            if restrict_class(c, v.decomposition) != targets[v.name]:
                out.append(f"{v.name}: differs from target")
            continue
        flags = class_flags(c, v)
        if not flags.cyclic:
            out.append(f"{v.name}: not cyclic")
        if flags.ramified and not (flags.totally_ramified and v.name in p_set):
            out.append(f"{v.name}: ramified outside the allowed places")
    return out


@dataclass(frozen=True)
class Solution:
    cls: CohClass1
    per_place: Tuple[Localized, ...]
    trace: Tuple[str, ...] = ()

    status = "solved"

    def to_dict(self) -> Dict[str, object]:
        return {
            "status": self.status,
            "class": list(self.cls.values),
            "per_place": [p.to_dict() for p in self.per_place],
            "trace": list(self.trace),
        }


@dataclass(frozen=True)
class Infeasible:
    trace: Tuple[str, ...] = ()
    record: Tuple[Mapping[str, object], ...] = ()

    status = "infeasible"

    def to_dict(self) -> Dict[str, object]:
        return {
            "status": self.status,
            "class": None,
            "per_place": [],
            "trace": list(self.trace),
            "record": [dict(r) for r in self.record],
        }


def _solution(d: GlobalDatum, c: CohClass1, trace: Sequence[str]) -> Solution:
    per_place = tuple(localize(d, c.ctx, c, v) for v in d.places)
    return Solution(c, per_place, tuple(trace))


def solve_by_filter(
    d: GlobalDatum, action: GammaAction, targets: LocalTargets
) -> List[CohClass1]:
    """Every class of H¹(Γ, G) meeting the conditions (exhaustive)."""
    _check_context(d, action)
    wanted, p_set = targets.as_dict(), set(p_places(d))
    return [c for c in h1_enumerate(action) if not violations(d, c, wanted, p_set)]


def simple_module_solve(
    d: GlobalDatum, action: GammaAction, targets: LocalTargets
) -> Union[Solution, Infeasible]:
    """Least class of H¹(Γ, A) meeting the conditions, A a simple ℓ-module."""
    if not is_simple_module(action):
        raise NotSimple("coefficient module is not a simple ℓ-torsion module")
    _require_hypotheses(d, action)
    wanted, p_set = targets.as_dict(), set(p_places(d))
    record = []
    for c in h1_enumerate(action):
        bad = violations(d, c, wanted, p_set)
        if not bad:
            return _solution(d, c, ["simple module scan"])
        record.append({"class": list(c.values), "violations": bad})
    return Infeasible(("simple module scan exhausted",), tuple(record))


# ---------------------------------------------------------------------------
# control of the splitting field


@dataclass(frozen=True)
class SplittingReport:
    delta_prime: SubgroupHandle
    delta_second: SubgroupHandle
    zeta_ok: Mapping[int, bool]

    @property
    def ok(self) -> bool:
        return all(self.zeta_ok.values())

    def to_dict(self) -> Dict[str, object]:
        return {
            "delta_prime": list(self.delta_prime.elements),
            "delta_second": list(self.delta_second.elements),
            "zeta_ok": {str(k): v for k, v in sorted(self.zeta_ok.items())},
        }


def control_splitting(
    d: GlobalDatum, action: GammaAction, alpha: CohClass1, avoid_primes: Sequence[int]
) -> SplittingReport:
    """Kernel of α on n_prime, its normal core in Γ, and the χ mod ℓ report."""
    _check_context(d, action)
    G, gamma, vals = action.target, d.gamma, alpha.values
    for s in d.n_prime:
        for t in d.n_prime:
            if vals[gamma.mul(s, t)] != G.mul(vals[s], vals[t]):
                raise NotHomOnSplittingGroup(
                    "class is not a homomorphism on n_prime", {"pair": [s, t]}
                )
    delta_prime = SubgroupHandle(gamma, tuple(s for s in d.n_prime if vals[s] == 0))
    delta_second = normal_core(gamma, delta_prime)
    zeta_ok = {
        int(ell): any(d.chi[s] % ell != 1 for s in delta_second) for ell in avoid_primes
    }
    return SplittingReport(delta_prime, delta_second, zeta_ok)


# ---------------------------------------------------------------------------
# dévissage


class _Devissage:
    """Backtracking solver along the derived series of G."""

    def __init__(self, d: GlobalDatum, aux_places: Sequence[str] = ()):
        self.d = d
        self.p_set = set(p_places(d))
        self.aux = tuple(aux_places)
        self.trace: List[str] = []
        self.budget = Budget("devissage")

    def note(self, depth: int, message: str) -> None:
        self.trace.append("  " * depth + message)
        logger.debug("devissage: %s", message)

    def solutions(
        self, ctx: GammaAction, targets: Mapping[str, CohClass1], depth: int = 0
    ) -> Iterator[CohClass1]:
        """Every solution for ctx, each yielded once."""
        seen: Set[Tuple[int, ...]] = set()
        for c in self._candidates(ctx, targets, depth):
            self.budget.charge()
            if c.values in seen or violations(self.d, c, targets, self.p_set):
                continue
            seen.add(c.values)
            yield c

    def _candidates(
        self, ctx: GammaAction, targets: Mapping[str, CohClass1], depth: int
    ) -> Iterator[CohClass1]:
        G = ctx.target
        if G.order == 1 or is_simple_module(ctx):
            self.note(depth, f"|G|={G.order}: scan of H^1")
            yield from h1_enumerate(ctx)
            return
        A = self._kernel(ctx)
        h_ctx, proj = quotient_action(ctx, A)
        pushed = {
            name: pushforward_class(c, proj, restrict_action(h_ctx, self.d.place(name).decomposition))
            for name, c in targets.items()
        }
        self.note(depth, f"|G|={G.order}: kernel of order {A.order}, quotient of order {h_ctx.target.order}")
        gammas = list(self.solutions(h_ctx, pushed, depth + 1))
        controlled = {g.values: self._control_ok(h_ctx, g) for g in gammas}
        gammas.sort(key=lambda g: not controlled[g.values])
        for gamma_cls in gammas:
            if not controlled[gamma_cls.values]:
                self.note(depth, f"γ={list(gamma_cls.values)} deferred: splitting field not controlled")
            data = springer_data(gamma_cls, ctx, A)
            if not data.obstruction.is_zero:
                self.note(depth, f"γ={list(gamma_cls.values)} obstructed")
                continue
            b0 = lift_class(gamma_cls, ctx, A)
            twisted_a = sub_action(twist_action(ctx, b0), A)
            self.note(depth, f"γ={list(gamma_cls.values)} lifts; structured correction")
            yield from self._structured(ctx, A, b0, twisted_a, targets, depth)
            self.note(depth, f"γ={list(gamma_cls.values)}: fibre enumeration")
            for x in h1_enumerate(twisted_a):
                yield self._untwist(ctx, A, b0, x)

    def _kernel(self, ctx: GammaAction) -> SubgroupHandle:
        G = ctx.target
        series = derived_series(G)
        if series[-1].order > 1:
            raise NotSolvable("coefficient group is not solvable")
        last = series[-2]
        ell = min(primefactors(last.order))
        A = ell_torsion(last, ell)
        if A.order == G.order:
            A = minimal_submodule(ctx)
        return A

    def _control_ok(self, h_ctx: GammaAction, gamma_cls: CohClass1) -> bool:
        try:
            return control_splitting(self.d, h_ctx, gamma_cls, self.d.primes).ok
        except NotHomOnSplittingGroup:
            return False

    def _untwist(
        self, ctx: GammaAction, A: SubgroupHandle, b0, x: CohClass1
    ) -> CohClass1:
        G = ctx.target
        return class_from_values(
            ctx, [G.mul(A.elements[a], b) for a, b in zip(x.values, b0.values)]
        )

    def _local_fibre(
        self, ctx: GammaAction, A: SubgroupHandle, b0, twisted_a: GammaAction, place: PlaceSpec
    ) -> List[Tuple[CohClass1, CohClass1]]:
        """(x, image in H¹(Γ_v, G)) for x ∈ H¹(Γ_v, ₍b₀₎A)."""
        gv = place.decomposition
        local_ctx = restrict_action(ctx, gv)
        G = ctx.target
        out = []
        for x in h1_enumerate(restrict_action(twisted_a, gv)):
            vals = [G.mul(A.elements[a], b0.values[s]) for a, s in zip(x.values, gv.elements)]
            out.append((x, class_from_values(local_ctx, vals)))
        return out

    def _structured(
        self,
        ctx: GammaAction,
        A: SubgroupHandle,
        b0,
        twisted_a: GammaAction,
        targets: Mapping[str, CohClass1],
        depth: int,
    ) -> Iterator[CohClass1]:
        b0_cls = class_from_values(ctx, b0.values)
        s_prime = [v for v in self.d.places if v.name in targets]
        s_prime += [
            v for v in self.d.places
            if v.name not in targets
            and (v.name in self.aux or class_flags(b0_cls, v).ramified)
        ]
        choices = []
        for v in s_prime:
            fibre = self._local_fibre(ctx, A, b0, twisted_a, v)
            if v.name in targets:
                options = [x for x, y in fibre if y == targets[v.name]]
            else:
                options = [x for x, y in fibre if self._allowed(y, v)]
            if not options:
                self.note(depth, f"no local correction at {v.name}")
                return
            choices.append((v.name, options))
        names = [name for name, _ in choices]
        for combo in itertools.product(*(opts for _, opts in choices)):
            self.budget.charge()
            sub_targets = dict(zip(names, combo))
            for x in self.solutions(twisted_a, sub_targets, depth + 1):
                yield self._untwist(ctx, A, b0, x)

    def _allowed(self, local_cls: CohClass1, place: PlaceSpec) -> bool:
        # local_cls lives over Γ_v; the flags are taken inside Γ_v itself
        gv = place.decomposition
        whole = SubgroupHandle(gv.group, tuple(range(gv.order)))
        local_place = PlaceSpec(
            place.name,
            place.kind,
            whole,
            _in_local(gv, place.inertia),
            gv.local_index[place.frobenius],
        )
        flags = class_flags(local_cls, local_place)
        if not flags.cyclic:
            return False
        return flags.unramified or (flags.totally_ramified and place.name in self.p_set)


def devissage_solve(
    d: GlobalDatum,
    action: GammaAction,
    targets: LocalTargets,
    aux_places: Sequence[str] = (),
    strict: bool = True,
) -> Union[Solution, Infeasible]:
    """Solve for a global class with prescribed localizations by dévissage.

    The returned class agrees with β_v on S and, off S, is cyclic and only
    ramified (totally) at P-places. Raises NotSolvable, HypothesesNotMet and
    BudgetExceeded.
    """
    _check_context(d, action)
    if not action.target.is_solvable:
        raise NotSolvable("coefficient group is not solvable")
    if strict:
        _require_hypotheses(d, action)
    for name in aux_places:
        d.place(name)
    solver = _Devissage(d, aux_places)
    for c in solver.solutions(action, targets.as_dict()):
        logger.info("devissage found a class after %d trace steps", len(solver.trace))
        return _solution(d, c, solver.trace)
    return Infeasible(tuple(solver.trace + ["search exhausted"]))


# ---------------------------------------------------------------------------
# weak approximation


@dataclass(frozen=True)
class WeakApproxReport:
    surjective: bool
    missing: Optional[Tuple[Tuple[str, Tuple[int, ...]], ...]] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "surjective": self.surjective,
            "missing": None if self.missing is None else [
                {"place": name, "class": list(vals)} for name, vals in self.missing
            ],
        }


def weak_approx_check(d: GlobalDatum, action: GammaAction, S: Sequence[str]) -> WeakApproxReport:
    """Surjectivity of H¹(Γ, G) → ∏_{v∈S} H¹(Γ_v, G)."""
    _check_context(d, action)
    places = [d.place(name) for name in S]
    local_sets = [
        [c.values for c in h1_enumerate(restrict_action(action, v.decomposition))] for v in places
    ]
    total = 1
    for options in local_sets:
        total *= len(options)
    Budget("local tuples").require(total)
    image = {
        tuple(restrict_class(c, v.decomposition).values for v in places)
        for c in h1_enumerate(action)
    }
    for combo in itertools.product(*local_sets):
        if combo not in image:
            return WeakApproxReport(False, tuple(zip((v.name for v in places), combo)))
    return WeakApproxReport(True)


# ---------------------------------------------------------------------------
# Hasse principle for neutral classes


@dataclass(frozen=True)
class NeutralityCertificate:
    f0: Tuple[int, ...]
    xi: Tuple[int, ...]
    alpha: Tuple[int, ...]
    hom: Tuple[int, ...]
    h: Tuple[int, ...]
    trace: Tuple[str, ...] = ()

    status = "neutral"

    def to_dict(self) -> Dict[str, object]:
        return {
            "status": self.status,
            "f0": list(self.f0),
            "xi": list(self.xi),
            "alpha": list(self.alpha),
            "hom": list(self.hom),
            "h": list(self.h),
            "trace": list(self.trace),
        }


@dataclass(frozen=True)
class Obstruction:
    trace: Tuple[str, ...] = ()
    xi: Optional[Tuple[int, ...]] = None

    status = "obstruction"

    def to_dict(self) -> Dict[str, object]:
        return {
            "status": self.status,
            "xi": None if self.xi is None else list(self.xi),
            "trace": list(self.trace),
        }


def _check_local_neutrality(
    d: GlobalDatum, eta: ExtensionCocycle, witnesses: Mapping[str, Sequence[int]]
) -> None:
    for v in d.places:
        local = restrict_extension(eta, v.decomposition)
        f = witnesses.get(v.name)
        if f is not None:
            f = tuple(int(a) for a in f)
            if f in lifting_homs(local.lien) and equivalence_witness(local, split_class(local.lien, f)) is not None:
                continue
            logger.warning("supplied splitting at %s is not valid; searching", v.name)
        neutral, _ = is_neutral(local)
        if not neutral:
            raise HypothesesNotMet(
                f"class is not neutral at {v.name}", {"place": v.name}
            )


def hasse_solve(
    d: GlobalDatum,
    lien: Lien,
    eta: ExtensionCocycle,
    local_witnesses: Optional[Mapping[str, Sequence[int]]] = None,
    prescribed: Optional[Mapping[str, Sequence[int]]] = None,
) -> Union[NeutralityCertificate, Obstruction]:
    """Decide global neutrality of a locally neutral class.

    ``local_witnesses`` optionally supplies splitting homs Γ_v → Aut(G) per
    place; ``prescribed`` restricts the base hom f₀ at designated places.
    Raises HypothesesNotMet when a hypothesis or local neutrality fails.
    """
    if eta.lien != lien or lien.gamma != d.gamma:
        raise ContextMismatch("class, lien and datum do not match")
    ker = lien.kappa.kernel()
    if ker.elements != d.n_prime.elements:
        raise HypothesesNotMet("n_prime must be the kernel of κ", {"kernel": list(ker.elements)})
    bad = chi_failures(d, d.n_prime)
    if bad:
        raise HypothesesNotMet("χ mod ℓ is trivial on n_prime", {"primes": bad})
    _check_local_neutrality(d, eta, local_witnesses or {})

    trace: List[str] = []
    bases = lifting_homs(lien)
    if prescribed:
        bases = [
            f for f in bases
            if all(
                tuple(f[s] for s in d.place(name).decomposition) == tuple(vals)
                for name, vals in prescribed.items()
            )
        ]
    if not bases:
        trace.append("no homomorphism Γ → Aut(G) lies over κ")
        return Obstruction(tuple(trace))

    for f0 in bases:
        base = _HasseBase(lien, eta, f0)
        targets = base.local_targets(d)
        if targets is None:
            trace.append(f"f0={list(f0)}: no local target at some place")
            continue
        if not base.quotient.target.is_solvable:
            trace.append(f"f0={list(f0)}: G0/Z is not solvable")
            continue
        trace.append(f"f0={list(f0)}: ξ={list(base.xi.values)}, dévissage over G0/Z")
        derived = dataclasses.replace(d, n_prime=_kernel_of(d.gamma, f0))
        for alpha in _Devissage(derived).solutions(base.quotient, targets):
            cert = base.certificate(alpha, trace + ["structured"])
            if cert is not None:
                return cert
        trace.append(f"f0={list(f0)}: no dévissage solution maps to −ξ")

    base = _HasseBase(lien, eta, bases[0])
    for alpha in h1_enumerate(base.quotient):
        cert = base.certificate(alpha, trace + ["exhaustive"])
        if cert is not None:
            return cert
    trace.append("−ξ is not in the image of δ")
    logger.info("class is locally neutral but not globally neutral")
    return Obstruction(tuple(trace), base.xi.values)


def _kernel_of(gamma: FiniteGroup, f: Sequence[int]) -> SubgroupHandle:
    return SubgroupHandle(gamma, tuple(s for s, a in enumerate(f) if a == 0))


class _HasseBase:
    """The Γ-group G₀ of a hom f₀ over κ and ξ with ξ·(f₀, 1) ~ η."""

    def __init__(self, lien: Lien, eta: ExtensionCocycle, f0: Sequence[int]):
        self.lien, self.eta, self.f0 = lien, eta, tuple(f0)
        zmod = center_module(lien)
        self.zsub = zmod.subgroup
        self.xi = difference_class(split_class(lien, self.f0), eta)
        Z = zmod.ctx.target
        self.minus = class2_from_values(zmod.ctx, [Z.inv(x) for x in self.xi.values])
        self.g0 = action_from_homs(lien.gamma, lien.aut, self.f0)
        self.quotient, self.proj = quotient_action(self.g0, self.zsub)

    def local_targets(self, d: GlobalDatum) -> Optional[Dict[str, CohClass1]]:
        """Least ψ_v ∈ H¹(Γ_v, G₀/Z) with δ(ψ_v) = −ξ_v at every place."""
        targets = {}
        for v in d.places:
            local_g0 = restrict_action(self.g0, v.decomposition)
            want = restrict_class2(self.minus, v.decomposition).values
            options = [
                psi for psi in h1_enumerate(restrict_action(self.quotient, v.decomposition))
                if delta_central(psi, local_g0, self.zsub).values == want
            ]
            if not options:
                return None
            targets[v.name] = options[0]
        return targets

    def certificate(self, alpha: CohClass1, trace: List[str]) -> Optional[NeutralityCertificate]:
        """The certificate for α when δ(α) = −ξ, verified against η."""
        if delta_central(alpha, self.g0, self.zsub) != self.minus:
            return None
        aut = self.lien.aut
        hom = tuple(
            aut.aut.mul(aut.inner(min(self.proj.preimages(a))), aut.index_of(self.g0.perms[s]))
            for s, a in enumerate(alpha.values)
        )
        h = equivalence_witness(self.eta, split_class(self.lien, hom))
        if h is None:
            logger.warning("candidate splitting does not reproduce the class")
            return None
        return NeutralityCertificate(self.f0, self.xi.values, alpha.values, hom, h, tuple(trace))
