"""Classes of the tame local group ⟨σ, τ | στσ⁻¹ = τ^q⟩ in a constant group.

A class is a pair (s, t) = (image of σ, image of τ) up to simultaneous
conjugation. The wild part is not modelled.
"""

import logging
import math
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np

from src.core.groups import (FiniteGroup, GroupHom, is_cyclic,
                             subgroup_generated)
from src.utils.errors import (BudgetExceeded, CocycleInvalid, ContextMismatch,
                              HypothesisViolated, NotSurjective,
                              NotTotallyRamifiedCyclic)
from src.utils.settings import Budget, current_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TameLocalDatum:
    q_mod: int
    g: FiniteGroup

    @property
    def exponent(self) -> int:
        return self.g.exponent

    @property
    def q_reduced(self) -> int:
        """q modulo the exponent of g; the relation only depends on it."""
        return self.q_mod % self.exponent

    @property
    def coprime(self) -> bool:
        return math.gcd(self.q_mod, self.g.order) == 1

    @property
    def hypothesis_ok(self) -> bool:
        """Whether the exponent divides q − 1."""
        return (self.q_mod - 1) % self.exponent == 0

    def to_dict(self) -> Dict[str, object]:
        return {
            "q": self.q_mod,
            "q_reduced": self.q_reduced,
            "exponent": self.exponent,
            "coprime": self.coprime,
            "hypothesis_ok": self.hypothesis_ok,
        }


@dataclass(frozen=True)
class LocalFlags:
    unramified: bool
    ramified: bool
    cyclic: bool
    totally_ramified: bool

    def to_dict(self) -> Dict[str, bool]:
        return asdict(self)


def _relation_holds(d: TameLocalDatum, s: int, t: int) -> bool:
    g = d.g
    return g.conj(s, t) == g.power(t, d.q_reduced)


class LocalClass:
    """A local class given by any representative pair (s, t)."""

    def __init__(self, datum: TameLocalDatum, s: int, t: int):
        if not (0 <= s < datum.g.order and 0 <= t < datum.g.order):
            raise CocycleInvalid("pair out of range", {"s": s, "t": t})
        if not _relation_holds(datum, s, t):
            raise CocycleInvalid(
                "pair does not satisfy s·t·s⁻¹ = t^q", {"s": s, "t": t, "q": datum.q_reduced}
            )
        self.datum = datum
        self.s = s
        self.t = t

    @cached_property
    def key(self) -> Tuple[int, int]:
        """Least (s, t) under simultaneous conjugation."""
        g = self.datum.g
        conj = g.table[g.table[:, [self.s, self.t]], g.inverses[:, None]]
        # conj[x] = (x·s·x⁻¹, x·t·x⁻¹)
        return min((int(a), int(b)) for a, b in conj.tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalClass):
            return NotImplemented
        return self.datum == other.datum and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.datum, self.key))

    def __repr__(self) -> str:
        return f"LocalClass(s={self.s}, t={self.t}, q={self.datum.q_mod})"

    def to_dict(self) -> Dict[str, object]:
        s, t = self.key
        return {"s": s, "t": t, "flags": classify_local_class(self).to_dict()}


def local_h1_enumerate(d: TameLocalDatum) -> List[LocalClass]:
    """All local classes, sorted by canonical pair."""
    g = d.g
    settings = current_settings()
    if g.order > settings.max_order:
        raise BudgetExceeded(
            f"|g|={g.order} exceeds the bound {settings.max_order}",
            {"target_order": g.order, "max_order": settings.max_order},
        )
    Budget("local pairs").require(g.order * g.order)
    powers = np.array([g.power(t, d.q_reduced) for t in range(g.order)], dtype=np.int64)
    keys = set()
    t_inv = g.inverses
    for s in range(g.order):
        row = g.table[g.table[s], t_inv[s]]  # row[t] = s·t·s⁻¹
        for t in np.nonzero(row == powers)[0]:
            keys.add(LocalClass(d, s, int(t)).key)
    logger.debug("local H^1 with |g|=%d, q=%d has %d classes", g.order, d.q_reduced, len(keys))
    return [LocalClass(d, s, t) for s, t in sorted(keys)]


def classify_local_class(c: LocalClass) -> LocalFlags:
    g = c.datum.g
    s, t = c.key
    whole = subgroup_generated(g, [s, t])
    inertia = subgroup_generated(g, [t])
    unramified = t == 0
    return LocalFlags(
        unramified=unramified,
        ramified=not unramified,
        cyclic=is_cyclic(whole.group),
        totally_ramified=whole.elements == inertia.elements,
    )


def pushforward_local_class(c: LocalClass, p: GroupHom, d_h: TameLocalDatum) -> LocalClass:
    if p.domain != c.datum.g or p.codomain != d_h.g:
        raise ContextMismatch("hom does not connect the two local data")
    return LocalClass(d_h, p(c.s), p(c.t))


def local_lifts(c: LocalClass, p: GroupHom, d_g: TameLocalDatum) -> List[LocalClass]:
    """Every class of d_g whose image under p is c."""
    return [x for x in local_h1_enumerate(d_g) if pushforward_local_class(x, p, c.datum) == c]


def lift_totally_ramified(d_g: TameLocalDatum, p: GroupHom, c: LocalClass) -> LocalClass:
    """Lift a totally ramified cyclic class through a surjection G → H.

    With (s, t) = (t^m, t), m least, the lift is (g^m, g) for the least
    preimage g of t.
    """
    if p.domain != d_g.g or p.codomain != c.datum.g:
        raise ContextMismatch("hom does not connect the two local data")
    if not p.is_surjective():
        raise NotSurjective("projection is not surjective")
    if not d_g.hypothesis_ok:
        raise HypothesisViolated(
            f"exponent {d_g.exponent} does not divide q − 1",
            {"q": d_g.q_mod, "exponent": d_g.exponent},
        )
    flags = classify_local_class(c)
    if not (flags.totally_ramified and flags.cyclic):
        raise NotTotallyRamifiedCyclic("class is not totally ramified and cyclic", flags.to_dict())
    h = c.datum.g
    s, t = c.key
    m = next(k for k in range(h.order) if h.power(t, k) == s)
    g = min(p.preimages(t))
    lifted = LocalClass(d_g, d_g.g.power(g, m), g)
    logger.debug("lifted (%d, %d) with m=%d to (%d, %d)", s, t, m, lifted.s, lifted.t)
    return lifted
