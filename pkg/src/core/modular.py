"""Exact linear algebra for finite abelian Γ-modules.

A finite abelian group is split into p-primary parts, each with a basis of
cyclic factors; a p-part of type (p^a1, …, p^ar) is embedded in (Z/p^a)^r,
a = max ai, by scaling coordinate i by p^(a-ai). Cochain groups then become
submodules of free Z/p^a-modules, and kernels, images, membership and
particular solutions come from Howell forms over the chain ring Z/p^a.
"""

import functools
import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import factorint, primefactors

from src.core.groups import (FiniteGroup, _closure, ell_torsion,
                             minimal_generating_set)
from src.utils.errors import NotAbelian
from src.utils.settings import Budget

logger = logging.getLogger(__name__)


def _valuation(value: int, p: int) -> int:
    v = 0
    while value % p == 0:
        value //= p
        v += 1
    return v


@dataclass(frozen=True, eq=False)
class HowellForm:
    """Row module over Z/p^a in Howell form.

    ``pivots[k] = (column, valuation)``; row k has zeros before its column
    and p^valuation at it, and the rows with pivot column ≥ c span every
    element of the module vanishing on the first c columns.
    """

    p: int
    a: int
    width: int
    rows: np.ndarray
    pivots: Tuple[Tuple[int, int], ...]

    @property
    def modulus(self) -> int:
        return self.p ** self.a

    def reduce(self, vector: np.ndarray) -> np.ndarray:
        """Canonical remainder of ``vector`` modulo the row module."""
        q = self.modulus
        x = np.asarray(vector, dtype=np.int64) % q
        for (col, v), row in zip(self.pivots, self.rows):
            t = int(x[col]) // (self.p ** v)
            if t:
                x = (x - t * row) % q
        return x

    def contains(self, vector: np.ndarray) -> bool:
        return not self.reduce(vector).any()

    def rows_from(self, column: int) -> np.ndarray:
        """Rows whose pivot lies at or after ``column``."""
        keep = [k for k, (col, _) in enumerate(self.pivots) if col >= column]
        return self.rows[keep]


def howell_form(matrix: np.ndarray, p: int, a: int) -> HowellForm:
    """Compute the Howell form of the row module of ``matrix`` over Z/p^a."""
    q = p ** a
    pending = np.asarray(matrix, dtype=np.int64) % q
    width = pending.shape[1] if pending.ndim == 2 else 0
    pending = pending[pending.any(axis=1)] if pending.size else pending.reshape(0, width)
    rows: List[np.ndarray] = []
    pivots: List[Tuple[int, int]] = []
    for col in range(width):
        if pending.shape[0] == 0:
            break
        nonzero = np.nonzero(pending[:, col])[0]
        if nonzero.size == 0:
            continue
        vals = [_valuation(int(pending[i, col]), p) for i in nonzero]
        best = int(nonzero[int(np.argmin(vals))])
        v = min(vals)
        unit = int(pending[best, col]) // (p ** v)
        pivot = (pending[best] * pow(unit, -1, q)) % q
        others = np.delete(pending, best, axis=0)
        factors = others[:, col] // (p ** v)
        others = (others - factors[:, None] * pivot[None, :]) % q
        extra = (pivot * (p ** (a - v))) % q
        if extra.any():
            others = np.vstack([others, extra[None, :]])
        pending = others[others.any(axis=1)]
        rows.append(pivot)
        pivots.append((col, v))
    stacked = np.array(rows, dtype=np.int64).reshape(len(rows), width)
    return HowellForm(p, a, width, stacked, tuple(pivots))


class AbelianCoordinates:
    """Basis of cyclic prime-power factors for a finite abelian group."""

    def __init__(self, group: FiniteGroup):
        if not group.is_abelian:
            raise NotAbelian("coordinates need an abelian group", {"order": group.order})
        self.group = group
        basis: List[int] = []
        for p in primefactors(group.order):
            part = ell_torsion(group, p)
            basis.extend(_pgroup_basis(group, part.element_set, p))
        self.basis = tuple(basis)
        self.orders = tuple(int(group.element_orders[b]) for b in basis)
        self.primes = tuple(next(iter(factorint(d))) for d in self.orders)
        rank = len(basis)
        coords = np.full((group.order, rank), -1, dtype=np.int64)
        for combo in itertools.product(*(range(d) for d in self.orders)):
            x = 0
            for b, c in zip(basis, combo):
                x = group.mul(x, group.power(b, c))
            coords[x] = combo
        if (coords < 0).any():
            raise RuntimeError("basis does not span the group")
        self.coords = coords
        self._element = {tuple(row.tolist()): x for x, row in enumerate(coords)}

    @property
    def rank(self) -> int:
        return len(self.basis)

    def element(self, coords: Sequence[int]) -> int:
        key = tuple(int(c) % d for c, d in zip(coords, self.orders))
        return self._element[key]


def _pgroup_basis(group: FiniteGroup, elems: frozenset, p: int) -> List[int]:
    """Basis of an abelian p-group: each new element has maximal order
    modulo the span so far and exactly that order."""
    basis: List[int] = []
    span = {0}
    ordered = sorted(elems)
    while len(span) < len(elems):
        best, best_order = None, 0
        for y in ordered:
            if y in span:
                continue
            k, z = 1, y
            while z not in span:
                z = group.mul(z, y)
                k += 1
            if k > best_order:
                best, best_order = y, k
        rep = next(
            z
            for z in (group.mul(best, s) for s in sorted(span))
            if int(group.element_orders[z]) == best_order
        )
        basis.append(rep)
        span = _closure(group.table, basis)
    return basis


@dataclass(frozen=True, eq=False)
class PrimeBlock:
    """Embedding of the p-part of a module into (Z/p^a)^r."""

    p: int
    a: int
    indices: Tuple[int, ...]
    scale: np.ndarray
    actions: np.ndarray  # actions[σ] acts on row vectors: x ↦ x @ actions[σ]

    @property
    def modulus(self) -> int:
        return self.p ** self.a

    @property
    def rank(self) -> int:
        return len(self.indices)


class ModuleComplex:
    """Normalized cochains C¹ → C² → (C³ on Γ×Γ×S) of an abelian Γ-module.

    Equations of the 2-cocycle law are only imposed for υ in a generating
    set S of Γ; for normalized cochains this is equivalent to the full law.
    """

    def __init__(self, gamma: FiniteGroup, target: FiniteGroup, perms: np.ndarray):
        self.gamma = gamma
        self.target = target
        self.perms = np.asarray(perms, dtype=np.int64)
        self.coordinates = AbelianCoordinates(target)
        self.gens = minimal_generating_set(gamma) if gamma.order > 1 else ()
        n = gamma.order
        self.n = n
        self.blocks = self._build_blocks()
        Budget("h2 cochains").require((n - 1) ** 2 * max(1, self.coordinates.rank))

    def _build_blocks(self) -> List[PrimeBlock]:
        coords = self.coordinates
        blocks = []
        for p in sorted(set(coords.primes)):
            idx = tuple(i for i, q in enumerate(coords.primes) if q == p)
            ds = [coords.orders[i] for i in idx]
            a = max(_valuation(d, p) for d in ds)
            q = p ** a
            scale = np.array([q // d for d in ds], dtype=np.int64)
            actions = np.zeros((self.n, len(idx), len(idx)), dtype=np.int64)
            for s in range(self.n):
                for jj, j in enumerate(idx):
                    image = coords.coords[self.perms[s, coords.basis[j]]]
                    for ii, i in enumerate(idx):
                        actions[s, jj, ii] = (int(image[i]) * ds[jj] // ds[ii]) % q
            blocks.append(PrimeBlock(p, a, idx, scale, actions))
        return blocks

    # -- layout helpers ---------------------------------------------------

    def _cell(self, s: int, t: int) -> int:
        return (s - 1) * (self.n - 1) + (t - 1)

    def embed2(self, values: Sequence[int]) -> List[np.ndarray]:
        """Block vectors of a normalized 2-cochain given as n*n element indices."""
        n = self.n
        out = []
        for block in self.blocks:
            r = block.rank
            vec = np.zeros((n - 1) ** 2 * r, dtype=np.int64)
            for s in range(1, n):
                for t in range(1, n):
                    c = self.coordinates.coords[values[s * n + t]]
                    start = self._cell(s, t) * r
                    vec[start:start + r] = c[list(block.indices)] * block.scale
            out.append(vec % block.modulus)
        return out

    def unembed2(self, vectors: Sequence[np.ndarray]) -> Tuple[int, ...]:
        n = self.n
        values = [0] * (n * n)
        for s in range(1, n):
            for t in range(1, n):
                values[s * n + t] = self._element_at(vectors, self._cell(s, t))
        return tuple(values)

    def unembed1(self, vectors: Sequence[np.ndarray]) -> Tuple[int, ...]:
        return (0,) + tuple(self._element_at(vectors, s - 1) for s in range(1, self.n))

    def _element_at(self, vectors: Sequence[np.ndarray], cell: int) -> int:
        coords = [0] * self.coordinates.rank
        for block, vec in zip(self.blocks, vectors):
            r = block.rank
            part = vec[cell * r:(cell + 1) * r]
            for k, i in enumerate(block.indices):
                coords[i] = int(part[k]) // int(block.scale[k])
        return self.coordinates.element(coords)

    # -- matrices ---------------------------------------------------------

    @functools.lru_cache(maxsize=None)
    def _d1(self, b: int) -> np.ndarray:
        """Rows: images of the scaled C¹ basis vectors under d."""
        block, n = self.blocks[b], self.n
        r, q = block.rank, block.modulus
        mat = np.zeros(((n - 1) * r, (n - 1) ** 2 * r), dtype=np.int64)
        eye = np.diag(block.scale)
        table = self.gamma.table
        for rho in range(1, n):
            rows = slice((rho - 1) * r, rho * r)
            for s in range(1, n):
                c = self._cell(s, rho) * r
                mat[rows, c:c + r] += eye @ block.actions[s]
                c = self._cell(rho, s) * r
                mat[rows, c:c + r] += eye
                t = int(self.gamma.inverses[s])
                t = int(table[t, rho])  # s·t = rho
                if t != 0:
                    c = self._cell(s, t) * r
                    mat[rows, c:c + r] -= eye
        return mat % q

    @functools.lru_cache(maxsize=None)
    def _d2(self, b: int) -> np.ndarray:
        """Rows: scaled C² basis vectors; columns: cocycle equations (σ, τ, υ∈S)."""
        block, n = self.blocks[b], self.n
        r, q, k = block.rank, block.modulus, len(self.gens)
        mat = np.zeros(((n - 1) ** 2 * r, max(1, (n - 1) ** 2 * k) * r), dtype=np.int64)
        eye = np.diag(block.scale)
        table = self.gamma.table
        for s in range(1, n):
            for t in range(1, n):
                st = int(table[s, t])
                for gi, u in enumerate(self.gens):
                    col = (self._cell(s, t) * k + gi) * r
                    cols = slice(col, col + r)
                    tu = int(table[t, u])

                    def add(cell_s: int, cell_t: int, blockmat: np.ndarray) -> None:
                        row = self._cell(cell_s, cell_t) * r
                        mat[row:row + r, cols] += blockmat

                    add(t, u, eye @ block.actions[s])
                    if st != 0:
                        add(st, u, -eye)
                    if tu != 0:
                        add(s, tu, eye)
                    add(s, t, -eye)
        return mat % q

    @functools.lru_cache(maxsize=None)
    def _b2_form(self, b: int) -> HowellForm:
        block = self.blocks[b]
        return howell_form(self._d1(b), block.p, block.a)

    @functools.lru_cache(maxsize=None)
    def _d1_solver(self, b: int) -> HowellForm:
        block = self.blocks[b]
        d1 = self._d1(b)
        aug = np.hstack([d1, np.eye(d1.shape[0], dtype=np.int64)])
        return howell_form(aug, block.p, block.a)

    @functools.lru_cache(maxsize=None)
    def _d2_solver(self, b: int) -> HowellForm:
        block = self.blocks[b]
        d2 = self._d2(b)
        aug = np.hstack([d2, np.eye(d2.shape[0], dtype=np.int64)])
        return howell_form(aug, block.p, block.a)

    def _scale2(self, b: int) -> np.ndarray:
        block = self.blocks[b]
        return np.tile(block.scale, (self.n - 1) ** 2)

    def _scale1(self, b: int) -> np.ndarray:
        block = self.blocks[b]
        return np.tile(block.scale, self.n - 1)

    @functools.lru_cache(maxsize=None)
    def _z2_generators(self, b: int) -> np.ndarray:
        solver = self._d2_solver(b)
        width = self._d2(b).shape[1]
        params = solver.rows_from(width)[:, width:]
        return (params * self._scale2(b)[None, :]) % self.blocks[b].modulus

    # -- public operations ------------------------------------------------

    def canonical2(self, values: Sequence[int]) -> Tuple[int, ...]:
        """Canonical representative of the class of a 2-cocycle."""
        if self.n == 1 or not self.blocks:
            return tuple(values)
        reduced = [self._b2_form(b).reduce(v) for b, v in enumerate(self.embed2(values))]
        return self.unembed2(reduced)

    def is_coboundary(self, values: Sequence[int]) -> bool:
        if self.n == 1 or not self.blocks:
            return True
        return all(
            self._b2_form(b).contains(v) for b, v in enumerate(self.embed2(values))
        )

    def coboundary_witness(self, values: Sequence[int]) -> Optional[Tuple[int, ...]]:
        """A normalized 1-cochain h with dh = values, or None."""
        n = self.n
        if n == 1 or not self.blocks:
            return (0,) * n
        parts = []
        for b, vec in enumerate(self.embed2(values)):
            solver = self._d1_solver(b)
            width = self._d1(b).shape[1]
            aug = np.concatenate([vec, np.zeros(solver.width - width, dtype=np.int64)])
            rem = solver.reduce(aug)
            if rem[:width].any():
                return None
            params = (-rem[width:]) % self.blocks[b].modulus
            parts.append((params * self._scale1(b)) % self.blocks[b].modulus)
        return self.unembed1(parts)

    def solve_cocycle_equation(
        self, rhs: Callable[[int, int, int], int]
    ) -> Optional[Tuple[int, ...]]:
        """A normalized 2-cochain z with (dz)(σ,τ,υ) = rhs(σ,τ,υ) for υ ∈ S.

        ``rhs`` returns an element index of the target. Returns None when
        the affine system has no solution.
        """
        n = self.n
        if n == 1 or not self.blocks:
            return (0,) * (n * n)
        parts = []
        for b, block in enumerate(self.blocks):
            r, k = block.rank, len(self.gens)
            width = self._d2(b).shape[1]
            w = np.zeros(width, dtype=np.int64)
            for s in range(1, n):
                for t in range(1, n):
                    for gi, u in enumerate(self.gens):
                        c = self.coordinates.coords[rhs(s, t, u)]
                        col = (self._cell(s, t) * k + gi) * r
                        w[col:col + r] = c[list(block.indices)] * block.scale
            solver = self._d2_solver(b)
            aug = np.concatenate([w % block.modulus, np.zeros(solver.width - width, dtype=np.int64)])
            rem = solver.reduce(aug)
            if rem[:width].any():
                return None
            params = (-rem[width:]) % block.modulus
            parts.append((params * self._scale2(b)) % block.modulus)
        return self.unembed2(parts)

    @cached_property
    def classes2(self) -> Tuple[Tuple[int, ...], ...]:
        """Canonical representatives of every class of H², sorted."""
        n = self.n
        if n == 1 or not self.blocks:
            return ((0,) * (n * n),)
        budget = Budget("h2 classes")
        per_block: List[List[np.ndarray]] = []
        for b, block in enumerate(self.blocks):
            form = self._b2_form(b)
            gens = [form.reduce(g) for g in self._z2_generators(b)]
            gens = [g for g in gens if g.any()]
            seen: Dict[bytes, np.ndarray] = {}
            zero = np.zeros(form.width, dtype=np.int64)
            seen[zero.tobytes()] = zero
            frontier = [zero]
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = form.reduce((x + g) % block.modulus)
                        key = y.tobytes()
                        if key not in seen:
                            budget.charge()
                            seen[key] = y
                            nxt.append(y)
                frontier = nxt
            per_block.append(list(seen.values()))
        reps = [self.unembed2(combo) for combo in itertools.product(*per_block)]
        logger.debug("H^2 has %d classes (|Γ|=%d, |A|=%d)", len(reps), n, self.target.order)
        return tuple(sorted(reps))


@functools.lru_cache(maxsize=128)
def module_complex(
    gamma: FiniteGroup, target: FiniteGroup, perm_key: bytes, budget: Optional[int] = None
) -> ModuleComplex:  # pylint: disable=unused-argument
    """Cached complex for an action given by its permutation array bytes.

    ``budget`` only keys the cache: searches inside the complex charge the
    budget active when it was built.
    """
    perms = np.frombuffer(perm_key, dtype=np.int64).reshape(gamma.order, target.order)
    return ModuleComplex(gamma, target, perms)
