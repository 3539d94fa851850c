"""JSON documents ↔ library objects.

Group references appear wherever a group is expected and take one of the
forms

* ``"path/to/group.json"``, relative to the referencing file,
* ``{"builtin": "C3"}`` (``C<n>``, ``D<n>``, ``S3``, ``Q8``, ``heisenberg27``,
  ``trivial``),
* ``{"product": [ref, ...]}``,
* ``{"table": [[...], ...], "labels": [...], "name": "..."}``,
* ``{"permutations": [[[0, 1]], ...], "degree": n}`` (cycle lists).

Loaders only parse and delegate validation to the library constructors, so
structural errors surface with the library's own error codes.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from src.core.cohomology import (CohClass1, GammaAction, action_from_homs,
                                 class2_from_values, class_from_values,
                                 make_action, restrict_action, trivial_action)
from src.core.global_datum import (GlobalDatum, LocalTargets, PlaceSpec,
                                   make_datum, make_targets)
from src.core.groups import (FiniteGroup, automorphisms, cyclic_group,
                             dihedral_group, direct_product,
                             group_from_permutations, heisenberg_group,
                             quaternion_group, subgroup_from_elements,
                             symmetric_group_3, trivial_group, validate_group)
from src.core.liens import (ExtensionCocycle, Lien, act_by_h2z,
                            center_module, lien_from_action, make_lien,
                            split_class)
from src.utils.errors import InvalidDocument
from src.utils.validators import (require_choice, require_int,
                                  require_int_list, require_keys,
                                  require_mapping, require_matrix,
                                  require_place_name)

logger = logging.getLogger(__name__)

_SIZED_BUILTIN_RE = re.compile(r"^(?P<kind>[CD])(?P<n>\d{1,3})$")
_FIXED_BUILTINS = {
    "S3": symmetric_group_3,
    "Q8": quaternion_group,
    "heisenberg27": lambda: heisenberg_group(3),
    "trivial": trivial_group,
}


def read_json(path: Path) -> Any:
    """Decode a JSON file; InvalidDocument for missing or malformed files."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InvalidDocument(f"file not found: {path}", {"path": str(path)}) from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidDocument(f"cannot read {path}: {exc}", {"path": str(path)}) from exc
    except json.JSONDecodeError as exc:
        raise InvalidDocument(
            f"{path} is not valid JSON: {exc.msg}",
            {"path": str(path), "line": exc.lineno, "column": exc.colno},
        ) from exc


# ---------------------------------------------------------------------------
# groups


def builtin_group(name: str) -> FiniteGroup:
    if name in _FIXED_BUILTINS:
        return _FIXED_BUILTINS[name]()
    m = _SIZED_BUILTIN_RE.match(name)
    if m:
        n = int(m.group("n"))
        if m.group("kind") == "C" and n >= 1:
            return cyclic_group(n)
        if m.group("kind") == "D" and n >= 3:
            return dihedral_group(n)
    raise InvalidDocument(f"unknown builtin group {name!r}", {"builtin": name})


def load_group(ref: Any, base_dir: Path, where: str = "group") -> FiniteGroup:
    """Resolve a group reference (see module docstring)."""
    if isinstance(ref, str):
        path = base_dir / ref
        return load_group(read_json(path), path.parent, f"{where}<{ref}>")
    doc = require_mapping(ref, where)
    if "builtin" in doc:
        return builtin_group(str(doc["builtin"]))
    if "product" in doc:
        factors = doc["product"]
        if not isinstance(factors, list) or not factors:
            raise InvalidDocument(f"{where}.product: expected a non-empty list")
        return direct_product(
            *(load_group(f, base_dir, f"{where}.product[{i}]") for i, f in enumerate(factors))
        )
    if "permutations" in doc:
        require_keys(doc, ["degree"], where)
        degree = require_int(doc["degree"], f"{where}.degree", minimum=1)
        gens = doc["permutations"]
        if not isinstance(gens, list):
            raise InvalidDocument(f"{where}.permutations: expected a list of cycle lists")
        cycles = [
            [require_int_list(c, f"{where}.permutations[{i}]") for c in gen]
            for i, gen in enumerate(gens)
        ]
        return group_from_permutations(cycles, degree)
    require_keys(doc, ["table"], where)
    table = require_matrix(doc["table"], f"{where}.table")
    labels = doc.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or len(labels) != len(table)
    ):
        raise InvalidDocument(f"{where}.labels: expected one label per element")
    return validate_group(table, labels=labels, name=doc.get("name"))


def group_to_dict(G: FiniteGroup) -> Dict[str, Any]:
    out: Dict[str, Any] = {"table": G.table.tolist()}
    if G.name:
        out["name"] = G.name
    if G.labels is not None:
        out["labels"] = list(G.labels)
    return out


def load_subgroup(value: Any, G: FiniteGroup, where: str):
    return subgroup_from_elements(G, require_int_list(value, where))


# ---------------------------------------------------------------------------
# actions, liens and extension classes


def load_action(
    doc: Any, base_dir: Path, where: str = "action", gamma: Optional[FiniteGroup] = None
) -> GammaAction:
    """``{"gamma", "target", and one of "perms" | "trivial" | "automorphisms"}``.

    ``gamma`` may be supplied by an enclosing document instead.
    """
    doc = require_mapping(doc, where)
    if gamma is None:
        require_keys(doc, ["gamma"], where)
        gamma = load_group(doc["gamma"], base_dir, f"{where}.gamma")
    require_keys(doc, ["target"], where)
    target = load_group(doc["target"], base_dir, f"{where}.target")
    if doc.get("trivial"):
        return trivial_action(gamma, target)
    if "automorphisms" in doc:
        images = require_int_list(doc["automorphisms"], f"{where}.automorphisms", gamma.order)
        return action_from_homs(gamma, automorphisms(target), images)
    require_keys(doc, ["perms"], where)
    return make_action(gamma, target, require_matrix(doc["perms"], f"{where}.perms"))


def action_to_dict(ctx: GammaAction) -> Dict[str, Any]:
    return {
        "gamma": group_to_dict(ctx.gamma),
        "target": group_to_dict(ctx.target),
        "perms": [list(p) for p in ctx.perms],
    }


def load_lien(
    doc: Any, base_dir: Path, where: str = "lien", gamma: Optional[FiniteGroup] = None
) -> Lien:
    """``{"action": action}`` (the lien of a Γ-group) or ``{"gamma", "g", "kappa"}``."""
    doc = require_mapping(doc, where)
    if "action" in doc:
        return lien_from_action(load_action(doc["action"], base_dir, f"{where}.action", gamma))
    if gamma is None:
        require_keys(doc, ["gamma"], where)
        gamma = load_group(doc["gamma"], base_dir, f"{where}.gamma")
    require_keys(doc, ["g", "kappa"], where)
    g = load_group(doc["g"], base_dir, f"{where}.g")
    return make_lien(gamma, g, require_int_list(doc["kappa"], f"{where}.kappa", gamma.order))


def _aut_indices(lien: Lien, values: Any, where: str) -> Tuple[int, ...]:
    """Automorphisms given as indices into Aut(G) or as permutations of G."""
    if not isinstance(values, list) or len(values) != lien.gamma.order:
        raise InvalidDocument(
            f"{where}: expected one automorphism per element of Γ",
            {"expected": lien.gamma.order},
        )
    out = []
    for i, v in enumerate(values):
        if isinstance(v, list):
            out.append(lien.aut.index_of(require_int_list(v, f"{where}[{i}]", lien.g.order)))
        else:
            out.append(require_int(v, f"{where}[{i}]", minimum=0))
    return tuple(out)


def load_extension(doc: Any, lien: Lien, where: str = "extension") -> ExtensionCocycle:
    """``{"split": homs}`` or ``{"phi": auts, "g": values}``, optionally ``"twist"``.

    ``twist`` lists the values of a 2-cocycle of Γ with values in the center
    (indices into the center as a standalone group); the class is replaced
    by its translate under that cocycle.
    """
    doc = require_mapping(doc, where)
    if "split" in doc:
        e = split_class(lien, _aut_indices(lien, doc["split"], f"{where}.split"))
    else:
        require_keys(doc, ["phi", "g"], where)
        n = lien.gamma.order
        phi = _aut_indices(lien, doc["phi"], f"{where}.phi")
        e = ExtensionCocycle(lien, phi, require_int_list(doc["g"], f"{where}.g", n * n))
    if "twist" in doc:
        zctx = center_module(lien).ctx
        n = lien.gamma.order
        xi = class2_from_values(zctx, require_int_list(doc["twist"], f"{where}.twist", n * n))
        e = act_by_h2z(xi, e)
    return e


def extension_to_dict(e: ExtensionCocycle) -> Dict[str, Any]:
    return {"phi": list(e.phi), "g": list(e.gvals)}


# ---------------------------------------------------------------------------
# local data


@dataclass(frozen=True)
class LiftDocument:
    """A local lifting problem: G, the kernel N and a class of G/N."""

    group: FiniteGroup
    kernel: Tuple[int, ...]
    s: int
    t: int


def load_lift_document(doc: Any, base_dir: Path, where: str = "lift") -> LiftDocument:
    """``{"group", "kernel": [...], "class": {"s", "t"}}``.

    The class is named by representatives in G; its image in G/N is what
    gets lifted.
    """
    doc = require_mapping(doc, where)
    require_keys(doc, ["group", "kernel", "class"], where)
    G = load_group(doc["group"], base_dir, f"{where}.group")
    kernel = load_subgroup(doc["kernel"], G, f"{where}.kernel")
    cls = require_mapping(doc["class"], f"{where}.class")
    require_keys(cls, ["s", "t"], f"{where}.class")
    return LiftDocument(
        G,
        kernel.elements,
        require_int(cls["s"], f"{where}.class.s", 0),
        require_int(cls["t"], f"{where}.class.t", 0),
    )


# ---------------------------------------------------------------------------
# global data


def load_place(doc: Any, gamma: FiniteGroup, where: str) -> PlaceSpec:
    doc = require_mapping(doc, where)
    require_keys(doc, ["name", "kind", "decomposition"], where)
    kind = require_choice(doc["kind"], ("finite", "archimedean", "divides_n"), f"{where}.kind")
    gv = load_subgroup(doc["decomposition"], gamma, f"{where}.decomposition")
    inertia = doc.get("inertia", gv.elements if kind == "archimedean" else [0])
    tau = doc.get("tau")
    return PlaceSpec(
        name=require_place_name(doc["name"], f"{where}.name"),
        kind=kind,
        decomposition=gv,
        inertia=load_subgroup(inertia, gamma, f"{where}.inertia"),
        frobenius=require_int(doc.get("frobenius", 0), f"{where}.frobenius", 0),
        tau=None if tau is None else require_int(tau, f"{where}.tau", 0),
        q_mod_n=require_int(doc.get("q", 1), f"{where}.q", 0),
    )


@dataclass(frozen=True)
class DatumDocument:
    """A global datum with the optional pieces the global verbs consume."""

    datum: GlobalDatum
    action: Optional[GammaAction] = None
    raw_targets: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)
    S: Tuple[str, ...] = ()
    aux_places: Tuple[str, ...] = ()
    lien: Optional[Lien] = None
    extension: Optional[ExtensionCocycle] = None
    local_witnesses: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)
    prescribed: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)

    def require_action(self) -> GammaAction:
        if self.action is None:
            raise InvalidDocument("datum document has no 'action'")
        return self.action

    def targets(self) -> LocalTargets:
        """Targets β_v, each given as values on the elements of Γ_v."""
        action = self.require_action()
        classes: Dict[str, CohClass1] = {}
        for name, values in self.raw_targets.items():
            local = restrict_action(action, self.datum.place(name).decomposition)
            classes[name] = class_from_values(local, values)
        return make_targets(self.datum, action, classes)


def _name_map(value: Any, where: str) -> Dict[str, Tuple[int, ...]]:
    doc = require_mapping(value, where)
    return {
        require_place_name(k, f"{where}.{k}"): require_int_list(v, f"{where}.{k}")
        for k, v in doc.items()
    }


def _names(value: Any, where: str) -> Tuple[str, ...]:
    if not isinstance(value, list):
        raise InvalidDocument(f"{where}: expected a list of place names")
    return tuple(require_place_name(v, f"{where}[{i}]") for i, v in enumerate(value))


def load_datum(doc: Any, base_dir: Path, where: str = "datum") -> DatumDocument:
    """Parse a datum document (see ``docs/samples`` for complete examples)."""
    doc = require_mapping(doc, where)
    require_keys(doc, ["gamma", "n", "chi", "n_prime", "n_L"], where)
    gamma = load_group(doc["gamma"], base_dir, f"{where}.gamma")
    n = require_int(doc["n"], f"{where}.n", minimum=1)
    places_doc = doc.get("places", [])
    if not isinstance(places_doc, list):
        raise InvalidDocument(f"{where}.places: expected a list")
    datum = make_datum(
        gamma,
        n,
        require_int_list(doc["chi"], f"{where}.chi", gamma.order),
        load_subgroup(doc["n_prime"], gamma, f"{where}.n_prime"),
        load_subgroup(doc["n_L"], gamma, f"{where}.n_L"),
        [load_place(p, gamma, f"{where}.places[{i}]") for i, p in enumerate(places_doc)],
    )
    action = None
    if "action" in doc:
        action = load_action(doc["action"], base_dir, f"{where}.action", gamma)
    lien = extension = None
    if "lien" in doc:
        lien = load_lien(doc["lien"], base_dir, f"{where}.lien", gamma)
        if "extension" in doc:
            extension = load_extension(doc["extension"], lien, f"{where}.extension")
    targets = _name_map(doc.get("targets", {}), f"{where}.targets")
    for name in targets:
        datum.place(name)
    logger.debug("loaded datum with |Γ|=%d and %d places", gamma.order, len(datum.places))
    return DatumDocument(
        datum=datum,
        action=action,
        raw_targets=targets,
        S=_names(doc.get("S", []), f"{where}.S"),
        aux_places=_names(doc.get("aux_places", []), f"{where}.aux_places"),
        lien=lien,
        extension=extension,
        local_witnesses=_name_map(doc.get("local_witnesses", {}), f"{where}.local_witnesses"),
        prescribed=_name_map(doc.get("prescribed", {}), f"{where}.prescribed"),
    )


def place_to_dict(v: PlaceSpec) -> Dict[str, Any]:
    return {
        "name": v.name,
        "kind": v.kind,
        "decomposition": list(v.decomposition.elements),
        "inertia": list(v.inertia.elements),
        "frobenius": v.frobenius,
        "tau": v.tau,
        "q": v.q_mod_n,
    }


def datum_to_dict(d: GlobalDatum) -> Dict[str, Any]:
    return {
        "gamma": group_to_dict(d.gamma),
        "n": d.n,
        "chi": list(d.chi),
        "n_prime": list(d.n_prime.elements),
        "n_L": list(d.n_L.elements),
        "places": [place_to_dict(v) for v in d.places],
    }
