"""Command dispatcher for the batch runner.

``run(CommandRequest)`` loads every input document first, then executes the
verb under the request's settings overrides and returns the JSON document
together with the process exit code.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Tuple

from src.core import (DualModuleSpec, Infeasible, LocalClass, Obstruction,
                      TameLocalDatum, center_module, classify_local_class,
                      datum_validate, derived_series, devissage_solve,
                      h1_enumerate, h2_abelian_enumerate, h2_lien_enumerate,
                      hasse_solve, injectivity_on_P, is_neutral,
                      lift_totally_ramified, local_h1_enumerate,
                      minimal_generating_set, quotient_group, sha,
                      subgroup_from_elements, weak_approx_check)
from src.core.documents import (extension_to_dict, load_action, load_datum,
                                load_extension, load_group,
                                load_lien, load_lift_document,
                                read_json)
from src.core.groups import center
from src.utils.errors import EXIT_NEGATIVE, EXIT_OK, InvalidDocument
from src.utils.settings import current_settings, use_settings

logger = logging.getLogger(__name__)

SCHEMA = "cohomolib/1"


@dataclass(frozen=True)
class CommandRequest:
    """One runner invocation: a verb, its input files and option flags."""

    verb: str
    inputs: Tuple[str, ...]
    options: Mapping[str, Any] = field(default_factory=dict)


def _load(path: str) -> Tuple[Any, Path]:
    p = Path(path)
    return read_json(p), p.parent


def _option(req: CommandRequest, name: str) -> Any:
    value = req.options.get(name)
    if value is None:
        raise InvalidDocument(f"{req.verb} needs --{name}", {"option": name})
    return value


# ---------------------------------------------------------------------------
# loaders: parse the inputs of one verb, no computation


def _load_group(req: CommandRequest, docs: List[Tuple[Any, Path]]):
    doc, base = docs[0]
    return {"group": load_group(doc, base, req.inputs[0])}


def _load_action(req: CommandRequest, docs):
    doc, base = docs[0]
    return {"action": load_action(doc, base, req.inputs[0])}


def _load_lien(req: CommandRequest, docs):
    doc, base = docs[0]
    return {"lien": load_lien(doc, base, req.inputs[0])}


def _load_lien_extension(req: CommandRequest, docs):
    lien = _load_lien(req, docs)["lien"]
    return {"lien": lien, "extension": load_extension(docs[1][0], lien, req.inputs[1])}


def _load_local_group(req: CommandRequest, docs):
    q = int(_option(req, "q"))
    return {"datum": TameLocalDatum(q, _load_group(req, docs)["group"])}


def _load_lift(req: CommandRequest, docs):
    doc, base = docs[0]
    return {"lift": load_lift_document(doc, base, req.inputs[0]), "q": int(_option(req, "q"))}


def _load_datum(req: CommandRequest, docs):
    doc, base = docs[0]
    return {"doc": load_datum(doc, base, req.inputs[0])}


# ---------------------------------------------------------------------------
# verbs


def _group_info(group) -> Tuple[Dict[str, Any], int]:
    return {
        "order": group.order,
        "exponent": group.exponent,
        "abelian": group.is_abelian,
        "solvable": group.is_solvable,
        "derived_series_lengths": [h.order for h in derived_series(group)],
        "center_order": center(group).order,
        "generators": list(minimal_generating_set(group)),
    }, EXIT_OK


def _h1(action) -> Tuple[Dict[str, Any], int]:
    classes = h1_enumerate(action)
    return {"count": len(classes), "classes": [list(c.values) for c in classes]}, EXIT_OK


def _h2(action) -> Tuple[Dict[str, Any], int]:
    classes = h2_abelian_enumerate(action)
    return {"count": len(classes), "classes": [list(c.values) for c in classes]}, EXIT_OK


def _lien_h2(lien) -> Tuple[Dict[str, Any], int]:
    classes = h2_lien_enumerate(lien)
    rows = []
    for e in classes:
        row = extension_to_dict(e)
        row["neutral"] = is_neutral(e)[0]
        rows.append(row)
    return {
        "count": len(classes),
        "center_order": center_module(lien).subgroup.order,
        "classes": rows,
    }, EXIT_OK


def _lien_neutral(lien, extension) -> Tuple[Dict[str, Any], int]:
    neutral, witness = is_neutral(extension)
    out: Dict[str, Any] = {"neutral": neutral, "hom": None, "h": None}
    if witness is not None:
        out["hom"], out["h"] = list(witness.hom), list(witness.h)
    return out, EXIT_OK if neutral else EXIT_NEGATIVE


def _local_classify(datum: TameLocalDatum) -> Tuple[Dict[str, Any], int]:
    classes = local_h1_enumerate(datum)
    flags = [classify_local_class(c) for c in classes]
    counts = {
        "classes": len(classes),
        "unramified": sum(f.unramified for f in flags),
        "ramified": sum(f.ramified for f in flags),
        "cyclic": sum(f.cyclic for f in flags),
        # the trivial class is totally ramified too; it is counted as unramified
        "totally_ramified": sum(f.ramified and f.totally_ramified for f in flags),
    }
    return {
        "datum": datum.to_dict(),
        "counts": counts,
        "classes": [c.to_dict() for c in classes],
    }, EXIT_OK


def _local_lift(lift, q: int) -> Tuple[Dict[str, Any], int]:
    G = lift.group
    quotient, proj = quotient_group(G, subgroup_from_elements(G, lift.kernel))
    d_g, d_h = TameLocalDatum(q, G), TameLocalDatum(q, quotient)
    target = LocalClass(d_h, proj(lift.s), proj(lift.t))
    lifted = lift_totally_ramified(d_g, proj, target)
    return {
        "datum": d_g.to_dict(),
        "class": target.to_dict(),
        "lift": lifted.to_dict(),
        "lift_pair": [lifted.s, lifted.t],
    }, EXIT_OK


def _global_validate(doc) -> Tuple[Dict[str, Any], int]:
    action = doc.require_action()
    report = datum_validate(doc.datum, action)
    out = report.to_dict()
    out["injectivity"] = None
    if report.passed and action.target.is_abelian:
        spec = DualModuleSpec(action, doc.datum.chi, doc.datum.n)
        out["injectivity"] = injectivity_on_P(doc.datum, spec).to_dict()
    return out, EXIT_OK if report.passed else EXIT_NEGATIVE


def _global_sha(doc, degree: int = 1) -> Tuple[Dict[str, Any], int]:
    classes = sha(doc.datum, doc.require_action(), degree)
    return {
        "degree": degree,
        "count": len(classes),
        "classes": [list(c.values) for c in classes],
    }, EXIT_OK


def _global_weak_approx(doc, places=None) -> Tuple[Dict[str, Any], int]:
    S = tuple(places) if places else doc.S
    report = weak_approx_check(doc.datum, doc.require_action(), S)
    out = report.to_dict()
    out["S"] = list(S)
    return out, EXIT_OK if report.surjective else EXIT_NEGATIVE


def _global_devissage(doc) -> Tuple[Dict[str, Any], int]:
    result = devissage_solve(
        doc.datum, doc.require_action(), doc.targets(), aux_places=doc.aux_places
    )
    return result.to_dict(), EXIT_NEGATIVE if isinstance(result, Infeasible) else EXIT_OK


def _global_hasse(doc) -> Tuple[Dict[str, Any], int]:
    if doc.lien is None or doc.extension is None:
        raise InvalidDocument("global-hasse needs 'lien' and 'extension' in the datum")
    result = hasse_solve(
        doc.datum,
        doc.lien,
        doc.extension,
        local_witnesses=doc.local_witnesses,
        prescribed=doc.prescribed,
    )
    return result.to_dict(), EXIT_NEGATIVE if isinstance(result, Obstruction) else EXIT_OK


_Loader = Callable[[CommandRequest, List[Tuple[Any, Path]]], Dict[str, Any]]

# verb → (input count, loader, handler, option names passed to the handler)
VERBS: Dict[str, Tuple[int, _Loader, Callable[..., Tuple[Dict[str, Any], int]], Tuple[str, ...]]] = {
    "group-info": (1, _load_group, _group_info, ()),
    "h1": (1, _load_action, _h1, ()),
    "h2": (1, _load_action, _h2, ()),
    "lien-h2": (1, _load_lien, _lien_h2, ()),
    "lien-neutral": (2, _load_lien_extension, _lien_neutral, ()),
    "local-classify": (1, _load_local_group, _local_classify, ()),
    "local-lift": (1, _load_lift, _local_lift, ()),
    "global-validate": (1, _load_datum, _global_validate, ()),
    "global-sha": (1, _load_datum, _global_sha, ("degree",)),
    "global-weak-approx": (1, _load_datum, _global_weak_approx, ("places",)),
    "global-devissage": (1, _load_datum, _global_devissage, ()),
    "global-hasse": (1, _load_datum, _global_hasse, ()),
}


def run(req: CommandRequest) -> Tuple[Dict[str, Any], int]:
    """Execute one request; returns (document, exit code).

    Library errors propagate as CohomologyError subclasses carrying their
    own exit code; the runner turns them into error documents.
    """
    if req.verb not in VERBS:
        raise InvalidDocument(f"unknown verb {req.verb!r}", {"verbs": sorted(VERBS)})
    arity, loader, handler, option_names = VERBS[req.verb]
    if len(req.inputs) != arity:
        raise InvalidDocument(
            f"{req.verb} takes {arity} input file(s), got {len(req.inputs)}",
            {"expected": arity, "got": len(req.inputs)},
        )
    settings = current_settings().with_overrides(
        budget=req.options.get("budget"), threads=req.options.get("threads")
    )
    with use_settings(settings):
        docs = [_load(path) for path in req.inputs]
        loaded = loader(req, docs)
        extra = {k: req.options[k] for k in option_names if req.options.get(k) is not None}
        logger.info("running %s on %s", req.verb, ", ".join(req.inputs))
        result, code = handler(**loaded, **extra)
    result["schema"] = SCHEMA
    result["verb"] = req.verb
    result["meta"] = {"budget": settings.budget}
    return result, code
