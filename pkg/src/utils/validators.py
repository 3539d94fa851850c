"""Shape checks for the JSON documents read by the runner.

Each helper takes the decoded value and a dotted ``where`` path used in
error messages, and raises :class:`InvalidDocument` on the first problem.
Values are returned normalised (plain ``int`` / ``tuple``) so callers can
hand them straight to the library.
"""

import re
from typing import Any, List, Mapping, Optional, Sequence, Tuple

from src.utils.errors import InvalidDocument

# Place names become JSON keys and trace text; keep them printable and short.
_PLACE_NAME_RE = re.compile(r"^[A-Za-z0-9_.:+\-]{1,64}$")


def _fail(where: str, message: str, **detail: Any) -> InvalidDocument:
    return InvalidDocument(f"{where}: {message}", {"path": where, **detail})


def require_mapping(value: Any, where: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise _fail(where, "expected an object", got=type(value).__name__)
    return value


def require_keys(doc: Mapping[str, Any], keys: Sequence[str], where: str) -> None:
    """Raise when any of ``keys`` is missing from ``doc``."""
    missing = [k for k in keys if k not in doc]
    if missing:
        raise _fail(where, f"missing key(s) {', '.join(missing)}", missing=missing)


def require_int(value: Any, where: str, minimum: Optional[int] = None) -> int:
    # bool is an int subclass; true/false are never indices
    if isinstance(value, bool) or not isinstance(value, int):
        raise _fail(where, "expected an integer", got=repr(value))
    if minimum is not None and value < minimum:
        raise _fail(where, f"expected an integer ≥ {minimum}", got=value)
    return int(value)


def require_int_list(
    value: Any, where: str, length: Optional[int] = None
) -> Tuple[int, ...]:
    if not isinstance(value, (list, tuple)):
        raise _fail(where, "expected a list of integers", got=type(value).__name__)
    out = tuple(require_int(v, f"{where}[{i}]") for i, v in enumerate(value))
    if length is not None and len(out) != length:
        raise _fail(where, f"expected {length} entries", got=len(out))
    return out


def require_matrix(value: Any, where: str) -> List[Tuple[int, ...]]:
    """A non-empty list of equally long integer rows."""
    if not isinstance(value, (list, tuple)) or not value:
        raise _fail(where, "expected a non-empty list of rows")
    rows = [require_int_list(row, f"{where}[{i}]") for i, row in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise _fail(where, "rows have different lengths")
    return rows


def require_place_name(value: Any, where: str) -> str:
    if not isinstance(value, str) or not _PLACE_NAME_RE.match(value):
        raise _fail(where, "place names use letters, digits and _.:+- only", got=repr(value))
    return value


def require_choice(value: Any, choices: Sequence[str], where: str) -> str:
    if value not in choices:
        raise _fail(where, f"expected one of {', '.join(choices)}", got=repr(value))
    return value
