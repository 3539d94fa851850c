"""Error hierarchy shared by the library and the batch runner.

Every error carries a stable ``code`` string, a human message, a
JSON-serialisable ``detail`` mapping and the process exit code the runner
uses when the error escapes a command.
"""

from typing import Any, Dict, Optional

EXIT_OK = 0
EXIT_REJECTED = 2
EXIT_NEGATIVE = 3
EXIT_BUDGET = 4


class CohomologyError(Exception):
    """Base class for all library errors."""

    code = "CohomologyError"
    exit_code = EXIT_REJECTED

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = dict(detail or {})

    def to_dict(self) -> Dict[str, Any]:
        """Return the ``{"error": {...}}`` document for this error."""
        return {
            "error": {
                "code": self.code,
                "message": self.message,
                "detail": self.detail,
            }
        }


def _define(name: str, exit_code: int = EXIT_REJECTED, doc: str = "") -> type:
    return type(
        name,
        (CohomologyError,),
        {"code": name, "exit_code": exit_code, "__doc__": doc or name},
    )


# group-core
NotClosed = _define("NotClosed", doc="Table entry outside the element range.")
NotAssociative = _define("NotAssociative", doc="Some triple fails associativity.")
NoIdentity = _define("NoIdentity", doc="Row/column 0 is not the identity map.")
NoInverse = _define("NoInverse", doc="Table is not a Latin square.")
IndexOutOfRange = _define("IndexOutOfRange")
NotNormal = _define("NotNormal")
NotAbelian = _define("NotAbelian")
NotSubgroup = _define("NotSubgroup")
NotHomomorphism = _define("NotHomomorphism")

# cohomology
ContextMismatch = _define("ContextMismatch")
ActionMismatch = _define("ActionMismatch")
CocycleInvalid = _define("CocycleInvalid")
NotCharacteristic = _define("NotCharacteristic")
NotAbelianKernel = _define("NotAbelianKernel")
NotCentral = _define("NotCentral")
ChiNotHom = _define("ChiNotHom")

# liens
LienMismatch = _define("LienMismatch")
NotComparable = _define("NotComparable")
NotNeutralBase = _define("NotNeutralBase")

# local-tame
NotSurjective = _define("NotSurjective")
HypothesisViolated = _define("HypothesisViolated")
NotTotallyRamifiedCyclic = _define("NotTotallyRamifiedCyclic")

# global-datum
PlaceUnknown = _define("PlaceUnknown")
NotSimple = _define("NotSimple")
NotSolvable = _define("NotSolvable")
NotHomOnSplittingGroup = _define("NotHomOnSplittingGroup")
HypothesesNotMet = _define("HypothesesNotMet")

# documents and runner
InvalidDocument = _define("InvalidDocument", doc="Malformed input document.")

# resource limits
BudgetExceeded = _define("BudgetExceeded", EXIT_BUDGET)
BoundExceeded = _define("BoundExceeded", EXIT_BUDGET)
