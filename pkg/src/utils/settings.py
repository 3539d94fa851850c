"""Runtime configuration loaded from the environment.

Values come from environment variables (a ``.env`` file is honoured through
python-dotenv). The active settings live in a context variable so that the
runner can apply per-request overrides (``--budget``, ``--threads``) without
touching global state shared by other threads.
"""

import contextlib
import contextvars
import os
from dataclasses import dataclass, replace
from typing import Iterator, Optional

from dotenv import load_dotenv

from src.utils.errors import BudgetExceeded


@dataclass(frozen=True)
class Settings:
    """Enumeration bounds and parallelism knobs."""

    max_order: int = 128
    max_gamma: int = 24
    budget: int = 2_000_000
    max_aut: int = 1024
    threads: int = 1

    def with_overrides(
        self, budget: Optional[int] = None, threads: Optional[int] = None
    ) -> "Settings":
        """Return a copy with the non-None overrides applied."""
        changes = {}
        if budget is not None:
            changes["budget"] = budget
        if threads is not None:
            changes["threads"] = max(1, threads)
        return replace(self, **changes)


_ENV_FIELDS = {
    "COHOMOLIB_MAX_ORDER": "max_order",
    "COHOMOLIB_MAX_GAMMA": "max_gamma",
    "COHOMOLIB_BUDGET": "budget",
    "COHOMOLIB_MAX_AUT": "max_aut",
    "COHOMOLIB_THREADS": "threads",
}


def load_settings() -> Settings:
    """Build settings from the environment (after loading ``.env``).

    Raises RuntimeError when a variable is set but is not a positive integer.
    """
    load_dotenv()
    values = {}
    for env_name, field_name in _ENV_FIELDS.items():
        raw = os.getenv(env_name)
        if raw is None or raw.strip() == "":
            continue
        try:
            value = int(raw)
        except ValueError as exc:
            raise RuntimeError(f"{env_name} must be an integer, got {raw!r}") from exc
        if value < 1:
            raise RuntimeError(f"{env_name} must be positive, got {value}")
        values[field_name] = value
    return Settings(**values)


_ACTIVE: contextvars.ContextVar[Optional[Settings]] = contextvars.ContextVar(
    "cohomolib_settings", default=None
)


def current_settings() -> Settings:
    """Return the settings active in this context, loading them on first use."""
    settings = _ACTIVE.get()
    if settings is None:
        settings = load_settings()
        _ACTIVE.set(settings)
    return settings


@contextlib.contextmanager
def use_settings(settings: Settings) -> Iterator[Settings]:
    """Temporarily activate ``settings`` for the current context."""
    token = _ACTIVE.set(settings)
    try:
        yield settings
    finally:
        _ACTIVE.reset(token)


class Budget:
    """Counter for one search; raises BudgetExceeded past the active limit."""

    __slots__ = ("label", "limit", "spent")

    def __init__(self, label: str, limit: Optional[int] = None):
        self.label = label
        self.limit = current_settings().budget if limit is None else limit
        self.spent = 0

    def charge(self, amount: int = 1) -> None:
        """Spend ``amount`` units of the budget."""
        self.spent += amount
        if self.spent > self.limit:
            raise BudgetExceeded(
                f"{self.label}: search budget of {self.limit} candidates exceeded",
                {"search": self.label, "budget": self.limit},
            )

    def require(self, amount: int) -> None:
        """Fail early when a search of known size cannot fit in the budget."""
        if amount > self.limit:
            raise BudgetExceeded(
                f"{self.label}: {amount} candidates exceed the budget of {self.limit}",
                {"search": self.label, "budget": self.limit, "candidates": amount},
            )
