"""Wall-clock deadlines and the shared solver failure signal."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field


class UnsupportedSizeError(ValueError):
    """Raised when a solver cannot handle an instance of the requested size."""


@dataclass
class Deadline:
    """Cooperative per-instance time budget.

    Solvers poll :meth:`expired` between fixed work quanta; nothing is
    preempted. ``budget_ms=None`` means no limit.
    """

    budget_ms: float | None = None
    start: float = field(default_factory=time.perf_counter)

    def __post_init__(self):
        if self.budget_ms is not None and not self.budget_ms > 0:
            raise ValueError(f"budget_ms must be positive, got {self.budget_ms}")

    @classmethod
    def unlimited(cls) -> "Deadline":
        return cls(None)

    @property
    def limited(self) -> bool:
        return self.budget_ms is not None

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self.start) * 1e3

    def remaining_ms(self) -> float:
        if self.budget_ms is None:
            return math.inf
        return self.budget_ms - self.elapsed_ms()

    def expired(self) -> bool:
        return self.budget_ms is not None and self.elapsed_ms() >= self.budget_ms


def as_deadline(deadline: Deadline | float | None) -> Deadline:
    """Accept a Deadline, a budget in milliseconds, or None (unlimited)."""
    if isinstance(deadline, Deadline):
        return deadline
    return Deadline(deadline)
