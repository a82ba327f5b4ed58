"""Coefficientwise comparison reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import HeunCFTError
from .ratfunc import RationalFunction


@dataclass
class Mismatch:
    order: Fraction | int
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {"order": str(self.order), "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class SeriesReport:
    lhs_label: str
    rhs_label: str
    orders: list = field(default_factory=list)
    verdict: bool = True
    first_mismatch: Mismatch | None = None
    error: str | None = None

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        doc = {
            "lhs": self.lhs_label,
            "rhs": self.rhs_label,
            "orders": [str(o) for o in self.orders],
            "verdict": "exact-equal" if self.verdict else "mismatch",
        }
        if self.first_mismatch is not None:
            doc["firstMismatch"] = self.first_mismatch.to_json()
        if self.error is not None:
            doc["error"] = self.error
        return doc

    def summary(self) -> str:
        head = f"{self.lhs_label} vs {self.rhs_label}, orders {', '.join(str(o) for o in self.orders)}"
        if self.verdict:
            return f"{head}: exact-equal"
        if self.error:
            return f"{head}: FAILED ({self.error})"
        m = self.first_mismatch
        return f"{head}: mismatch at order {m.order}: {m.lhs} != {m.rhs}"


def compare(
    lhs_label: str,
    rhs_label: str,
    pairs: Iterable[tuple[object, Callable[[], RationalFunction] | RationalFunction, Callable[[], RationalFunction] | RationalFunction]],
) -> SeriesReport:
    """Build a report from ``(order, lhs, rhs)`` triples.

    ``lhs`` and ``rhs`` may be thunks; a library error raised while evaluating
    one (for instance a divergent limit) turns into a failed verdict.
    """
    report = SeriesReport(lhs_label, rhs_label)
    for order, lhs, rhs in pairs:
        report.orders.append(order)
        try:
            a = lhs() if callable(lhs) else lhs
            b = rhs() if callable(rhs) else rhs
        except HeunCFTError as exc:
            report.verdict = False
            report.error = f"order {order}: {type(exc).__name__}: {exc}"
            return report
        if not _equal(a, b):
            report.verdict = False
            report.first_mismatch = Mismatch(order, str(a), str(b))
            return report
    return report


def _equal(a, b) -> bool:
    if isinstance(a, RationalFunction) and isinstance(b, RationalFunction) and a.space is not b.space:
        names = tuple(dict.fromkeys(a.space.names + b.space.names))
        from .ratfunc import ParameterSpace

        S = ParameterSpace(names)
        return a.to_space(S) == b.to_space(S)
    return a == b
