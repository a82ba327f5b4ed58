"""Canonical JSON documents for series, reports and computed objects."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import ParseError
from .ratfunc import ParameterSpace, RationalFunction, parse_ratfunc
from .series import INF, FormalSeries


def _power(e: Fraction):
    return int(e) if e.denominator == 1 else str(e)


def _read_power(x) -> Fraction:
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise ParseError(f"bad exponent {x!r}") from None


def _rf(x: RationalFunction | None):
    return None if x is None else str(x)


def series_space(series: FormalSeries) -> ParameterSpace:
    return series.zero.space


def serialize(series: FormalSeries) -> dict:
    """Schema ``{variable, grid, offset, log_coefficient, terms, truncation_order}``.

    ``symbols`` records the parameter space so the document parses back
    without outside context.
    """
    return {
        "variable": series.variable,
        "grid": _power(series.grid),
        "symbols": list(series_space(series).names),
        "offset": _rf(series.offset),
        "log_coefficient": _rf(series.log_coefficient),
        "terms": [{"power": _power(e), "coefficient": str(c)} for e, c in series.coefficients.items()],
        "truncation_order": "inf" if series.order == INF else _power(series.order),
    }


def parse_series(doc: dict) -> FormalSeries:
    try:
        space = ParameterSpace(tuple(doc["symbols"]))
        order = INF if doc["truncation_order"] == "inf" else _read_power(doc["truncation_order"])

        def rf(text):
            return None if text is None else parse_ratfunc(text, space)

        coeffs = {_read_power(t["power"]): parse_ratfunc(t["coefficient"], space) for t in doc["terms"]}
        return FormalSeries(
            doc["variable"],
            coeffs,
            order,
            grid=_read_power(doc["grid"]),
            offset=rf(doc.get("offset")),
            log_coefficient=rf(doc.get("log_coefficient")),
            zero=space.zero,
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed series document: {exc}") from None


def dumps(doc) -> str:
    """Byte-stable JSON text."""
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=True) + "\n"


def series_table(series: FormalSeries, label: str = "") -> str:
    """Aligned two-column text rendering."""
    rows = []
    if series.offset is not None:
        rows.append((f"{series.variable}^(...)", str(series.offset)))
    if series.log_coefficient is not None:
        rows.append((f"ln {series.variable}", str(series.log_coefficient)))
    for e, c in series.coefficients.items():
        rows.append((f"{series.variable}^{e}", str(c)))
    width = max((len(r[0]) for r in rows), default=0)
    head = [label] if label else []
    body = [f"  {k.ljust(width)}  {v}" for k, v in rows]
    tail = f"  + O({series.variable}^{series.order + series.grid})" if series.order != INF else ""
    return "\n".join(head + body + ([tail] if tail else []))
