"""Command-line interface.

    heuncft compute --object floquet --equation HIII3 --order 3
    heuncft verify --suite conjectureB-typeG --order 3
    heuncft catalog --equation HIV

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Callable, Sequence

from . import correspondence as corr
from . import heun, virasoro, wkb
from .errors import (
    HeunCFTError,
    InvariantViolation,
    NoBSRescaling,
    ParameterSpaceMismatch,
    ParseError,
    UnsupportedEquation,
)
from .report import SeriesReport
from .serialize import dumps, parse_series, serialize, series_table
from .series import FormalSeries

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3

COMMANDS = ("compute", "verify", "catalog")
OBJECTS = ("floquet", "bs", "block", "classical")
BS_EQUATIONS = ("HV", "HIV")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# verification suites; each entry maps an order to a list of reports


SUITES: dict[str, Callable[[int], list[SeriesReport]]] = {
    "conjectureB-regular": lambda N: [corr.conjectureB_regular(N)],
    "conjectureB-Nf3": lambda N: [corr.conjectureB_first_kind("Nf3", N)],
    "conjectureB-Nf2": lambda N: [corr.conjectureB_first_kind("Nf2", N)],
    "conjectureB-Nf1": lambda N: [corr.conjectureB_first_kind("Nf1", N)],
    "conjectureB-Nf0": lambda N: [corr.conjectureB_first_kind("Nf0", N)],
    "conjectureB-typeD": lambda N: [corr.conjectureB_typeD(N)],
    "conjectureB-typeG": lambda N: [corr.conjectureB_typeG(N)],
    "block-chain": lambda N: [virasoro.confluence_chain_check(link, N) for link in virasoro.BLOCK_LINKS],
    "floquet-chain": lambda N: [heun.confluent_chain_floquet(link, N) for link in heun.LINKS],
    "classical-chain": lambda N: [corr.classical_confluence_report(link, N) for link in corr.CLASSICAL_LINKS],
    "typeD-collision": lambda N: [corr.quasiclassical_typeD_report(N)],
}
SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, N: int) -> list[SeriesReport]:
    if name == "all":
        out = []
        for key in SUITES:
            # type G data stops at t^-5
            out.extend(SUITES[key](min(N, 5) if key == "conjectureB-typeG" else N))
        return out
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; expected one of {SUITE_NAMES}")
    return SUITES[name](N)


# ---------------------------------------------------------------------------
# compute


def _parse_bindings(items: Sequence[str]) -> dict[str, Fraction]:
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"binding {item!r} is not of the form sym=rational")
        name, value = item.split("=", 1)
        try:
            out[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"binding {item!r}: {value!r} is not a rational number") from None
    return out


def _bind_series(series: FormalSeries, bindings: dict[str, Fraction]) -> FormalSeries:
    if not bindings:
        return series
    space = series.zero.space
    unknown = set(bindings) - set(space.names)
    if unknown:
        raise UsageError(f"unknown symbols in bindings: {sorted(unknown)}; declared: {list(space.names)}")
    return series.map_coefficients(lambda c: c.evaluate(bindings))


def _require(value, what: str):
    if value is None:
        raise UsageError(f"--{what} is required for this object")
    return value


def compute(args, bindings) -> dict:
    N = args.order
    if args.object == "floquet":
        eq = _require(args.equation, "equation")
        if eq not in heun.EQUATIONS:
            raise UsageError(f"floquet expansions exist for {heun.EQUATIONS}, not {eq!r}")
        exp = heun.floquet_expansion(eq, N, bindings=bindings)
        doc = {"object": "floquet", "equation": eq, "floquet_symbol": exp.floquet_symbol,
               "convention": exp.convention, "E": serialize(exp.E)}
        if exp.q is not None:
            doc["q"] = serialize(exp.q)
        return doc
    if args.object == "bs":
        eq = _require(args.equation, "equation")
        if eq not in BS_EQUATIONS:
            raise NoBSRescaling(f"{eq} has no Bohr-Sommerfeld rescaling")
        inv = wkb.invert_bs(eq, N)
        period = wkb.hbar_to_invt(eq, inv.period.total)
        return {"object": "bs", "equation": eq, "nu_symbol": "nu", "kappa": str(_bind_rf(inv.kappa, bindings)),
                "E": serialize(_bind_series(inv.series, bindings)), "period_ansatz": serialize(period)}
    if args.object == "block":
        kind = _require(args.block_kind, "block-kind")
        block = _block(kind, N)
        doc = {"object": "block", "kind": kind, "prefactor_exponent": str(block.prefactor_exponent),
               "series": serialize(_bind_series(block.series, bindings))}
        if block.exponential is not None:
            coefficient, power = block.exponential
            doc["exponential"] = {"coefficient": str(coefficient), "power": power}
        return doc
    if args.object == "classical":
        kind = _require(args.block_kind, "block-kind")
        W = corr.classical_block(kind, N)
        return {"object": "classical", "kind": kind, "series": serialize(_bind_series(W.series, bindings))}
    raise UsageError(f"unknown object {args.object!r}")


def _bind_rf(rf, bindings):
    if not bindings:
        return rf
    unknown = set(bindings) - set(rf.space.names)
    if unknown:
        raise UsageError(f"unknown symbols in bindings: {sorted(unknown)}")
    return rf.evaluate(bindings)


def _block(kind: str, N: int) -> virasoro.BlockSeries:
    if kind == "regular4pt":
        return virasoro.regular_block(N)
    if kind in ("Nf3", "Nf2", "Nf1", "Nf0"):
        return virasoro.confluent_block_first_kind(int(kind[2:]), N)
    if kind == "typeD":
        return virasoro.typeD_block(N)
    if kind == "typeG":
        return virasoro.typeG_block()
    raise UsageError(f"unknown block kind {kind!r}; expected one of {corr.KINDS}")


def catalog(args) -> dict:
    if args.equation is None:
        return {"equations": [_catalog_row(eq) for eq in wkb.CATALOG_EQUATIONS]}
    return _catalog_row(args.equation)


def _catalog_row(eq: str) -> dict:
    spec = wkb.potential_catalog(eq)
    doc = {"equation": eq, "name": spec.name, "potential": str(spec.potential)}
    if spec.rescaled is not None:
        doc["rescaled"] = {"coordinate": spec.coordinate, "U": str(spec.rescaled)}
    return doc


# ---------------------------------------------------------------------------
# text rendering


def _text(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if isinstance(value, dict) and "terms" in value:
            lines.append(series_table(parse_series(value), f"{key}:"))
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {v}" for k, v in value.items())
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heuncft", description="Exact accessory-parameter and conformal-block expansions.")
    p.add_argument("command_pos", nargs="?", choices=COMMANDS, metavar="command", help="compute, verify or catalog")
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--object", choices=OBJECTS)
    p.add_argument("--equation")
    p.add_argument("--block-kind", choices=corr.KINDS)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--bind", action="append", default=[], metavar="SYM=RAT")
    p.add_argument("--suite", choices=SUITE_NAMES)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out, err = sys.stdout, sys.stderr
    command = args.command or args.command_pos
    if args.command and args.command_pos and args.command != args.command_pos:
        parser.error("conflicting commands")
    if command is None:
        parser.error("a command is required (compute, verify or catalog)")
    if args.order < 0:
        parser.error("--order must be non-negative")
    try:
        bindings = _parse_bindings(args.bind)
        if command == "verify":
            reports = run_suite(_require(args.suite, "suite"), args.order)
            if args.format == "json":
                out.write(dumps([r.to_json() for r in reports]))
            else:
                out.write("".join(r.summary() + "\n" for r in reports))
            return EXIT_OK if all(r.verdict for r in reports) else EXIT_MISMATCH
        if command == "catalog":
            doc = catalog(args)
        else:
            _require(args.object, "object")
            doc = compute(args, bindings)
        out.write(dumps(doc) if args.format == "json" else _text(doc))
        return EXIT_OK
    except (UsageError, UnsupportedEquation, NoBSRescaling, ParseError, ParameterSpaceMismatch) as exc:
        err.write(f"heuncft: error: {exc}\n")
        return EXIT_USAGE
    except InvariantViolation as exc:
        err.write(f"heuncft: invariant violation: {type(exc).__name__}: {exc}\n")
        return EXIT_INVARIANT
    except HeunCFTError as exc:
        err.write(f"heuncft: {type(exc).__name__}: {exc}\n")
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
