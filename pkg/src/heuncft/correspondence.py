"""Classical limits of conformal blocks and the Heun-block correspondence.

Dimensions and momenta are put in the semiclassical regime

    c = 6/b^2 + 13 + 6 b^2,   Delta = delta/b^2 + 1/2 + b^2/4,   P = s theta

with ``s = i/b`` kept as a symbol and ``s^2 = -1/b^2`` imposed once every
coefficient is known to be even in ``s``.  The classical block is the
constant term in ``b`` of ``b^2 log(block)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import virasoro as vir
from .errors import HeunCFTError, UnsupportedEquation
from .heun import THETA_SPACES, floquet_expansion
from .ratfunc import ParameterSpace, RationalFunction, limit_at_infinity, substitute_square
from .report import SeriesReport, compare
from .series import FormalSeries, laurent_expand, limit_b_zero
from .wkb import invert_bs

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

KINDS = ("regular4pt", "Nf3", "Nf2", "Nf1", "Nf0", "typeD", "typeG")

# classical parameter spaces (the results live here)
CL_REGULAR = ParameterSpace(("delta0", "deltat", "delta1", "deltainf", "deltasigma"))
CL_FIRST_KIND = ParameterSpace(("delta0", "deltat", "deltasigma", "thetastar", "thetablack"))
CL_TYPE_D = ParameterSpace(("delta0", "deltat", "thetastar", "nu"))
CL_TYPE_G = ParameterSpace(("delta0", "thetabullet", "nu"))

_CL_SPACES = {"regular4pt": CL_REGULAR, "typeD": CL_TYPE_D, "typeG": CL_TYPE_G}


def classical_space(kind: str) -> ParameterSpace:
    return _CL_SPACES.get(kind, CL_FIRST_KIND)


def _semi_space(kind: str) -> ParameterSpace:
    return ParameterSpace(("b", "s") + classical_space(kind).names)


def semiclassical_images(kind: str) -> dict[str, RationalFunction]:
    """Images of the block roles (``c``, ``Delta*``, ``P*``) in the semiclassical space."""
    S = _semi_space(kind)
    b, s = S.symbols("b", "s")
    images = {"c": 6 / b**2 + 13 + 6 * b**2}
    for name in S.names[2:]:
        sym = S.symbol(name)
        if name.startswith("delta"):
            images["Delta" + name[5:]] = sym / b**2 + HALF + b**2 * QUARTER
        elif name.startswith("theta"):
            images["P" + name[5:]] = s * sym
        elif name == "nu":
            images["Pnu"] = s * sym
    return images


def _time_factor(kind: str) -> RationalFunction:
    """Factor multiplying the n-th block coefficient after the time rescaling."""
    S = _semi_space(kind)
    b, s = S.symbols("b", "s")
    return {
        "regular4pt": S.one,
        "Nf3": s,  # t -> s t
        "Nf2": -1 / b**2,  # t -> -t/b^2
        "Nf1": -s / b**2,  # t -> -s t/b^2
        "Nf0": 1 / b**4,  # t -> t/b^4
        "typeD": -(b**2) * s,  # t^-n with t -> s t
        "typeG": -(b**2) * s * HALF,  # t^-2n with t^2 -> 2 s t^2
    }[kind]


def _block_for(kind: str, N: int) -> vir.BlockSeries:
    if kind == "regular4pt":
        return vir.regular_block(N)
    if kind.startswith("Nf"):
        return vir.confluent_block_first_kind(int(kind[2:]), N)
    if kind == "typeD":
        return vir.typeD_block(N)
    if kind == "typeG":
        if N > 2:
            raise UnsupportedEquation("type G coefficients are available through t^-4 only")
        return vir.typeG_block()
    raise UnsupportedEquation(f"unknown block kind {kind!r}; expected one of {KINDS}")


def _to_semi(kind: str, rf: RationalFunction) -> RationalFunction:
    S = _semi_space(kind)
    images = semiclassical_images(kind)
    used = {k: v for k, v in images.items() if k in rf.space.names}
    return rf.subs(used, S)


def _eliminate_s(kind: str, rf: RationalFunction) -> RationalFunction:
    S = rf.space
    b = S.symbol("b")
    return substitute_square(rf, "s", -1 / b**2)


def _b_limit(rf: RationalFunction, kind: str) -> RationalFunction:
    """Constant term in ``b`` of ``b^2 rf``."""
    S = rf.space
    expanded = laurent_expand(rf * S.symbol("b") ** 2, "b", 0)
    return limit_b_zero(expanded).to_space(classical_space(kind))


def classical_scalar(kind: str, rf: RationalFunction) -> RationalFunction:
    """``lim b^2 rf`` for a block-space quantity such as a prefactor exponent."""
    return _b_limit(_eliminate_s(kind, _to_semi(kind, rf)), kind)


@dataclass
class ClassicalBlock:
    """Classical block ``W`` as a series.

    For first-kind and regular blocks the variable is ``t`` and
    ``series.log_coefficient`` multiplies ``ln t``.  For type D and G the
    variable is ``invt``; the exponential term appears as a negative power of
    ``invt`` and ``series.log_coefficient`` multiplies ``ln invt = -ln t``.
    """

    kind: str
    series: FormalSeries
    space: ParameterSpace

    @property
    def log_t(self) -> RationalFunction:
        lc = self.series.log_coefficient
        lc = self.space.zero if lc is None else lc
        return -lc if self.series.variable == "invt" else lc

    def coefficient(self, n: int) -> RationalFunction:
        step = 2 if self.kind == "typeG" else 1
        return self.series[n * step]


def classical_block(kind: str, N: int) -> ClassicalBlock:
    """Classical block of the given kind through order ``N``.

    Raises :class:`PoleInClassicalLimit` if ``b^2 log(block)`` keeps negative
    powers of ``b`` and :class:`ImaginaryUnitSurvives` if an odd power of
    ``s`` remains after rescaling time.
    """
    block = _block_for(kind, N)
    S = _semi_space(kind)
    factor = _time_factor(kind)
    step = 2 if kind == "typeG" else 1
    X = {0: S.one}
    for n in range(1, N + 1):
        raw = block.coefficient(n)
        X[n] = _eliminate_s(kind, _to_semi(kind, raw) * factor**n)
    variable = block.series.variable
    log = FormalSeries(variable, X, N, zero=S.zero).log()
    C = classical_space(kind)
    coeffs = {n * step: _b_limit(log[n], kind) for n in range(1, N + 1)}
    pref = classical_scalar(kind, block.prefactor_exponent)
    log_coefficient = -pref if variable == "invt" else pref
    if block.exponential is not None:
        coefficient, power = block.exponential
        # t_block = s t for type D and t_block^2 = 2 s t^2 for type G
        scale = {"typeD": S.symbol("s"), "typeG": 2 * S.symbol("s")}[kind]
        value = _eliminate_s(kind, _to_semi(kind, coefficient) * scale)
        coeffs[-power] = _b_limit(value, kind)
    series = FormalSeries(variable, coeffs, N * step, log_coefficient=log_coefficient, zero=C.zero)
    return ClassicalBlock(kind, series, C)


# ---------------------------------------------------------------------------
# theta forms


def delta_of(theta: RationalFunction) -> RationalFunction:
    return QUARTER - theta**2


def regular_to_theta(W: RationalFunction) -> RationalFunction:
    T = THETA_SPACES["HVI"]
    t0, t1, tt, ti, s = T.symbols(*T.names)
    images = {"delta0": delta_of(t0), "deltat": delta_of(tt), "delta1": delta_of(t1),
              "deltainf": delta_of(ti), "deltasigma": delta_of(s)}
    return W.subs(images, T)


_FIRST_KIND_EQUATION = {"Nf3": "HV", "Nf2": "HIII1", "Nf1": "HIII2", "Nf0": "HIII3"}


def first_kind_to_theta(kind: str, W: RationalFunction) -> RationalFunction:
    eq = _FIRST_KIND_EQUATION[kind]
    T = THETA_SPACES[eq]
    images = {"deltasigma": delta_of(T.symbol("sigma"))}
    for name in ("theta0", "thetat"):
        if name in T.names:
            images["delta" + name[5:]] = delta_of(T.symbol(name))
    for name in ("thetastar", "thetablack"):
        if name in T.names:
            images[name] = T.symbol(name)
    return W.subs(images, T)


# ---------------------------------------------------------------------------
# Heun <-> classical block comparisons


def _thunk(fn, *args):
    return lambda: fn(*args)


def conjectureB_regular(N: int) -> SeriesReport:
    """``E_VI(t|sigma) = t d/dt W(t)`` through ``t**N``."""

    def sides():
        E = floquet_expansion("HVI", N).E
        W = classical_block("regular4pt", N)
        rhs = {0: regular_to_theta(W.log_t)}
        for n in range(1, N + 1):
            rhs[n] = regular_to_theta(W.coefficient(n) * n)
        return E, rhs

    return _lazy_report("E_VI", "t dW/dt (regular)", N, sides)


def conjectureB_first_kind(kind: str, N: int) -> SeriesReport:
    if kind not in _FIRST_KIND_EQUATION:
        raise UnsupportedEquation(f"first-kind block kind must be one of {tuple(_FIRST_KIND_EQUATION)}")
    eq = _FIRST_KIND_EQUATION[kind]

    def sides():
        E = floquet_expansion(eq, N).E
        W = classical_block(kind, N)
        rhs = {0: first_kind_to_theta(kind, W.log_t)}
        for n in range(1, N + 1):
            rhs[n] = first_kind_to_theta(kind, W.coefficient(n) * n)
        return E, rhs

    return _lazy_report(f"E_{eq[1:]}", f"t dW/dt ({kind})", N, sides)


def _lazy_report(lhs_label: str, rhs_label: str, N: int, sides) -> SeriesReport:
    try:
        E, rhs = sides()
    except HeunCFTError as exc:
        report = SeriesReport(lhs_label, rhs_label, list(range(N + 1)), False)
        report.error = f"{type(exc).__name__}: {exc}"
        return report
    return compare(lhs_label, rhs_label, [(n, E[n], rhs[n]) for n in range(N + 1)])


def conjectureB_typeD(N: int) -> SeriesReport:
    """``E_BS = t d/dt U`` for type D: ``kappa``, ``E_0`` and ``E_n = -n U_n``."""

    def sides():
        inv = invert_bs("HV", N)
        U = classical_block("typeD", N)
        lhs = {"kappa": inv.kappa, 0: inv.E[0]}
        rhs = {"kappa": U.series[-1], 0: U.log_t}
        for n in range(1, N + 1):
            lhs[n] = inv.E[n]
            rhs[n] = -n * U.coefficient(n)
        return lhs, rhs

    return _keyed_report("E_BS (HV)", "t dU/dt (type D)", sides, ["kappa"] + list(range(N + 1)))


def conjectureB_typeG(N: int = 5) -> SeriesReport:
    """``E_BS = d/dt U~`` for type G through ``t**-N``.

    ``kappa`` pairs with ``d/dt(-nu t^2)``, ``E_1`` with the log coefficient,
    ``E_{2n+1}`` with ``-2n U~_n`` and the even ``E_m`` vanish.  Only
    ``U~_1, U~_2`` are available, so ``N <= 5``.
    """
    if N > 5:
        raise UnsupportedEquation("type G coefficients are available through t^-5 in E only")

    def sides():
        inv = invert_bs("HIV", N)
        U = classical_block("typeG", max(1, (N - 1) // 2))
        lhs = {"kappa": inv.kappa}
        rhs = {"kappa": 2 * U.series[-2]}
        for m in range(0, N + 1):
            lhs[m] = inv.E[m]
            if m % 2 == 0:
                rhs[m] = U.space.zero
            elif m == 1:
                rhs[m] = U.log_t
            else:
                n = (m - 1) // 2
                rhs[m] = -2 * n * U.coefficient(n)
        return lhs, rhs

    return _keyed_report("E_BS (HIV)", "dU/dt (type G)", sides, ["kappa"] + list(range(N + 1)))


def _keyed_report(lhs_label, rhs_label, sides, keys) -> SeriesReport:
    try:
        lhs, rhs = sides()
    except HeunCFTError as exc:
        report = SeriesReport(lhs_label, rhs_label, list(keys), False)
        report.error = f"{type(exc).__name__}: {exc}"
        return report
    return compare(lhs_label, rhs_label, [(k, lhs[k], rhs[k]) for k in keys])


# ---------------------------------------------------------------------------
# confluence on the classical side

GT_CLASSICAL_SPACE = ParameterSpace(("Lambda", "delta0", "deltat", "thetastar", "nu"))
CHAIN_CL_SPACE = ParameterSpace(("Lambda", "delta0", "deltat", "delta1", "deltainf", "deltasigma", "thetastar", "thetablack"))


def quasiclassical_typeD(N: int, W: ClassicalBlock | None = None) -> list[RationalFunction]:
    """Type D classical coefficients ``U_1..U_N`` from the regular classical block.

    ``U_n = lim Lambda^n [W_n(...) - (delta_t - (theta*-nu)(Lambda+nu))/n]`` with
    ``theta_1 = (Lambda+theta*)/2``, ``theta_sigma = theta_1 - nu``,
    ``delta_inf = delta_0`` and ``theta_0 -> (Lambda-theta*)/2``.
    """
    W = W or classical_block("regular4pt", N)
    G = GT_CLASSICAL_SPACE
    lam, d0, dt, ts, nu = G.symbols(*G.names)
    th1 = (lam + ts) * HALF
    images = {
        "delta1": delta_of(th1),
        "deltasigma": delta_of(th1 - nu),
        "deltainf": d0,
        "delta0": delta_of((lam - ts) * HALF),
        "deltat": dt,
    }
    out = []
    for n in range(1, N + 1):
        w = W.coefficient(n).subs(images, G)
        expr = (w - (dt - (ts - nu) * (lam + nu)) * Fraction(1, n)) * lam**n
        out.append(limit_at_infinity(expr, "Lambda").to_space(CL_TYPE_D))
    return out


def quasiclassical_typeD_report(N: int) -> SeriesReport:
    def pairs():
        U = classical_block("typeD", N)
        Q = quasiclassical_typeD(N)
        return [(n, U.coefficient(n), Q[n - 1]) for n in range(1, N + 1)]

    try:
        items = pairs()
    except HeunCFTError as exc:
        return SeriesReport("U (type D)", "collision limit of W", list(range(1, N + 1)), False,
                            error=f"{type(exc).__name__}: {exc}")
    return compare("U (type D)", "collision limit of W", items)


CLASSICAL_LINKS = ("regular4pt->Nf3", "Nf3->Nf2", "Nf2->Nf1", "Nf1->Nf0")


def classical_confluence(link: str, upper: Sequence[RationalFunction]) -> list[RationalFunction]:
    """Limits of classical block coefficients along one confluence step.

    ``upper[n-1]`` is ``W_n`` of the source kind.
    """
    C = CHAIN_CL_SPACE
    lam, ts, tb = C.symbols("Lambda", "thetastar", "thetablack")
    if link == "regular4pt->Nf3":
        images = {"delta1": delta_of((lam + ts) * HALF), "deltainf": delta_of((lam - ts) * HALF)}
        scale, var = lam, "Lambda"
    elif link == "Nf3->Nf2":
        images = {"delta0": delta_of((lam - tb) * HALF), "deltat": delta_of((lam + tb) * HALF)}
        scale, var = lam, "Lambda"
    elif link == "Nf2->Nf1":
        images, scale, var = {}, tb, "thetablack"
    elif link == "Nf1->Nf0":
        images, scale, var = {}, ts, "thetastar"
    else:
        raise UnsupportedEquation(f"unknown link {link!r}; expected one of {CLASSICAL_LINKS}")
    out = []
    for n, w in enumerate(upper, start=1):
        w = w.to_space(C) if not images else w.to_space(C).subs(images, C)
        out.append(limit_at_infinity(w / scale**n, var).to_space(CL_FIRST_KIND))
    return out


def classical_confluence_report(link: str, N: int) -> SeriesReport:
    src, dst = link.split("->")
    try:
        upper = [classical_block(src, N).coefficient(n) for n in range(1, N + 1)]
        lower = classical_block(dst, N)
        limits = classical_confluence(link, upper)
    except HeunCFTError as exc:
        return SeriesReport(f"W ({dst})", f"limit of W ({src})", list(range(1, N + 1)), False,
                            error=f"{type(exc).__name__}: {exc}")
    return compare(f"W ({dst})", f"limit of W ({src})",
                   [(n, lower.coefficient(n).to_space(CL_FIRST_KIND), limits[n - 1]) for n in range(1, N + 1)])
