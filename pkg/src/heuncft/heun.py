"""Weak-coupling Floquet characteristics from continued fractions.

A Floquet solution ``sum_n c_n z^(n+omega)`` of a Heun-class equation leads
to the three-term recurrence ``A_n c_{n-1} - B_n c_n + C_n t c_{n+1} = 0``.
Eliminating ``c_{n>0}`` and ``c_{n<0}`` by continued fractions gives

    t C_0 A_1 / (B_1 - t C_1 A_2 / (B_2 - ...))
      + t A_0 C_{-1} / (B_{-1} - t A_{-1} C_{-2} / (B_{-2} - ...)) = B_0

which is solved order by order in ``t`` for the unknown (``q`` or ``E``)
entering the ``B_n`` only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .errors import (
    DivisionByZero,
    DivergentLimit,
    LeadingCoefficientZero,
    NonlinearOrderEquation,
    ResonantDenominator,
    UnsupportedEquation,
)
from .ratfunc import ParameterSpace, RationalFunction, limit_at_infinity
from .report import SeriesReport, compare
from .series import FormalSeries

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

EQUATIONS = ("HVI", "HV", "HIII1", "HIII2", "HIII3")

# Spaces in which the Floquet characteristics are reported.
THETA_SPACES = {
    "HVI": ParameterSpace(("theta0", "theta1", "thetat", "thetainf", "sigma")),
    "HV": ParameterSpace(("theta0", "thetat", "thetastar", "sigma")),
    "HIII1": ParameterSpace(("thetastar", "thetablack", "sigma")),
    "HIII2": ParameterSpace(("thetastar", "sigma")),
    "HIII3": ParameterSpace(("sigma",)),
}

# Spaces in which the recurrence is solved (canonical-form parameters).
_SOLVE_SPACES = {
    "HVI": ParameterSpace(("omega", "alpha", "beta", "gamma", "delta", "epsilon", "Q")),
    "HV": ParameterSpace(("omega", "alpha", "beta", "gamma", "Q")),
    "HIII1": ParameterSpace(("thetastar", "thetablack", "sigma", "Q")),
    "HIII2": ParameterSpace(("thetastar", "sigma", "Q")),
    "HIII3": ParameterSpace(("sigma", "Q")),
}


@dataclass(frozen=True)
class CFFamily:
    """Coefficients ``(A_n, B_n, C_n)`` of the three-term recurrence.

    ``B_n = unknown_sign * unknown + b0(n) + b1(n) * t``; ``A_n`` and
    ``C_n`` do not depend on ``t`` or on the unknown.
    """

    equation: str
    space: ParameterSpace
    unknown: str
    floquet_symbol: str
    A: Callable[[int], RationalFunction]
    C: Callable[[int], RationalFunction]
    B_parts: Callable[[int], tuple[int, RationalFunction, RationalFunction]]

    def B(self, n: int) -> RationalFunction:
        """``B_n`` as a rational function including the unknown and ``t``."""
        S = self.space.extend(self.unknown, "t")
        sign, b0, b1 = self.B_parts(n)
        return sign * S.symbol(self.unknown) + b0.to_space(S) + b1.to_space(S) * S.symbol("t")

    def specialize(self, values: Mapping[str, Fraction]) -> "CFFamily":
        """Evaluate the coefficients at exact rational parameter values."""
        values = dict(values)

        def ev(rf):
            return rf.evaluate(values)

        def bp(n):
            s, b0, b1 = self.B_parts(n)
            return s, ev(b0), ev(b1)

        return CFFamily(self.equation, self.space, self.unknown, self.floquet_symbol,
                        lambda n: ev(self.A(n)), lambda n: ev(self.C(n)), bp)


def cf_family(equation: str) -> CFFamily:
    """Recurrence coefficients for ``equation`` in its canonical-form parameters."""
    if equation not in _SOLVE_SPACES:
        raise UnsupportedEquation(f"no Floquet recurrence for {equation!r}; expected one of {EQUATIONS}")
    S = _SOLVE_SPACES[equation]
    zero = S.zero
    if equation == "HVI":
        w, al, be, ga, de, ep, _ = S.symbols(*S.names)
        return CFFamily(
            equation, S, "q", "omega",
            lambda n: (w + n - 1 + al) * (w + n - 1 + be),
            lambda n: (w + n + 1) * (w + n + ga),
            lambda n: (1, (w + n) * (ep + w + n - 1 + ga), (w + n) * (de + w + n - 1 + ga)),
        )
    if equation == "HV":
        w, al, be, ga, _ = S.symbols(*S.names)
        return CFFamily(
            equation, S, "q", "omega",
            lambda n: w + n - 1 + al,
            lambda n: -(w + n + 1) * (w + n + be),
            lambda n: (1, -(w + n) * (w + n - 1 + be + ga), w + n),
        )
    if equation == "HIII1":
        ts, tb, s, _ = S.symbols(*S.names)
        return CFFamily(
            equation, S, "E", "sigma",
            lambda n: ts - s - n + HALF,
            lambda n: tb + s + n + HALF,
            lambda n: (1, (s + n) ** 2 - QUARTER, S.const(-HALF)),
        )
    if equation == "HIII2":
        ts, s, _ = S.symbols(*S.names)
        return CFFamily(
            equation, S, "E", "sigma",
            lambda n: ts - s - n + HALF,
            lambda n: S.one,
            lambda n: (1, (s + n) ** 2 - QUARTER, zero),
        )
    s, _ = S.symbols(*S.names)
    return CFFamily(
        equation, S, "E", "sigma",
        lambda n: S.one,
        lambda n: S.one,
        lambda n: (1, (s + n) ** 2 - QUARTER, zero),
    )


# ---------------------------------------------------------------------------
# solver


def _b_series(fam: CFFamily, n: int, unknown: FormalSeries, order: int) -> FormalSeries:
    sign, b0, b1 = fam.B_parts(n)
    S = fam.space
    poly = FormalSeries("t", {0: b0, 1: b1}, zero=S.zero)
    out = (unknown * sign + poly).truncate(order)
    if n and out[0].is_zero():
        raise ResonantDenominator(f"B_{n} vanishes at t = 0 for {fam.equation}")
    return out


def _ladder(fam: CFFamily, unknown: FormalSeries, order: int, depth: int, sign: int) -> FormalSeries:
    """``B_{s} - t X_{s} Y_{s+1} / (B_{2s} - ...)`` ladder in direction ``sign``; returns ``1/X_1``."""
    S = fam.space
    tail = None
    for m in range(depth, 0, -1):
        n = sign * m
        x = _b_series(fam, n, unknown, order)
        if tail is not None:
            if sign > 0:
                k = fam.C(n) * fam.A(n + 1)
            else:
                k = fam.A(n) * fam.C(n - 1)
            x = x - (tail * k).shift(1).truncate(order)
        try:
            tail = x.inverse().truncate(order)
        except LeadingCoefficientZero as exc:
            raise ResonantDenominator(str(exc)) from None
    return tail


def _order_equation(fam: CFFamily, unknown: FormalSeries, k: int, depth: int) -> RationalFunction:
    upper = _ladder(fam, unknown, k, depth, +1) * (fam.C(0) * fam.A(1))
    lower = _ladder(fam, unknown, k, depth, -1) * (fam.A(0) * fam.C(-1))
    lhs = (upper + lower).shift(1).truncate(k)
    return lhs[k] - _b_series(fam, 0, unknown, k)[k]


def solve_continued_fraction(fam: CFFamily, N: int, depth: int | None = None) -> list[RationalFunction]:
    """Coefficients ``u_0..u_N`` of the unknown, solved order by order."""
    if N < 0:
        raise ValueError("N >= 0 required")
    depth = N + 1 if depth is None else depth
    S = fam.space
    Q = S.symbol("Q")
    known: list[RationalFunction] = []
    for k in range(N + 1):
        terms = {j: v for j, v in enumerate(known)}
        terms[k] = Q
        unknown = FormalSeries("t", terms, k, zero=S.zero)
        eq = _order_equation(fam, unknown, k, depth)
        known.append(_solve_linear_in(eq, "Q", k, fam.equation))
    return known


def _solve_linear_in(eq: RationalFunction, name: str, k: int, label: str) -> RationalFunction:
    num, den = eq.coefficients_in(name)
    if set(den) - {0}:
        raise NonlinearOrderEquation(f"{label}: order-{k} equation has the unknown in a denominator")
    if set(num) - {0, 1} or 1 not in num:
        raise NonlinearOrderEquation(f"{label}: order-{k} equation is not linear in the new unknown")
    space = eq.space
    a = RationalFunction(num[1])
    b = RationalFunction(num[0]) if 0 in num else space.zero
    sol = -b / a
    if name in sol.free_symbols():
        raise NonlinearOrderEquation(f"{label}: order-{k} solution still depends on {name}")
    return sol


# ---------------------------------------------------------------------------
# dictionaries


def _theta_images(equation: str) -> dict[str, RationalFunction]:
    T = THETA_SPACES[equation]
    if equation == "HVI":
        t0, t1, tt, ti, s = T.symbols(*T.names)
        return {
            "omega": s + t0 + tt - HALF,
            "alpha": 1 - t0 - t1 - tt - ti,
            "beta": 1 - t0 - t1 - tt + ti,
            "gamma": 1 - 2 * t0,
            "delta": 1 - 2 * t1,
            "epsilon": 1 - 2 * tt,
        }
    if equation == "HV":
        t0, tt, ts, s = T.symbols(*T.names)
        return {"omega": s + t0 + tt - HALF, "alpha": 1 - t0 - tt - ts, "beta": 1 - 2 * t0, "gamma": 1 - 2 * tt}
    return {n: T.symbol(n) for n in T.names}


def to_theta(equation: str, rf: RationalFunction) -> RationalFunction:
    """Express a canonical-parameter rational function through the thetas and sigma."""
    return rf.subs(_theta_images(equation), THETA_SPACES[equation])


def q_to_E(equation: str, q_series: FormalSeries) -> FormalSeries:
    """Accessory parameter ``E`` from the canonical-form ``q`` (series in ``t``).

    ``q_series`` must have coefficients in the theta space of ``equation``.
    """
    T = THETA_SPACES.get(equation)
    if equation not in ("HVI", "HV"):
        raise UnsupportedEquation(f"{equation} is expanded directly in E")
    im = _theta_images(equation)
    ga = im["gamma"]
    order = q_series.order
    if equation == "HVI":
        al, be, de, ep = im["alpha"], im["beta"], im["delta"], im["epsilon"]
        shift = FormalSeries("t", {0: ga * ep * HALF, 1: (2 * al * be - (ga + de) * ep) * HALF}, zero=T.zero)
        one_minus_t = FormalSeries("t", {0: T.one, 1: -T.one}, order, zero=T.zero)
        return ((q_series - shift) * one_minus_t.inverse()).truncate(order)
    al, be = im["alpha"], im["beta"]
    rest = FormalSeries("t", {0: -be * ga * HALF, 1: al - ga * HALF}, zero=T.zero)
    return (rest - q_series).truncate(order)


def E_to_q(equation: str, e_series: FormalSeries) -> FormalSeries:
    """Inverse of :func:`q_to_E` (affine in ``E``)."""
    T = THETA_SPACES[equation]
    im = _theta_images(equation)
    ga = im["gamma"]
    if equation == "HVI":
        al, be, de, ep = im["alpha"], im["beta"], im["delta"], im["epsilon"]
        shift = FormalSeries("t", {0: ga * ep * HALF, 1: (2 * al * be - (ga + de) * ep) * HALF}, zero=T.zero)
        one_minus_t = FormalSeries("t", {0: T.one, 1: -T.one}, zero=T.zero)
        return (e_series * one_minus_t + shift).truncate(e_series.order)
    if equation == "HV":
        al, be = im["alpha"], im["beta"]
        rest = FormalSeries("t", {0: -be * ga * HALF, 1: al - ga * HALF}, zero=T.zero)
        return (rest - e_series).truncate(e_series.order)
    raise UnsupportedEquation(f"{equation} is expanded directly in E")


@dataclass
class AccessoryExpansion:
    equation: str
    floquet_symbol: str
    convention: str
    E: FormalSeries
    q: FormalSeries | None = None
    q_canonical: FormalSeries | None = None


CONVENTIONS = {
    "HVI": "omega = sigma + theta0 + thetat - 1/2",
    "HV": "omega = sigma + theta0 + thetat - 1/2",
    "HIII1": "omega = sigma",
    "HIII2": "omega = sigma",
    "HIII3": "omega = sigma",
}


def floquet_expansion(
    equation: str, N: int, *, depth: int | None = None, bindings: Mapping[str, Fraction] | None = None
) -> AccessoryExpansion:
    """Floquet characteristic ``E(t|sigma)`` through ``t**N``.

    ``bindings`` specializes theta-space symbols to exact rationals before
    solving; vanishing ``B_n(t=0)`` then raises :class:`ResonantDenominator`.
    """
    fam = cf_family(equation)
    T = THETA_SPACES[equation]
    bindings = {k: Fraction(v) for k, v in (bindings or {}).items()}
    unknown_names = set(bindings) - set(T.names)
    if unknown_names:
        raise UnsupportedEquation(f"unknown symbols for {equation}: {sorted(unknown_names)}")
    if bindings and equation in ("HVI", "HV"):
        # Solve in theta variables directly so that the bindings apply.
        fam = _theta_family(equation, fam)
    if bindings:
        try:
            fam = fam.specialize(bindings)
        except DivisionByZero as exc:
            raise ResonantDenominator(str(exc)) from None
    coeffs = solve_continued_fraction(fam, N, depth)
    solve_space = fam.space

    def present(rf):
        if bindings or equation not in ("HVI", "HV"):
            return rf.to_space(T)
        return to_theta(equation, rf.to_space(_drop_q(solve_space)))

    def bind(rf):
        return rf.evaluate(bindings) if bindings else rf

    if equation in ("HVI", "HV"):
        canon = None
        if not bindings:
            C = _drop_q(solve_space)
            canon = FormalSeries("t", {k: c.to_space(C) for k, c in enumerate(coeffs)}, N, zero=C.zero)
        q = FormalSeries("t", {k: present(c) for k, c in enumerate(coeffs)}, N, zero=T.zero)
        E = q_to_E(equation, q)
        if bindings:
            E = E.map_coefficients(bind)
        return AccessoryExpansion(equation, fam.floquet_symbol, CONVENTIONS[equation], E, q, canon)
    E = FormalSeries("t", {k: present(c) for k, c in enumerate(coeffs)}, N, zero=T.zero)
    return AccessoryExpansion(equation, "sigma", CONVENTIONS[equation], E)


def _drop_q(space: ParameterSpace) -> ParameterSpace:
    return ParameterSpace(tuple(n for n in space.names if n != "Q"))


def _theta_family(equation: str, fam: CFFamily) -> CFFamily:
    """The same recurrence with canonical parameters replaced by thetas."""
    T = THETA_SPACES[equation].extend("Q")
    im = {k: v.to_space(T) for k, v in _theta_images(equation).items()}

    def conv(rf):
        return rf.subs(im, T)

    def bp(n):
        s, b0, b1 = fam.B_parts(n)
        return s, conv(b0), conv(b1)

    return CFFamily(equation, T, fam.unknown, fam.floquet_symbol, lambda n: conv(fam.A(n)), lambda n: conv(fam.C(n)), bp)


# ---------------------------------------------------------------------------
# confluent chain


CHAIN_SPACE = ParameterSpace(("theta0", "theta1", "thetat", "thetainf", "thetastar", "thetablack", "sigma", "Lambda"))

LINKS = ("VI->V", "V->III1", "III1->III2", "III2->III3")


def confluent_limit_coefficients(link: str, upper: FormalSeries) -> list[RationalFunction]:
    """Termwise confluent limit of the upper Floquet characteristic coefficients."""
    S = CHAIN_SPACE
    L = S.symbol("Lambda")
    ts, tb = S.symbol("thetastar"), S.symbol("thetablack")
    out = []
    for n in range(0, int(upper.order) + 1):
        c = upper[n].to_space(S)
        if link == "VI->V":
            c = c.subs({"theta1": (L + ts) * HALF, "thetainf": (L - ts) * HALF}) / L**n
            var = "Lambda"
        elif link == "V->III1":
            if n == 0:
                t0, tt = S.symbol("theta0"), S.symbol("thetat")
                c = c - t0**2 - tt**2 + HALF
            c = c.subs({"theta0": (L - tb) * HALF, "thetat": (L + tb) * HALF}) / L**n
            var = "Lambda"
        elif link == "III1->III2":
            c = c / tb**n
            var = "thetablack"
        elif link == "III2->III3":
            c = c / ts**n
            var = "thetastar"
        else:
            raise ValueError(f"unknown link {link!r}; expected one of {LINKS}")
        out.append(limit_at_infinity(c, var))
    return out


def confluent_chain_floquet(link: str, N: int) -> SeriesReport:
    """Check one link of the confluence chain of Floquet characteristics through ``t**N``."""
    upper_eq, lower_eq = {"VI->V": ("HVI", "HV"), "V->III1": ("HV", "HIII1"),
                          "III1->III2": ("HIII1", "HIII2"), "III2->III3": ("HIII2", "HIII3")}[link]
    upper = floquet_expansion(upper_eq, N).E
    lower = floquet_expansion(lower_eq, N).E
    state: dict = {}

    def lhs(n):
        def thunk():
            if "coeffs" not in state:
                state["coeffs"] = confluent_limit_coefficients(link, upper)
            return state["coeffs"][n]
        return thunk

    return compare(f"limit[{link}] E_{upper_eq}", f"E_{lower_eq}",
                   ((n, lhs(n), lower[n]) for n in range(N + 1)))


# ---------------------------------------------------------------------------
# Mathieu dictionary


def mathieu_dictionary(sigma, t):
    """Map ``(sigma, t)`` to the standard Mathieu ``(nu, q)`` and ``delta_sigma``.

    ``nu = 2 sigma``, ``q = 4 sqrt(t)``, ``delta_sigma = (1 - nu^2)/4``.
    Exact when ``t`` is the square of a rational.
    """
    sigma = Fraction(sigma) if not isinstance(sigma, float) else sigma
    nu = 2 * sigma
    if isinstance(t, float):
        q = 4 * math.sqrt(t)
    else:
        t = Fraction(t)
        rn, rd = math.isqrt(t.numerator), math.isqrt(t.denominator)
        q = 4 * Fraction(rn, rd) if rn * rn == t.numerator and rd * rd == t.denominator else 4 * math.sqrt(t)
    return nu, q, (1 - nu * nu) / 4
