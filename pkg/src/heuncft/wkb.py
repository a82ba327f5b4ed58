"""All-order WKB, Bohr-Sommerfeld periods and their inversion.

For ``hbar^2 psi'' = U psi`` the WKB momenta satisfy ``S_{-1} = sqrt(U)`` and

    2 S_{-1} S_{n+1} = -(S_n' + sum_{k=0}^{n} S_k S_{n-k})

Every ``S_n`` is kept as a truncated series in ``hbar`` whose coefficients
are finite Laurent polynomials in the coordinate, so the period
``(1/2 pi i) oint S_n`` is the residue at the origin of each coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EvenResidueNonzero, NoBSRescaling, NonlinearOrderEquation, UnsupportedEquation
from .ratfunc import ParameterSpace, RationalFunction
from .series import INF, FormalSeries, LaurentObject

QUARTER = Fraction(1, 4)

# ---------------------------------------------------------------------------
# potential catalog

CATALOG_SPACE = ParameterSpace(
    ("z", "t", "E", "theta0", "theta1", "thetat", "thetainf", "thetastar", "thetablack", "thetabullet", "thetacirc")
)

CATALOG_EQUATIONS = ("HVI", "HV", "HIV", "HIII1", "HIII2", "HIII3", "HII", "HI", "HIII1p", "HIIp")

# Heun normal form followed by the confluent table, keyed by tag: (equation name, potential text)
_CATALOG = {
    "HVI": (
        "Heun",
        "(theta0^2-1/4)/z^2+(theta1^2-1/4)/(z-1)^2+(thetat^2-1/4)/(z-t)^2"
        "+(thetainf^2-theta0^2-theta1^2-thetat^2+1/2)/(z*(z-1))+(1-t)*E/(z*(z-1)*(z-t))",
    ),
    "HV": ("confluent Heun", "(theta0^2-1/4)/z^2+(thetat^2-1/4)/(z-t)^2+1/4+thetastar/z-E/(z*(z-t))"),
    "HIV": ("biconfluent Heun", "(theta0^2-1/4)/z^2-E/z+2*thetabullet+(z+t)^2"),
    "HIII1": ("doubly confluent Heun", "t^2/(4*z^4)+t*thetablack/z^3-E/z^2+thetastar/z+1/4"),
    "HIII2": ("reduced doubly confluent Heun", "t/z^3-E/z^2+thetastar/z+1/4"),
    "HIII3": ("doubly reduced doubly confluent Heun", "t/z^3-E/z^2+1/z"),
    "HII": ("triconfluent Heun", "(z^2+t)^2+2*thetacirc*z+E"),
    "HI": ("reduced triconfluent Heun", "4*z^3+2*t*z+E"),
    "HIII1p": ("reduced confluent Heun", "(theta0^2-1/4)/z^2+(thetat^2-1/4)/(z-t)^2+1/z-E/(z*(z-t))"),
    "HIIp": ("reduced biconfluent Heun", "(theta0^2-1/4)/z^2+E/z+t+z"),
}

HV_SPACE_U = ParameterSpace(("lambda", "hbar", "E", "thetastar", "delta0", "deltat"))
HIV_SPACE_U = ParameterSpace(("z", "hbar", "E", "thetabullet", "delta0"))


@dataclass(frozen=True)
class PotentialSpec:
    """One row of the potential table, with the WKB rescaling where defined.

    ``potential`` is ``V(z)`` in :data:`CATALOG_SPACE`.  For HV and HIV,
    ``rescaled`` is ``U`` as a rational function of the rescaled coordinate,
    ``hbar`` and ``E``; ``coordinate`` names that coordinate and
    ``substitution`` maps the catalog symbols to the rescaled ones.
    """

    equation: str
    name: str
    potential: RationalFunction
    rescaled: RationalFunction | None = None
    coordinate: str | None = None
    substitution: dict[str, RationalFunction] = field(default_factory=dict)

    def require_rescaling(self) -> RationalFunction:
        if self.rescaled is None:
            raise NoBSRescaling(f"{self.equation} has no Bohr-Sommerfeld rescaling")
        return self.rescaled


def potential_catalog(equation: str) -> PotentialSpec:
    if equation not in _CATALOG:
        raise UnsupportedEquation(f"unknown equation {equation!r}; expected one of {CATALOG_EQUATIONS}")
    name, text = _CATALOG[equation]
    V = CATALOG_SPACE.parse(text)
    if equation == "HV":
        S = HV_SPACE_U
        lam, h, E, ts, d0, dt = S.symbols(*S.names)
        U = QUARTER + h * ts / lam + h**3 * E / (lam * (1 - h * lam)) - h**2 * d0 / lam**2 - h**4 * dt / (1 - h * lam) ** 2
        # V(z = lambda/hbar, t = hbar^-2) = U, with delta_k = 1/4 - theta_k^2
        sub = {"z": lam / h, "t": 1 / h**2}
        return PotentialSpec(equation, name, V, U, "lambda", sub)
    if equation == "HIV":
        S = HIV_SPACE_U
        z, h, E, tb, d0 = S.symbols(*S.names)
        U = 1 + 2 * h * z - h**2 * E / z + h**2 * (z**2 - d0 / z**2 + 2 * tb)
        # hbar^-2 U = V at t = 1/hbar
        sub = {"z": z, "t": 1 / h}
        return PotentialSpec(equation, name, V, U, "z", sub)
    return PotentialSpec(equation, name, V)


# ---------------------------------------------------------------------------
# the ansatz E = kappa t + sum E_n t^-n as an hbar-series


def unknown_names(N: int) -> tuple[str, ...]:
    return ("kappa",) + tuple(f"E{n}" for n in range(N + 1))


def _hv_space(N: int) -> ParameterSpace:
    return ParameterSpace(("thetastar", "delta0", "deltat", "nu") + unknown_names(N))


def _hiv_space(N: int) -> ParameterSpace:
    return ParameterSpace(("thetabullet", "delta0", "nu") + unknown_names(N))


def _laurent(space, var, coeffs) -> LaurentObject:
    return LaurentObject(space, var, coeffs)


def hv_potential_series(M: int, N: int) -> FormalSeries:
    """``U(lambda)`` for HV through ``hbar**M`` with ``hbar^3 E = kappa hbar + sum E_n hbar^(2n+3)``."""
    S = _hv_space(N)
    ts, d0, dt = S.symbols("thetastar", "delta0", "deltat")
    kappa = S.symbol("kappa")
    E = {1: kappa}
    for n in range(N + 1):
        if 2 * n + 3 <= M:
            E[2 * n + 3] = S.symbol(f"E{n}")
    coeffs: dict[int, dict[int, RationalFunction]] = {}

    def add(power, lam_exp, value):
        if power > M:
            return
        row = coeffs.setdefault(power, {})
        row[lam_exp] = row[lam_exp] + value if lam_exp in row else value

    add(0, 0, S.const(QUARTER))
    add(1, -1, ts)
    add(2, -2, -d0)
    # hbar^3 E / (lambda (1 - hbar lambda)) = sum_k (hbar^3 E) hbar^k lambda^(k-1)
    for p, e in E.items():
        for k in range(0, M - p + 1):
            add(p + k, k - 1, e)
    # -hbar^4 delta_t / (1 - hbar lambda)^2
    for k in range(0, M - 4 + 1):
        add(4 + k, k, -dt * (k + 1))
    zero = _laurent(S, "lambda", {})
    return FormalSeries("hbar", {p: _laurent(S, "lambda", row) for p, row in coeffs.items()}, M, zero=zero)


def hiv_potential_series(M: int, N: int) -> FormalSeries:
    """``U(z)`` for HIV through ``hbar**M`` with ``hbar^2 E = kappa hbar + sum E_n hbar^(n+2)``."""
    S = _hiv_space(N)
    tb, d0 = S.symbols("thetabullet", "delta0")
    kappa = S.symbol("kappa")
    E = {1: kappa}
    for n in range(N + 1):
        if n + 2 <= M:
            E[n + 2] = S.symbol(f"E{n}")
    coeffs: dict[int, dict[int, RationalFunction]] = {}

    def add(power, z_exp, value):
        if power > M:
            return
        row = coeffs.setdefault(power, {})
        row[z_exp] = row[z_exp] + value if z_exp in row else value

    add(0, 0, S.one)
    add(1, 1, S.const(2))
    add(2, 2, S.one)
    add(2, -2, -d0)
    add(2, 0, 2 * tb)
    for p, e in E.items():
        add(p, -1, -e)
    zero = _laurent(S, "z", {})
    return FormalSeries("hbar", {p: _laurent(S, "z", row) for p, row in coeffs.items()}, M, zero=zero)


# ---------------------------------------------------------------------------
# WKB stack


def _d(series: FormalSeries) -> FormalSeries:
    return series.map_coefficients(lambda L: L.derivative(), zero=series.zero)


@dataclass
class WKBStack:
    """``S[k]`` holds ``S_{k-1}``; each is known through ``hbar**(M - k + 1)``."""

    max_order: int
    hbar_truncation: int
    S: list[FormalSeries]

    def momentum(self, n: int) -> FormalSeries:
        return self.S[n + 1]

    def residual(self, n: int) -> FormalSeries:
        """``S_n' + sum_{k=-1}^{n+1} S_k S_{n-k}`` (identically zero when consistent)."""
        out = _d(self.momentum(n))
        for k in range(-1, n + 2):
            out = out + self.momentum(k) * self.momentum(n - k)
        upto = min(s.order for s in (self.momentum(k) for k in range(-1, n + 2)))
        return out.truncate(upto)


def wkb_stack(U: FormalSeries, max_order: int) -> WKBStack:
    """Momenta ``S_{-1}..S_{max_order}`` for ``hbar^2 psi'' = U psi``.

    ``S_n`` is kept through ``hbar**(M - n)``, ``M = U.order``, which is what
    the period ``sum hbar^(2n-1) nu_{2n-1}`` needs through ``hbar**(M-1)``.
    """
    M = int(U.order)
    p = U.sqrt()
    S = [p]
    inv2p = (p * 2).inverse()
    for n in range(-1, max_order):
        cur = S[n + 1]
        rhs = _d(cur)
        for k in range(0, n + 1):
            rhs = rhs + S[k + 1] * S[n - k + 1]
        nxt = (-(rhs * inv2p)).truncate(M - (n + 1))
        S.append(nxt)
    return WKBStack(max_order, M, S)


def residues(series: FormalSeries) -> FormalSeries:
    """Residue at the origin of every hbar-coefficient."""
    space = series.zero.space
    return FormalSeries(
        series.variable,
        {e: L.residue() for e, L in series.coefficients.items()},
        series.order,
        zero=space.zero,
    )


def check_even_residues(stack: WKBStack) -> None:
    for n in range(0, stack.max_order + 1, 2):
        r = residues(stack.momentum(n))
        for e, c in r.coefficients.items():
            if not c.is_zero():
                raise EvenResidueNonzero(f"S_{n} has residue {c} at hbar^{e}")


# ---------------------------------------------------------------------------
# periods and inversion


@dataclass
class BSPeriod:
    equation: str
    partial: dict[int, FormalSeries]  # n -> nu_n (odd n), each an hbar-series
    total: FormalSeries  # sum hbar^n nu_n
    stack: WKBStack


def _setup(equation: str, N: int, M: int | None):
    """Truncation ``M`` of U (default: just enough to solve through ``E_N``)."""
    if equation == "HV":
        # E_n enters nu at hbar^(2n+2), kappa at hbar^0
        M = 2 * N + 3 if M is None else M
        return M, hv_potential_series(M, N)
    if equation == "HIV":
        M = N + 2 if M is None else M
        return M, hiv_potential_series(M, N)
    raise NoBSRescaling(f"{equation} has no Bohr-Sommerfeld rescaling")


def bs_period(equation: str, N: int, *, hbar_order: int | None = None, check_even: bool = True) -> BSPeriod:
    """Bohr-Sommerfeld period with the ansatz unknowns ``kappa, E_0..E_N`` symbolic.

    The total period is known through ``hbar**(M-1)`` where ``M`` is the
    truncation of ``U`` (by default ``2N+3`` for HV and ``N+2`` for HIV).
    """
    M, U = _setup(equation, N, hbar_order)
    stack = wkb_stack(U, M)
    if check_even:
        check_even_residues(stack)
    partial = {}
    space = U.zero.space
    total = FormalSeries("hbar", {}, M - 1, zero=space.zero)
    for n in range(-1, M, 2):
        nu_n = residues(stack.momentum(n))
        partial[n] = nu_n
        total = total + nu_n.shift(n).truncate(M - 1)
    return BSPeriod(equation, partial, total, stack)


@dataclass
class BSInversion:
    equation: str
    kappa: RationalFunction
    E: dict[int, RationalFunction]
    series: FormalSeries  # E as a series in invt: {-1: kappa, n: E_n}
    period: BSPeriod


def invert_bs(equation: str, N: int) -> BSInversion:
    """Solve ``nu(E, t) = nu`` for ``kappa, E_0..E_N`` order by order."""
    period = bs_period(equation, N)
    S = period.total.zero.space
    step = 2 if equation == "HV" else 1
    nu = S.symbol("nu")
    unknowns = unknown_names(N)
    solved: dict[str, RationalFunction] = {}
    for j, name in enumerate(unknowns):
        power = j * step
        coeff = period.total[power]
        if solved:
            coeff = coeff.subs(solved)
        if j == 0:
            coeff = coeff - nu
        solved[name] = _solve_linear(coeff, name, equation, power)
        # keep earlier solutions expressed in nu and the parameters only
    out_space = ParameterSpace(tuple(n for n in S.names if n not in unknowns))
    sol = {k: v.to_space(out_space) for k, v in solved.items()}
    E = {n: sol[f"E{n}"] for n in range(N + 1)}
    terms = {-1: sol["kappa"]}
    terms.update(E)
    series = FormalSeries("invt", terms, N, zero=out_space.zero)
    return BSInversion(equation, sol["kappa"], E, series, period)


def _solve_linear(eq: RationalFunction, name: str, equation: str, power: int) -> RationalFunction:
    num, den = eq.coefficients_in(name)
    if set(den) - {0} or set(num) - {0, 1} or 1 not in num:
        raise NonlinearOrderEquation(f"{equation}: hbar^{power} equation is not linear in {name}")
    a = RationalFunction(num[1])
    b = RationalFunction(num[0]) if 0 in num else eq.space.zero
    return -b / a


def back_substitute(inv: BSInversion) -> FormalSeries:
    """Total period with the solved unknowns inserted (should be ``nu`` exactly)."""
    S = inv.period.total.zero.space
    values = {"kappa": inv.kappa.to_space(S)}
    values.update({f"E{n}": v.to_space(S) for n, v in inv.E.items()})
    return inv.period.total.map_coefficients(lambda c: c.subs(values), zero=S.zero)


def hbar_to_invt(equation: str, series: FormalSeries) -> FormalSeries:
    """Re-express an hbar-series in ``invt = 1/t``.

    HV has ``hbar = t^(-1/2)``, so powers land on the half-integer grid;
    HIV has ``hbar = 1/t``.
    """
    if equation == "HV":
        step = Fraction(1, 2)
    elif equation == "HIV":
        step = Fraction(1)
    else:
        raise NoBSRescaling(f"{equation} has no Bohr-Sommerfeld rescaling")
    coeffs = {e * step: c for e, c in series.coefficients.items()}
    order = series.order if series.order == INF else series.order * step
    return FormalSeries("invt", coeffs, order, grid=step, zero=series.zero)
