"""Verma modules, vertex-operator matrix elements and conformal blocks.

Descendants are labelled by partitions ``lam = (l1 >= l2 >= ...)`` standing
for ``L_{-l1} L_{-l2} ... |Delta>``.  Dual states ``<Delta, lam|`` are the
transposes ``<Delta| ... L_{l2} L_{l1}``.

All dimensions and the central charge are :class:`RationalFunction` values in
a caller-chosen :class:`ParameterSpace`, so a block can be evaluated directly
at substituted parameters (for instance ``Delta = delta/b^2 + 1/2 + b^2/4``)
without building the generic symbolic coefficient first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import DivergentLimit, GramSingular
from .ratfunc import ParameterSpace, RationalFunction, limit_at_infinity
from .report import SeriesReport, compare
from .series import INF, FormalSeries


class Partition(tuple):
    """Weakly decreasing tuple of positive integers."""

    def __new__(cls, parts: Sequence[int] = ()):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


EMPTY = Partition()


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple[Partition, ...]:
    """Partitions of ``n`` in lexicographic order: (1,...,1) first, (n) last."""
    if n < 0:
        raise ValueError("negative level")

    def gen(m, largest):
        if m == 0:
            yield ()
            return
        for k in range(min(m, largest), 0, -1):
            for rest in gen(m - k, k):
                yield (k,) + rest

    return tuple(sorted(Partition(p) for p in gen(n, n)))


# ---------------------------------------------------------------------------
# Verma module


@dataclass
class VermaState:
    """Finite combination of descendants of ``|Delta>``."""

    highest_weight: RationalFunction
    central_charge: RationalFunction
    terms: dict[Partition, RationalFunction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {Partition(p): c for p, c in self.terms.items() if not c.is_zero()}

    @property
    def homogeneous(self) -> bool:
        return len({p.weight for p in self.terms}) <= 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, VermaState):
            return NotImplemented
        return (
            self.highest_weight == other.highest_weight
            and self.central_charge == other.central_charge
            and self.terms.keys() == other.terms.keys()
            and all(self.terms[p] == other.terms[p] for p in self.terms)
        )


class VermaModule:
    """Action of ``L_n`` on the descendant basis of ``V_Delta`` (memoized per instance)."""

    def __init__(self, c: RationalFunction, delta: RationalFunction):
        self.c = c
        self.delta = delta
        self.space = delta.space
        self._memo: dict[tuple[int, Partition], dict[Partition, RationalFunction]] = {}

    def act(self, n: int, lam: Partition) -> dict[Partition, RationalFunction]:
        """``L_n`` applied to the basis state labelled by ``lam``."""
        key = (n, lam)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        one = self.space.one
        if n == 0:
            res = {lam: self.delta + lam.weight}
        elif n < 0 and (not lam or -n >= lam[0]):
            res = {Partition((-n,) + tuple(lam)): one}
        elif not lam:
            res = {}
        else:
            m = lam[0]
            rest = Partition(lam[1:])
            res: dict[Partition, RationalFunction] = {}
            # L_n L_{-m} = L_{-m} L_n + (n + m) L_{n-m} + central term
            for p, coef in self.act(n, rest).items():
                for q, d in self.act(-m, p).items():
                    _acc(res, q, coef * d)
            if n + m:
                for q, d in self.act(n - m, rest).items():
                    _acc(res, q, d * (n + m))
            if n == m:
                _acc(res, rest, self.c * Fraction(n * (n * n - 1), 12))
            res = {p: v for p, v in res.items() if not v.is_zero()}
        self._memo[key] = res
        return res

    def apply(self, n: int, state: Mapping[Partition, RationalFunction]) -> dict[Partition, RationalFunction]:
        out: dict[Partition, RationalFunction] = {}
        for p, coef in state.items():
            for q, d in self.act(n, Partition(p)).items():
                _acc(out, q, coef * d)
        return {p: v for p, v in out.items() if not v.is_zero()}

    def pairing(self, bra: Partition, ket: Mapping[Partition, RationalFunction]) -> RationalFunction:
        """``<Delta| L_{l_k} ... L_{l_1} |ket>`` for the bra labelled by ``bra``."""
        state = dict(ket)
        for m in bra:
            state = self.apply(m, state)
            if not state:
                return self.space.zero
        return state.get(EMPTY, self.space.zero)

    def gram(self, level: int) -> list[list[RationalFunction]]:
        basis = partitions(level)
        one = self.space.one
        return [[self.pairing(lam, {mu: one}) for mu in basis] for lam in basis]


def _acc(d, key, value):
    if key in d:
        d[key] = d[key] + value
    else:
        d[key] = value


def verma_apply(n: int, state: VermaState) -> VermaState:
    """``L_n`` acting on a Verma state, expanded in the descendant basis."""
    module = VermaModule(state.central_charge, state.highest_weight)
    return VermaState(state.highest_weight, state.central_charge, module.apply(n, state.terms))


def gram_matrix(level: int, c: RationalFunction, delta: RationalFunction) -> list[list[RationalFunction]]:
    """Gram matrix ``<Delta|L_lam L_{-mu}|Delta>`` at ``level`` in the order of :func:`partitions`."""
    return VermaModule(c, delta).gram(level)


def solve_linear(matrix: Sequence[Sequence[RationalFunction]], rhs: Sequence[RationalFunction]) -> list[RationalFunction]:
    """Exact Gaussian elimination; raises :class:`GramSingular` for singular input."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            raise GramSingular(f"matrix is singular (column {col})")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            if a[r][col].is_zero():
                continue
            f = a[r][col] * inv
            a[r] = [x - f * y if j >= col else x for j, (x, y) in enumerate(zip(a[r], a[col]))]
    x = [None] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n]
        for j in range(r + 1, n):
            if not a[r][j].is_zero():
                acc = acc - a[r][j] * x[j]
        x[r] = acc / a[r][r]
    return x


def determinant(matrix: Sequence[Sequence[RationalFunction]]) -> RationalFunction:
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    a = [list(row) for row in matrix]
    det = a[0][0].space.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            return det.space.zero
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col]
        inv = a[col][col].inverse()
        for r in range(col + 1, n):
            if not a[r][col].is_zero():
                f = a[r][col] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


# ---------------------------------------------------------------------------
# vertex operators and Whittaker vectors


class VertexOverlaps:
    """Matrix elements ``<D3, lam| V^{D2}_{D3,D1}(1) |D1, mu>``.

    The bra is reduced first by moving its largest generator across the
    vertex; the remaining ``<D3| V L_{-m} ...`` elements reduce on the ket side.
    """

    def __init__(self, d3: RationalFunction, d2: RationalFunction, d1: RationalFunction, c: RationalFunction,
                 ket_module: VermaModule | None = None):
        self.d3, self.d2, self.d1 = d3, d2, d1
        self.module = ket_module or VermaModule(c, d1)
        self._memo: dict[tuple[Partition, Partition], RationalFunction] = {}

    def __call__(self, bra: Partition, ket: Partition) -> RationalFunction:
        key = (bra, ket)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if bra:
            m = bra[0]
            rest = Partition(bra[1:])
            # <rest| L_m V |ket> = <rest| V L_m |ket> + <rest|[L_m, V]|ket>
            scale = self.d3 + rest.weight - self.d2 - self.d1 - ket.weight + self.d2 * (m + 1)
            val = self(rest, ket) * scale
            for p, coef in self.module.act(m, ket).items():
                val = val + coef * self(rest, p)
        elif ket:
            m = ket[0]
            rest = Partition(ket[1:])
            val = self(EMPTY, rest) * (self.d1 + rest.weight + self.d2 * m - self.d3)
        else:
            val = self.d3.space.one
        self._memo[key] = val
        return val


def vertex_overlap(bra: Partition, d3: RationalFunction, d2: RationalFunction, d1: RationalFunction,
                   ket: Partition, c: RationalFunction) -> RationalFunction:
    """``<d3, bra| V^{d2}_{d3,d1}(1) |d1, ket>`` normalized by ``<d3|V|d1> = 1``."""
    return VertexOverlaps(d3, d2, d1, c)(Partition(bra), Partition(ket))


def whittaker_overlap_rank1(lam: Partition, eigenvalues) -> RationalFunction | Fraction:
    """Pairing of a rank-1 Whittaker vector with the descendant ``lam``.

    Each part 1 contributes ``eigenvalues[0]``, each part 2 contributes
    ``eigenvalues[1]``, and any larger part makes the pairing vanish.
    """
    l1, l2 = eigenvalues
    out = 1
    for p in lam:
        if p == 1:
            out = out * l1
        elif p == 2:
            out = out * l2
        else:
            return 0 * l1
    return out


# ---------------------------------------------------------------------------
# block assembly


ROLES = ("c", "Delta0", "Deltat", "Delta1", "Deltainf", "Deltasigma", "Pstar", "Pblack", "Pnu", "Pbullet")


@dataclass
class BlockSeries:
    """Conformal block ``t**prefactor_exponent * exp(...) * series``.

    ``series`` is the bracket ``1 + sum_n X_n y**n`` with ``y = t`` for
    small-``t`` blocks and ``y = 1/t`` (variable ``invt``) for the type D and
    type G blocks.  ``exponential`` holds ``(coefficient, power)`` of the
    exponential factor, if present.
    """

    kind: str
    series: FormalSeries
    prefactor_exponent: RationalFunction
    parameter_binding: dict[str, str]
    exponential: tuple[RationalFunction, int] | None = None

    def coefficient(self, n: int) -> RationalFunction:
        step = 2 if self.kind == "typeG" else 1
        return self.series[n * step]


def _assemble(levels, n_max, gram_module, left, right, space) -> list[RationalFunction]:
    """``sum_{lam,mu} left(lam) G^{-1}_{lam mu} right(mu)`` for levels 1..n_max."""
    out = []
    for n in range(1, n_max + 1):
        basis = partitions(n)
        vr = [right(mu) for mu in basis]
        vl = [left(lam) for lam in basis]
        if all(_is_zero(v) for v in vr) or all(_is_zero(v) for v in vl):
            out.append(space.zero)
            continue
        vr = [_as_rf(v, space) for v in vr]
        x = solve_linear(gram_module.gram(n), vr)
        acc = space.zero
        for a, b in zip(vl, x):
            if not _is_zero(a):
                acc = acc + b * a
        out.append(acc)
    return out


def _is_zero(v) -> bool:
    return v == 0 if not isinstance(v, RationalFunction) else v.is_zero()


def _as_rf(v, space):
    return v if isinstance(v, RationalFunction) else space.const(v)


def regular_block_coefficients(N: int, c, d0, dt, d1, dinf, dsigma) -> list[RationalFunction]:
    """``F_1..F_N`` of ``<Dinf| V^{D1}_{Dinf,Dsig}(1) V^{Dt}_{Dsig,D0}(t) |D0>``."""
    space = c.space
    mod_sigma = VermaModule(c, dsigma)
    left = VertexOverlaps(dinf, d1, dsigma, c, ket_module=mod_sigma)
    right = VertexOverlaps(dsigma, dt, d0, c)
    return _assemble(range(1, N + 1), N, mod_sigma, lambda lam: left(EMPTY, lam), lambda mu: right(mu, EMPTY), space)


def nf3_block_coefficients(N: int, c, d0, dt, dsigma, pstar) -> list[RationalFunction]:
    space = c.space
    mod_sigma = VermaModule(c, dsigma)
    right = VertexOverlaps(dsigma, dt, d0, c)
    quarter = Fraction(1, 4)
    return _assemble(
        range(1, N + 1), N, mod_sigma,
        lambda lam: whittaker_overlap_rank1(lam, (pstar, quarter)),
        lambda mu: right(mu, EMPTY),
        space,
    )


def whittaker_block_coefficients(N: int, c, dsigma, bra_eigen, ket_eigen) -> list[RationalFunction]:
    """``<bra| t^{L0} Pi_{Dsigma} |ket>`` for rank-1 Whittaker bra and ket."""
    mod_sigma = VermaModule(c, dsigma)
    return _assemble(
        range(1, N + 1), N, mod_sigma,
        lambda lam: whittaker_overlap_rank1(lam, bra_eigen),
        lambda mu: whittaker_overlap_rank1(mu, ket_eigen),
        c.space,
    )


def first_kind_block_coefficients(nf: int, N: int, params: Mapping[str, RationalFunction]) -> list[RationalFunction]:
    """Coefficients of the confluent block of the first kind with ``nf`` flavours.

    ``params`` maps roles (``c``, ``Delta0``, ``Deltat``, ``Deltasigma``,
    ``Pstar``, ``Pblack``) to values.
    """
    c, ds = params["c"], params["Deltasigma"]
    q = Fraction(1, 4)
    if nf == 3:
        return nf3_block_coefficients(N, c, params["Delta0"], params["Deltat"], ds, params["Pstar"])
    if nf == 2:
        return whittaker_block_coefficients(N, c, ds, (params["Pstar"], q), (params["Pblack"], q))
    if nf == 1:
        return whittaker_block_coefficients(N, c, ds, (params["Pstar"], q), (1, 0))
    if nf == 0:
        return whittaker_block_coefficients(N, c, ds, (1, 0), (1, 0))
    raise ValueError(f"Nf must be 0..3, got {nf}")


# ---------------------------------------------------------------------------
# symbolic spaces and public block constructors


REGULAR_SPACE = ParameterSpace(("c", "Delta0", "Deltat", "Delta1", "Deltainf", "Deltasigma"))
FIRST_KIND_SPACE = ParameterSpace(("c", "Delta0", "Deltat", "Deltasigma", "Pstar", "Pblack"))
TYPE_D_SPACE = ParameterSpace(("c", "Delta0", "Deltat", "Pstar", "Pnu"))
TYPE_G_SPACE = ParameterSpace(("c", "Delta0", "Pbullet", "Pnu"))
GT_SPACE = ParameterSpace(("c", "Lambda", "Delta0", "Deltat", "Pstar", "Pnu"))


def _series(variable, coeffs, N, space, step=1) -> FormalSeries:
    terms = {0: space.one}
    for n, f in enumerate(coeffs, start=1):
        terms[n * step] = f
    return FormalSeries(variable, terms, N * step, zero=space.zero)


def regular_block(N: int) -> BlockSeries:
    """Generic four-point block through ``t**N`` in symbolic ``c`` and dimensions."""
    if N < 1:
        raise ValueError("N >= 1 required")
    S = REGULAR_SPACE
    c, d0, dt, d1, dinf, ds = S.symbols(*S.names)
    coeffs = regular_block_coefficients(N, c, d0, dt, d1, dinf, ds)
    return BlockSeries(
        "regular4pt",
        _series("t", coeffs, N, S).truncate(N),
        ds - d0 - dt,
        {r: r for r in S.names},
    )


def confluent_block_first_kind(nf: int, N: int) -> BlockSeries:
    if N < 1:
        raise ValueError("N >= 1 required")
    S = FIRST_KIND_SPACE
    params = dict(zip(S.names, S.symbols(*S.names)))
    coeffs = first_kind_block_coefficients(nf, N, params)
    ds = params["Deltasigma"]
    pref = ds - params["Delta0"] - params["Deltat"] if nf == 3 else ds
    used = {3: ("c", "Delta0", "Deltat", "Deltasigma", "Pstar"), 2: ("c", "Deltasigma", "Pstar", "Pblack"),
            1: ("c", "Deltasigma", "Pstar"), 0: ("c", "Deltasigma")}[nf]
    return BlockSeries(f"Nf{nf}", _series("t", coeffs, N, S), pref, {r: r for r in used})


def liouville_delta(c: RationalFunction, p: RationalFunction) -> RationalFunction:
    """``Delta = (c - 1)/24 + P**2``."""
    return (c - 1) * Fraction(1, 24) + p * p


def gt_regular_coefficients(N: int) -> list[RationalFunction]:
    """Regular-block coefficients at the collision point used for type D blocks.

    Slots: ``P1 = (Lambda+P*)/2``, ``Psigma = (Lambda+P*)/2 - Pnu``,
    ``Pinf -> P0`` (so ``Dinf = Delta0``), ``P0 -> (Lambda-P*)/2``; all in
    :data:`GT_SPACE`.
    """
    S = GT_SPACE
    c, lam, d0, dt, ps, pn = S.symbols(*S.names)
    half = Fraction(1, 2)
    p1 = (lam + ps) * half
    psig = p1 - pn
    p0slot = (lam - ps) * half
    return regular_block_coefficients(
        N, c, liouville_delta(c, p0slot), dt, liouville_delta(c, p1), d0, liouville_delta(c, psig)
    )


def _binomials(alpha: RationalFunction, n: int) -> list[RationalFunction]:
    out = [alpha.space.one]
    for k in range(1, n + 1):
        out.append(out[-1] * (alpha - (k - 1)) * Fraction(1, k))
    return out


def gt_product_coefficients(N: int, F: Sequence[RationalFunction] | None = None) -> list[RationalFunction]:
    """Coefficients of ``t**-n`` in ``(1 - Lambda/t)**a * [1 + sum F_m (Lambda/t)**m]`` before the limit.

    The exponent of the ``Lambda/t`` prefactor cancels exactly, so only the
    binomial factor with ``a = (P*-Pnu)(Lambda+Pnu) + Delta_t`` remains.
    """
    S = GT_SPACE
    c, lam, d0, dt, ps, pn = S.symbols(*S.names)
    F = list(F) if F is not None else gt_regular_coefficients(N)
    Fs = [S.one] + F[:N]
    a = (ps - pn) * (lam + pn) + dt
    binom = _binomials(a, N)
    out = []
    for n in range(1, N + 1):
        acc = S.zero
        for k in range(0, n + 1):
            acc = acc + binom[k] * (-lam) ** k * Fs[n - k] * lam ** (n - k)
        out.append(acc)
    return out


def gt_prefactor_exponent() -> RationalFunction:
    """Total power of ``Lambda/t`` in the collision formula; identically zero."""
    S = GT_SPACE
    c, lam, d0, dt, ps, pn = S.symbols(*S.names)
    half = Fraction(1, 2)
    p1 = (lam + ps) * half
    block_exp = liouville_delta(c, p1 - pn) - liouville_delta(c, (lam - ps) * half) - dt
    return block_exp + dt - (ps - pn) * (lam - pn)


def typeD_block(N: int) -> BlockSeries:
    """Type D block ``t^{2Pnu(P*-Pnu)} e^{(P*-Pnu)t} [1 + sum D_n t^-n]`` via the collision limit."""
    if N < 1:
        raise ValueError("N >= 1 required")
    S = TYPE_D_SPACE
    raw = gt_product_coefficients(N)
    coeffs = []
    for n, r in enumerate(raw, start=1):
        try:
            lim = limit_at_infinity(r, "Lambda")
        except DivergentLimit as exc:
            raise DivergentLimit(f"type D coefficient {n} diverges: {exc}") from None
        coeffs.append(lim.to_space(S))
    ps, pn = S.symbol("Pstar"), S.symbol("Pnu")
    return BlockSeries(
        "typeD",
        _series("invt", coeffs, N, S),
        2 * pn * (ps - pn),
        {r: r for r in S.names},
        exponential=(ps - pn, 1),
    )


def typeD_published() -> tuple[RationalFunction, RationalFunction, RationalFunction]:
    """Closed forms of D_1, D_2, D_3 in :data:`TYPE_D_SPACE`."""
    S = TYPE_D_SPACE
    c, d0, dt, ps, pn = S.symbols(*S.names)
    F = Fraction
    D1 = -4 * pn**3 + 6 * pn**2 * ps + 2 * pn * (d0 + dt - ps**2) - 2 * d0 * ps
    D2 = (
        D1 * D1 * F(1, 2)
        + 2 * (d0 + (ps - 3 * pn) * pn) * (dt - (2 * ps - 3 * pn) * (ps - pn))
        + (2 * (ps - 2 * pn) ** 2 + (c - 1) * F(1, 3)) * pn * (ps - pn)
    )
    D3 = (
        D1 * D2
        - D1**3 * F(1, 3)
        - (11 * pn * (ps - pn) - ps**2 * F(5, 3) + (d0 + dt) * F(13, 6)) * D1
        + F(11, 3) * (dt - d0 - 2 * ps * (ps - 2 * pn)) * ((ps - pn) * d0 + pn * dt + ps * pn * (ps - pn))
        + F(2, 3) * (c - 2) * ((ps - pn) * d0 - pn * dt)
        + F(1, 9) * (66 * ps**2 + 17 * c - 23) * (ps - 2 * pn) * (ps - pn) * pn
    )
    return D1, D2, D3


def typeG_published() -> tuple[RationalFunction, RationalFunction]:
    """Published coefficients G_1, G_2 of the type G block (fixed data)."""
    S = TYPE_G_SPACE
    c, d0, pb, pn = S.symbols(*S.names)
    F = Fraction
    G1 = 6 * pn**3 - 6 * pb * pn**2 + (pb**2 - 3 * d0 - (c - 1) * F(1, 8)) * pn + 2 * pb * d0
    G2 = (
        G1 * G1 * F(1, 2)
        + F(105, 4) * pn**4
        - 35 * pb * pn**3
        + (12 * pb**2 - F(33, 2) * d0 - (13 * c - 19) * F(1, 8)) * pn**2
        + (-(pb**2) + 18 * d0 + (19 * c - 31) * F(1, 24)) * pb * pn
        + F(1, 4) * (-16 * pb**2 + d0 + c - 2) * d0
    )
    return G1, G2


def typeG_block() -> BlockSeries:
    """Type G block ``t^{D0-3Pnu^2+2Pb Pnu} e^{Pnu t^2/2} [1 + G_1 t^-2 + G_2 t^-4]``."""
    S = TYPE_G_SPACE
    c, d0, pb, pn = S.symbols(*S.names)
    G1, G2 = typeG_published()
    series = FormalSeries("invt", {0: S.one, 2: G1, 4: G2}, 5, zero=S.zero)
    return BlockSeries(
        "typeG", series, d0 - 3 * pn**2 + 2 * pb * pn, {r: r for r in S.names}, exponential=(pn * Fraction(1, 2), 2)
    )


# ---------------------------------------------------------------------------
# termwise confluence of blocks

BLOCK_LINKS = ("regular4pt->Nf3", "Nf3->Nf2", "Nf2->Nf1", "Nf1->Nf0")
CHAIN_BLOCK_SPACE = ParameterSpace(
    ("c", "Delta0", "Deltat", "Delta1", "Deltainf", "Deltasigma", "Pstar", "Pblack", "Lambda")
)


def block_confluence(link: str, upper: Sequence[RationalFunction]) -> list[RationalFunction]:
    """Termwise limits ``lim F_n(substituted) / scale**n`` along one confluence step.

    ``upper[n-1]`` is the n-th coefficient of the source block; the results
    live in :data:`FIRST_KIND_SPACE`.
    """
    C = CHAIN_BLOCK_SPACE
    c, lam, ps, pb = C.symbols("c", "Lambda", "Pstar", "Pblack")
    half = Fraction(1, 2)
    if link == "regular4pt->Nf3":
        images = {"Delta1": liouville_delta(c, (lam + ps) * half), "Deltainf": liouville_delta(c, (lam - ps) * half)}
        scale, var = lam, "Lambda"
    elif link == "Nf3->Nf2":
        images = {"Delta0": liouville_delta(c, (lam - pb) * half), "Deltat": liouville_delta(c, (lam + pb) * half)}
        scale, var = lam, "Lambda"
    elif link == "Nf2->Nf1":
        images, scale, var = {}, pb, "Pblack"
    elif link == "Nf1->Nf0":
        images, scale, var = {}, ps, "Pstar"
    else:
        raise ValueError(f"unknown link {link!r}; expected one of {BLOCK_LINKS}")
    out = []
    for n, f in enumerate(upper, start=1):
        f = f.to_space(C)
        if images:
            f = f.subs(images, C)
        out.append(limit_at_infinity(f / scale**n, var).to_space(FIRST_KIND_SPACE))
    return out


def confluence_chain_check(link: str, N: int) -> SeriesReport:
    """Compare the termwise limit of the source block with the target block through ``t**N``."""
    if link not in BLOCK_LINKS:
        raise ValueError(f"unknown link {link!r}; expected one of {BLOCK_LINKS}")
    src, dst = link.split("->")
    upper_block = regular_block(N) if src == "regular4pt" else confluent_block_first_kind(int(src[2:]), N)
    lower = confluent_block_first_kind(int(dst[2:]), N)
    labels = (f"{dst} block", f"limit of {src} block")
    try:
        limits = block_confluence(link, [upper_block.coefficient(n) for n in range(1, N + 1)])
    except DivergentLimit as exc:
        return SeriesReport(*labels, list(range(1, N + 1)), False, error=f"DivergentLimit: {exc}")
    return compare(*labels, [(n, lower.coefficient(n), limits[n - 1]) for n in range(1, N + 1)])
