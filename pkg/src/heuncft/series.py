"""Truncated formal series and finite Laurent objects.

A :class:`FormalSeries` represents

    log_coefficient * log(x) + x**offset * sum_k c_k x**k

where the exponents ``k`` lie on a grid (step 1 or 1/2) and are known exactly
up to and including ``order``.  Coefficients may be any exact ring element
supporting ``+ - *``, multiplication by Fractions, ``inverse()`` and
``is_zero()``; in practice :class:`~heuncft.ratfunc.RationalFunction` or
:class:`LaurentObject`.

Truncation is pessimistic: every operation reports only the orders it can
guarantee from the orders of its inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .errors import (
    GridMismatch,
    LeadingCoefficientNotOne,
    LeadingCoefficientZero,
    NonSquareLeadingCoefficient,
    PoleInClassicalLimit,
)
from .ratfunc import ParameterSpace, RationalFunction, _split

INF = math.inf

VARIABLES = ("t", "invt", "hbar", "b", "z", "lambda")


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class FormalSeries:
    __slots__ = ("variable", "coefficients", "order", "grid", "offset", "log_coefficient", "zero")

    def __init__(
        self,
        variable: str,
        coefficients: Mapping[Any, Any],
        order=INF,
        *,
        grid=1,
        offset: RationalFunction | None = None,
        log_coefficient: RationalFunction | None = None,
        zero=None,
    ):
        grid = _frac(grid)
        if grid <= 0:
            raise GridMismatch(f"grid step must be positive, got {grid}")
        order = order if order == INF else _frac(order)
        coeffs = {}
        for e, c in coefficients.items():
            e = _frac(e)
            if (e / grid).denominator != 1:
                raise GridMismatch(f"exponent {e} is not on the grid {grid}")
            if e > order or c.is_zero():
                continue
            coeffs[e] = c
        if zero is None:
            sample = next(iter(coefficients.values()), None)
            if sample is None:
                raise ValueError("an empty series needs an explicit zero coefficient")
            zero = sample * 0
        if offset is not None and offset.is_zero():
            offset = None
        if log_coefficient is not None and log_coefficient.is_zero():
            log_coefficient = None
        self.variable = variable
        self.coefficients = dict(sorted(coeffs.items()))
        self.order = order
        self.grid = grid
        self.offset = offset
        self.log_coefficient = log_coefficient
        self.zero = zero

    # -- construction helpers --------------------------------------------------
    @classmethod
    def polynomial(cls, variable: str, coeffs: Iterable, order=INF, *, grid=1, zero=None):
        """Series from the list of coefficients of x**0, x**grid, x**(2*grid), ..."""
        grid = _frac(grid)
        coeffs = list(coeffs)
        return cls(variable, {k * grid: c for k, c in enumerate(coeffs)}, order, grid=grid, zero=zero)

    def _like(self, coefficients, order, **kw) -> "FormalSeries":
        kw.setdefault("grid", self.grid)
        kw.setdefault("offset", self.offset)
        kw.setdefault("log_coefficient", self.log_coefficient)
        return FormalSeries(self.variable, coefficients, order, zero=self.zero, **kw)

    # -- access ---------------------------------------------------------------------
    def __getitem__(self, exponent):
        e = _frac(exponent)
        if e > self.order:
            raise IndexError(f"coefficient of {self.variable}^{e} is beyond truncation order {self.order}")
        return self.coefficients.get(e, self.zero)

    def coefficient(self, exponent):
        return self[exponent]

    def valuation(self):
        """Lowest exponent with a nonzero coefficient (``INF`` for zero)."""
        return next(iter(self.coefficients), INF)

    def is_zero(self) -> bool:
        return not self.coefficients and self.offset is None and self.log_coefficient is None

    def exponents(self) -> list[Fraction]:
        return list(self.coefficients)

    def truncate(self, order) -> "FormalSeries":
        order = order if order == INF else _frac(order)
        return self._like(self.coefficients, min(order, self.order))

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{self.variable}^{e}" for e, c in self.coefficients.items()) or "0"
        extra = ""
        if self.offset is not None:
            extra += f"{self.variable}^({self.offset}) * "
        if self.log_coefficient is not None:
            body = f"({self.log_coefficient})*log({self.variable}) + " + body
        return f"FormalSeries[{extra}{body} + O({self.variable}^{self.order}+)]"

    # -- comparisons --------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.grid == other.grid
            and self.order == other.order
            and self.offset == other.offset
            and self.log_coefficient == other.log_coefficient
            and self.coefficients.keys() == other.coefficients.keys()
            and all(self.coefficients[e] == other.coefficients[e] for e in self.coefficients)
        )

    def agrees_with(self, other: "FormalSeries", order=None) -> bool:
        """Coefficientwise equality up to the common (or given) truncation order."""
        upto = min(self.order, other.order) if order is None else _frac(order)
        exps = {e for e in self.coefficients if e <= upto} | {e for e in other.coefficients if e <= upto}
        return all(self[e] == other[e] for e in exps)

    # -- ring operations ------------------------------------------------------------------
    def _check(self, other: "FormalSeries"):
        if self.variable != other.variable:
            raise GridMismatch(f"variables differ: {self.variable} vs {other.variable}")
        if self.grid != other.grid:
            raise GridMismatch(f"grids differ: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            return self + self._like({0: other}, INF, offset=self.offset, log_coefficient=None)
        self._check(other)
        if self.offset != other.offset:
            raise GridMismatch(f"cannot add series with offsets {self.offset} and {other.offset}")
        coeffs = dict(self.coefficients)
        for e, c in other.coefficients.items():
            coeffs[e] = coeffs[e] + c if e in coeffs else c
        log = _add_opt(self.log_coefficient, other.log_coefficient)
        return self._like(coeffs, min(self.order, other.order), log_coefficient=log)

    __radd__ = __add__

    def __neg__(self):
        return self._like(
            {e: -c for e, c in self.coefficients.items()},
            self.order,
            log_coefficient=None if self.log_coefficient is None else -self.log_coefficient,
        )

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "FormalSeries":
        """Multiply every coefficient (and the log coefficient) by a scalar."""
        return self._like(
            {e: c * factor for e, c in self.coefficients.items()},
            self.order,
            log_coefficient=None if self.log_coefficient is None else self.log_coefficient * factor,
        )

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return self.scale(other)
        self._check(other)
        if self.log_coefficient is not None or other.log_coefficient is not None:
            raise ValueError("cannot multiply series carrying log terms")
        va, vb = self.valuation(), other.valuation()
        order = min(self.order + (vb if vb != INF else 0), other.order + (va if va != INF else 0))
        if va == INF and self.order == INF or vb == INF and other.order == INF:
            order = INF
        coeffs: dict[Fraction, Any] = {}
        for ea, ca in self.coefficients.items():
            for eb, cb in other.coefficients.items():
                e = ea + eb
                if e > order:
                    break
                prod = ca * cb
                coeffs[e] = coeffs[e] + prod if e in coeffs else prod
        return self._like(coeffs, order, offset=_add_opt(self.offset, other.offset), log_coefficient=None)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = _unit_like(self)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "FormalSeries":
        if self.log_coefficient is not None:
            raise ValueError("cannot invert a series with a log term")
        v = self.valuation()
        if v == INF:
            raise LeadingCoefficientZero("inverse of a series with no known nonzero coefficient")
        a0 = self.coefficients[v]
        try:
            inv0 = a0.inverse()
        except ZeroDivisionError as exc:
            raise LeadingCoefficientZero(str(exc)) from None
        except ValueError as exc:
            raise LeadingCoefficientZero(f"leading coefficient {a0} is not invertible: {exc}") from None
        rel = self.order - v
        nmax = _count(rel, self.grid)
        a = [self.coefficients.get(v + k * self.grid, self.zero) for k in range(nmax + 1)]
        c = [inv0]
        for k in range(1, nmax + 1):
            acc = None
            for j in range(1, k + 1):
                if a[j].is_zero():
                    continue
                term = a[j] * c[k - j]
                acc = term if acc is None else acc + term
            c.append(self.zero if acc is None else -(acc * inv0))
        coeffs = {-v + k * self.grid: ck for k, ck in enumerate(c)}
        offset = None if self.offset is None else -self.offset
        return self._like(coeffs, rel - v, offset=offset, log_coefficient=None)

    def __truediv__(self, other):
        if not isinstance(other, FormalSeries):
            return self.scale(other.inverse() if hasattr(other, "inverse") else Fraction(1, 1) / other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- analytic operations on unit-leading series -------------------------------------------
    def _unit_part(self, what: str):
        """Coefficient list a_0..a_n (grid units) of a series with a_0 == 1, valuation 0."""
        v = self.valuation()
        if v != 0:
            raise LeadingCoefficientNotOne(f"{what} needs valuation 0, got {v}")
        a0 = self.coefficients[0]
        if not a0 == 1:
            raise LeadingCoefficientNotOne(f"{what} needs leading coefficient 1, got {a0}")
        n = _count(self.order, self.grid)
        return [self.coefficients.get(k * self.grid, self.zero) for k in range(n + 1)]

    def pow_binomial(self, alpha) -> "FormalSeries":
        """``self**alpha`` for ``self = 1 + O(x)`` and symbolic ``alpha``.

        Uses the recurrence ``k f_k = sum_j ((alpha+1) j - k) a_j f_{k-j}``.
        """
        a = self._unit_part("pow_binomial")
        f = [self.zero + 1]
        for k in range(1, len(a)):
            acc = self.zero
            for j in range(1, k + 1):
                if a[j].is_zero():
                    continue
                acc = acc + a[j] * f[k - j] * ((alpha + 1) * j - k)
            f.append(acc * Fraction(1, k))
        return self._like({k * self.grid: fk for k, fk in enumerate(f)}, self.order, offset=_mul_opt(self.offset, alpha))

    def sqrt(self) -> "FormalSeries":
        """Square root with the positive root of the leading coefficient."""
        v = self.valuation()
        if v != 0:
            raise NonSquareLeadingCoefficient(f"sqrt needs a nonzero constant term (valuation {v})")
        r0 = coefficient_sqrt(self.coefficients[0])
        inv2r0 = (r0 * 2).inverse()
        n = _count(self.order, self.grid)
        a = [self.coefficients.get(k * self.grid, self.zero) for k in range(n + 1)]
        r = [r0]
        for k in range(1, n + 1):
            acc = a[k]
            for j in range(1, k):
                acc = acc - r[j] * r[k - j]
            r.append(acc * inv2r0)
        offset = None if self.offset is None else self.offset * Fraction(1, 2)
        return self._like({k * self.grid: rk for k, rk in enumerate(r)}, self.order, offset=offset)

    def log(self) -> "FormalSeries":
        """Logarithm; the ``x**offset * x**valuation`` prefactor becomes the log coefficient."""
        if self.log_coefficient is not None:
            raise ValueError("log of a series that already carries a log term")
        v = self.valuation()
        if v == INF:
            raise LeadingCoefficientZero("log of zero")
        shifted = self.shift(-v)
        a = shifted._unit_part("log")
        b = [self.zero]
        for k in range(1, len(a)):
            acc = a[k] * k
            for j in range(1, k):
                if a[k - j].is_zero():
                    continue
                acc = acc - b[j] * a[k - j] * j
            b.append(acc * Fraction(1, k))
        log = self.offset
        if v:
            vrf = _const_like(self.offset, self.zero, v)
            log = vrf if log is None else log + vrf
        return FormalSeries(
            self.variable,
            {k * self.grid: bk for k, bk in enumerate(b)},
            shifted.order,
            grid=self.grid,
            log_coefficient=log,
            zero=self.zero,
        )

    def exp(self) -> "FormalSeries":
        """Exponential of a series with vanishing constant term and no log term."""
        if self.log_coefficient is not None or self.offset is not None:
            raise ValueError("exp needs a plain series")
        if self.valuation() < 0:
            raise ValueError("exp of a series with negative exponents")
        if not self[0].is_zero():
            raise LeadingCoefficientNotOne("exp needs vanishing constant term")
        n = _count(self.order, self.grid)
        b = [self.coefficients.get(k * self.grid, self.zero) for k in range(n + 1)]
        e = [self.zero + 1]
        for k in range(1, n + 1):
            acc = self.zero
            for j in range(1, k + 1):
                if b[j].is_zero():
                    continue
                acc = acc + b[j] * e[k - j] * j
            e.append(acc * Fraction(1, k))
        return self._like({k * self.grid: ek for k, ek in enumerate(e)}, self.order)

    # -- reshaping -------------------------------------------------------------------------------
    def shift(self, amount) -> "FormalSeries":
        """Multiply by ``x**amount`` (a grid multiple), keeping the offset."""
        amount = _frac(amount)
        return self._like({e + amount: c for e, c in self.coefficients.items()}, self.order + amount)

    def euler_derivative(self) -> "FormalSeries":
        """``x d/dx`` of a series without offset; a log term yields a constant."""
        if self.offset is not None:
            raise ValueError("euler_derivative of a series with symbolic offset")
        coeffs = {e: c * e for e, c in self.coefficients.items() if e != 0}
        if self.log_coefficient is not None:
            coeffs[Fraction(0)] = self.log_coefficient
        return FormalSeries(self.variable, coeffs, self.order, grid=self.grid, zero=self.zero)

    def map_coefficients(self, fn: Callable, *, zero=None) -> "FormalSeries":
        zero = zero if zero is not None else fn(self.zero)
        log = None if self.log_coefficient is None else fn(self.log_coefficient)
        offset = None if self.offset is None else fn(self.offset)
        return FormalSeries(
            self.variable,
            {e: fn(c) for e, c in self.coefficients.items()},
            self.order,
            grid=self.grid,
            offset=offset,
            log_coefficient=log,
            zero=zero,
        )

    def rescale(self, factor) -> "FormalSeries":
        """Substitute ``x -> factor * x`` (integer exponents only).

        The log term contributes only a constant, which is dropped.
        """
        coeffs = {}
        for e, c in self.coefficients.items():
            if e.denominator != 1:
                raise GridMismatch("rescale needs integer exponents")
            coeffs[e] = c * factor ** int(e)
        return self._like(coeffs, self.order)

    def without_constant(self) -> "FormalSeries":
        return self._like({e: c for e, c in self.coefficients.items() if e != 0}, self.order)


def _count(rel, grid) -> int:
    if rel == INF:
        raise ValueError("operation needs a finite truncation order")
    if rel < 0:
        return -1
    return int(rel / grid)


def _add_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    s = a + b
    return None if s.is_zero() else s


def _mul_opt(a, b):
    if a is None:
        return None
    return a * b


def _unit_like(s: FormalSeries) -> FormalSeries:
    return FormalSeries(s.variable, {0: s.zero + 1}, INF, grid=s.grid, zero=s.zero)


def _const_like(offset, zero, value):
    if isinstance(zero, RationalFunction):
        return zero.space.const(value)
    if offset is not None:
        return offset.space.const(value)
    raise ValueError("cannot build a log coefficient for this coefficient ring")


def coefficient_sqrt(c):
    """Square root of an exact coefficient that is a perfect square."""
    if isinstance(c, LaurentObject):
        if set(c.coefficients) != {0}:
            raise NonSquareLeadingCoefficient(f"leading coefficient {c} is not constant")
        return LaurentObject(c.space, c.variable, {0: coefficient_sqrt(c.coefficients[0])})
    if isinstance(c, RationalFunction):
        try:
            num = c.num.sqrt()
            den = c.den.sqrt()
        except Exception:
            raise NonSquareLeadingCoefficient(f"{c} is not a perfect square") from None
        root = RationalFunction._make(c.space, num, den)
        # positive branch: leading coefficient of the root is positive
        if root.num.leading_coefficient() < 0:
            root = -root
        return root
    raise NonSquareLeadingCoefficient(f"unsupported coefficient {c!r}")


# ---------------------------------------------------------------------------


class LaurentObject:
    """Finite Laurent polynomial in a coordinate with rational-function coefficients."""

    __slots__ = ("space", "variable", "coefficients")

    def __init__(self, space: ParameterSpace, variable: str, coefficients: Mapping[int, RationalFunction]):
        self.space = space
        self.variable = variable
        self.coefficients = {int(k): v for k, v in sorted(coefficients.items()) if not v.is_zero()}

    @classmethod
    def constant(cls, space, variable, value):
        value = value if isinstance(value, RationalFunction) else space.const(value)
        return cls(space, variable, {0: value})

    @property
    def min_exponent(self):
        return min(self.coefficients, default=0)

    @property
    def max_exponent(self):
        return max(self.coefficients, default=0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __getitem__(self, k: int) -> RationalFunction:
        return self.coefficients.get(k, self.space.zero)

    def _wrap(self, coeffs):
        return LaurentObject(self.space, self.variable, coeffs)

    def _coerce(self, other):
        if isinstance(other, LaurentObject):
            return other
        if isinstance(other, RationalFunction):
            return LaurentObject(self.space, self.variable, {0: other})
        return LaurentObject(self.space, self.variable, {0: self.space.const(other)})

    def __add__(self, other):
        other = self._coerce(other)
        coeffs = dict(self.coefficients)
        for k, v in other.coefficients.items():
            coeffs[k] = coeffs[k] + v if k in coeffs else v
        return self._wrap(coeffs)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentObject):
            if isinstance(other, RationalFunction) or isinstance(other, (int, Fraction)):
                if isinstance(other, (int, Fraction)) and other == 0:
                    return self._wrap({})
                return self._wrap({k: v * other for k, v in self.coefficients.items()})
            return NotImplemented
        coeffs: dict[int, RationalFunction] = {}
        for i, a in self.coefficients.items():
            for j, b in other.coefficients.items():
                p = a * b
                coeffs[i + j] = coeffs[i + j] + p if (i + j) in coeffs else p
        return self._wrap(coeffs)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = LaurentObject.constant(self.space, self.variable, 1)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "LaurentObject":
        if len(self.coefficients) != 1:
            raise ValueError("only monomial Laurent objects are invertible")
        (k, v), = self.coefficients.items()
        return self._wrap({-k: v.inverse()})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, RationalFunction)):
            other = self._coerce(other)
        if not isinstance(other, LaurentObject):
            return NotImplemented
        return self.coefficients.keys() == other.coefficients.keys() and all(
            self.coefficients[k] == other.coefficients[k] for k in self.coefficients
        )

    def __hash__(self):
        return hash(tuple((k, str(v)) for k, v in self.coefficients.items()))

    def derivative(self) -> "LaurentObject":
        return self._wrap({k - 1: v * k for k, v in self.coefficients.items() if k != 0})

    def residue(self) -> RationalFunction:
        return laurent_residue(self)

    def __repr__(self) -> str:
        terms = " + ".join(f"({v})*{self.variable}^{k}" for k, v in self.coefficients.items())
        return f"LaurentObject[{terms or '0'}]"


def laurent_residue(a: LaurentObject, at: str = "0") -> RationalFunction:
    """Residue at the origin (coefficient of ``x**-1``) or at infinity (its negative)."""
    r = a[-1]
    if at == "0":
        return r
    if at in ("inf", "infinity"):
        return -r
    raise ValueError(f"unknown point {at!r}")


# ---------------------------------------------------------------------------
# series in a symbol, and the classical (b -> 0) limit


def laurent_expand(rf: RationalFunction, name: str, order: int) -> FormalSeries:
    """Expansion of ``rf`` around ``name = 0`` through ``name**order``.

    The coefficients are rational functions free of ``name``.
    """
    space = rf.space
    zero = space.zero
    if rf.is_zero():
        return FormalSeries(name, {}, order, zero=zero)
    num = {k: RationalFunction._raw(space, p.poly, space.ctx.constant(1)) for k, p in _split(rf.num, space, name).items()}
    den = {k: RationalFunction._raw(space, p.poly, space.ctx.constant(1)) for k, p in _split(rf.den, space, name).items()}
    vn, vd = min(num), min(den)
    v = vn - vd
    rel = order - v
    if rel < 0:
        return FormalSeries(name, {}, order, zero=zero)
    ns = FormalSeries(name, {k - vn: c for k, c in num.items() if k - vn <= rel}, rel, zero=zero)
    ds = FormalSeries(name, {k - vd: c for k, c in den.items() if k - vd <= rel}, rel, zero=zero)
    return (ns * ds.inverse()).shift(v)


def limit_b_zero(series: FormalSeries) -> RationalFunction:
    """Constant term of a Laurent series in ``b``; negative powers are an error."""
    if series.order < 0:
        raise ValueError("series is not known through b^0")
    poles = tuple(int(e) for e, c in series.coefficients.items() if e < 0 and not c.is_zero())
    if poles:
        raise PoleInClassicalLimit(f"negative powers of {series.variable} survive: {poles}", poles)
    return series[0]
