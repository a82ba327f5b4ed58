"""Exact multivariate polynomials and rational functions over Q.

Polynomial arithmetic and gcd are delegated to FLINT (``python-flint``)
through ``fmpq_mpoly``; this module owns the canonical form, the string
contract and everything built on top (substitution, termwise limits).

Canonical form of a :class:`RationalFunction`: numerator and denominator are
coprime and the leading coefficient of the denominator in graded
lexicographic order is 1.  Two equal rational functions therefore have
identical representations and identical canonical strings.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

import flint

from .errors import DivergentLimit, DivisionByZero, ParameterSpaceMismatch, ParseError

Scalar = Union[int, Fraction]


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Rational):
        return flint.fmpq(int(x.numerator), int(x.denominator))
    raise TypeError(f"not an exact rational: {x!r}")


def _to_fraction(q: flint.fmpq) -> Fraction:
    return Fraction(int(q.p), int(q.q))


class ParameterSpace:
    """An ordered set of symbol names.

    The order fixes the graded-lex monomial order.  Instances are interned by
    their names so that ``ParameterSpace(("a", "b")) is ParameterSpace(("a", "b"))``.
    """

    _interned: dict[tuple[str, ...], "ParameterSpace"] = {}

    def __new__(cls, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        found = cls._interned.get(names)
        if found is not None:
            return found
        self = super().__new__(cls)
        self.names = names
        self._index = {n: i for i, n in enumerate(names)}
        # flint refuses an empty generator list
        self.ctx = flint.fmpq_mpoly_ctx.get(names or ("_",), "deglex")
        cls._interned[names] = self
        return self

    def __repr__(self) -> str:
        return f"ParameterSpace({self.names!r})"

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self.names)

    def __reduce__(self):
        return (ParameterSpace, (self.names,))

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"symbol {name!r} not in {self.names}") from None

    def symbol(self, name: str) -> "RationalFunction":
        return RationalFunction._raw(self, self.ctx.gen(self.index(name)), self.ctx.constant(1))

    def symbols(self, *names: str) -> tuple["RationalFunction", ...]:
        if len(names) == 1 and not isinstance(names[0], str):
            names = tuple(names[0])
        return tuple(self.symbol(n) for n in names)

    def const(self, value) -> "RationalFunction":
        return RationalFunction._raw(self, self.ctx.constant(_fmpq(value)), self.ctx.constant(1))

    @property
    def zero(self) -> "RationalFunction":
        return self.const(0)

    @property
    def one(self) -> "RationalFunction":
        return self.const(1)

    def extend(self, *names: str) -> "ParameterSpace":
        return ParameterSpace(self.names + tuple(n for n in names if n not in self._index))

    def parse(self, text: str) -> "RationalFunction":
        return parse_ratfunc(text, self)


# ---------------------------------------------------------------------------
# formatting


def _format_monomial(names: tuple[str, ...], exps: tuple[int, ...]) -> str:
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_poly(poly: flint.fmpq_mpoly, names: tuple[str, ...]) -> str:
    if poly.is_zero():
        return "0"
    out = []
    for exps, coeff in poly.terms():
        c = _to_fraction(coeff)
        mono = _format_monomial(names, exps)
        sign = "-" if c < 0 else "+"
        c = abs(c)
        if not mono:
            body = str(c)
        elif c == 1:
            body = mono
        else:
            body = f"{c}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += sign + body
    return s


class MultiPolynomial:
    """Polynomial in the symbols of a :class:`ParameterSpace`."""

    __slots__ = ("space", "poly")

    def __init__(self, space: ParameterSpace, poly: flint.fmpq_mpoly):
        self.space = space
        self.poly = poly

    @classmethod
    def from_terms(cls, space: ParameterSpace, terms: Mapping[tuple[int, ...], Scalar]):
        d = {tuple(k): _fmpq(v) for k, v in terms.items() if v != 0}
        return cls(space, space.ctx.from_dict(d) if d else space.ctx.constant(0))

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {tuple(e): _to_fraction(c) for e, c in self.poly.terms()}

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def degree(self, name: str) -> int:
        if self.poly.is_zero():
            return -1
        return int(self.poly.degrees()[self.space.index(name)])

    def _coerce(self, other) -> flint.fmpq_mpoly:
        if isinstance(other, MultiPolynomial):
            if other.space is not self.space:
                raise ParameterSpaceMismatch(f"{other.space} vs {self.space}")
            return other.poly
        return self.space.ctx.constant(_fmpq(other))

    def __add__(self, other):
        return MultiPolynomial(self.space, self.poly + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return MultiPolynomial(self.space, self.poly - self._coerce(other))

    def __mul__(self, other):
        return MultiPolynomial(self.space, self.poly * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPolynomial(self.space, -self.poly)

    def __pow__(self, n: int):
        return MultiPolynomial(self.space, self.poly**n)

    def __eq__(self, other) -> bool:
        try:
            return self.poly == self._coerce(other)
        except (ParameterSpaceMismatch, TypeError):
            return False

    def __hash__(self) -> int:
        return hash((self.space.names, str(self)))

    def __str__(self) -> str:
        return _format_poly(self.poly, self.space.names)

    def __repr__(self) -> str:
        return f"MultiPolynomial({self})"


# ---------------------------------------------------------------------------


class RationalFunction:
    """Exact element of Q(symbols) in canonical form.

    Construct through :class:`ParameterSpace` (``space.symbol``, ``space.const``,
    ``space.parse``) and ordinary arithmetic; ints and Fractions coerce.
    """

    __slots__ = ("space", "num", "den", "_str")

    def __init__(self, numerator: MultiPolynomial, denominator: MultiPolynomial | None = None):
        space = numerator.space
        if denominator is None:
            den = space.ctx.constant(1)
        else:
            if denominator.space is not space:
                raise ParameterSpaceMismatch("numerator and denominator live in different spaces")
            den = denominator.poly
        num, den = _normalize(numerator.poly, den)
        self.space, self.num, self.den, self._str = space, num, den, None

    @classmethod
    def _raw(cls, space, num, den) -> "RationalFunction":
        self = object.__new__(cls)
        self.space, self.num, self.den, self._str = space, num, den, None
        return self

    @classmethod
    def _make(cls, space, num, den) -> "RationalFunction":
        num, den = _normalize(num, den)
        return cls._raw(space, num, den)

    # -- structure -----------------------------------------------------------
    @property
    def numerator(self) -> MultiPolynomial:
        return MultiPolynomial(self.space, self.num)

    @property
    def denominator(self) -> MultiPolynomial:
        return MultiPolynomial(self.space, self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return _to_fraction(self.num.leading_coefficient() if not self.num.is_zero() else flint.fmpq(0))

    def free_symbols(self) -> set[str]:
        used = set()
        for poly in (self.num, self.den):
            for i, d in enumerate(poly.degrees()):
                if d > 0:
                    used.add(self.space.names[i])
        return used

    def degree(self, name: str) -> tuple[int, int]:
        """Degrees of numerator and denominator in ``name``."""
        i = self.space.index(name)
        dn = -1 if self.num.is_zero() else int(self.num.degrees()[i])
        return dn, int(self.den.degrees()[i])

    # -- arithmetic ------------------------------------------------------------
    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            if other.space is not self.space:
                raise ParameterSpaceMismatch(f"{other.space.names} vs {self.space.names}")
            return other
        if isinstance(other, (int, Rational, flint.fmpq)):
            return self.space.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return RationalFunction._raw(self.space, self.num + other.num, self.den)
        if self.den == other.den:
            return RationalFunction._make(self.space, self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.is_one():
            return RationalFunction._make(
                self.space, self.num * other.den + other.num * self.den, self.den * other.den
            )
        d1 = self.den / g
        d2 = other.den / g
        return RationalFunction._make(self.space, self.num * d2 + other.num * d1, d1 * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.space, -self.num, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return self.space.zero
        if self.den.is_one() and other.den.is_one():
            return RationalFunction._raw(self.space, self.num * other.num, self.den)
        # cross-cancel; the factors are already reduced
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num / g1, other.den / g1) if not g1.is_one() else (self.num, other.den)
        n2, d1 = (other.num / g2, self.den / g2) if not g2.is_one() else (other.num, self.den)
        num, den = n1 * n2, d1 * d2
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return RationalFunction._raw(self.space, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return RationalFunction._make(self.space, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZero(f"division of {self} by zero")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._raw(self.space, self.num**n, self.den**n)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return other.space is self.space and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.space.names, str(self)))

    # -- formatting --------------------------------------------------------------
    def __str__(self) -> str:
        if self._str is None:
            self._str = _format_ratfunc(self)
        return self._str

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    # -- transformations -------------------------------------------------------------
    def to_space(self, space: ParameterSpace) -> "RationalFunction":
        """Re-express in ``space``; every used symbol must exist there."""
        if space is self.space:
            return self
        missing = self.free_symbols() - set(space.names)
        if missing:
            raise ParameterSpaceMismatch(f"symbols {sorted(missing)} missing from target space")
        gens = [
            space.ctx.gen(space.index(n)) if n in space else space.ctx.constant(0)
            for n in self.space.names
        ]
        num = self.num.compose(*gens, ctx=space.ctx)
        den = self.den.compose(*gens, ctx=space.ctx)
        return RationalFunction._make(space, num, den)

    def subs(
        self, values: Mapping[str, object], space: ParameterSpace | None = None
    ) -> "RationalFunction":
        """Substitute symbols by rational functions (or numbers).

        Unmentioned symbols map to themselves in ``space`` (default: own space).
        """
        space = space or self.space
        images = []
        for n in self.space.names:
            if n in values:
                v = values[n]
                if isinstance(v, RationalFunction):
                    v = v.to_space(space)
                else:
                    v = space.const(v)
            elif n in space:
                v = space.symbol(n)
            else:
                v = None  # only legal if the symbol is unused
            images.append(v)
        used = self.free_symbols()
        for n, v in zip(self.space.names, images):
            if v is None and n in used:
                raise ParameterSpaceMismatch(f"no image for symbol {n!r} in {space.names}")
        images = [v if v is not None else space.zero for v in images]
        return _evaluate(self.num, images, space) / _evaluate(self.den, images, space)

    def evaluate(self, values: Mapping[str, Scalar]) -> "RationalFunction":
        """Partial evaluation at exact rational points; detects poles."""
        q = {k: _fmpq(v) for k, v in values.items() if k in self.space}
        num = self.num.subs(q) if q else self.num
        den = self.den.subs(q) if q else self.den
        if den.is_zero():
            raise DivisionByZero(f"{self} has a pole at {dict(values)}")
        return RationalFunction._make(self.space, num, den)

    def derivative(self, name: str) -> "RationalFunction":
        i = self.space.index(name)
        dn = self.num.derivative(i)
        dd = self.den.derivative(i)
        return RationalFunction._make(self.space, dn * self.den - self.num * dd, self.den * self.den)

    def coefficients_in(self, name: str) -> tuple[dict[int, MultiPolynomial], dict[int, MultiPolynomial]]:
        """Split numerator and denominator into powers of ``name``."""
        return _split(self.num, self.space, name), _split(self.den, self.space, name)


def _normalize(num: flint.fmpq_mpoly, den: flint.fmpq_mpoly):
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return num, den.context().constant(1)
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
    lc = den.leading_coefficient()
    if lc != 1:
        num = num / lc
        den = den / lc
    return num, den


def _format_ratfunc(rf: RationalFunction) -> str:
    # Stored denominators are monic; printed numerator and denominator are
    # jointly scaled to coprime integer coefficients.
    from math import gcd, lcm

    names = rf.space.names
    if rf.den.is_one():
        coeffs = [_to_fraction(c) for c in rf.num.coeffs()]
        scale = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        if scale == 1 or rf.num.is_constant():
            return _format_poly(rf.num, names)
        num_poly = rf.num * scale
        num = _format_poly(num_poly, names)
        if len(num_poly) > 1:
            num = f"({num})"
        return f"{num}/{scale}"

    coeffs = [_to_fraction(c) for c in rf.den.coeffs()] + [_to_fraction(c) for c in rf.num.coeffs()]
    scale = Fraction(lcm(*(c.denominator for c in coeffs)), gcd(*(c.numerator for c in coeffs)))
    num_poly, den_poly = rf.num * _fmpq(scale), rf.den * _fmpq(scale)
    num = _format_poly(num_poly, names)
    if len(num_poly) > 1:
        num = f"({num})"
    den = _format_poly(den_poly, names)
    terms = list(den_poly.terms())
    single_power = len(terms) == 1 and terms[0][1] == 1 and sum(1 for e in terms[0][0] if e) == 1
    if not single_power:
        den = f"({den})"
    return f"{num}/{den}"


def _split(poly, space, name) -> dict[int, MultiPolynomial]:
    i = space.index(name)
    buckets: dict[int, dict] = {}
    for exps, c in poly.terms():
        e = list(exps)
        k = int(e[i])
        e[i] = 0
        buckets.setdefault(k, {})[tuple(e)] = c
    return {k: MultiPolynomial(space, space.ctx.from_dict(d)) for k, d in buckets.items()}


def _evaluate(poly: flint.fmpq_mpoly, images: list[RationalFunction], space: ParameterSpace):
    """Evaluate ``poly`` at rational-function images of its generators."""
    if all(v.den.is_one() for v in images):
        return RationalFunction._raw(space, poly.compose(*[v.num for v in images], ctx=space.ctx), space.ctx.constant(1))
    # Clear denominators: p(a/d) * prod d_i^deg_i is a polynomial.
    degs = poly.degrees()
    nums = [v.num for v in images]
    dens = [v.den for v in images]
    powers_n: dict[tuple[int, int], flint.fmpq_mpoly] = {}
    powers_d: dict[tuple[int, int], flint.fmpq_mpoly] = {}

    def pw(cache, base, i, k):
        key = (i, k)
        if key not in cache:
            cache[key] = base**k
        return cache[key]

    acc = space.ctx.constant(0)
    for exps, c in poly.terms():
        term = space.ctx.constant(c)
        for i, e in enumerate(exps):
            if degs[i] == 0:
                continue
            if e:
                term *= pw(powers_n, nums[i], i, e)
            if degs[i] - e and not dens[i].is_one():
                term *= pw(powers_d, dens[i], i, degs[i] - e)
        acc += term
    total_den = space.ctx.constant(1)
    for i, d in enumerate(degs):
        if d and not dens[i].is_one():
            total_den *= dens[i] ** d
    return RationalFunction._make(space, acc, total_den)


# ---------------------------------------------------------------------------
# termwise limits


def _leading_in(poly, space, name, lowest=False):
    parts = _split(poly, space, name)
    k = min(parts) if lowest else max(parts)
    return k, parts[k].poly


def limit_at_infinity(rf: RationalFunction, name: str) -> RationalFunction:
    """Limit of ``rf`` as symbol ``name`` tends to infinity.

    Viewed as a ratio of polynomials in ``name`` with coefficients in the other
    symbols; raises :class:`DivergentLimit` when the numerator degree is larger.
    """
    if rf.is_zero():
        return rf
    dn, dd = rf.degree(name)
    if dn > dd:
        raise DivergentLimit(
            f"numerator degree {dn} exceeds denominator degree {dd} in {name!r}: {rf}"
        )
    if dn < dd:
        return rf.space.zero
    _, ln = _leading_in(rf.num, rf.space, name)
    _, ld = _leading_in(rf.den, rf.space, name)
    return RationalFunction._make(rf.space, ln, ld)


limit_lambda_infinity = limit_at_infinity


def limit_at_zero(rf: RationalFunction, name: str) -> RationalFunction:
    """Limit of ``rf`` as symbol ``name`` tends to 0 (lowest-order parts)."""
    if rf.is_zero():
        return rf
    kn, ln = _leading_in(rf.num, rf.space, name, lowest=True)
    kd, ld = _leading_in(rf.den, rf.space, name, lowest=True)
    if kn < kd:
        raise DivergentLimit(f"pole of order {kd - kn} at {name}=0: {rf}")
    if kn > kd:
        return rf.space.zero
    return RationalFunction._make(rf.space, ln, ld)


def valuation(rf: RationalFunction, name: str) -> int:
    """Order of vanishing of ``rf`` at ``name`` = 0 (negative for poles)."""
    if rf.is_zero():
        raise ValueError("valuation of zero")
    kn, _ = _leading_in(rf.num, rf.space, name, lowest=True)
    kd, _ = _leading_in(rf.den, rf.space, name, lowest=True)
    return kn - kd


def substitute_square(rf: RationalFunction, name: str, square: RationalFunction) -> RationalFunction:
    """Replace ``name**2`` by ``square``; ``rf`` must be even in ``name``.

    Used to eliminate symbols standing for imaginary scalings (``s = i/b``
    with ``s**2 = -1/b**2``).  Raises :class:`ImaginaryUnitSurvives` when an
    odd power is present.
    """
    from .errors import ImaginaryUnitSurvives

    i = rf.space.index(name)
    for poly in (rf.num, rf.den):
        for exps in poly.monoms():
            if exps[i] % 2:
                raise ImaginaryUnitSurvives(f"odd power of {name!r} in {rf}")
    n = len(rf.space.names)
    step = [1] * n
    step[i] = 2
    num = _deflate(rf.num, step)
    den = _deflate(rf.den, step)
    half = RationalFunction._make(rf.space, num, den)
    return half.subs({name: square})


def _deflate(poly, step):
    if poly.is_zero():
        return poly
    return poly.deflate(step)


# ---------------------------------------------------------------------------
# parsing


def parse_ratfunc(text: str, space: ParameterSpace) -> RationalFunction:
    """Parse the canonical string form (or any +,-,*,/,^ expression)."""
    try:
        tree = ast.parse(text.replace("^", "**").replace("−", "-"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc}") from None
    return _eval_node(tree.body, space, text)


def _eval_node(node, space, text):
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, space, text)
        if isinstance(node.op, ast.Pow):
            exp = _eval_node(node.right, space, text)
            if not exp.is_constant() or exp.constant_value().denominator != 1:
                raise ParseError(f"non-integer exponent in {text!r}")
            return left ** int(exp.constant_value())
        right = _eval_node(node.right, space, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            return left / right
    elif isinstance(node, ast.UnaryOp):
        val = _eval_node(node.operand, space, text)
        if isinstance(node.op, ast.USub):
            return -val
        if isinstance(node.op, ast.UAdd):
            return val
    elif isinstance(node, ast.Constant) and isinstance(node.value, int):
        return space.const(node.value)
    elif isinstance(node, ast.Name):
        if node.id not in space:
            raise ParseError(f"unknown symbol {node.id!r} in {text!r}")
        return space.symbol(node.id)
    raise ParseError(f"unsupported syntax in {text!r}")
