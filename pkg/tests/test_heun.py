from __future__ import annotations

import math
from fractions import Fraction

import pytest

import _oracles as oracle
from heuncft.errors import ResonantDenominator, UnsupportedEquation
from heuncft.heun import (
    EQUATIONS,
    LINKS,
    THETA_SPACES,
    _order_equation,
    cf_family,
    confluent_chain_floquet,
    floquet_expansion,
    mathieu_dictionary,
    solve_continued_fraction,
)
from heuncft.series import FormalSeries

Q4 = Fraction(1, 4)


def delta(x):
    return Q4 - x**2


def test_hvi_q0_q1():
    x = floquet_expansion("HVI", 1)
    C = x.q_canonical.zero.space
    w, al, be, ga, de, ep = C.symbols(*C.names)
    assert x.q_canonical[0] == -w * (w + ga + ep - 1)
    tail = (w + 1) * (w + al) * (w + be) * (w + ga) / (2 * w + ga + ep) - w * (w + al - 1) * (w + be - 1) * (
        w + ga - 1
    ) / (2 * w + ga + ep - 2)
    # the t-part of B_0 is omega (delta + omega - 1 + gamma), so delta enters the first term
    assert x.q_canonical[1] == -w * (w + ga + de - 1) + tail
    printed = -w * (w + ga + ep - 1) + tail
    assert x.q_canonical[1] - printed == w * (ep - de)


def test_hvi_expansion_matches_classical_coefficients():
    E = floquet_expansion("HVI", 2).E
    T = THETA_SPACES["HVI"]
    t0, t1, tt, ti, s = T.symbols(*T.names)
    d0, d1, dt, di, ds = map(delta, (t0, t1, tt, ti, s))
    W1 = (ds - d0 + dt) * (ds - di + d1) / (2 * ds)
    a, b = ds - d0 + dt, ds - di + d1
    W2 = a**2 * b**2 / (8 * ds**2) * (1 / a + 1 / b - 1 / (2 * ds)) + (
        ds**2 + 2 * ds * (d0 + dt) - 3 * (d0 - dt) ** 2
    ) * (ds**2 + 2 * ds * (di + d1) - 3 * (di - d1) ** 2) / (16 * ds**2 * (4 * ds + 3))
    assert E[0] == ds - d0 - dt
    assert E[1] == W1
    assert E[2] == 2 * W2


def test_hv_expansion():
    E = floquet_expansion("HV", 2).E
    T = THETA_SPACES["HV"]
    t0, tt, ts, s = T.symbols(*T.names)
    d0, dt, ds = delta(t0), delta(tt), delta(s)
    assert E[0] == ds - d0 - dt
    assert E[1] == -ts * (ds - d0 + dt) / (2 * ds)
    assert E[2] == ts**2 * (ds**2 - (d0 - dt) ** 2) / (8 * ds**3) - (3 * ts**2 + ds) * (
        ds**2 + 2 * ds * (d0 + dt) - 3 * (d0 - dt) ** 2
    ) / (8 * ds**2 * (3 + 4 * ds))


def test_hv_q_series():
    x = floquet_expansion("HV", 1)
    C = x.q_canonical.zero.space
    w, al, be, ga = C.symbols(*C.names)
    assert x.q_canonical[0] == w * (w + be + ga - 1)
    assert x.q_canonical[1] == -w + (w + 1) * (w + al) * (w + be) / (2 * w + be + ga) - w * (w + al - 1) * (
        w + be - 1
    ) / (2 * w + be + ga - 2)


def test_hiii1_expansion():
    E = floquet_expansion("HIII1", 2).E
    T = THETA_SPACES["HIII1"]
    ts, tb, s = T.symbols(*T.names)
    ds = delta(s)
    assert E[0] == ds
    assert E[1] == ts * tb / (2 * ds)
    assert E[2] == (3 * ts**2 + ds) * (3 * tb**2 + ds) / (8 * ds**2 * (3 + 4 * ds)) - ts**2 * tb**2 / (8 * ds**3)


def test_hiii2_expansion():
    E = floquet_expansion("HIII2", 3).E
    T = THETA_SPACES["HIII2"]
    ts, s = T.symbols(*T.names)
    ds = delta(s)
    assert E[1] == ts / (2 * ds)
    assert E[2] == ((5 * ds - 3) * ts**2 + 3 * ds**2) / (8 * ds**3 * (3 + 4 * ds))
    assert E[3] == ts * ((7 * ds - 6) * ds**2 + (9 * ds**2 - 19 * ds + 6) * ts**2) / (
        16 * ds**5 * (3 + 4 * ds) * (2 + ds)
    )


def test_hiii3_expansion():
    E = floquet_expansion("HIII3", 3).E
    s = THETA_SPACES["HIII3"].symbol("sigma")
    ds = delta(s)
    assert E[0] == ds
    assert E[1] == 1 / (2 * ds)
    assert E[2] == (5 * ds - 3) / (8 * ds**3 * (3 + 4 * ds))
    assert E[3] == (9 * ds**2 - 19 * ds + 6) / (16 * ds**5 * (3 + 4 * ds) * (2 + ds))


@pytest.mark.parametrize("link", LINKS)
def test_confluent_chain(link):
    report = confluent_chain_floquet(link, 3)
    assert report.verdict, report.summary()


@pytest.mark.parametrize("equation", EQUATIONS)
def test_depth_stability(equation):
    fam = cf_family(equation)
    N = 3
    assert solve_continued_fraction(fam, N, N + 1) == solve_continued_fraction(fam, N, N + 2)


@pytest.mark.parametrize("equation", EQUATIONS)
def test_order_equations_are_linear(equation):
    fam = cf_family(equation)
    S = fam.space
    known = solve_continued_fraction(fam, 2)
    for k in range(3):
        terms = {j: known[j] for j in range(k)}
        terms[k] = S.symbol("Q")
        eq = _order_equation(fam, FormalSeries("t", terms, k, zero=S.zero), k, k + 1)
        assert eq.degree("Q")[0] == 1 and eq.degree("Q")[1] == 0


def test_resonant_binding():
    with pytest.raises(ResonantDenominator):
        floquet_expansion("HIII3", 3, bindings={"sigma": Fraction(1, 2)})
    with pytest.raises(UnsupportedEquation):
        floquet_expansion("HIII3", 3, bindings={"theta0": 1})
    with pytest.raises(UnsupportedEquation):
        floquet_expansion("HIV", 2)


def test_bindings_commute_with_solving():
    point = {"theta0": Fraction(1, 3), "thetat": Fraction(-2, 7), "thetastar": Fraction(5, 4), "sigma": Fraction(3, 10)}
    bound = floquet_expansion("HV", 3, bindings=point).E
    generic = floquet_expansion("HV", 3).E
    for n in range(4):
        assert bound[n] == generic[n].evaluate(point)


def test_mathieu_dictionary():
    nu, q, ds = mathieu_dictionary(Fraction(3, 20), Fraction(1, 1600))
    assert (nu, q, ds) == (Fraction(3, 10), Fraction(1, 10), Fraction(91, 400))


def _series_value(sigma, t, N):
    E = floquet_expansion("HIII3", N, bindings={"sigma": Fraction(sigma)}).E
    return sum(float(E[k].constant_value()) * float(t) ** k for k in range(N + 1))


def test_mathieu_series_against_hill_oracle():
    # nu = 0.3, q = 0.1 under nu = 2 sigma, q = 4 sqrt(t)
    sigma, t = Fraction(3, 20), Fraction(1, 1600)
    nu, q, _ = mathieu_dictionary(sigma, t)
    a = oracle.hill_mathieu_a(float(nu), float(q))
    assert abs(_series_value(sigma, t, 4) - (1 - a) / 4) < 1e-8


def _hiii3_root(sigma, t):
    fam = cf_family("HIII3").specialize({"sigma": Fraction(sigma)})

    def diag(n, tk):
        _, b0, b1 = fam.B_parts(n)
        return float(b0.constant_value()) + float(b1.constant_value()) * tk

    def offprod(n, tk):
        return tk * float((fam.C(n) * fam.A(n + 1)).constant_value())

    return oracle.recurrence_root(diag, offprod, float(delta(Fraction(sigma))))(float(t))


def test_mathieu_recurrence_against_hill_oracle_at_large_coupling():
    sigma, t = Fraction(3, 10), Fraction(1, 10)
    nu, q, _ = mathieu_dictionary(sigma, t)
    a = oracle.hill_mathieu_a(float(nu), q)
    assert abs(_hiii3_root(sigma, t) - (1 - a) / 4) < 1e-8


def test_mathieu_series_diverges_at_large_coupling():
    sigma, t = Fraction(3, 10), Fraction(1, 10)
    nu, q, _ = mathieu_dictionary(sigma, t)
    target = (1 - oracle.hill_mathieu_a(float(nu), q)) / 4
    errors = [abs(_series_value(sigma, t, N) - target) for N in (4, 8, 12)]
    assert errors[0] < errors[1] < errors[2] and errors[2] > 1


def test_hill_oracle_matches_small_coupling_expansion():
    nu, q = 0.3, 1e-3
    a = oracle.hill_mathieu_a(nu, q)
    assert math.isclose(a, nu**2 + q**2 / (2 * (nu**2 - 1)), rel_tol=0, abs_tol=1e-11)
