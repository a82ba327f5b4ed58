"""Independent reference computations used only by the tests.

Everything here works with plain ``Fraction`` values (or floats for the Hill
matrix) and shares no code with the package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np


def partitions(n):
    out = []

    def gen(m, largest, acc):
        if m == 0:
            out.append(tuple(acc))
            return
        for k in range(min(m, largest), 0, -1):
            gen(m - k, k, acc + [k])

    gen(n, n, [])
    return sorted(out)


def vacuum_expectation(c, delta):
    """``<D| L_{w_1} ... L_{w_k} |D>`` by brute-force normal ordering of words."""

    @lru_cache(maxsize=None)
    def vev(word):
        if not word:
            return Fraction(1)
        if word[-1] > 0 or word[0] < 0:
            return Fraction(0)
        if word[-1] == 0:
            return delta * vev(word[:-1])
        if word[0] == 0:
            return delta * vev(word[1:])
        i = max(k for k, m in enumerate(word) if m > 0)
        m, n = word[i], word[i + 1]
        head, tail = word[:i], word[i + 2:]
        total = vev(head + (n, m) + tail)
        if m - n:
            total += (m - n) * vev(head + (m + n,) + tail)
        if m + n == 0:
            total += c * Fraction(m * (m * m - 1), 12) * vev(head + tail)
        return total

    return vev


def gram(level, c, delta):
    vev = vacuum_expectation(Fraction(c), Fraction(delta))
    basis = partitions(level)
    return [[vev(tuple(reversed(lam)) + tuple(-k for k in mu)) for mu in basis] for lam in basis]


def det(matrix):
    m = [row[:] for row in matrix]
    n = len(m)
    out = Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if m[r][i] != 0), None)
        if p is None:
            return Fraction(0)
        if p != i:
            m[i], m[p] = m[p], m[i]
            out = -out
        out *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            for k in range(i, n):
                m[r][k] -= f * m[i][k]
    return out


def solve(matrix, rhs):
    n = len(matrix)
    m = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for i in range(n):
        p = next(r for r in range(i, n) if m[r][i] != 0)
        m[i], m[p] = m[p], m[i]
        for r in range(n):
            if r != i and m[r][i] != 0:
                f = m[r][i] / m[i][i]
                for k in range(i, n + 1):
                    m[r][k] -= f * m[i][k]
    return [m[i][n] / m[i][i] for i in range(n)]


def vertex_factor(parts, d_in, d_op, d_out):
    """Closed product for ``<d_out| V_{d_op}(1) L_{-k_1} L_{-k_2} ... |d_in>``.

    By symmetry the same product with ``d_in`` and ``d_out`` exchanged gives
    ``<d_in| ... L_{k_2} L_{k_1} V_{d_op}(1) |d_out>``.
    """
    out = Fraction(1)
    for i, k in enumerate(parts):
        out *= d_in + k * d_op - d_out + sum(parts[i + 1:])
    return out


def regular_block(N, c, d0, dt, d1, dinf, ds):
    """``F_1..F_N`` of the four-point block at a numeric point."""
    out = []
    for n in range(1, N + 1):
        basis = partitions(n)
        right = [vertex_factor(lam, ds, dt, d0) for lam in basis]
        left = [vertex_factor(mu, ds, d1, dinf) for mu in basis]
        x = solve(gram(n, c, ds), right)
        out.append(sum(l * v for l, v in zip(left, x)))
    return out


def whittaker_block(N, c, ds, bra, ket):
    """``<bra| t^L0 Pi |ket>`` coefficients for rank-1 Whittaker vectors."""

    def overlap(lam, eig):
        out = Fraction(1)
        for p in lam:
            out *= eig[p - 1] if p <= 2 else 0
        return out

    out = []
    for n in range(1, N + 1):
        basis = partitions(n)
        x = solve(gram(n, c, ds), [overlap(lam, ket) for lam in basis])
        out.append(sum(overlap(mu, bra) * v for mu, v in zip(basis, x)))
    return out


def hill_mathieu_a(nu, q, size=60):
    """Mathieu characteristic value ``a(nu, q)`` from the truncated Hill matrix.

    ``diag (nu + 2n)^2`` and off-diagonal ``q``.  For ``0 < nu < 1`` the
    branch through ``nu^2`` is the lowest eigenvalue: the spectrum of a
    tridiagonal matrix with nonzero off-diagonal is simple, so the ordering
    of the ``q = 0`` diagonal persists.
    """
    n = np.arange(-size, size + 1)
    m = np.diag((nu + 2 * n) ** 2.0)
    m += q * (np.eye(2 * size + 1, k=1) + np.eye(2 * size + 1, k=-1))
    w = np.linalg.eigvalsh(m)
    return float(w[0])


def recurrence_root(diag, offprod, start, steps=50, size=40):
    """Root of the truncated three-term recurrence, tracked from ``t = 0``.

    ``diag(n, t)`` is the ``t``-dependent part of ``B_n`` and ``offprod(n, t)``
    the product ``t C_n A_{n+1}``; the unknown enters ``B_n`` with sign ``+1``.
    Returns a function of ``t``.
    """

    def root(t):
        current = start
        for k in range(1, steps + 1):
            tk = t * k / steps
            idx = range(-size, size + 1)
            m = np.diag([-diag(n, tk) for n in idx]).astype(float)
            for i, n in enumerate(list(idx)[:-1]):
                m[i, i + 1] = offprod(n, tk)
                m[i + 1, i] = 1.0
            w = np.linalg.eigvals(m)
            current = float(w[np.argmin(np.abs(w - current))].real)
        return current

    return root
