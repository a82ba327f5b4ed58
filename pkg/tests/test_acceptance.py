"""Acceptance criteria 1-9, one PASS/FAIL line each.

Each criterion runs a list of named checks.  A check passes when it returns
without raising; failures are listed next to the FAIL line.
"""

from __future__ import annotations

import traceback

import test_correspondence as tcorr
import test_heun as theun
import test_virasoro as tvir
import test_wkb as twkb
from heuncft import correspondence as corr
from heuncft import heun, virasoro


def _verdict(report):
    def check():
        assert report().verdict

    return check


def _criterion(capsys, k, checks):
    failed = []
    for label, fn in checks:
        try:
            fn()
        except Exception:
            failed.append(label)
            traceback.print_exc()
    line = f"criterion {k}: " + ("PASS" if not failed else "FAIL (" + ", ".join(failed) + ")")
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


def test_criterion_1_gram(capsys):
    points = tvir.random_points(7, 3, ("c", "Delta"))
    _criterion(capsys, 1, [
        ("level-2 Gram", tvir.test_level_two_gram_matrix),
        *[(f"level-3 Gram point {i}", lambda p=p: tvir.test_level_three_gram_against_word_oracle(p))
          for i, p in enumerate(points)],
    ])


def test_criterion_2_regular_blocks(capsys):
    points = tvir.random_points(11, 3, virasoro.REGULAR_SPACE.names)
    _criterion(capsys, 2, [
        ("F1 F2 symbolic", tvir.test_first_two_regular_coefficients),
        *[(f"F3 F4 point {i}", lambda p=p: tvir.test_regular_coefficients_against_oracle(p))
          for i, p in enumerate(points)],
    ])


def test_criterion_3_classical_regular(capsys):
    def t2_limit_exists():
        W = corr.classical_block("regular4pt", 2)
        assert W.series.order == 2 and not W.coefficient(2).is_zero()

    _criterion(capsys, 3, [
        ("W1 W2", tcorr.test_regular_classical_block),
        ("t^2 b-limit", t2_limit_exists),
    ])


def test_criterion_4_first_kind_blocks(capsys):
    _criterion(capsys, 4, [
        ("Nf=3..0 through t^2", tvir.test_first_kind_second_order),
        *[(f"chain {link}", lambda link=link: tvir.test_block_confluence_chain(link)) for link in virasoro.BLOCK_LINKS],
        ("W_Nf3", tcorr.test_nf3_classical_block),
        ("W_Nf2 Nf1 Nf0", tcorr.test_nf2_nf1_nf0_classical_blocks),
    ])


def test_criterion_5_continued_fractions(capsys):
    _criterion(capsys, 5, [
        ("q0 q1", theun.test_hvi_q0_q1),
        ("E_VI = t dW/dt through t^3", _verdict(lambda: corr.conjectureB_regular(3))),
        ("HV t^2", theun.test_hv_expansion),
        ("HIII1 t^2", theun.test_hiii1_expansion),
        ("HIII2 t^3", theun.test_hiii2_expansion),
        ("HIII3 t^3", theun.test_hiii3_expansion),
        *[(f"chain {link}", lambda link=link: theun.test_confluent_chain(link)) for link in heun.LINKS],
        *[(f"E = t dW/dt {kind}", _verdict(lambda kind=kind: corr.conjectureB_first_kind(kind, 3)))
          for kind in ("Nf3", "Nf2", "Nf1", "Nf0")],
    ])


def test_criterion_6_type_d(capsys):
    _criterion(capsys, 6, [
        ("D1 D2 D3", tvir.test_typeD_coefficients_from_collision_limit),
        ("U1 U2", tcorr.test_typeD_classical_block),
        ("collision route", _verdict(lambda: corr.quasiclassical_typeD_report(2))),
    ])


def test_criterion_7_bs_hv(capsys):
    _criterion(capsys, 7, [
        ("nu expansions", twkb.test_hv_period_expansions),
        ("inversion", twkb.test_hv_inversion),
        ("E = t dU/dt through t^-2", _verdict(lambda: corr.conjectureB_typeD(2))),
        ("E = t dU/dt through t^-3", _verdict(lambda: corr.conjectureB_typeD(3))),
        ("U3 by both routes", _verdict(lambda: corr.quasiclassical_typeD_report(3))),
    ])


def test_criterion_8_bs_hiv(capsys):
    _criterion(capsys, 8, [
        ("nu expansions", twkb.test_hiv_period_expansions),
        ("inversion", twkb.test_hiv_inversion),
        ("E = dU~/dt through t^-5", _verdict(lambda: corr.conjectureB_typeG(5))),
        ("U~1 U~2", tcorr.test_typeG_classical_block),
    ])


def test_criterion_9_properties(capsys):
    def limits_finite():
        for kind, N in (("regular4pt", 4), ("Nf3", 4), ("Nf2", 4), ("Nf1", 4), ("Nf0", 4), ("typeD", 3), ("typeG", 2)):
            corr.classical_block(kind, N)

    _criterion(capsys, 9, [
        *[(f"WKB residuals {name}", lambda name=name: twkb.test_recurrence_residuals_and_even_residues(name))
          for name in sorted(twkb.POTENTIALS)],
        *[(f"CF linear {eq}", lambda eq=eq: theun.test_order_equations_are_linear(eq)) for eq in heun.EQUATIONS],
        *[(f"CF depth {eq}", lambda eq=eq: theun.test_depth_stability(eq)) for eq in heun.EQUATIONS],
        ("limit finiteness", limits_finite),
        ("Mathieu recurrence at (3/10, 1/10)", theun.test_mathieu_recurrence_against_hill_oracle_at_large_coupling),
        ("Mathieu series at nu=0.3, q=0.1", theun.test_mathieu_series_against_hill_oracle),
    ])
