"""Exact accessory-parameter expansions of Heun-class equations and Virasoro conformal blocks."""

from __future__ import annotations

from .correspondence import (
    classical_block,
    conjectureB_first_kind,
    conjectureB_regular,
    conjectureB_typeD,
    conjectureB_typeG,
)
from .heun import cf_family, confluent_chain_floquet, floquet_expansion, mathieu_dictionary, q_to_E
from .ratfunc import MultiPolynomial, ParameterSpace, RationalFunction, parse_ratfunc
from .report import SeriesReport, compare
from .series import FormalSeries, LaurentObject, laurent_expand, laurent_residue, limit_b_zero
from .virasoro import (
    Partition,
    VermaModule,
    VermaState,
    confluence_chain_check,
    confluent_block_first_kind,
    gram_matrix,
    regular_block,
    typeD_block,
    typeG_published,
    vertex_overlap,
    whittaker_overlap_rank1,
)
from .wkb import bs_period, invert_bs, potential_catalog, wkb_stack

__version__ = "0.1.0"

__all__ = [
    "FormalSeries",
    "LaurentObject",
    "MultiPolynomial",
    "ParameterSpace",
    "Partition",
    "RationalFunction",
    "SeriesReport",
    "VermaModule",
    "VermaState",
    "bs_period",
    "cf_family",
    "classical_block",
    "compare",
    "confluence_chain_check",
    "confluent_block_first_kind",
    "confluent_chain_floquet",
    "conjectureB_first_kind",
    "conjectureB_regular",
    "conjectureB_typeD",
    "conjectureB_typeG",
    "floquet_expansion",
    "gram_matrix",
    "invert_bs",
    "laurent_expand",
    "laurent_residue",
    "limit_b_zero",
    "mathieu_dictionary",
    "parse_ratfunc",
    "potential_catalog",
    "q_to_E",
    "regular_block",
    "typeD_block",
    "typeG_published",
    "vertex_overlap",
    "whittaker_overlap_rank1",
    "wkb_stack",
]
