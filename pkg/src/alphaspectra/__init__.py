"""Singular values, trace norm and trace-norm bounds of the A_alpha matrix of digraphs."""

from .alphamat import (
    SingularSpectrum,
    abs_determinant,
    alpha_spectrum,
    build_alpha_matrix,
    gram_matrix,
    numerical_rank,
    singular_values,
    trace_norm,
)
from .bounds import BoundReport, EqualityCase, bound_report, classify_equality, is_symmetric_bibd
from .closedform import closed_form_spectrum
from .digraph import (
    Digraph,
    Family,
    all_digraphs,
    all_oriented_trees,
    classify_structure,
    direct_sum,
    make_family,
    parse_digraph,
    parse_family,
    transpose,
)

__version__ = "0.1.0"
