from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphaspectra.alphamat import (
    AlphaError,
    abs_determinant,
    alpha_spectrum,
    bareiss_rank,
    build_alpha_matrix,
    check_alpha,
    frobenius_identity,
    gram_matrix,
    numerical_rank,
    parse_alpha,
    singular_values,
)
from alphaspectra.digraph import (
    Digraph,
    all_digraphs,
    direct_sum,
    directed_cycle,
    directed_path,
    discrete,
    oriented_complete_bipartite,
    shrikhande,
    symmetric_complete,
    transpose,
)

from strategies import digraphs

GRID = [0.0, 0.25, 0.5, 0.75]


def fraction_rank(rows):
    """Plain Gauss-Jordan over Fractions; oracle for the Bareiss path."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for col in range(len(m[0]) if m else 0):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def test_alpha_validation():
    for bad in (1.0, -0.1, 1.5, float("nan")):
        with pytest.raises(AlphaError):
            check_alpha(bad)
    assert parse_alpha("1/4") == Fraction(1, 4)
    assert parse_alpha("0.1") == Fraction(1, 10)
    with pytest.raises(AlphaError):
        parse_alpha("1")


def test_sym_k2_half():
    M = build_alpha_matrix(symmetric_complete(2), 0.5)
    assert np.array_equal(M, [[0.5, 0.5], [0.5, 0.5]])


@pytest.mark.parametrize("r, s", [(1, 1), (2, 3), (4, 2)])
@pytest.mark.parametrize("alpha", GRID)
def test_kbip_block_form(r, s, alpha):
    M = build_alpha_matrix(oriented_complete_bipartite(r, s), alpha)
    expected = np.zeros((r + s, r + s))
    expected[:r, :r] = alpha * s * np.eye(r)
    expected[:r, r:] = 1 - alpha
    assert np.array_equal(M, expected)


def test_discrete_is_zero():
    assert not build_alpha_matrix(discrete(5), 0.3).any()


@pytest.mark.parametrize("n", [2, 3, 7])
def test_cycle_alpha_zero_all_ones(n):
    spec = alpha_spectrum(directed_cycle(n), 0.0)
    assert np.allclose(spec.values, 1.0, atol=1e-12)
    assert spec.trace_norm == pytest.approx(n, abs=1e-12)


def test_cycle3_half():
    # hand: Gram = I/2 + (A + A^T)/4, eigenvalues of A + A^T are 2, -1, -1
    values = alpha_spectrum(directed_cycle(3), 0.5).values
    assert np.allclose(values, [1.0, 0.5, 0.5], atol=1e-12)
    M = build_alpha_matrix(directed_cycle(3), 0.5)
    gram_eigs = np.sort(np.linalg.eigvalsh(gram_matrix(M)))[::-1]
    assert np.allclose(np.sqrt(gram_eigs), values, atol=1e-12)


def test_sym_k2_half_spectrum():
    spec = alpha_spectrum(symmetric_complete(2), 0.5)
    assert np.allclose(spec.values, [1.0, 0.0], atol=1e-12)


def test_spectrum_properties():
    spec = singular_values(np.diag([3.0, -2.0, 0.5]))
    assert spec.values.tolist() == [3.0, 2.0, 0.5]
    assert spec.trace_norm == 5.5
    assert spec.spectral_norm == 3.0
    assert spec.abs_det == pytest.approx(3.0)
    assert spec.grouped() == [(3.0, 1), (2.0, 1), (0.5, 1)]
    groups = alpha_spectrum(shrikhande(), 0.0).grouped()
    assert [m for _, m in groups] == [1, 15]
    assert [v for v, _ in groups] == pytest.approx([6.0, 2.0], abs=1e-12)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_abs_determinant_examples(n):
    assert abs_determinant(build_alpha_matrix(directed_cycle(n), 0.0)) == pytest.approx(1.0)
    assert abs_determinant(build_alpha_matrix(discrete(n), 0.4)) == 0.0
    assert abs_determinant(build_alpha_matrix(directed_path(n), 0.0)) == 0.0


@given(digraphs(max_n=6), st.sampled_from(GRID))
def test_abs_determinant_matches_product(D, alpha):
    M = build_alpha_matrix(D, alpha)
    prod = singular_values(M).abs_det
    if prod > 1e-12:
        assert abs_determinant(M) == pytest.approx(prod, rel=1e-8)


@given(digraphs(max_n=7), st.sampled_from(GRID))
def test_gram_symmetric(D, alpha):
    G = gram_matrix(build_alpha_matrix(D, alpha))
    assert np.abs(G - G.T).max() <= 1e-14


def test_frobenius_identity_exhaustive_n4():
    for D in all_digraphs(4):
        for alpha in [k / 10 for k in range(10)]:
            ss = float((alpha_spectrum(D, alpha).values ** 2).sum())
            f = frobenius_identity(D, alpha)
            assert abs(ss - f) <= 1e-9 * max(1.0, f)


def test_zero_trace_norm_iff_discrete_n4():
    for D in all_digraphs(4):
        for alpha in GRID:
            tn = alpha_spectrum(D, alpha).trace_norm
            assert (tn <= 1e-9) == (D.arc_count == 0)


@pytest.mark.parametrize("D", [directed_cycle(3), directed_cycle(8), symmetric_complete(4),
                               symmetric_complete(9), shrikhande()], ids=repr)
@pytest.mark.parametrize("alpha", GRID)
def test_regular_row_sums(D, alpha):
    k = int(D.out_degrees[0])
    G = gram_matrix(build_alpha_matrix(D, alpha))
    assert np.abs(G.sum(axis=1) - k * k).max() <= 1e-9


@settings(max_examples=100)
@given(digraphs(max_n=6), digraphs(max_n=6), st.sampled_from([0.0, 0.1, 0.5, 0.9]))
def test_direct_sum_additive(D1, D2, alpha):
    total = alpha_spectrum(direct_sum([D1, D2]), alpha).trace_norm
    parts = alpha_spectrum(D1, alpha).trace_norm + alpha_spectrum(D2, alpha).trace_norm
    assert total == pytest.approx(parts, rel=1e-9, abs=1e-12)


def test_transpose_witness():
    K = oriented_complete_bipartite(1, 2)
    a = alpha_spectrum(K, 0.5).values
    b = alpha_spectrum(transpose(K), 0.5).values
    assert np.allclose(a, [np.sqrt(1.5), 0, 0], atol=1e-12)
    assert np.allclose(b, [np.sqrt(0.75), 0.5, 0], atol=1e-12)


def test_rank_examples():
    assert numerical_rank(symmetric_complete(2), Fraction(1, 2), "exact") == 1
    assert numerical_rank(symmetric_complete(2), 0.5) == 1
    assert numerical_rank(oriented_complete_bipartite(2, 3), 0, "exact") == 1
    assert numerical_rank(oriented_complete_bipartite(2, 3), 0.0) == 1
    assert numerical_rank(directed_path(3), 0, "exact") == 2
    assert numerical_rank(directed_path(3), 0.0) == 2


def test_rank_needs_small_denominator():
    with pytest.raises(AlphaError):
        numerical_rank(directed_path(3), Fraction(1, 65), "exact")
    with pytest.raises(ValueError):
        numerical_rank(directed_path(3), 0.5, "bogus")


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=5))
def test_bareiss_matches_fraction_elimination(rows):
    assert bareiss_rank(rows) == fraction_rank(rows)


def test_exact_and_numeric_rank_agree_n3():
    for D in all_digraphs(3):
        for alpha in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            exact = numerical_rank(D, alpha, "exact")
            assert exact == fraction_rank(build_alpha_matrix(D, alpha) * 4)
            assert exact == numerical_rank(D, float(alpha))
