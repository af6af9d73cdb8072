import itertools
from fractions import Fraction

import pytest

from alphaspectra.alphamat import numerical_rank
from alphaspectra.bounds import bound_report
from alphaspectra.digraph import (
    Digraph,
    DigraphError,
    all_digraphs,
    directed_cycle,
    directed_path,
    discrete,
    oriented_complete_bipartite,
    symmetric_complete,
    transpose,
)
from alphaspectra.verify import (
    RANK_GRID,
    STANDARD_GRID,
    arbitrate_cycle_coefficient,
    find_km_equality_candidates,
    run_exhaustive,
    verify_tree_minimum,
)

HALF = Fraction(1, 2)


def brute_rank_one(n, grid):
    return {(D.code, a) for D in all_digraphs(n) for a in grid
            if numerical_rank(D, a, "exact") == 1}


def test_n2_rank_one_set():
    got = brute_rank_one(2, (Fraction(0), HALF))
    P2, P2r, K2 = directed_path(2), transpose(directed_path(2)), symmetric_complete(2)
    # a single arc is the out-star K_{1,1}, rank one at every alpha
    assert got == {(P2.code, 0), (P2r.code, 0), (P2.code, HALF), (P2r.code, HALF), (K2.code, HALF)}


@pytest.mark.parametrize("n", [2, 3])
def test_extended_passes(n):
    s = run_exhaustive(n, STANDARD_GRID, "extended", workers=1)
    assert s.passed, s.to_text()
    assert s.checks > 0
    assert s.stats["digraphs"] == 2 ** (n * (n - 1))


def test_isolated_reading_fails_on_out_stars_n2():
    s = run_exhaustive(2, (Fraction(0), HALF), "isolated", workers=1)
    assert not s.passed
    assert s.failures_by_check["rank_one"] == 2
    bad = {(f.digraph, f.alpha) for f in s.failures if f.check == "rank_one"}
    assert bad == {(directed_path(2).code, "1/2"), (transpose(directed_path(2)).code, "1/2")}


def test_isolated_reading_n3_counterexample():
    s = run_exhaustive(3, (HALF,), "isolated", workers=1)
    star = oriented_complete_bipartite(1, 2)
    assert (star.code, "1/2") in {(f.digraph, f.alpha) for f in s.failures}
    # sandwich and Frobenius never fail; only characterization checks do
    assert all(k.startswith(("rank_one", "equality.")) for k in s.failures_by_check)


def test_failure_codes_round_trip():
    s = run_exhaustive(3, (HALF,), "isolated", workers=1)
    for f in s.failures:
        D = Digraph.from_code(f.digraph)
        assert numerical_rank(D, Fraction(f.alpha), "exact") == 1 or f.check != "rank_one"


def test_mcclelland_equality_set_n3():
    s = run_exhaustive(3, (Fraction(0),), "isolated", workers=1)
    assert s.failures_by_check.get("equality.upper_mcclelland", 0) == 0
    derangements = {
        Digraph.from_arcs(3, [(i, p[i]) for i in range(3)])
        for p in itertools.permutations(range(3)) if all(p[i] != i for i in range(3))
    }
    hits = {D for D in all_digraphs(3) if bound_report(D, 0.0).equality["upper_mcclelland"]}
    assert hits == derangements | {discrete(3)}
    assert s.stats["equal_upper_mcclelland"] == 3


def test_deterministic_and_worker_independent():
    a = run_exhaustive(3, RANK_GRID, "isolated", workers=1)
    b = run_exhaustive(3, RANK_GRID, "isolated", workers=1)
    c = run_exhaustive(3, RANK_GRID, "isolated", workers=2)
    assert a.comparable() == b.comparable() == c.comparable()


def test_range_and_gate():
    with pytest.raises(DigraphError):
        run_exhaustive(1)
    with pytest.raises(DigraphError):
        run_exhaustive(6)
    with pytest.raises(DigraphError, match="allow_large"):
        run_exhaustive(5)
    with pytest.raises(ValueError):
        run_exhaustive(2, characterization="bogus")


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_tree_suite(n):
    s = verify_tree_minimum(n)
    assert s.passed, s.to_text()
    assert s.stats["minimum_trace_norm"] == pytest.approx((n - 1) ** 0.5, abs=1e-12)
    assert s.stats["minimizers"] == (2 if n == 2 else 2 * n)
    # out-stars attain the tree bound at positive alpha too
    assert s.stats["stars_attaining_bound_at_positive_alpha"] > 0 and s.notes


def test_tree_suite_range():
    with pytest.raises(DigraphError):
        verify_tree_minimum(7)


def test_km_candidates_examples_and_soundness():
    found = find_km_equality_candidates(3, (0.0, 0.5))
    codes = set(found)
    for D in (symmetric_complete(2), symmetric_complete(3)):
        assert (D.code, 0.0) in codes and (D.code, 0.5) in codes
    # C3 at 1/2 is regular with singular values 1, 1/2, 1/2
    assert (directed_cycle(3).code, 0.0) in codes and (directed_cycle(3).code, 0.5) in codes
    assert (directed_path(2).code, 0.0) not in codes
    for code, alpha in found:
        D = Digraph.from_code(code)
        rep = bound_report(D, alpha)
        a, n = D.arc_count, D.n
        beta = max(1 - alpha, alpha * int(D.out_degrees.max()))
        assert a >= n * beta
        assert abs(rep.trace_norm - rep.upper_km) <= 1e-9
        assert D.arc_count > 0


def test_arbitration():
    s = arbitrate_cycle_coefficient(12)
    assert s.passed
    assert s.stats["coefficient_2_matches"] == s.stats["cases"] == 30
    assert s.stats["coefficient_1_matches"] == 0
