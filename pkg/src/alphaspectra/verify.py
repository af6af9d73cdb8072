"""Exhaustive verification of the bounds and characterizations on small digraphs.

Every suite returns a :class:`VerificationSummary`. A failure records the
digraph code (see :attr:`Digraph.code`), alpha, a check id, and the observed
and expected values, so it can be reproduced with ``Digraph.from_code``.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import alphamat, bounds, closedform
from .alphamat import Alpha, SingularSpectrum, as_fraction, check_alpha
from .digraph import (
    MAX_ENUM_ORDER,
    Digraph,
    DigraphError,
    adjacency_block,
    all_oriented_trees,
    classify_structure,
    digraph_count,
    directed_cycle,
)

FAILURE_CAP = 100
CHUNK = 2048
THREADS_ENV = "ALPHA_SPECTRA_THREADS"

STANDARD_GRID = tuple(Fraction(k, 10) for k in range(10))
RANK_GRID = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


@dataclass
class Failure:
    digraph: str
    alpha: str
    check: str
    observed: str
    expected: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class VerificationSummary:
    suite: str
    parameters: dict
    checks: int = 0
    failure_count: int = 0
    failures: list[Failure] = field(default_factory=list)
    failures_by_check: dict[str, int] = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def record(self, D: Digraph, alpha, check: str, observed, expected) -> None:
        self.failure_count += 1
        self.failures_by_check[check] = self.failures_by_check.get(check, 0) + 1
        if len(self.failures) < FAILURE_CAP:
            self.failures.append(
                Failure(D.code, _alpha_text(alpha), check, str(observed), str(expected))
            )

    def merge(self, other: "VerificationSummary") -> None:
        self.checks += other.checks
        self.failure_count += other.failure_count
        room = FAILURE_CAP - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])
        for k, v in other.failures_by_check.items():
            self.failures_by_check[k] = self.failures_by_check.get(k, 0) + v
        for k, v in other.stats.items():
            if isinstance(v, list):
                self.stats.setdefault(k, []).extend(v)
            else:
                self.stats[k] = self.stats.get(k, 0) + v

    def comparable(self) -> dict:
        """Everything except wall-clock time."""
        d = self.to_dict()
        d.pop("elapsed")
        return d

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "parameters": self.parameters,
            "passed": self.passed,
            "checks": self.checks,
            "failure_count": self.failure_count,
            "failures_by_check": dict(sorted(self.failures_by_check.items())),
            "failures": [f.to_dict() for f in self.failures],
            "stats": self.stats,
            "notes": list(self.notes),
            "elapsed": round(self.elapsed, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = [
            f"suite: {self.suite}",
            f"parameters: {json.dumps(self.parameters, sort_keys=True)}",
            f"checks: {self.checks}",
            f"failures: {self.failure_count}",
            f"result: {'PASS' if self.passed else 'FAIL'}",
        ]
        for k, v in sorted(self.failures_by_check.items()):
            lines.append(f"  {k}: {v}")
        for k, v in self.stats.items():
            if not isinstance(v, list):
                lines.append(f"stat {k}: {v}")
        for note in self.notes:
            lines.append(f"note: {note}")
        if self.failures:
            lines.append(f"first {len(self.failures)} failure(s):")
            for f in self.failures:
                lines.append(
                    f"  {f.digraph} alpha={f.alpha} {f.check}: observed {f.observed}, expected {f.expected}"
                )
        lines.append(f"elapsed: {self.elapsed:.2f}s")
        return "\n".join(lines) + "\n"


def _alpha_text(alpha) -> str:
    if isinstance(alpha, Fraction):
        return str(alpha)
    return repr(float(alpha))


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _batch_spectra(adj: np.ndarray, alpha: Alpha) -> tuple[np.ndarray, np.ndarray]:
    """Singular values and |det| for a stack of adjacency matrices."""
    M = alphamat.alpha_matrix_stack(adj, alpha)
    sv = np.clip(np.linalg.svd(M, compute_uv=False), 0.0, None)
    sign, logdet = np.linalg.slogdet(M)
    det = np.where(sign == 0, 0.0, np.exp(logdet))
    return sv, det


# --------------------------------------------------------------------------
# exhaustive digraph suite


def _exhaustive_chunk(args) -> VerificationSummary:
    n, grid, characterization, start, stop = args
    out = VerificationSummary("chunk", {})
    out.stats = {"digraph_alpha_pairs": 0, "rank_one": 0, "rank_checked": 0}
    for b in bounds.BOUND_IDS:
        out.stats[f"equal_{b}"] = 0
    adj = adjacency_block(n, start, stop)
    digraphs = [Digraph(x) for x in adj]
    flags = [classify_structure(D) for D in digraphs]
    rank_ok = all(as_fraction(a).denominator <= alphamat.MAX_RANK_DENOMINATOR for a in grid)
    tol = bounds.EQ_TOL

    for alpha in grid:
        sv, det = _batch_spectra(adj, alpha)
        for i, D in enumerate(digraphs):
            spectrum = SingularSpectrum(sv[i])
            rep = bounds.bound_report(D, alpha, spectrum=spectrum, abs_det=float(det[i]))
            f = flags[i]
            out.stats["digraph_alpha_pairs"] += 1

            # sandwich
            checks = [
                ("sandwich.lower_basic_le_lower_det", rep.lower_det - rep.lower_basic),
                ("sandwich.lower_det", rep.slacks["lower_det"]),
                ("sandwich.upper_mcclelland", rep.slacks["upper_mcclelland"]),
                ("sandwich.spectral_floor", rep.slacks["spectral_floor"]),
            ]
            if rep.km_applicable:
                checks.append(("sandwich.upper_km", rep.slacks["upper_km"]))
            for cid, slack in checks:
                out.checks += 1
                if slack < -tol:
                    out.record(D, alpha, cid, f"slack {slack:.3e}", f">= {-tol}")

            # sum of squares identity
            out.checks += 1
            ss = float((sv[i] ** 2).sum())
            if abs(ss - rep.frobenius) > 1e-9 * max(1.0, rep.frobenius):
                out.record(D, alpha, "frobenius", ss, rep.frobenius)

            # zero spectrum iff discrete
            out.checks += 1
            if (rep.trace_norm <= tol) != f.is_discrete:
                out.record(D, alpha, "zero_trace_norm", rep.trace_norm, f"discrete={f.is_discrete}")

            # spectral floor attained iff a/n-regular
            out.checks += 1
            attained = rep.equality["spectral_floor"]
            regular = f.regular_degree is not None
            if attained != regular:
                out.record(D, alpha, "spectral_floor.equality", attained, f"regular={regular}")

            # rank one
            if rank_ok:
                out.checks += 1
                out.stats["rank_checked"] += 1
                rank = alphamat.numerical_rank(D, alpha, mode="exact")
                predicted = bounds.expected_rank_one(D, alpha, characterization)
                if rank == 1:
                    out.stats["rank_one"] += 1
                if (rank == 1) != bool(predicted):
                    out.record(D, alpha, "rank_one", f"rank={rank}", f"case={predicted}")

            # equality cases
            for b in bounds.BOUND_IDS:
                if b == "upper_km" and not rep.km_applicable:
                    continue
                out.checks += 1
                equal = rep.equality[b]
                if equal:
                    out.stats[f"equal_{b}"] += 1
                case = bounds.classify_equality(
                    D, alpha, b, characterization, report=rep, flags=f, spectrum=spectrum
                )
                if equal != bool(case):
                    out.record(D, alpha, f"equality.{b}", f"slack {rep.slacks[b]:.3e}", f"case={case}")
    return out


def _chunks(total: int, size: int = CHUNK):
    for start in range(0, total, size):
        yield start, min(total, start + size)


def run_exhaustive(
    n: int,
    alpha_grid: Sequence[Alpha] = RANK_GRID,
    characterization: str = "isolated",
    workers: int | None = None,
    allow_large: bool = False,
) -> VerificationSummary:
    """Check every bound, equality characterization and the rank-one
    classification on all labeled digraphs of order ``n``.

    ``n = 5`` (about a million digraphs) runs only with ``allow_large=True``.
    """
    if not 2 <= n <= MAX_ENUM_ORDER:
        raise DigraphError(f"run_exhaustive supports 2 <= n <= {MAX_ENUM_ORDER}, got {n}")
    if n == 5 and not allow_large:
        raise DigraphError("n = 5 takes minutes; pass allow_large=True (CLI: --allow-large)")
    if characterization not in bounds.CHARACTERIZATIONS:
        raise ValueError(f"unknown characterization {characterization!r}")
    grid = [check_alpha(a) for a in alpha_grid]
    workers = workers or default_workers()
    t0 = time.perf_counter()
    summary = VerificationSummary(
        "exhaustive",
        {"n": n, "alpha_grid": [_alpha_text(a) for a in grid], "characterization": characterization},
    )
    tasks = [(n, grid, characterization, s, e) for s, e in _chunks(digraph_count(n))]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_exhaustive_chunk, tasks))
    else:
        parts = [_exhaustive_chunk(t) for t in tasks]
    for part in parts:
        summary.merge(part)
    summary.stats["digraphs"] = digraph_count(n)
    summary.notes.append(
        "directed 2-cycles count as directed cycles in permutation digraphs"
    )
    summary.elapsed = time.perf_counter() - t0
    return summary


# --------------------------------------------------------------------------
# oriented trees


def _is_star(f) -> bool:
    if f.isolated or not f.ocb_plus_isolated:
        return False
    r, s = f.ocb_plus_isolated
    return r == 1 or s == 1


def verify_tree_minimum(n: int, alphas: Sequence[float] = (0.25, 0.5, 0.75)) -> VerificationSummary:
    """Minimum alpha = 0 trace norm over oriented trees is sqrt(n - 1), attained
    exactly by the all-out and all-in stars; for positive ``alphas`` the lower
    bound holds everywhere and strictly off the stars."""
    if not 2 <= n <= 6:
        raise DigraphError(f"verify_tree_minimum supports 2 <= n <= 6, got {n}")
    t0 = time.perf_counter()
    tol = bounds.EQ_TOL
    summary = VerificationSummary("tree_minimum", {"n": n, "alphas": [0.0, *map(float, alphas)]})
    trees = list(all_oriented_trees(n))
    flags = [classify_structure(T) for T in trees]
    adj = np.stack([T.adjacency for T in trees])
    target = math.sqrt(n - 1)

    sv, _ = _batch_spectra(adj, 0.0)
    norms = sv.sum(axis=1)
    minimum = float(norms.min())
    summary.checks += 1
    if abs(minimum - target) > tol:
        summary.record(trees[int(norms.argmin())], 0.0, "tree.minimum", minimum, target)
    minimizers = 0
    for T, f, tn in zip(trees, flags, norms.tolist()):
        summary.checks += 1
        at_min = abs(tn - target) <= tol
        minimizers += at_min
        if at_min != _is_star(f):
            summary.record(T, 0.0, "tree.minimizer_is_star", f"trace_norm={tn:.12g}", f"star={_is_star(f)}")

    attaining_stars = 0
    for alpha in alphas:
        a = float(alpha)
        sv, _ = _batch_spectra(adj, a)
        norms_a = sv.sum(axis=1)
        for T, f, tn in zip(trees, flags, norms_a.tolist()):
            dout = T.out_degrees
            bound = math.sqrt((1 - a) ** 2 * (n - 1) + a * a * float((dout ** 2).sum()))
            summary.checks += 1
            if tn < bound - tol:
                summary.record(T, a, "tree.bound", tn, f">= {bound:.12g}")
            if _is_star(f):
                attaining_stars += abs(tn - bound) <= tol
                continue
            summary.checks += 1
            if tn - bound <= tol:
                summary.record(T, a, "tree.strict_off_star", tn, f"> {bound:.12g}")

    summary.stats = {
        "oriented_trees": len(trees),
        "minimum_trace_norm": round(minimum, 12),
        "minimizers": minimizers,
        "stars_attaining_bound_at_positive_alpha": attaining_stars,
    }
    if attaining_stars:
        summary.notes.append(
            f"{attaining_stars} star orientation(s) attain the tree bound at alpha > 0 "
            "(an out-star has rank-one A_alpha for every alpha), so equality is not "
            "confined to alpha = 0"
        )
    summary.elapsed = time.perf_counter() - t0
    return summary


# --------------------------------------------------------------------------
# Koolen-Moulton-type equality search


def find_km_equality_candidates(
    n_max: int, alpha_grid: Sequence[Alpha] = (0.0, 0.5)
) -> list[tuple[str, Alpha]]:
    """Every ``(digraph code, alpha)`` with n <= n_max attaining ``upper_km``.

    Complete only for the swept orders and grid.
    """
    if not 2 <= n_max <= MAX_ENUM_ORDER:
        raise DigraphError(f"find_km_equality_candidates supports 2 <= n_max <= {MAX_ENUM_ORDER}")
    found: list[tuple[str, Alpha]] = []
    for n in range(2, n_max + 1):
        for start, stop in _chunks(digraph_count(n)):
            adj = adjacency_block(n, start, stop)
            for alpha in alpha_grid:
                check_alpha(alpha)
                sv, det = _batch_spectra(adj, alpha)
                for i in range(len(adj)):
                    D = Digraph(adj[i])
                    rep = bounds.bound_report(D, alpha, SingularSpectrum(sv[i]), float(det[i]))
                    if rep.km_applicable and rep.equality["upper_km"]:
                        found.append((D.code, alpha))
    return found


# --------------------------------------------------------------------------
# cycle coefficient arbitration


def arbitrate_cycle_coefficient(
    n_max: int, alphas: Sequence[float] = (0.25, 0.5, 0.75)
) -> VerificationSummary:
    """Compare the cycle closed form with cosine coefficient 2a(1-a) and
    a(1-a) against a numeric SVD for n = 3..n_max."""
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    t0 = time.perf_counter()
    summary = VerificationSummary("cycle_coefficient", {"n_max": n_max, "alphas": list(map(float, alphas))})
    matches = {2.0: 0, 1.0: 0}
    cases = 0
    for n in range(3, n_max + 1):
        D = directed_cycle(n)
        for a in alphas:
            numeric = np.sort(alphamat.alpha_spectrum(D, a).values)
            cases += 1
            for coef in matches:
                variant = np.sort([closedform.cycle_value(n, j, a, coef) for j in range(n)])
                if np.abs(variant - numeric).max() <= bounds.EQ_TOL:
                    matches[coef] += 1
            summary.checks += 1
            statement = np.sort([closedform.cycle_value(n, j, a, 2.0) for j in range(n)])
            err = float(np.abs(statement - numeric).max())
            if err > bounds.EQ_TOL:
                summary.record(D, a, "cycle.coefficient_2", f"max error {err:.3e}", "<= 1e-9")
    summary.stats = {"cases": cases, "coefficient_2_matches": matches[2.0],
                     "coefficient_1_matches": matches[1.0]}
    winner = "2a(1-a)" if matches[2.0] == cases else "neither"
    summary.notes.append(
        f"cosine coefficient {winner} matches the numeric spectrum in "
        f"{matches[2.0]}/{cases} cases; a(1-a) matches in {matches[1.0]}/{cases}"
    )
    summary.elapsed = time.perf_counter() - t0
    return summary
