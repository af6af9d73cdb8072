"""Trace-norm and spectral-norm bounds for A_alpha, with equality cases.

Bound ids:

``lower_det``
    ``sqrt(F + n(n-1)|det A_alpha|^(2/n))``
``lower_basic``
    ``sqrt(F)``
``upper_mcclelland``
    ``sqrt(n F)``
``upper_km``
    ``a/n + sqrt((n-1)(F - a^2/n^2))``, only when ``a >= n * beta`` with
    ``beta = max(1 - alpha, alpha * max outdegree)``

where ``F = (1-alpha)^2 a + alpha^2 sum(d_i^+)^2``. The spectral floor is
``sigma_1 >= a/n``.

Equality cases come in three readings (``characterization``):

``"strict"``
    the stated characterizations, with the symmetric 2-cycle at alpha = 1/2
    admitted only without isolated vertices;
``"isolated"``
    the same, but isolated vertices may accompany the symmetric 2-cycle;
``"extended"``
    the complete rank-one classification. Besides the stated cases it covers an
    out-star plus isolated vertices at any alpha > 0, and a "dominating clique"
    (m >= 2 vertices forming a symmetric complete digraph, each also pointing to
    the same t sinks) at alpha = 1/(m + t). It also covers every digraph of
    order 2 for ``lower_det``, which is then an identity.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .alphamat import (
    DET_ZERO_CUTOFF,
    Alpha,
    SingularSpectrum,
    abs_determinant,
    alpha_spectrum,
    build_alpha_matrix,
    check_alpha,
)
from .digraph import Digraph, StructureFlags, classify_structure

EQ_TOL = 1e-9
ALPHA_TOL = 1e-12

BOUND_IDS = ("lower_det", "lower_basic", "upper_mcclelland", "upper_km")
CHARACTERIZATIONS = ("strict", "isolated", "extended")


@dataclass(frozen=True)
class EqualityCase:
    """Structural reason a bound is attained; ``tag == "None"`` if there is none."""

    tag: str
    params: tuple = ()

    def __bool__(self) -> bool:
        return self.tag != "None"

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        return f"{self.tag}({','.join(_fmt_param(p) for p in self.params)})"


def _fmt_param(p) -> str:
    return f"{p:.12g}" if isinstance(p, float) else str(p)


NO_CASE = EqualityCase("None")


@dataclass
class BoundReport:
    n: int
    a: int
    alpha: float
    sum_sq_outdeg: int
    trace_norm: float
    spectral_norm: float
    abs_det: float
    frobenius: float
    lower_det: Optional[float] = None
    lower_basic: Optional[float] = None
    spectral_floor: Optional[float] = None
    upper_mcclelland: Optional[float] = None
    km_beta: Optional[float] = None
    km_applicable: bool = False
    upper_km: Optional[float] = None
    slacks: dict = field(default_factory=dict)
    equality: dict = field(default_factory=dict)

    @property
    def applicable(self) -> bool:
        return self.n >= 2

    def to_dict(self) -> dict:
        return asdict(self)


CSV_COLUMNS = (
    "n", "a", "alpha", "trace_norm", "spectral_norm", "lower_basic", "lower_det",
    "upper_mcclelland", "km_applicable", "upper_km", "equality",
)


def _alpha_is(alpha: float, value: float) -> bool:
    return abs(alpha - value) <= ALPHA_TOL


def bound_report(
    D: Digraph,
    alpha: Alpha,
    spectrum: SingularSpectrum | None = None,
    abs_det: float | None = None,
) -> BoundReport:
    """Evaluate every bound for ``(D, alpha)``.

    ``spectrum`` and ``abs_det`` may be passed in when they were computed in a
    batch; otherwise they are computed here.
    """
    a_val = float(check_alpha(alpha))
    n, arcs = D.n, D.arc_count
    dout = D.out_degrees
    if spectrum is None:
        spectrum = alpha_spectrum(D, a_val)
    if abs_det is None:
        abs_det = abs_determinant(build_alpha_matrix(D, a_val))
    frob = (1 - a_val) ** 2 * arcs + a_val ** 2 * int((dout ** 2).sum())
    tn = spectrum.trace_norm
    rep = BoundReport(
        n=n, a=arcs, alpha=a_val, sum_sq_outdeg=int((dout ** 2).sum()),
        trace_norm=tn, spectral_norm=spectrum.spectral_norm, abs_det=abs_det,
        frobenius=frob,
    )
    if n < 2:
        return rep

    det_term = 0.0 if abs_det <= DET_ZERO_CUTOFF else math.exp((2.0 / n) * math.log(abs_det))
    rep.lower_basic = math.sqrt(frob)
    rep.lower_det = math.sqrt(frob + n * (n - 1) * det_term)
    rep.spectral_floor = arcs / n
    rep.upper_mcclelland = math.sqrt(n * frob)
    rep.km_beta = max(1 - a_val, a_val * int(dout.max()))
    rep.km_applicable = arcs >= n * rep.km_beta
    if rep.km_applicable:
        rep.upper_km = arcs / n + math.sqrt((n - 1) * max(frob - (arcs / n) ** 2, 0.0))

    rep.slacks = {
        "lower_basic": tn - rep.lower_basic,
        "lower_det": tn - rep.lower_det,
        "spectral_floor": rep.spectral_norm - rep.spectral_floor,
        "upper_mcclelland": rep.upper_mcclelland - tn,
    }
    if rep.km_applicable:
        rep.slacks["upper_km"] = rep.upper_km - tn
    rep.equality = {k: abs(v) <= EQ_TOL for k, v in rep.slacks.items()}
    return rep


def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def equality_tags(rep: BoundReport, D: Digraph, characterization: str = "isolated") -> str:
    tags = []
    for bound in BOUND_IDS:
        if rep.equality.get(bound):
            case = classify_equality(D, rep.alpha, bound, characterization, report=rep)
            tags.append(f"{bound}={case}")
    return ";".join(tags)


def csv_row(rep: BoundReport, D: Digraph, characterization: str = "isolated") -> list[str]:
    values = {
        "n": rep.n, "a": rep.a, "alpha": rep.alpha, "trace_norm": rep.trace_norm,
        "spectral_norm": rep.spectral_norm, "lower_basic": rep.lower_basic,
        "lower_det": rep.lower_det, "upper_mcclelland": rep.upper_mcclelland,
        "km_applicable": rep.km_applicable, "upper_km": rep.upper_km,
    }
    row = [format_number(values[c]) for c in CSV_COLUMNS[:-1]]
    row.append(equality_tags(rep, D, characterization))
    return row


def report_json(rep: BoundReport, D: Digraph, characterization: str = "isolated") -> dict:
    """Flat JSON object; floats are kept at full precision."""
    out = {
        "digraph": D.code,
        "n": rep.n, "a": rep.a, "alpha": rep.alpha,
        "sum_sq_outdeg": rep.sum_sq_outdeg,
        "trace_norm": rep.trace_norm, "spectral_norm": rep.spectral_norm,
        "abs_det": rep.abs_det,
        "lower_basic": rep.lower_basic, "lower_det": rep.lower_det,
        "spectral_floor": rep.spectral_floor,
        "upper_mcclelland": rep.upper_mcclelland,
        "km_beta": rep.km_beta, "km_applicable": rep.km_applicable,
        "upper_km": rep.upper_km,
    }
    for k, v in rep.slacks.items():
        out[f"slack_{k}"] = v
    for k, v in rep.equality.items():
        out[f"equal_{k}"] = v
    out["equality"] = equality_tags(rep, D, characterization)
    return out


# --------------------------------------------------------------------------
# equality classification


def rank_one_case(D: Digraph, alpha: Alpha, flags: StructureFlags | None = None) -> EqualityCase:
    """Complete classification of ``rank A_alpha(D) = 1`` (None if rank != 1).

    At alpha = 0 the nonzero rows are equal 0/1 rows: an oriented complete
    bipartite digraph plus isolated vertices. At alpha > 0 every nonzero row has
    a nonzero diagonal entry, so the vertices with outdegree > 0 form a
    symmetric complete digraph S and share the same sink set T; with |S| = 1
    any alpha works, with |S| = m >= 2 the rows coincide iff
    alpha (m - 1 + t) = 1 - alpha.
    """
    a_val = float(alpha)
    flags = flags or classify_structure(D)
    if flags.is_discrete:
        return NO_CASE
    if _alpha_is(a_val, 0.0):
        if flags.ocb_plus_isolated:
            r, s = flags.ocb_plus_isolated
            return EqualityCase("OcbAtAlphaZero", (r, s, flags.isolated))
        return NO_CASE

    adj = D.adjacency
    dout, din = D.out_degrees, D.in_degrees
    S = np.nonzero(dout > 0)[0]
    m = len(S)
    T = np.nonzero((dout == 0) & (din > 0))[0]
    t = len(T)
    expected = np.zeros_like(adj)
    expected[np.ix_(S, np.concatenate([S, T]))] = True
    expected[S, S] = False
    if not (adj == expected).all():
        return NO_CASE
    isolated = D.n - m - t
    if m == 1:
        return EqualityCase("OutStar", (t, isolated))
    if not _alpha_is(a_val, 1.0 / (m + t)):
        return NO_CASE
    if m == 2 and t == 0:
        return EqualityCase("SymK2AtHalf", (isolated,))
    return EqualityCase("DominatingClique", (m, t, isolated))


def _sym_k2(flags: StructureFlags, D: Digraph) -> bool:
    return flags.is_symmetric and D.arc_count == 2 and D.n - flags.isolated == 2


def stated_rank_one_case(
    D: Digraph, alpha: Alpha, characterization: str = "isolated",
    flags: StructureFlags | None = None,
) -> EqualityCase:
    """Rank-one cases as stated: alpha = 0 with K_{r,s} plus isolated vertices,
    or alpha = 1/2 with the symmetric 2-cycle (isolated vertices allowed unless
    ``characterization == "strict"``)."""
    a_val = float(alpha)
    flags = flags or classify_structure(D)
    if _alpha_is(a_val, 0.0) and flags.ocb_plus_isolated:
        r, s = flags.ocb_plus_isolated
        return EqualityCase("OcbAtAlphaZero", (r, s, flags.isolated))
    if _alpha_is(a_val, 0.5) and _sym_k2(flags, D):
        if characterization != "strict" or flags.isolated == 0:
            return EqualityCase("SymK2AtHalf", (flags.isolated,))
    return NO_CASE


def expected_rank_one(D: Digraph, alpha: Alpha, characterization: str = "isolated") -> EqualityCase:
    if characterization == "extended":
        return rank_one_case(D, alpha)
    return stated_rank_one_case(D, alpha, characterization)


def classify_equality(
    D: Digraph,
    alpha: Alpha,
    which: str,
    characterization: str = "isolated",
    report: BoundReport | None = None,
    flags: StructureFlags | None = None,
    spectrum: SingularSpectrum | None = None,
) -> EqualityCase:
    """Structural case under which bound ``which`` is attained by ``(D, alpha)``.

    Returns :data:`NO_CASE` when ``D`` matches none of the cases for the chosen
    ``characterization`` (see the module docstring).
    """
    if which not in BOUND_IDS:
        raise ValueError(f"unknown bound id {which!r}; expected one of {BOUND_IDS}")
    if characterization not in CHARACTERIZATIONS:
        raise ValueError(f"unknown characterization {characterization!r}")
    a_val = float(check_alpha(alpha))
    flags = flags or classify_structure(D)

    if which != "upper_km" and flags.is_discrete:
        return EqualityCase("Discrete")
    cycles_at_zero = _alpha_is(a_val, 0.0) and flags.is_permutation_digraph

    if which == "upper_mcclelland":
        return EqualityCase("CycleDirectSumAtAlphaZero") if cycles_at_zero else NO_CASE

    if which in ("lower_det", "lower_basic"):
        if which == "lower_det" and cycles_at_zero:
            return EqualityCase("CycleDirectSumAtAlphaZero")
        if characterization == "extended":
            case = rank_one_case(D, a_val, flags)
            if not case and which == "lower_det" and D.n == 2:
                # one product sigma_1 sigma_2: AM-GM is an identity
                return EqualityCase("OrderTwo")
            return case
        return stated_rank_one_case(D, a_val, characterization, flags)

    # upper_km
    report = report or bound_report(D, a_val, spectrum=spectrum)
    if not report.km_applicable:
        return NO_CASE
    if cycles_at_zero:
        return EqualityCase("CycleDirectSumAtAlphaZero")
    n, arcs = D.n, D.arc_count
    if flags.regular_degree is None:
        return NO_CASE
    spec = (spectrum or alpha_spectrum(D, a_val)).values
    sigma_sq = (report.frobenius - (arcs / n) ** 2) / (n - 1)
    sigma = math.sqrt(max(sigma_sq, 0.0))
    if abs(spec[0] - arcs / n) > EQ_TOL or np.abs(spec[1:] - sigma).max() > EQ_TOL:
        return NO_CASE
    return EqualityCase("RegularTwoSingularValues", (arcs / n, sigma))


def spectral_floor_check(D: Digraph, alpha: Alpha) -> tuple[float, bool]:
    if D.n < 2:
        raise ValueError("spectral floor needs n >= 2")
    floor = D.arc_count / D.n
    sigma1 = alpha_spectrum(D, alpha).spectral_norm
    return floor, abs(sigma1 - floor) <= EQ_TOL


def is_symmetric_bibd(D: Digraph) -> tuple[int, int, int] | None:
    """``(n, k, lambda)`` if ``A A^T = lambda J + (k - lambda) I`` exactly."""
    A = D.adjacency.astype(np.int64)
    G = A @ A.T
    n = D.n
    k = int(G[0, 0])
    lam = int(G[0, 1]) if n > 1 else 0
    target = np.full((n, n), lam, dtype=np.int64)
    np.fill_diagonal(target, k)
    if (G == target).all():
        return n, k, lam
    return None
