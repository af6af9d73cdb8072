"""The A_alpha matrix of a digraph and its singular values.

``A_alpha(D) = alpha * diag(outdegrees) + (1 - alpha) * A(D)`` for
``0 <= alpha < 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .digraph import Digraph

Alpha = Union[float, Fraction]

MAX_RANK_DENOMINATOR = 64
DET_ZERO_CUTOFF = 1e-12
GROUP_RTOL = 1e-8


class AlphaError(ValueError):
    pass


def check_alpha(alpha: Alpha) -> Alpha:
    try:
        ok = 0 <= alpha < 1
    except TypeError:
        ok = False
    if not ok or (isinstance(alpha, float) and not np.isfinite(alpha)):
        raise AlphaError(f"alpha must satisfy 0 <= alpha < 1, got {alpha}")
    return alpha


def parse_alpha(text: str) -> Fraction:
    """Read ``"0.25"`` or ``"1/4"`` exactly as a rational."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise AlphaError(f"cannot read alpha value {text!r}") from None
    check_alpha(value)
    return value


def as_fraction(alpha: Alpha) -> Fraction:
    """Exact rational for ``alpha``; floats go through their shortest repr,
    so ``0.1`` becomes ``1/10``."""
    if isinstance(alpha, Fraction):
        return alpha
    return Fraction(repr(float(alpha)))


def build_alpha_matrix(D: Digraph, alpha: Alpha) -> np.ndarray:
    a = float(check_alpha(alpha))
    adj = D.adjacency.astype(float)
    return a * np.diag(adj.sum(axis=1)) + (1.0 - a) * adj


def alpha_matrix_stack(adjacency: np.ndarray, alpha: Alpha) -> np.ndarray:
    """:func:`build_alpha_matrix` over a ``(k, n, n)`` stack of adjacencies."""
    a = float(check_alpha(alpha))
    adj = adjacency.astype(float)
    out = (1.0 - a) * adj
    n = adj.shape[-1]
    idx = np.arange(n)
    out[..., idx, idx] = a * adj.sum(axis=-1)
    return out


def gram_matrix(M: np.ndarray) -> np.ndarray:
    return M @ M.T


@dataclass(frozen=True)
class SingularSpectrum:
    """Nonincreasing singular values of a square matrix."""

    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def trace_norm(self) -> float:
        return float(self.values.sum())

    @property
    def spectral_norm(self) -> float:
        return float(self.values[0]) if self.n else 0.0

    @property
    def abs_det(self) -> float:
        return float(np.prod(self.values))

    def grouped(self, rtol: float = GROUP_RTOL, atol: float = 1e-12) -> list[tuple[float, int]]:
        """``(value, multiplicity)`` pairs; a value joins the current group when
        it is within ``rtol`` of the group's first value (or ``atol`` of zero)."""
        groups: list[list] = []
        for v in self.values.tolist():
            if groups:
                head = groups[-1][0]
                if abs(head - v) <= max(rtol * abs(head), atol):
                    groups[-1][1] += 1
                    continue
            groups.append([v, 1])
        return [(float(v), m) for v, m in groups]

    def __iter__(self):
        return iter(self.values.tolist())


def singular_values(M: np.ndarray) -> SingularSpectrum:
    # LAPACK SVD rather than sqrt(eig(M M^T)): the Gram route loses zeros to
    # ~sqrt(eps) and misses the 1e-9 tolerance on K_{r,s}.
    values = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    values = np.clip(values, 0.0, None)
    values.setflags(write=False)
    return SingularSpectrum(values)


def alpha_spectrum(D: Digraph, alpha: Alpha) -> SingularSpectrum:
    return singular_values(build_alpha_matrix(D, alpha))


def trace_norm(D: Digraph, alpha: Alpha) -> float:
    return alpha_spectrum(D, alpha).trace_norm


def abs_determinant(M: np.ndarray) -> float:
    # getrf: LU with partial pivoting
    sign, logdet = np.linalg.slogdet(np.asarray(M, dtype=float))
    return 0.0 if sign == 0 else float(np.exp(logdet))


def frobenius_identity(D: Digraph, alpha: Alpha) -> float:
    """``(1-alpha)^2 a + alpha^2 sum(d_i^+)^2``, the sum of squared singular values."""
    a = float(alpha)
    dout = D.out_degrees.astype(float)
    return (1 - a) ** 2 * D.arc_count + a * a * float((dout ** 2).sum())


# --------------------------------------------------------------------------
# rank


def integer_alpha_matrix(D: Digraph, alpha: Alpha) -> list[list[int]]:
    """``q * A_alpha`` as integers, where ``alpha = p/q``; same rank as A_alpha."""
    frac = as_fraction(check_alpha(alpha))
    p, q = frac.numerator, frac.denominator
    adj = D.adjacency
    dout = D.out_degrees.tolist()
    n = D.n
    return [
        [p * dout[i] if i == j else (q - p) * int(adj[i, j]) for j in range(n)]
        for i in range(n)
    ]


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pr = m[rank]
        for r in range(rank + 1, n_rows):
            row = m[r]
            f = row[col]
            for c in range(col + 1, n_cols):
                row[c] = (pr[col] * row[c] - f * pr[c]) // prev
            row[col] = 0
        prev = pr[col]
        rank += 1
        if rank == n_rows:
            break
    return rank


def numerical_rank(D: Digraph, alpha: Alpha, mode: str = "numeric") -> int:
    """Rank of A_alpha(D).

    ``mode="numeric"`` counts singular values above ``n * eps * sigma_1 + 1e-12``;
    ``mode="exact"`` eliminates over the integers and needs ``alpha = p/q`` with
    ``q <= 64``.
    """
    if mode == "numeric":
        sv = alpha_spectrum(D, alpha).values
        cutoff = D.n * np.finfo(float).eps * (sv[0] if len(sv) else 0.0) + 1e-12
        return int((sv > cutoff).sum())
    if mode in ("exact", "exact-rational"):
        frac = as_fraction(check_alpha(alpha))
        if frac.denominator > MAX_RANK_DENOMINATOR:
            raise AlphaError(
                f"exact rank needs alpha = p/q with q <= {MAX_RANK_DENOMINATOR}, got {frac}"
            )
        return bareiss_rank(integer_alpha_matrix(D, frac))
    raise ValueError(f"unknown rank mode {mode!r}")
