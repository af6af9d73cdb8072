"""Closed-form alpha-singular values of the named families."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alphamat import Alpha, check_alpha
from .digraph import Family


class UnsupportedFamily(ValueError):
    pass


@dataclass(frozen=True)
class ClosedFormSpectrum:
    family: Family
    alpha: float
    groups: tuple[tuple[float, int], ...]

    @property
    def values(self) -> np.ndarray:
        """Flattened, nonincreasing."""
        flat = [v for v, m in self.groups for _ in range(m)]
        return np.array(sorted(flat, reverse=True))

    @property
    def trace_norm(self) -> float:
        return float(sum(v * m for v, m in self.groups))


def _cos_sq_form(a: float, theta: float) -> float:
    # 2a^2 - 2a + 1 + 2a(1-a)cos(theta), rewritten without cancellation
    return math.sqrt((1 - 2 * a) ** 2 + 4 * a * (1 - a) * math.cos(theta / 2) ** 2)


def cycle_value(n: int, j: int, alpha: float, coefficient: float = 2.0) -> float:
    """One cycle singular value with a configurable cosine coefficient.

    ``coefficient=2`` is the correct value; ``coefficient=1`` is the variant
    used only by :func:`alphaspectra.verify.arbitrate_cycle_coefficient`.
    """
    a = alpha
    if coefficient == 2.0:
        return _cos_sq_form(a, 2 * j * math.pi / n)
    sq = 2 * a * a - 2 * a + 1 + coefficient * a * (1 - a) * math.cos(2 * j * math.pi / n)
    return math.sqrt(max(sq, 0.0))


def closed_form_spectrum(spec: Family, alpha: Alpha) -> ClosedFormSpectrum:
    a = float(check_alpha(alpha))
    kind, p = spec.kind, spec.params
    if kind == "path":
        n = p[0]
        vals = [0.0] + [_cos_sq_form(a, j * math.pi / n) for j in range(1, n)]
        groups = [(v, 1) for v in vals]
    elif kind == "cycle":
        n = p[0]
        groups = [(cycle_value(n, j, a), 1) for j in range(n)]
    elif kind == "kbip":
        r, s = p
        groups = [(0.0, s), (a * s, r - 1), (math.sqrt(a * a * s * s + (1 - a) ** 2 * s * r), 1)]
    elif kind == "symk":
        n = p[0]
        groups = [(float(n - 1), 1), (abs(n * a - 1), n - 1)]
    elif kind == "shrikhande":
        groups = [(6.0, 1), (2 + 4 * a, 6), (abs(8 * a - 2), 9)]
    elif kind == "discrete":
        groups = [(0.0, p[0])]
    else:
        raise UnsupportedFamily(f"no closed form for family {kind!r}")
    groups = [(v, m) for v, m in groups if m > 0]
    groups.sort(key=lambda g: -g[0])
    return ClosedFormSpectrum(spec, a, tuple(groups))


def supports_closed_form(spec: Family) -> bool:
    return spec.kind != "symgraph"
