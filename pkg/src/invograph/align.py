"""Per-axis scale alignment of two-dimensional spectra and rank agreement.

Aligning a source spectrum to a target means choosing factors a, b that
minimise the distance between (p_c, p_t) of the target and (a p_c, b p_t) of
the source over their shared domains. The problem separates by axis into
``min_c sum f(u_i - c v_i)`` with f = square (closed form) or f = abs
(weighted median of the ratios u_i / v_i).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import DegenerateDataError, PreconditionError
from .spectrum import Spectrum, SpectrumPoint

Norm = Literal["l1", "l2"]


def solve_l2_scale(u: Sequence[float], v: Sequence[float]) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1 or len(u) == 0:
        raise PreconditionError("u and v must be non-empty vectors of equal length")
    vv = float(np.dot(v, v))
    if vv == 0:
        raise DegenerateDataError("scale is undefined: v is the zero vector")
    return float(np.dot(v, u)) / vv


def solve_l1_scale(u: Sequence[float], v: Sequence[float]) -> float:
    """Minimiser of sum |u_i - c v_i| for non-negative v.

    The objective is piecewise linear with kinks at the ratios u_i / v_i, and
    its slope changes sign at the v-weighted median ratio. On a flat stretch
    (the v's split exactly in half) the lower end is returned.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1 or len(u) == 0:
        raise PreconditionError("u and v must be non-empty vectors of equal length")
    if np.any(v < 0):
        raise PreconditionError("l1 scale fitting needs non-negative v")
    keep = v > 0
    if not keep.any():
        raise DegenerateDataError("scale is undefined: every v_i is zero")
    u, v = u[keep], v[keep]
    ratios = u / v
    order = np.argsort(ratios, kind="stable")
    ratios, v = ratios[order], v[order]
    cum = np.cumsum(v)
    k = int(np.searchsorted(cum, cum[-1] / 2.0, side="left"))
    return float(ratios[k])


def l2_objective(u, v, c: float) -> float:
    r = np.asarray(u, dtype=float) - c * np.asarray(v, dtype=float)
    return float(np.dot(r, r))


def l1_objective(u, v, c: float) -> float:
    return float(np.abs(np.asarray(u, dtype=float) - c * np.asarray(v, dtype=float)).sum())


_SOLVERS = {"l1": (solve_l1_scale, l1_objective), "l2": (solve_l2_scale, l2_objective)}


@dataclass(frozen=True)
class AlignmentResult:
    scale_a: float
    scale_b: float
    objective: float
    norm: str
    per_domain_residuals: Mapping[str, tuple[float, float]]


def _columns(spec_target: Spectrum, spec_source: Spectrum):
    common = sorted(set(spec_target.points) & set(spec_source.points))
    if not common:
        raise PreconditionError("spectra share no domains")
    tc = np.array([spec_target.points[d].p_c for d in common])
    tt = np.array([spec_target.points[d].p_t for d in common])
    sc = np.array([spec_source.points[d].p_c for d in common])
    st = np.array([spec_source.points[d].p_t for d in common])
    return common, tc, tt, sc, st


def _align_columns(common, tc, tt, sc, st, norm: Norm) -> AlignmentResult:
    if norm not in _SOLVERS:
        raise PreconditionError(f"unknown norm {norm!r}")
    solve, objective = _SOLVERS[norm]
    a = solve(tc, sc)
    b = solve(tt, st)
    residuals = {d: (float(tc[i] - a * sc[i]), float(tt[i] - b * st[i])) for i, d in enumerate(common)}
    total = objective(tc, sc, a) + objective(tt, st, b)
    return AlignmentResult(a, b, total, norm, residuals)


def align_spectra(spec_target: Spectrum, spec_source: Spectrum, norm: Norm = "l2") -> AlignmentResult:
    """Scale ``spec_source``'s axes onto ``spec_target`` over their shared domains."""
    return _align_columns(*_columns(spec_target, spec_source), norm)


def alignment_objective(spec_target: Spectrum, spec_source: Spectrum, a: float, b: float, norm: Norm) -> float:
    """Distance at arbitrary factors (a, b); used to check optimality."""
    _, tc, tt, sc, st = _columns(spec_target, spec_source)
    _, objective = _SOLVERS[norm]
    return objective(tc, sc, a) + objective(tt, st, b)


def scaled_spectrum(spec: Spectrum, a: float, b: float) -> Spectrum:
    return Spectrum(spec.period, {d: SpectrumPoint(d, a * p.p_c, b * p.p_t) for d, p in spec.points.items()})


@dataclass(frozen=True)
class ShuffledBaseline:
    real: AlignmentResult
    null_objectives: np.ndarray
    quantile: float

    @property
    def real_objective(self) -> float:
        return self.real.objective


def shuffled_alignment_baseline(
    spec_a: Spectrum, spec_b: Spectrum, norm: Norm = "l1", trials: int = 1000, rng_seed: int = 0
) -> ShuffledBaseline:
    """Alignment cost of the real labelling versus random relabellings of ``spec_b``.

    ``quantile`` is the fraction of null objectives at or below the real one.
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    common, tc, tt, sc, st = _columns(spec_a, spec_b)
    real = _align_columns(common, tc, tt, sc, st, norm)
    rng = np.random.default_rng(rng_seed)
    null = np.empty(trials)
    for i in range(trials):
        perm = rng.permutation(len(common))
        null[i] = _align_columns(common, tc, tt, sc[perm], st[perm], norm).objective
    return ShuffledBaseline(real, null, float(np.mean(null <= real.objective)))


# --------------------------------------------------------------------------
# Spearman rank correlation of two orderings
# --------------------------------------------------------------------------


def _rank_positions(order_a: Sequence[str], order_b: Sequence[str]) -> np.ndarray:
    """Position in ``order_b`` of each item of ``order_a``, validating both orderings."""
    if len(set(order_a)) != len(order_a) or len(set(order_b)) != len(order_b):
        raise PreconditionError("orderings must not repeat items (tied ranks are not supported)")
    if set(order_a) != set(order_b):
        only_a = sorted(set(order_a) - set(order_b))
        only_b = sorted(set(order_b) - set(order_a))
        raise PreconditionError(f"orderings rank different items (only in a: {only_a}, only in b: {only_b})")
    if len(order_a) < 2:
        raise DegenerateDataError("rank correlation needs at least 2 items")
    pos = {item: i for i, item in enumerate(order_b)}
    return np.array([pos[item] for item in order_a], dtype=np.int64)


def spearman_sum_d2(order_a: Sequence[str], order_b: Sequence[str]) -> int:
    pos_b = _rank_positions(order_a, order_b)
    d = pos_b - np.arange(len(order_a))
    return int(np.dot(d, d))


def spearman(order_a: Sequence[str], order_b: Sequence[str]) -> float:
    """rho = 1 - 6 sum d^2 / (n (n^2 - 1)) for two tie-free orderings of the same items."""
    n = len(order_a)
    return 1.0 - 6.0 * spearman_sum_d2(order_a, order_b) / (n * (n * n - 1))


def strict_ranking(scores: Mapping[str, float], descending: bool = True) -> list[str]:
    """Order items by score, refusing ties."""
    values = list(scores.values())
    if len(set(values)) != len(values):
        raise PreconditionError("scores contain ties; a strict ranking is undefined")
    return sorted(scores, key=scores.__getitem__, reverse=descending)
