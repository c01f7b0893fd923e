"""Measurements of an invocation graph embedded in a political spectrum.

All functions accept any graph-like object exposing ``nodes`` and an
``edges`` mapping ``(src, dst) -> weight`` (InvocationGraph or RewiredGraph).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateDataError, PreconditionError
from .graphbuild import InvocationGraph
from .spectrum import Spectrum

Mode = Literal["count", "weight"]


@dataclass(frozen=True)
class OutlinkStats:
    domain: str
    mu_out: float
    mu_global_excl: float
    out_volume: int

    @property
    def delta_out(self) -> float:
        return self.mu_out - self.mu_global_excl


@dataclass(frozen=True)
class SlopeResult:
    month: str
    slope: float
    intercept: float
    n_points: int


@dataclass(frozen=True)
class AsymmetryStats:
    domain: str
    in_weight: int
    out_weight: int

    @property
    def r(self) -> float:
        return self.in_weight / (self.in_weight + self.out_weight)


@dataclass(frozen=True)
class AsymmetryReport:
    stats: tuple[AsymmetryStats, ...]
    slope: float | None
    intercept: float | None


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    mass: np.ndarray


@dataclass(frozen=True)
class CrossingProfile:
    """Piecewise-constant f-> / f<- over [0, 1].

    ``f_right[i]``/``f_left[i]`` hold the value on the open interval between
    ``breakpoints[i]`` and ``breakpoints[i + 1]``; ``right_at``/``left_at`` hold
    the value exactly at each breakpoint. Both are zero outside the breakpoints.
    Monte Carlo profiles also carry standard errors (``*_se``).
    """

    breakpoints: np.ndarray
    f_right: np.ndarray
    f_left: np.ndarray
    right_at: np.ndarray
    left_at: np.ndarray
    mode: str
    f_right_se: np.ndarray | None = None
    f_left_se: np.ndarray | None = None
    right_at_se: np.ndarray | None = None
    left_at_se: np.ndarray | None = None

    def value(self, y: float) -> tuple[float, float]:
        b = self.breakpoints
        if len(b) == 0 or y < b[0] or y > b[-1]:
            return 0.0, 0.0
        j = int(np.searchsorted(b, y))
        if j < len(b) and b[j] == y:
            return float(self.right_at[j]), float(self.left_at[j])
        return float(self.f_right[j - 1]), float(self.f_left[j - 1])

    def integral(self) -> tuple[float, float]:
        widths = np.diff(self.breakpoints)
        return float(np.dot(self.f_right, widths)), float(np.dot(self.f_left, widths))

    def rows(self) -> list[tuple[float, float, float, float]]:
        """``(y_lo, y_hi, f_right, f_left)`` covering [0, 1]; point rows have y_lo == y_hi."""
        b = self.breakpoints
        if len(b) == 0:
            return [(0.0, 1.0, 0.0, 0.0)]
        out = []
        if b[0] > 0:
            out.append((0.0, float(b[0]), 0.0, 0.0))
        for j in range(len(b)):
            out.append((float(b[j]), float(b[j]), float(self.right_at[j]), float(self.left_at[j])))
            if j + 1 < len(b):
                out.append((float(b[j]), float(b[j + 1]), float(self.f_right[j]), float(self.f_left[j])))
        if b[-1] < 1:
            out.append((float(b[-1]), 1.0, 0.0, 0.0))
        return out


def node_scores(G, spec: Spectrum) -> dict[str, float]:
    missing = sorted(n for n in G.nodes if n not in spec)
    if missing:
        shown = ", ".join(missing[:5]) + (" ..." if len(missing) > 5 else "")
        raise PreconditionError(f"{len(missing)} graph node(s) have no political score: {shown}")
    return {n: spec.score(n) for n in G.nodes}


def restrict_to_scored(G: InvocationGraph, spec: Spectrum) -> InvocationGraph:
    """Drop nodes without a score (and their edges). The result may be disconnected."""
    nodes = frozenset(n for n in G.nodes if n in spec)
    edges = {e: w for e, w in G.edges.items() if e[0] in nodes and e[1] in nodes}
    return InvocationGraph(month=G.month, nodes=nodes, edges=edges)


def ols(x: Sequence[float], y: Sequence[float], w: Sequence[float] | None = None) -> tuple[float, float]:
    """Least-squares line through (x, y); returns (slope, intercept)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(x) if w is None else np.asarray(w, dtype=float)
    if len(x) < 2:
        raise DegenerateDataError(f"regression needs at least 2 points, got {len(x)}")
    sw = w.sum()
    mx, my = np.dot(w, x) / sw, np.dot(w, y) / sw
    sxx = np.dot(w, (x - mx) ** 2)
    if sxx == 0:
        raise DegenerateDataError("regression is undefined: all x values are equal")
    slope = np.dot(w, (x - mx) * (y - my)) / sxx
    return float(slope), float(my - slope * mx)


# --------------------------------------------------------------------------
# out-link distributions
# --------------------------------------------------------------------------


def _landing_sums(G, s: dict[str, float]):
    out_w: dict[str, int] = dict.fromkeys(G.nodes, 0)
    in_w: dict[str, int] = dict.fromkeys(G.nodes, 0)
    loop_w: dict[str, int] = dict.fromkeys(G.nodes, 0)
    out_land: dict[str, float] = dict.fromkeys(G.nodes, 0.0)
    for (src, dst), w in G.edges.items():
        out_w[src] += w
        in_w[dst] += w
        out_land[src] += w * s[dst]
        if src == dst:
            loop_w[src] += w
    return out_w, in_w, loop_w, out_land


def _outlink(x, s, out_w, in_w, loop_w, out_land, total_w, total_land) -> OutlinkStats:
    if out_w[x] == 0:
        raise DegenerateDataError(f"{x} has no out-links; its out-link mean is undefined")
    # G\x drops edges out of x and into x; a self-loop (rewired graphs only)
    # is in both sets, so add it back once.
    rest_w = total_w - out_w[x] - in_w[x] + loop_w[x]
    if rest_w <= 0:
        raise DegenerateDataError(f"the graph without {x} has no edges; baseline is undefined")
    rest_land = total_land - out_land[x] - (in_w[x] - loop_w[x]) * s[x]
    return OutlinkStats(x, out_land[x] / out_w[x], rest_land / rest_w, out_w[x])


def outlink_stats(G, spec: Spectrum, x: str) -> OutlinkStats:
    if x not in G.nodes:
        raise PreconditionError(f"{x} is not a node of the graph")
    s = node_scores(G, spec)
    sums = _landing_sums(G, s)
    return _outlink(x, s, *sums, sum(sums[0].values()), sum(sums[3].values()))


def all_outlink_stats(G, spec: Spectrum) -> list[OutlinkStats]:
    """Stats for every domain where they are defined, sorted by domain."""
    s = node_scores(G, spec)
    sums = _landing_sums(G, s)
    total_w, total_land = sum(sums[0].values()), sum(sums[3].values())
    stats = []
    for x in sorted(G.nodes):
        try:
            stats.append(_outlink(x, s, *sums, total_w, total_land))
        except DegenerateDataError:
            continue
    return stats


def slope(G, spec: Spectrum, weighted: bool = False) -> SlopeResult:
    """OLS slope of delta_out against score, one point per domain with out-links.

    With ``weighted=True`` each point is weighted by the domain's out-volume.
    """
    stats = all_outlink_stats(G, spec)
    if len(stats) < 2:
        raise DegenerateDataError(f"slope needs >= 2 domains with defined delta_out, got {len(stats)}")
    x = [spec.score(st.domain) for st in stats]
    y = [st.delta_out for st in stats]
    w = [st.out_volume for st in stats] if weighted else None
    a, b = ols(x, y, w)
    return SlopeResult(getattr(G, "month", ""), a, b, len(stats))


# --------------------------------------------------------------------------
# edge lengths and crossings
# --------------------------------------------------------------------------


def edge_length_histogram(G, spec: Spectrum, bins: int = 20, weighted: bool = True) -> Histogram:
    if bins < 1:
        raise PreconditionError("bins must be a positive integer")
    s = node_scores(G, spec)
    lengths = [abs(s[a] - s[b]) for a, b in G.edges]
    weights = list(G.edges.values()) if weighted else None
    mass, edges = np.histogram(lengths, bins=bins, range=(0.0, 1.0), weights=weights)
    return Histogram(edges, mass.astype(float))


def _edge_arrays(G, s: dict[str, float]):
    keys = sorted(G.edges)
    src = np.array([s[a] for a, _ in keys], dtype=float)
    dst = np.array([s[b] for _, b in keys], dtype=float)
    w = np.array([G.edges[k] for k in keys], dtype=float)
    return src, dst, w


def crossing_from_arrays(
    breakpoints: np.ndarray, src: np.ndarray, dst: np.ndarray, w: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Crossing values for scored edges: (f_right, f_left, right_at, left_at).

    ``src``/``dst`` must be scores drawn from ``breakpoints``.
    """
    k = len(breakpoints)
    i_s = np.searchsorted(breakpoints, src)
    i_d = np.searchsorted(breakpoints, dst)

    def spread(lo, hi, weight):
        # interval j lies between breakpoints j and j+1: covered for lo <= j < hi
        diff = np.bincount(lo, weight, k + 1) - np.bincount(hi, weight, k + 1)
        intervals = np.cumsum(diff)[: max(k - 1, 0)]
        # breakpoint j strictly inside: lo < j < hi
        inner = hi - lo >= 2
        pdiff = np.bincount(lo[inner] + 1, weight[inner], k + 1) - np.bincount(hi[inner], weight[inner], k + 1)
        points = np.cumsum(pdiff)[:k]
        return intervals, points

    right = i_s < i_d
    left = i_s > i_d
    f_r, r_at = spread(i_s[right], i_d[right], w[right])
    f_l, l_at = spread(i_d[left], i_s[left], w[left])
    return f_r, f_l, r_at, l_at


def crossing_profile(G, spec: Spectrum, mode: Mode = "count") -> CrossingProfile:
    """f->(y) counts edges with s(src) < y < s(dst); f<-(y) the reverse. Inequalities are strict."""
    if mode not in ("count", "weight"):
        raise PreconditionError(f"unknown crossing mode {mode!r}")
    s = node_scores(G, spec)
    bp = np.unique(np.fromiter(s.values(), dtype=float, count=len(s)))
    src, dst, w = _edge_arrays(G, s)
    if mode == "count":
        w = np.ones_like(w)
    f_r, f_l, r_at, l_at = crossing_from_arrays(bp, src, dst, w)
    return CrossingProfile(bp, f_r, f_l, r_at, l_at, mode)


def crossing_at(G, spec: Spectrum, y: float, mode: Mode = "count") -> tuple[float, float]:
    """Direct evaluation of (f->(y), f<-(y)) by scanning every edge."""
    s = node_scores(G, spec)
    right = left = 0.0
    for (a, b), w in G.edges.items():
        inc = w if mode == "weight" else 1
        if s[a] < y < s[b]:
            right += inc
        elif s[a] > y > s[b]:
            left += inc
    return right, left


# --------------------------------------------------------------------------
# in/out asymmetry
# --------------------------------------------------------------------------


def asymmetry(G, spec: Spectrum, weighted: bool = True) -> AsymmetryReport:
    """r(x) = in / (in + out) per domain, plus the OLS slope of r against score.

    Isolated nodes are skipped. The slope is None when fewer than two domains
    (or only one distinct score) remain.
    """
    s = node_scores(G, spec)
    in_d = dict.fromkeys(G.nodes, 0)
    out_d = dict.fromkeys(G.nodes, 0)
    for (a, b), w in G.edges.items():
        inc = w if weighted else 1
        out_d[a] += inc
        in_d[b] += inc
    stats = tuple(
        AsymmetryStats(x, in_d[x], out_d[x]) for x in sorted(G.nodes) if in_d[x] + out_d[x] > 0
    )
    try:
        a, b = ols([s[st.domain] for st in stats], [st.r for st in stats])
    except DegenerateDataError:
        a = b = None
    return AsymmetryReport(stats, a, b)
