"""Null models: configuration-model rewiring, expected crossings, user shuffles
and a Spearman permutation test.

Randomized functions take an integer seed and are deterministic given it.
Monte Carlo loops derive one 64-bit seed per trial from the caller's seed, so
any single trial can be replayed with :func:`rewire`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Literal, Mapping, Sequence

import numpy as np

from .align import spearman_sum_d2, _rank_positions
from .embedmetrics import CrossingProfile, Mode, crossing_from_arrays, node_scores
from .errors import DegenerateDataError, PreconditionError
from .ingest import RedditComment
from .spectrum import Spectrum

Scope = Literal["global", "monthly"]


@dataclass(frozen=True)
class RewiredGraph:
    """Configuration-model sample. Self-loops and merged parallel stubs are allowed."""

    nodes: frozenset[str]
    edges: Mapping[tuple[str, str], int]
    rng_seed: int


def trial_seeds(rng_seed: int, trials: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(rng_seed).generate_state(trials, dtype=np.uint64)]


class _Stubs:
    """Unit stubs of a weighted digraph, laid out in lexicographic edge order."""

    def __init__(self, G):
        self.nodes = sorted(G.nodes)
        index = {n: i for i, n in enumerate(self.nodes)}
        keys = sorted(G.edges)
        weights = np.array([G.edges[k] for k in keys], dtype=np.int64)
        src = np.array([index[a] for a, _ in keys], dtype=np.int64)
        dst = np.array([index[b] for _, b in keys], dtype=np.int64)
        self.out_stubs = np.repeat(src, weights)
        self.in_stubs = np.repeat(dst, weights)

    def sample(self, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """One uniform matching, aggregated: (src_index, dst_index, weight)."""
        rng = np.random.default_rng(seed)
        matched = self.in_stubs[rng.permutation(len(self.in_stubs))]
        n = len(self.nodes)
        codes = self.out_stubs * n + matched
        if n * n <= 4 * len(codes) + 1024:
            counts = np.bincount(codes, minlength=n * n)
            codes = np.flatnonzero(counts)
            counts = counts[codes]
        else:
            codes, counts = np.unique(codes, return_counts=True)
        return codes // n, codes % n, counts


def rewire(G, rng_seed: int) -> RewiredGraph:
    """Match every unit out-stub to a uniformly random unit in-stub.

    Weighted in- and out-degrees of every node are preserved exactly.
    """
    if not G.edges:
        raise PreconditionError("cannot rewire a graph without edges")
    stubs = _Stubs(G)
    src, dst, w = stubs.sample(rng_seed)
    names = stubs.nodes
    edges = {(names[a], names[b]): int(c) for a, b, c in zip(src, dst, w)}
    return RewiredGraph(frozenset(G.nodes), edges, rng_seed)


def _degrees(G) -> tuple[dict[str, int], dict[str, int]]:
    out_d = dict.fromkeys(G.nodes, 0)
    in_d = dict.fromkeys(G.nodes, 0)
    for (a, b), w in G.edges.items():
        out_d[a] += w
        in_d[b] += w
    return out_d, in_d


def analytic_expected_crossing(G, spec: Spectrum) -> CrossingProfile:
    """Weight-mode E[f->(y)] = out-weight left of y * in-weight right of y / total weight."""
    s = node_scores(G, spec)
    total = sum(G.edges.values())
    if total == 0:
        raise DegenerateDataError("expected crossing is undefined for a graph of total weight 0")
    out_d, in_d = _degrees(G)
    bp = np.unique(np.fromiter(s.values(), dtype=float, count=len(s)))
    k = len(bp)
    out_at = np.zeros(k)
    in_at = np.zeros(k)
    for x, sx in s.items():
        j = int(np.searchsorted(bp, sx))
        out_at[j] += out_d[x]
        in_at[j] += in_d[x]
    out_le = np.cumsum(out_at)  # nodes with index <= j
    in_le = np.cumsum(in_at)
    out_tot, in_tot = out_le[-1], in_le[-1]
    # open interval j: left = index <= j, right = index >= j + 1
    f_r = out_le[:-1] * (in_tot - in_le[:-1]) / total
    f_l = (out_tot - out_le[:-1]) * in_le[:-1] / total
    # breakpoint j: left = index < j, right = index > j
    out_lt = out_le - out_at
    in_lt = in_le - in_at
    r_at = out_lt * (in_tot - in_le) / total
    l_at = (out_tot - out_le) * in_lt / total
    return CrossingProfile(bp, f_r, f_l, r_at, l_at, "weight")


def monte_carlo_crossing(G, spec: Spectrum, mode: Mode = "count", trials: int = 1000, rng_seed: int = 0) -> CrossingProfile:
    """Mean crossing profile over ``trials`` rewirings, with standard errors."""
    if trials < 2:
        raise PreconditionError("Monte Carlo crossing needs at least 2 trials for a standard error")
    s = node_scores(G, spec)
    if not G.edges:
        raise DegenerateDataError("expected crossing is undefined for a graph of total weight 0")
    stubs = _Stubs(G)
    node_score = np.array([s[n] for n in stubs.nodes])
    bp = np.unique(node_score)
    samples = []
    for seed in trial_seeds(rng_seed, trials):
        a, b, w = stubs.sample(seed)
        if mode == "count":
            w = np.ones_like(w)
        f_r, f_l, r_at, l_at = crossing_from_arrays(bp, node_score[a], node_score[b], w.astype(float))
        samples.append((f_r, f_l, r_at, l_at))
    parts = [np.array([smp[i] for smp in samples]) for i in range(4)]
    means = [p.mean(axis=0) for p in parts]
    ses = [p.std(axis=0, ddof=1) / np.sqrt(trials) for p in parts]
    return CrossingProfile(bp, means[0], means[1], means[2], means[3], mode, ses[0], ses[1], ses[2], ses[3])


def expected_crossing(G, spec: Spectrum, mode: Mode = "weight", trials: int = 1000, rng_seed: int = 0) -> CrossingProfile:
    """Crossing profile of the rewired graph in expectation.

    Weight mode is exact (linearity over uniformly matched stubs); count mode
    has no closed form here and is estimated by Monte Carlo.
    """
    if mode == "weight":
        return analytic_expected_crossing(G, spec)
    if mode == "count":
        return monte_carlo_crossing(G, spec, "count", trials, rng_seed)
    raise PreconditionError(f"unknown crossing mode {mode!r}")


# --------------------------------------------------------------------------
# user shuffles
# --------------------------------------------------------------------------


def comment_month(c: RedditComment) -> str:
    return datetime.fromtimestamp(c.created, tz=timezone.utc).strftime("%Y-%m")


def shuffle_blocks(comments: Sequence[RedditComment], scope: Scope = "global") -> list[np.ndarray]:
    """Index groups within which authorship is exchanged, in a fixed order."""
    if scope not in ("global", "monthly"):
        raise PreconditionError(f"unknown shuffle scope {scope!r}")
    if scope == "global":
        return [np.arange(len(comments))]
    groups: dict[str, list[int]] = {}
    for i, c in enumerate(comments):
        groups.setdefault(comment_month(c), []).append(i)
    return [np.array(groups[k], dtype=np.int64) for k in sorted(groups)]


def author_permutation(n: int, blocks: Sequence[np.ndarray], rng_seed: int) -> np.ndarray:
    """``perm`` such that comment i receives the author of comment ``perm[i]``."""
    rng = np.random.default_rng(rng_seed)
    perm = np.arange(n)
    for idx in blocks:
        perm[idx] = idx[rng.permutation(len(idx))]
    return perm


def shuffle_users(comments: Sequence[RedditComment], scope: Scope = "global", rng_seed: int = 0) -> list[RedditComment]:
    """Reassign authors to comments at random, keeping each user's comment count.

    With ``scope="monthly"`` authors are only permuted among comments of the
    same calendar month (UTC), so per-user per-month counts are kept too.
    """
    perm = author_permutation(len(comments), shuffle_blocks(comments, scope), rng_seed)
    out = []
    for c, j in zip(comments, perm):
        a = comments[j].author
        out.append(c if c.author == a else replace(c, author=a))
    return out


# --------------------------------------------------------------------------
# permutation test for rank agreement
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PermutationResult:
    observed: float
    null_max: float
    fraction_at_least: float
    trials: int
    null: np.ndarray


def permutation_test_spearman(
    order_a: Sequence[str], order_b: Sequence[str], trials: int = 10000, rng_seed: int = 0
) -> PermutationResult:
    """Observed Spearman rho against rho for uniformly random re-orderings of ``order_b``."""
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    pos_b = _rank_positions(order_a, order_b)
    n = len(order_a)
    observed_d2 = spearman_sum_d2(order_a, order_b)
    denom = n * (n * n - 1)
    rng = np.random.default_rng(rng_seed)
    ranks = np.arange(n)
    d2 = np.empty(trials, dtype=np.int64)
    chunk = 20000
    for start in range(0, trials, chunk):
        m = min(chunk, trials - start)
        perms = rng.permuted(np.tile(pos_b, (m, 1)), axis=1)
        d2[start:start + m] = ((perms - ranks) ** 2).sum(axis=1)
    null = 1.0 - 6.0 * d2 / denom
    return PermutationResult(
        observed=1.0 - 6.0 * observed_d2 / denom,
        null_max=float(null.max()),
        fraction_at_least=float(np.mean(d2 <= observed_d2)),
        trials=trials,
        null=null,
    )
