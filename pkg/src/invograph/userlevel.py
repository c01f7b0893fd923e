"""User-to-user reply analysis on a discussion forum.

Users are labelled by the anchor subreddits they posted in; replies between
labelled users are counted by type over sliding 30-day windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Sequence

import numpy as np

from .embedmetrics import ols
from .errors import DegenerateDataError, PreconditionError
from .ingest import RedditComment
from .nullmodels import Scope, author_permutation, shuffle_blocks, trial_seeds

DAY = 86400
_EPOCH = date(1970, 1, 1).toordinal()
DELETED_AUTHORS = frozenset({"[deleted]", "[removed]"})
# index order of the four interaction types
TYPES = ("cc", "ct", "tc", "tt")


@dataclass(frozen=True)
class UserSets:
    clinton: frozenset[str]
    trump: frozenset[str]

    def __post_init__(self):
        if self.clinton & self.trump:
            raise PreconditionError("a user cannot be in both U_C and U_T")

    def label(self, user: str) -> str | None:
        if user in self.clinton:
            return "c"
        if user in self.trump:
            return "t"
        return None


@dataclass(frozen=True)
class InteractionWindow:
    end_date: date
    n_cc: int
    n_ct: int
    n_tc: int
    n_tt: int

    @property
    def total(self) -> int:
        return self.n_cc + self.n_ct + self.n_tc + self.n_tt


@dataclass(frozen=True)
class TrendSignificance:
    observed_slope: float
    null_slopes: tuple[float, ...]

    @property
    def min_null_slope(self) -> float:
        finite = [s for s in self.null_slopes if not math.isnan(s)]
        return min(finite) if finite else math.nan

    @property
    def significant(self) -> bool:
        # a NaN minimum (no usable null trial) compares False
        return self.observed_slope < self.min_null_slope


def classify_users(comments: Iterable[RedditComment], clinton_sub: str, trump_sub: str) -> UserSets:
    """U_C: posted in ``clinton_sub`` but never in ``trump_sub``; U_T the converse."""
    in_c, in_t = set(), set()
    for c in comments:
        if c.author in DELETED_AUTHORS:
            continue
        if c.subreddit == clinton_sub:
            in_c.add(c.author)
        elif c.subreddit == trump_sub:
            in_t.add(c.author)
    return UserSets(frozenset(in_c - in_t), frozenset(in_t - in_c))


def _parent_key(parent_id: str, index: dict[str, int]) -> int | None:
    if parent_id in index:
        return index[parent_id]
    # pushshift prefixes parents with t1_ (comment) / t3_ (submission)
    if len(parent_id) > 3 and parent_id[0] == "t" and parent_id[2] == "_":
        return index.get(parent_id[3:])
    return None


class _ReplyIndex:
    """Forum replies as arrays, so authorship can be permuted and recounted cheaply."""

    def __init__(self, forum_comments: Sequence[RedditComment], users: UserSets, include_self: bool = True):
        position = {c.id: i for i, c in enumerate(forum_comments)}
        names = sorted({c.author for c in forum_comments})
        code = {a: k for k, a in enumerate(names)}
        # 0 = U_C, 1 = U_T, -1 = unclassified
        self.label = np.array([{"c": 0, "t": 1}.get(users.label(a), -1) for a in names], dtype=np.int64)
        self.author = np.array([code[c.author] for c in forum_comments], dtype=np.int64)
        child, parent, day = [], [], []
        for i, c in enumerate(forum_comments):
            if c.parent_id is None:
                continue
            j = _parent_key(c.parent_id, position)
            if j is None:
                continue
            child.append(i)
            parent.append(j)
            day.append(c.created // DAY)
        self.child = np.array(child, dtype=np.int64)
        self.parent = np.array(parent, dtype=np.int64)
        self.day = np.array(day, dtype=np.int64)
        self.include_self = include_self
        self.n = len(forum_comments)

    def typed(self, perm: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        """(day, type index into TYPES) of every counted reply under an authorship permutation."""
        author = self.author if perm is None else self.author[perm]
        a_src, a_dst = author[self.child], author[self.parent]
        src, dst = self.label[a_src], self.label[a_dst]
        keep = (src >= 0) & (dst >= 0)
        if not self.include_self:
            keep &= a_src != a_dst
        return self.day[keep], (2 * src + dst)[keep]

    def window_counts(self, first_end: int, last_end: int, window_days: int, step_days: int,
                      perm: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
        """End-day numbers and an (n_windows, 4) count matrix."""
        day, kind = self.typed(perm)
        first = first_end - (window_days - 1)
        span = last_end - first + 1
        inside = (day >= first) & (day <= last_end)
        grid = np.bincount((day[inside] - first) * 4 + kind[inside], minlength=span * 4).reshape(span, 4)
        csum = np.vstack([np.zeros((1, 4), dtype=np.int64), np.cumsum(grid, axis=0)])
        ends = np.arange(first_end, last_end + 1, step_days)
        hi = ends - first + 1
        return ends, csum[hi] - csum[hi - window_days]


def daily_counts(
    forum_comments: Sequence[RedditComment], users: UserSets, include_self: bool = True
) -> dict[int, np.ndarray]:
    """Per-day (UTC day number) counts of the four reply types."""
    day, kind = _ReplyIndex(forum_comments, users, include_self).typed()
    counts: dict[int, np.ndarray] = {}
    for d in np.unique(day):
        counts[int(d)] = np.bincount(kind[day == d], minlength=4).astype(np.int64)
    return counts


def _date_range(forum_comments, window_days: int, start: date | None, end: date | None) -> tuple[int, int]:
    if start is None or end is None:
        if not forum_comments:
            raise DegenerateDataError("no forum comments: the date range is empty")
        days = [c.created // DAY for c in forum_comments]
        if start is None:
            start = date.fromordinal(_EPOCH + min(days))
        if end is None:
            end = date.fromordinal(_EPOCH + max(days) + window_days - 1)
    if end < start:
        raise DegenerateDataError(f"empty date range {start}..{end}")
    return start.toordinal() - _EPOCH, end.toordinal() - _EPOCH


def interaction_windows(
    forum_comments: Sequence[RedditComment],
    users: UserSets,
    window_days: int = 30,
    step_days: int = 1,
    start: date | None = None,
    end: date | None = None,
    include_self: bool = True,
) -> list[InteractionWindow]:
    """Reply counts by type for every window of ``window_days`` days ending on a step date.

    Each window is labelled by its last day and covers that day and the
    ``window_days - 1`` before it. Unless ``start``/``end`` are given, end dates
    run from the first forum day to ``window_days - 1`` days after the last, so
    every reply lands in exactly ``window_days`` daily windows.
    """
    if window_days < 1 or step_days < 1:
        raise PreconditionError("window and step must be at least one day")
    first_end, last_end = _date_range(forum_comments, window_days, start, end)
    index = _ReplyIndex(forum_comments, users, include_self)
    ends, counts = index.window_counts(first_end, last_end, window_days, step_days)
    return [
        InteractionWindow(date.fromordinal(_EPOCH + int(e)), *(int(v) for v in row))
        for e, row in zip(ends, counts)
    ]


def cross_cutting_ratio(windows: Iterable[InteractionWindow]) -> list[tuple[date, float]]:
    """(n_cc + n_tt) / (n_ct + n_tc) per window; windows with no cross-type replies are omitted."""
    series = []
    for w in windows:
        cross = w.n_ct + w.n_tc
        if cross > 0:
            series.append((w.end_date, (w.n_cc + w.n_tt) / cross))
    return series


def series_slope(series: Sequence[tuple[date, float]]) -> float:
    """OLS slope of the ratio per day."""
    if len(series) < 2:
        raise DegenerateDataError(f"trend needs at least 2 windows, got {len(series)}")
    x = [d.toordinal() for d, _ in series]
    y = [r for _, r in series]
    return ols(x, y)[0]


def _ratio_slope(ends: np.ndarray, counts: np.ndarray) -> float:
    cross = counts[:, 1] + counts[:, 2]
    keep = cross > 0
    if keep.sum() < 2:
        return math.nan
    x = (ends[keep] + _EPOCH).astype(float)
    y = (counts[keep, 0] + counts[keep, 3]) / cross[keep]
    try:
        return ols(x, y)[0]
    except DegenerateDataError:
        return math.nan


def trend_significance(
    series: Sequence[tuple[date, float]],
    comments: Sequence[RedditComment],
    users: UserSets,
    scope: Scope = "global",
    trials: int = 100,
    rng_seed: int = 0,
    window_days: int = 30,
    step_days: int = 1,
    include_self: bool = True,
) -> TrendSignificance:
    """Compare the observed ratio trend with trends after shuffling comment authorship.

    ``comments`` are the forum comments the series was counted from. User
    labels stay fixed; only who wrote which comment is permuted (as in
    ``shuffle_users``), and the windows are recounted over the same end dates
    as ``series``. A trial whose series has fewer than two defined ratios
    yields a NaN slope.
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    observed = series_slope(series)
    first_end = series[0][0].toordinal() - _EPOCH
    last_end = series[-1][0].toordinal() - _EPOCH
    index = _ReplyIndex(comments, users, include_self)
    blocks = shuffle_blocks(comments, scope)
    nulls = []
    for seed in trial_seeds(rng_seed, trials):
        perm = author_permutation(index.n, blocks, seed)
        ends, counts = index.window_counts(first_end, last_end, window_days, step_days, perm)
        nulls.append(_ratio_slope(ends, counts))
    return TrendSignificance(observed, tuple(nulls))
