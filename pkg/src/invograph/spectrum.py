"""Political engagement, co-occurrence coordinates and the scalar political score."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

from .errors import ParseError, PreconditionError
from .ingest import CoOccurrenceRecord, RedditComment, RetweetTotals, normalize_domain

SPECTRUM_HEADER = ["domain", "p_c", "p_t", "score"]


@dataclass(frozen=True)
class SpectrumPoint:
    domain: str
    p_c: float
    p_t: float

    def __post_init__(self):
        if self.p_c < 0 or self.p_t < 0 or self.p_c + self.p_t <= 0:
            raise PreconditionError(f"{self.domain}: need p_c, p_t >= 0 with a positive sum")

    @property
    def score(self) -> float:
        return political_score(self.p_c, self.p_t)


@dataclass(frozen=True)
class Spectrum:
    period: tuple[str, ...]
    points: Mapping[str, SpectrumPoint] = field(default_factory=dict)

    def __contains__(self, domain: str) -> bool:
        return domain in self.points

    def __len__(self) -> int:
        return len(self.points)

    def score(self, domain: str) -> float:
        try:
            return self.points[domain].score
        except KeyError:
            raise PreconditionError(f"domain {domain} has no political score") from None

    def scores(self) -> dict[str, float]:
        return {d: p.score for d, p in self.points.items()}

    def ranking(self) -> list[str]:
        """Domains ordered from the Trump end (score 1) to the Clinton end, ties by name."""
        return sorted(self.points, key=lambda d: (-self.points[d].score, d))


def political_score(p_c: float, p_t: float) -> float:
    return p_t / (p_c + p_t)


def compute_engagement(cooccur: Iterable[CoOccurrenceRecord], months: Iterable[str]) -> dict[str, int]:
    """Same-day co-occurrences with either anchor account, summed over ``months``."""
    wanted = set(months)
    if not wanted:
        raise PreconditionError("engagement needs at least one month")
    out: dict[str, int] = defaultdict(int)
    for r in cooccur:
        if r.month in wanted:
            out[r.domain] += r.n_clinton + r.n_trump
    return dict(out)


def compute_spectrum(
    cooccur: Iterable[CoOccurrenceRecord],
    totals: Iterable[RetweetTotals],
    months: Sequence[str],
) -> Spectrum:
    """Pool numerators and denominators over ``months`` (ratio of sums)."""
    months = sorted(set(months))
    if not months:
        raise PreconditionError("spectrum needs at least one month")
    by_month = {t.month: t for t in totals}
    c_total = t_total = 0
    for m in months:
        t = by_month.get(m)
        if t is None:
            raise PreconditionError(f"no retweet totals for month {m}")
        if t.clinton_total <= 0 or t.trump_total <= 0:
            raise PreconditionError(f"retweet totals for month {m} must be positive")
        c_total += t.clinton_total
        t_total += t.trump_total
    wanted = set(months)
    n_c: dict[str, int] = defaultdict(int)
    n_t: dict[str, int] = defaultdict(int)
    for r in cooccur:
        if r.month in wanted:
            n_c[r.domain] += r.n_clinton
            n_t[r.domain] += r.n_trump
    points = {}
    for d in sorted(n_c):
        if n_c[d] + n_t[d] > 0:
            points[d] = SpectrumPoint(d, n_c[d] / c_total, n_t[d] / t_total)
    return Spectrum(tuple(months), points)


def reddit_spectrum(comments: Iterable[RedditComment], clinton_sub: str, trump_sub: str) -> Spectrum:
    """Per-comment probability of containing a domain, in each anchor subreddit."""
    n_c = n_t = 0
    hits_c: dict[str, int] = defaultdict(int)
    hits_t: dict[str, int] = defaultdict(int)
    for c in comments:
        if c.subreddit == clinton_sub:
            n_c += 1
            for d in c.domains:
                hits_c[d] += 1
        elif c.subreddit == trump_sub:
            n_t += 1
            for d in c.domains:
                hits_t[d] += 1
    if n_c == 0:
        raise PreconditionError(f"subreddit {clinton_sub} has no comments")
    if n_t == 0:
        raise PreconditionError(f"subreddit {trump_sub} has no comments")
    points = {
        d: SpectrumPoint(d, hits_c.get(d, 0) / n_c, hits_t.get(d, 0) / n_t)
        for d in sorted(set(hits_c) | set(hits_t))
    }
    return Spectrum((), points)


def write_spectrum(spec: Spectrum, stream: IO[str]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(SPECTRUM_HEADER)
    for d in sorted(spec.points):
        p = spec.points[d]
        w.writerow([d, repr(p.p_c), repr(p.p_t), repr(p.score)])


def read_spectrum(stream: IO[str], period: Sequence[str] = ()) -> Spectrum:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != SPECTRUM_HEADER:
        raise ParseError("spectrum header must be " + ",".join(SPECTRUM_HEADER), 1)
    points = {}
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", line)
        try:
            domain = normalize_domain(row[0])
            p_c, p_t, score = float(row[1]), float(row[2]), float(row[3])
            point = SpectrumPoint(domain, p_c, p_t)
        except (ValueError, PreconditionError) as exc:
            raise ParseError(str(exc), line) from None
        if not math.isclose(point.score, score, abs_tol=1e-9):
            raise ParseError(f"score {score} disagrees with p_t/(p_c+p_t) = {point.score}", line)
        if domain in points:
            raise ParseError(f"duplicate domain {domain}", line)
        points[domain] = point
    return Spectrum(tuple(period), points)
