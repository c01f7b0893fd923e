"""Synthetic datasets with planted spectrum positions and linking structure.

Reply-pair weights between domains i != j are Poisson with mean

    volume * exp(-homophily * |s_i - s_j|) / mean_kernel * (bias if s_i > .5 > s_j)

so positive homophily favours short edges, negative homophily long ones, and
``right_to_left_bias`` scales the rate of right-to-left replies (1 = neutral).
Co-occurrence counts are built so the pooled spectrum reproduces every planted
score exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import PreconditionError
from .ingest import (
    DEFAULT_BLACKLIST,
    CoOccurrenceRecord,
    RedditComment,
    ReplyPairRecord,
    RetweetTotals,
    month_range,
    write_cooccurrence,
    write_reddit_comments,
    write_reply_pairs,
    write_retweet_totals,
)
from .spectrum import Spectrum, SpectrumPoint

DEFAULT_MONTHS = tuple(month_range("2016-01", "2016-11"))


@dataclass(frozen=True)
class SynthConfig:
    n_domains: int = 40
    homophily: float | Sequence[float] = 0.0
    right_to_left_bias: float = 1.0
    volume: int = 200
    months: tuple[str, ...] = DEFAULT_MONTHS
    rng_seed: int = 0
    seed_domain: str = "nytimes.com"
    score_resolution: int = 10000
    engagement: int = 20000
    n_noise_domains: int = 0
    self_loop_factor: float = 5.0

    def homophily_for(self, i: int) -> float:
        if isinstance(self.homophily, (int, float)):
            return float(self.homophily)
        return float(self.homophily[i])

    def validate(self) -> None:
        if self.n_domains < 3:
            raise PreconditionError("synthetic data needs at least 3 domains")
        if self.n_domains >= self.score_resolution:
            raise PreconditionError("score_resolution must exceed n_domains to keep scores distinct")
        if self.right_to_left_bias < 0:
            raise PreconditionError("right_to_left_bias must be >= 0")
        if self.volume < 1:
            raise PreconditionError("volume must be a positive integer")
        if not self.months:
            raise PreconditionError("at least one month is required")
        if not isinstance(self.homophily, (int, float)) and len(self.homophily) != len(self.months):
            raise PreconditionError("a homophily schedule needs one value per month")


@dataclass
class SynthData:
    reply_pairs: list[ReplyPairRecord]
    cooccur: list[CoOccurrenceRecord]
    retweets: list[RetweetTotals]
    scores: dict[str, float]
    blacklist: frozenset[str] = field(default_factory=frozenset)

    def ground_truth_spectrum(self) -> Spectrum:
        # any (p_c, p_t) on the ray works; pick p_c + p_t = 1
        return Spectrum((), {d: SpectrumPoint(d, 1.0 - s, s) for d, s in self.scores.items()})

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, writer, rows in (
            ("reply_pairs.csv", write_reply_pairs, self.reply_pairs),
            ("cooccur.csv", write_cooccurrence, self.cooccur),
            ("retweets.csv", write_retweet_totals, self.retweets),
        ):
            with open(out / name, "w", encoding="utf-8", newline="") as fh:
                writer(rows, fh)
            paths.append(out / name)
        with open(out / "ground_truth.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["domain", "score"])
            for d in sorted(self.scores):
                w.writerow([d, repr(self.scores[d])])
        paths.append(out / "ground_truth.csv")
        with open(out / "blacklist.txt", "w", encoding="utf-8") as fh:
            fh.write("# social media and content-hosting domains\n")
            for d in sorted(self.blacklist):
                fh.write(d + "\n")
        paths.append(out / "blacklist.txt")
        return paths


def _domain_names(cfg: SynthConfig) -> list[str]:
    names = [cfg.seed_domain]
    i = 1
    while len(names) < cfg.n_domains:
        name = f"site{i:03d}.com"
        if name != cfg.seed_domain:
            names.append(name)
        i += 1
    return names


def edge_means(scores: np.ndarray, homophily: float, bias: float, volume: float) -> np.ndarray:
    """Expected reply-pair counts between distinct domains (diagonal zero)."""
    dist = np.abs(scores[:, None] - scores[None, :])
    kernel = np.exp(-homophily * dist)
    off = ~np.eye(len(scores), dtype=bool)
    kernel /= kernel[off].mean()
    right_to_left = (scores[:, None] > 0.5) & (scores[None, :] < 0.5)
    kernel = np.where(right_to_left, kernel * bias, kernel)
    kernel[~off] = 0.0
    return volume * kernel


def generate(cfg: SynthConfig) -> SynthData:
    cfg.validate()
    rng = np.random.default_rng(cfg.rng_seed)
    n, K = cfg.n_domains, cfg.score_resolution
    names = _domain_names(cfg)
    ks = rng.choice(np.arange(1, K), size=n, replace=False)
    scores = ks / K

    # Co-occurrence: n_c = (K - k) * f_c(m) * q and n_t = k * f_t(m) * q with
    # totals f_c(m) * R and f_t(m) * R, so pooled p_t / (p_c + p_t) = k / K.
    q = -(-cfg.engagement // K)
    R = 10 * K * q
    f_c = rng.integers(1, 5, size=len(cfg.months))
    f_t = rng.integers(1, 5, size=len(cfg.months))
    cooccur, retweets = [], []
    for mi, month in enumerate(cfg.months):
        retweets.append(RetweetTotals(month, int(f_c[mi] * R), int(f_t[mi] * R)))
        for name, k in zip(names, ks):
            cooccur.append(CoOccurrenceRecord(month, name, int((K - k) * f_c[mi] * q), int(k * f_t[mi] * q)))

    noise = [sorted(DEFAULT_BLACKLIST)[i % len(DEFAULT_BLACKLIST)] if i < len(DEFAULT_BLACKLIST)
             else f"junk{i:03d}.net" for i in range(cfg.n_noise_domains)]
    for month in cfg.months:
        for name in noise:
            # below any sensible engagement threshold
            cooccur.append(CoOccurrenceRecord(month, name, int(rng.integers(0, 50)), int(rng.integers(0, 50))))

    pairs = []
    for mi, month in enumerate(cfg.months):
        mu = edge_means(scores, cfg.homophily_for(mi), cfg.right_to_left_bias, cfg.volume)
        w = rng.poisson(mu)
        w = np.where(mu >= 1, np.maximum(w, 1), w)
        loops = rng.poisson(cfg.self_loop_factor * cfg.volume, size=n)
        for i in range(n):
            if loops[i] > 0:
                pairs.append(ReplyPairRecord(month, names[i], names[i], int(loops[i])))
            for j in np.flatnonzero(w[i]):
                pairs.append(ReplyPairRecord(month, names[i], names[j], int(w[i, j])))
        for name in noise:
            for j in rng.choice(n, size=min(n, 5), replace=False):
                pairs.append(ReplyPairRecord(month, name, names[j], int(rng.integers(1, 3 * cfg.volume))))
                pairs.append(ReplyPairRecord(month, names[j], name, int(rng.integers(1, 3 * cfg.volume))))
    pairs.sort(key=lambda r: (r.month, r.src_domain, r.dst_domain))
    blacklist = frozenset(d for d in noise if d in DEFAULT_BLACKLIST)
    return SynthData(pairs, sorted(cooccur, key=lambda r: (r.month, r.domain)), retweets,
                     {d: float(s) for d, s in zip(names, scores)}, blacklist)


# --------------------------------------------------------------------------
# spectra for alignment experiments
# --------------------------------------------------------------------------


def random_spectrum(n: int, rng_seed: int = 0, prefix: str = "d") -> Spectrum:
    """Points spread over the first quadrant with well-separated angles."""
    rng = np.random.default_rng(rng_seed)
    angles = np.sort(rng.uniform(0.05, np.pi / 2 - 0.05, size=n))
    radius = rng.uniform(0.2, 1.0, size=n) * 0.05
    return Spectrum((), {
        f"{prefix}{i:03d}.com": SpectrumPoint(f"{prefix}{i:03d}.com", float(r * np.cos(a)), float(r * np.sin(a)))
        for i, (a, r) in enumerate(zip(angles, radius))
    })


def perturbed_spectrum(spec: Spectrum, scale_c: float, scale_t: float, noise: float = 0.0, rng_seed: int = 0) -> Spectrum:
    """Divide each axis by its scale and apply multiplicative log-normal noise."""
    rng = np.random.default_rng(rng_seed)
    out = {}
    for d in sorted(spec.points):
        p = spec.points[d]
        e_c, e_t = np.exp(noise * rng.standard_normal(2))
        out[d] = SpectrumPoint(d, float(p.p_c / scale_c * e_c), float(p.p_t / scale_t * e_t))
    return Spectrum(spec.period, out)


# --------------------------------------------------------------------------
# forum comments with a planted rise in cross-type replies
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CommentSynthConfig:
    n_clinton_users: int = 60
    n_trump_users: int = 180
    n_both_users: int = 10
    n_other_users: int = 120
    start: str = "2016-01-01"
    days: int = 312
    posts_per_day: int = 15
    replies_per_day: int = 60
    cross_start: float = 0.2
    cross_end: float = 0.5
    clinton_sub: str = "hillaryclinton"
    trump_sub: str = "The_Donald"
    forum_sub: str = "politics"
    domain_scores: Mapping[str, float] | None = None
    url_rate: float = 0.3
    rng_seed: int = 0


def _b36(i: int) -> str:
    digits = "0123456789abcdefghijklmnopqrstuvwxyz"
    out = ""
    while True:
        i, r = divmod(i, 36)
        out = digits[r] + out
        if i == 0:
            return out


def generate_comments(cfg: CommentSynthConfig = CommentSynthConfig()) -> list[RedditComment]:
    """Anchor-subreddit activity plus a forum where the share of cross-type
    replies rises linearly from ``cross_start`` to ``cross_end``."""
    rng = np.random.default_rng(cfg.rng_seed)
    c_users = [f"clinton_fan{i}" for i in range(cfg.n_clinton_users)]
    t_users = [f"trump_fan{i}" for i in range(cfg.n_trump_users)]
    both = [f"undecided{i}" for i in range(cfg.n_both_users)]
    other = [f"lurker{i}" for i in range(cfg.n_other_users)]
    if not c_users or not t_users:
        raise PreconditionError("need at least one user on each side")
    y, m, d = map(int, cfg.start.split("-"))
    t0 = int(datetime(y, m, d, tzinfo=timezone.utc).timestamp())
    span = cfg.days * 86400

    dom_names = sorted(cfg.domain_scores) if cfg.domain_scores else []
    dom_s = np.array([cfg.domain_scores[x] for x in dom_names]) if dom_names else None

    comments: list[RedditComment] = []
    counter = 0

    def emit(author, sub, created, parent=None, domains=frozenset()):
        nonlocal counter
        cid = _b36(counter)
        counter += 1
        comments.append(RedditComment(cid, parent, author, sub, int(created), frozenset(domains)))
        return cid

    def anchor_domains(side: str):
        if dom_s is None or rng.random() >= cfg.url_rate:
            return frozenset()
        w = dom_s if side == "t" else 1.0 - dom_s
        return frozenset({dom_names[rng.choice(len(dom_names), p=w / w.sum())]})

    for side, pool, subs in (("c", c_users, [cfg.clinton_sub]), ("t", t_users, [cfg.trump_sub]),
                             ("b", both, [cfg.clinton_sub, cfg.trump_sub])):
        for user in pool:
            for sub in subs:
                for _ in range(int(rng.integers(1, 4))):
                    s = "c" if sub == cfg.clinton_sub else "t"
                    emit(user, sub, t0 + rng.integers(0, span), domains=anchor_domains(s))

    everyone = c_users + t_users + both + other
    side_of = {u: "c" for u in c_users} | {u: "t" for u in t_users}
    recent: list[tuple[str, str, bool]] = []  # (id, author, is_post)
    for day in range(cfg.days):
        frac = day / max(cfg.days - 1, 1)
        p_cross = cfg.cross_start + (cfg.cross_end - cfg.cross_start) * frac
        base = t0 + day * 86400
        todays = []
        for _ in range(cfg.posts_per_day):
            author = everyone[rng.integers(len(everyone))]
            cid = emit(author, cfg.forum_sub, base + rng.integers(0, 43200))
            todays.append((cid, author, True))
        pool = recent + todays
        for _ in range(cfg.replies_per_day):
            pid, pauthor, is_post = pool[rng.integers(len(pool))]
            pside = side_of.get(pauthor)
            if pside is None or rng.random() < 0.1:
                author = everyone[rng.integers(len(everyone))]
            else:
                cross = rng.random() < p_cross
                target = ("t" if pside == "c" else "c") if cross else pside
                group = t_users if target == "t" else c_users
                author = group[rng.integers(len(group))]
            parent = ("t3_" if is_post else "t1_") + pid
            cid = emit(author, cfg.forum_sub, base + 43200 + rng.integers(0, 43200), parent)
            todays.append((cid, author, False))
        recent = (recent + todays)[-3 * (cfg.posts_per_day + cfg.replies_per_day):]
    return comments


def write_comments(comments: Sequence[RedditComment], path: str | Path) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        write_reddit_comments(comments, fh)
    return Path(path)

