"""Parsers and writers for the on-disk input formats, plus domain normalization.

Formats (all UTF-8):

* ``reply_pairs.csv``  -- ``month,src_domain,dst_domain,count``
* ``cooccur.csv``      -- ``month,domain,n_clinton,n_trump``
* ``retweets.csv``     -- ``month,clinton_total,trump_total``
* ``comments.jsonl``   -- one object per line with ``id, parent_id, author,
  subreddit, created_utc, body`` (``parent_id`` optional)
* ``blacklist.txt``    -- one domain per line, ``#`` starts a comment
"""

from __future__ import annotations

import csv
import json
import logging
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import IO, Iterable, Iterator
from urllib.parse import urlsplit

from .errors import ParseError

log = logging.getLogger(__name__)

REPLY_PAIRS_HEADER = ["month", "src_domain", "dst_domain", "count"]
COOCCUR_HEADER = ["month", "domain", "n_clinton", "n_trump"]
RETWEETS_HEADER = ["month", "clinton_total", "trump_total"]
COMMENT_REQUIRED = ("id", "author", "subreddit", "created_utc", "body")

DEFAULT_BLACKLIST = frozenset(
    {"twitter.com", "facebook.com", "imgur.com", "bit.ly", "youtube.com", "instagram.com"}
)

# Two-label public suffixes. Deliberately small: enough for the news domains
# that actually show up (bbc.co.uk, dailymail.co.uk, abc.net.au, ...).
MULTI_PART_SUFFIXES = frozenset(
    {
        "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk", "ltd.uk", "plc.uk", "net.uk",
        "sch.uk", "nhs.uk", "police.uk",
        "com.au", "net.au", "org.au", "edu.au", "gov.au", "asn.au",
        "co.nz", "org.nz", "net.nz", "govt.nz",
        "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
        "co.in", "net.in", "org.in", "gov.in",
        "co.za", "org.za", "gov.za",
        "com.br", "com.mx", "com.ar", "com.cn", "com.tr", "com.sg", "com.hk",
        "com.tw", "co.kr", "co.il", "com.ua", "com.pl", "com.ru",
    }
)

MONTH_RE = re.compile(r"^(\d{4})-(0[1-9]|1[0-2])$")
_LABEL_RE = re.compile(r"^[a-z0-9_](?:[a-z0-9_-]*[a-z0-9_])?$")
_IPV4_RE = re.compile(r"^\d{1,3}(?:\.\d{1,3}){3}$")
# http(s) token up to whitespace or closing punctuation / quotes.
URL_RE = re.compile(r"https?://[^\s<>\"'()\[\]{}]+", re.IGNORECASE)
_URL_TRAILING = ".,;:!?*"


@dataclass(frozen=True)
class ReplyPairRecord:
    month: str
    src_domain: str
    dst_domain: str
    count: int


@dataclass(frozen=True)
class CoOccurrenceRecord:
    month: str
    domain: str
    n_clinton: int
    n_trump: int


@dataclass(frozen=True)
class RetweetTotals:
    month: str
    clinton_total: int
    trump_total: int


@dataclass(frozen=True)
class RedditComment:
    id: str
    parent_id: str | None
    author: str
    subreddit: str
    created: int
    domains: frozenset[str]


# --------------------------------------------------------------------------
# domains and months
# --------------------------------------------------------------------------


@lru_cache(maxsize=65536)
def normalize_domain(raw: str) -> str:
    """Reduce a URL or hostname to its lowercase registrable domain.

    >>> normalize_domain("https://WWW.NYTimes.com/2016/x?y=1")
    'nytimes.com'
    >>> normalize_domain("sub.blog.dailymail.co.uk/page")
    'dailymail.co.uk'
    """
    if not isinstance(raw, str) or not raw.strip():
        raise ParseError(f"cannot normalize empty domain {raw!r}")
    text = raw.strip()
    try:
        parts = urlsplit(text if "://" in text else "//" + text)
        host = parts.hostname
    except ValueError as exc:
        raise ParseError(f"unparseable URL or host {raw!r}: {exc}") from None
    if not host:
        raise ParseError(f"no host in {raw!r}")
    host = host.rstrip(".")
    if not host.isascii():
        try:
            host = host.encode("idna").decode("ascii")
        except UnicodeError:
            raise ParseError(f"invalid internationalized host in {raw!r}") from None
    host = host.lower()
    if _IPV4_RE.match(host):
        raise ParseError(f"IP address has no registrable domain: {raw!r}")
    labels = host.split(".")
    if len(labels) < 2 or not all(_LABEL_RE.match(lab) for lab in labels):
        raise ParseError(f"not a valid domain name: {raw!r}")
    if labels[-1].isdigit():
        raise ParseError(f"not a valid domain name: {raw!r}")
    keep = 3 if ".".join(labels[-2:]) in MULTI_PART_SUFFIXES else 2
    if len(labels) < keep:
        raise ParseError(f"{raw!r} is a public suffix, not a registrable domain")
    return ".".join(labels[-keep:])


def check_month(value: str) -> str:
    value = value.strip()
    if not MONTH_RE.match(value):
        raise ParseError(f"invalid month {value!r}, expected YYYY-MM")
    return value


def month_range(start: str, end: str) -> list[str]:
    """Inclusive list of YYYY-MM labels from ``start`` to ``end``."""
    y0, m0 = map(int, check_month(start).split("-"))
    y1, m1 = map(int, check_month(end).split("-"))
    if (y1, m1) < (y0, m0):
        raise ParseError(f"empty month range {start}..{end}")
    out = []
    y, m = y0, m0
    while (y, m) <= (y1, m1):
        out.append(f"{y:04d}-{m:02d}")
        m += 1
        if m == 13:
            y, m = y + 1, 1
    return out


def parse_months(spec: str) -> list[str]:
    """Parse ``2016-01..2016-09`` or ``2016-01,2016-03`` (or a mix of both)."""
    months: list[str] = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            months.extend(month_range(lo, hi))
        else:
            months.append(check_month(chunk))
    if not months:
        raise ParseError(f"no months in {spec!r}")
    return sorted(set(months))


def _int_field(value: str, name: str, line: int, *, positive: bool) -> int:
    try:
        n = int(value.strip())
    except ValueError:
        raise ParseError(f"{name} is not an integer: {value!r}", line) from None
    if positive and n <= 0:
        raise ParseError(f"{name} must be positive, got {n}", line)
    if not positive and n < 0:
        raise ParseError(f"{name} must be non-negative, got {n}", line)
    return n


def _csv_rows(stream: IO[str], header: list[str]) -> Iterator[tuple[int, list[str]]]:
    reader = csv.reader(stream)
    try:
        first = next(reader)
    except StopIteration:
        raise ParseError(f"empty file, expected header {','.join(header)}", 1) from None
    if [h.strip() for h in first] != header:
        raise ParseError(f"bad header {first!r}, expected {','.join(header)}", 1)
    width = len(header)
    for row in reader:
        if len(row) != width:
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            raise ParseError(f"expected {width} fields, got {len(row)}", reader.line_num)
        yield reader.line_num, row


def _domain_field(value: str, line: int) -> str:
    try:
        return normalize_domain(value)
    except ParseError as exc:
        raise ParseError(str(exc), line) from None


# --------------------------------------------------------------------------
# CSV formats
# --------------------------------------------------------------------------


def parse_reply_pairs(stream: IO[str]) -> list[ReplyPairRecord]:
    """Read reply-pair aggregates; duplicate (month, src, dst) rows are summed.

    Records come back sorted by key, so row order in the file never matters.
    """
    totals: dict[tuple[str, str, str], int] = defaultdict(int)
    months: dict[str, str] = {}
    for line, (month, src, dst, count) in _csv_rows(stream, REPLY_PAIRS_HEADER):
        m = months.get(month)
        if m is None:
            try:
                m = months[month] = check_month(month)
            except ParseError as exc:
                raise ParseError(str(exc), line) from None
        try:
            n = int(count)
        except ValueError:
            n = _int_field(count, "count", line, positive=True)
        if n <= 0:
            raise ParseError(f"count must be positive, got {n}", line)
        totals[m, _domain_field(src, line), _domain_field(dst, line)] += n
    return [ReplyPairRecord(m, s, d, c) for (m, s, d), c in sorted(totals.items())]


def parse_cooccurrence(stream: IO[str]) -> list[CoOccurrenceRecord]:
    clinton: dict[tuple[str, str], int] = defaultdict(int)
    trump: dict[tuple[str, str], int] = defaultdict(int)
    for line, (month, domain, n_c, n_t) in _csv_rows(stream, COOCCUR_HEADER):
        try:
            month = check_month(month)
        except ParseError as exc:
            raise ParseError(str(exc), line) from None
        key = (month, _domain_field(domain, line))
        clinton[key] += _int_field(n_c, "n_clinton", line, positive=False)
        trump[key] += _int_field(n_t, "n_trump", line, positive=False)
    return [CoOccurrenceRecord(m, d, clinton[m, d], trump[m, d]) for m, d in sorted(clinton)]


def parse_retweet_totals(stream: IO[str]) -> list[RetweetTotals]:
    """Monthly retweet totals. A month listed twice is an error, not a sum."""
    seen: dict[str, RetweetTotals] = {}
    for line, (month, c_tot, t_tot) in _csv_rows(stream, RETWEETS_HEADER):
        try:
            month = check_month(month)
        except ParseError as exc:
            raise ParseError(str(exc), line) from None
        if month in seen:
            raise ParseError(f"duplicate totals for month {month}", line)
        seen[month] = RetweetTotals(
            month,
            _int_field(c_tot, "clinton_total", line, positive=False),
            _int_field(t_tot, "trump_total", line, positive=False),
        )
    return [seen[m] for m in sorted(seen)]


def parse_blacklist(stream: IO[str]) -> frozenset[str]:
    domains = set()
    for lineno, line in enumerate(stream, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            domains.add(normalize_domain(line))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    return frozenset(domains)


def write_reply_pairs(records: Iterable[ReplyPairRecord], stream: IO[str]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(REPLY_PAIRS_HEADER)
    for r in records:
        w.writerow([r.month, r.src_domain, r.dst_domain, r.count])


def write_cooccurrence(records: Iterable[CoOccurrenceRecord], stream: IO[str]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(COOCCUR_HEADER)
    for r in records:
        w.writerow([r.month, r.domain, r.n_clinton, r.n_trump])


def write_retweet_totals(records: Iterable[RetweetTotals], stream: IO[str]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(RETWEETS_HEADER)
    for r in records:
        w.writerow([r.month, r.clinton_total, r.trump_total])


# --------------------------------------------------------------------------
# Reddit JSON lines
# --------------------------------------------------------------------------


def extract_domains(body: str) -> frozenset[str]:
    """Domains of every http(s) URL in ``body``; URLs that don't normalize are skipped."""
    found = set()
    for m in URL_RE.finditer(body):
        url = m.group(0).rstrip(_URL_TRAILING)
        try:
            found.add(normalize_domain(url))
        except ParseError:
            log.debug("skipping unparseable URL %r", url)
    return frozenset(found)


def _timestamp(value, lineno: int) -> int:
    if isinstance(value, bool):
        raise ParseError(f"created_utc is not a timestamp: {value!r}", lineno)
    if isinstance(value, (int, float)):
        ts = value
    elif isinstance(value, str):
        try:
            ts = float(value.strip())
        except ValueError:
            raise ParseError(f"created_utc is not a timestamp: {value!r}", lineno) from None
    else:
        raise ParseError(f"created_utc is not a timestamp: {value!r}", lineno)
    if ts != ts or ts in (float("inf"), float("-inf")):
        raise ParseError(f"created_utc is not finite: {value!r}", lineno)
    return int(ts)


def parse_reddit_comments(stream: IO[str]) -> list[RedditComment]:
    """Parse pushshift-style JSON lines. Errors carry the 1-based line number."""
    out: list[RedditComment] = []
    seen: set[str] = set()
    for lineno, line in enumerate(stream, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict):
            raise ParseError("record is not a JSON object", lineno)
        missing = [k for k in COMMENT_REQUIRED if obj.get(k) is None]
        if missing:
            raise ParseError(f"missing required field(s) {', '.join(missing)}", lineno)
        cid = str(obj["id"])
        if cid in seen:
            raise ParseError(f"duplicate comment id {cid!r}", lineno)
        seen.add(cid)
        parent = obj.get("parent_id")
        body = obj["body"]
        if not isinstance(body, str):
            raise ParseError("body is not a string", lineno)
        out.append(
            RedditComment(
                id=cid,
                parent_id=None if parent in (None, "") else str(parent),
                author=str(obj["author"]),
                subreddit=str(obj["subreddit"]),
                created=_timestamp(obj["created_utc"], lineno),
                domains=extract_domains(body),
            )
        )
    return out


def write_reddit_comments(comments: Iterable[RedditComment], stream: IO[str]) -> None:
    """Serialize comments; the body is rebuilt as one URL per extracted domain."""
    for c in comments:
        obj = {
            "id": c.id,
            "parent_id": c.parent_id,
            "author": c.author,
            "subreddit": c.subreddit,
            "created_utc": c.created,
            "body": " ".join(f"https://{d}/" for d in sorted(c.domains)),
        }
        stream.write(json.dumps(obj, sort_keys=True) + "\n")
