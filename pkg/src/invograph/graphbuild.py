"""Monthly invocation graphs: aggregation, filtering and BFS construction."""

from __future__ import annotations

import csv
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

from .errors import ParseError, PreconditionError
from .ingest import DEFAULT_BLACKLIST, ReplyPairRecord, check_month, normalize_domain

Edge = tuple[str, str]


@dataclass(frozen=True)
class InvocationGraph:
    """Weighted digraph over domains for one month; an edge B->A means B was used to reply to A."""

    month: str
    nodes: frozenset[str]
    edges: Mapping[Edge, int]

    def __post_init__(self):
        for (src, dst), w in self.edges.items():
            if src == dst:
                raise PreconditionError(f"self-loop on {src} in invocation graph")
            if src not in self.nodes or dst not in self.nodes:
                raise PreconditionError(f"edge {src}->{dst} has an endpoint outside the node set")
            if w < 1:
                raise PreconditionError(f"edge {src}->{dst} has weight {w} < 1")

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = _undirected_adjacency(self.edges)
        start = min(self.nodes)
        return len(_bfs(start, adj)) == len(self.nodes)


@dataclass(frozen=True)
class BuildConfig:
    engagement_threshold: int = 10000
    edge_threshold: int = 100
    seed_domain: str = "nytimes.com"
    blacklist: frozenset[str] = field(default_factory=lambda: DEFAULT_BLACKLIST)

    def __post_init__(self):
        if self.edge_threshold < 1:
            raise PreconditionError(f"edge threshold must be >= 1, got {self.edge_threshold}")
        if self.engagement_threshold < 0:
            raise PreconditionError("engagement threshold must be non-negative")

    def as_dict(self) -> dict:
        return {
            "engagement_threshold": self.engagement_threshold,
            "edge_threshold": self.edge_threshold,
            "seed_domain": self.seed_domain,
            "blacklist": sorted(self.blacklist),
        }


def aggregate_raw_graph(records: Iterable[ReplyPairRecord], month: str) -> dict[Edge, int]:
    """Sum reply-pair counts for one month. Self-loops are kept at this stage."""
    raw: dict[Edge, int] = defaultdict(int)
    for r in records:
        if r.month == month:
            raw[r.src_domain, r.dst_domain] += r.count
    return dict(raw)


def _undirected_adjacency(edges: Iterable[Edge]) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = defaultdict(set)
    for src, dst in edges:
        adj[src].add(dst)
        adj[dst].add(src)
    return adj


def _bfs(start: str, adj: Mapping[str, set[str]]) -> set[str]:
    seen = {start}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for nb in adj.get(node, ()):
            if nb not in seen:
                seen.add(nb)
                queue.append(nb)
    return seen


def build_invocation_graph(
    raw: Mapping[Edge, int],
    engagement: Mapping[str, int],
    cfg: BuildConfig = BuildConfig(),
    month: str = "",
) -> InvocationGraph:
    """Filter a raw monthly graph down to the invocation graph.

    Blacklisted domains and domains with engagement below the threshold are
    dropped, self-loops are removed, then the node set is whatever is reachable
    from the seed along edges of weight >= ``cfg.edge_threshold`` (direction
    ignored). Every surviving edge between reached nodes is kept, including
    light ones: the weight threshold only gates node inclusion.
    """
    seed = cfg.seed_domain
    raw_nodes = {n for e in raw for n in e}
    if seed not in raw_nodes:
        raise PreconditionError(f"seed domain {seed} is absent from the raw graph for {month or 'month'}")
    if seed in cfg.blacklist:
        raise PreconditionError(f"seed domain {seed} is blacklisted")
    if engagement.get(seed, 0) < cfg.engagement_threshold:
        raise PreconditionError(
            f"seed domain {seed} has engagement {engagement.get(seed, 0)} "
            f"below threshold {cfg.engagement_threshold}"
        )

    keep = {
        n for n in raw_nodes
        if n not in cfg.blacklist and engagement.get(n, 0) >= cfg.engagement_threshold
    }
    kept_edges = {
        (s, d): w for (s, d), w in raw.items() if s != d and s in keep and d in keep and w > 0
    }
    heavy = [e for e, w in kept_edges.items() if w >= cfg.edge_threshold]
    reached = _bfs(seed, _undirected_adjacency(heavy))
    if len(reached) == 1:
        raise PreconditionError(
            f"seed domain {seed} has no edge of weight >= {cfg.edge_threshold} "
            f"to another eligible domain"
        )
    edges = {e: w for e, w in sorted(kept_edges.items()) if e[0] in reached and e[1] in reached}
    return InvocationGraph(month=month, nodes=frozenset(reached), edges=edges)


# --------------------------------------------------------------------------
# edge-list + JSON sidecar
# --------------------------------------------------------------------------


def write_edge_list(graph, stream: IO[str]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["src", "dst", "weight"])
    for (src, dst), weight in sorted(graph.edges.items()):
        w.writerow([src, dst, weight])


def sidecar(graph: InvocationGraph, cfg: BuildConfig | None) -> dict:
    return {
        "month": graph.month,
        "config": cfg.as_dict() if cfg is not None else None,
        "nodes": sorted(graph.nodes),
    }


def write_graph(graph: InvocationGraph, cfg: BuildConfig | None, edges_out: IO[str], sidecar_out: IO[str]) -> None:
    write_edge_list(graph, edges_out)
    json.dump(sidecar(graph, cfg), sidecar_out, indent=2, sort_keys=True)
    sidecar_out.write("\n")


def read_graph(edges_in: IO[str], sidecar_in: IO[str] | None = None) -> InvocationGraph:
    """Load an edge list; with a sidecar, the node set and month come from it."""
    reader = csv.reader(edges_in)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["src", "dst", "weight"]:
        raise ParseError("edge list header must be src,dst,weight", 1)
    edges: dict[Edge, int] = {}
    for row in reader:
        if not row:
            continue
        line = reader.line_num
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line)
        try:
            src, dst = normalize_domain(row[0]), normalize_domain(row[1])
            weight = int(row[2])
        except (ParseError, ValueError) as exc:
            raise ParseError(str(exc), line) from None
        if weight < 1:
            raise ParseError(f"weight must be positive, got {weight}", line)
        edges[src, dst] = edges.get((src, dst), 0) + weight
    nodes = {n for e in edges for n in e}
    month = ""
    if sidecar_in is not None:
        meta = json.load(sidecar_in)
        month = check_month(meta["month"]) if meta.get("month") else ""
        nodes |= set(meta.get("nodes", []))
    return InvocationGraph(month=month, nodes=frozenset(nodes), edges=dict(sorted(edges.items())))
