"""Batch command line: one subcommand per analysis, CSV (and optional SVG) outputs.

Every run writes ``<command>.manifest.json`` next to its outputs, listing the
resolved configuration, input digests and output paths.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import align as al
from . import embedmetrics as em
from . import graphbuild as gb
from . import ingest
from . import nullmodels as nm
from . import spectrum as sp
from . import svg
from . import synth
from . import userlevel as ul
from .errors import DegenerateDataError, InvographError, ParseError, PreconditionError

log = logging.getLogger("invograph")

DEFAULT_SPECTRUM_MONTHS = frozenset(ingest.month_range("2016-01", "2016-09"))

EXIT_PARSE, EXIT_PRECONDITION, EXIT_DEGENERATE, EXIT_IO = 3, 4, 5, 6


def _num(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


class Run:
    """Tracks inputs and outputs of one invocation and writes the manifest."""

    def __init__(self, command: str, out_dir: Path, config: dict):
        self.command = command
        self.out_dir = out_dir
        self.config = config
        self.inputs: list[dict] = []
        self.outputs: list[str] = []
        out_dir.mkdir(parents=True, exist_ok=True)

    def read(self, path: str | Path) -> str:
        data = Path(path).read_bytes()
        self.inputs.append({"path": str(path), "digest": "sha256:" + hashlib.sha256(data).hexdigest()})
        return data.decode("utf-8")

    def stream(self, path: str | Path) -> io.StringIO:
        return io.StringIO(self.read(path), newline="")

    def _target(self, name: str) -> Path:
        path = self.out_dir / name
        self.outputs.append(str(path))
        return path

    def write_text(self, name: str, text: str) -> Path:
        path = self._target(name)
        path.write_text(text, encoding="utf-8")
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_num(v) for v in row])
        return self.write_text(name, buf.getvalue())

    def write_json(self, name: str, obj) -> Path:
        return self.write_text(name, json.dumps(obj, indent=2, sort_keys=True) + "\n")

    def finish(self) -> Path:
        manifest = {
            "command": self.command,
            "config": self.config,
            "inputs": self.inputs,
            "outputs": self.outputs,
        }
        path = self.out_dir / f"{self.command}.manifest.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path


# --------------------------------------------------------------------------
# shared loading
# --------------------------------------------------------------------------


def _require(args, *names):
    missing = ["--" + n.replace("_", "-") for n in names if getattr(args, n, None) is None]
    if missing:
        raise PreconditionError(f"{args.command} needs {', '.join(missing)}")


def _build_config(args, run: Run) -> gb.BuildConfig:
    blacklist = ingest.DEFAULT_BLACKLIST
    if args.blacklist:
        blacklist = ingest.parse_blacklist(run.stream(args.blacklist))
    return gb.BuildConfig(
        engagement_threshold=args.engagement_threshold,
        edge_threshold=args.edge_threshold,
        seed_domain=ingest.normalize_domain(args.seed_domain),
        blacklist=blacklist,
    )


def _graphs(args, run: Run) -> tuple[list[gb.InvocationGraph], gb.BuildConfig, list]:
    _require(args, "reply_pairs", "cooccur")
    records = ingest.parse_reply_pairs(run.stream(args.reply_pairs))
    cooccur = ingest.parse_cooccurrence(run.stream(args.cooccur))
    cfg = _build_config(args, run)
    months = ingest.parse_months(args.months) if args.months else sorted({r.month for r in records})
    if not months:
        raise DegenerateDataError("reply-pair file contains no records")
    all_months = sorted({r.month for r in cooccur})
    by_month: dict[str, list] = {}
    for r in records:
        by_month.setdefault(r.month, []).append(r)
    graphs = []
    for m in months:
        eng_months = [m] if args.engagement_scope == "month" else all_months
        engagement = sp.compute_engagement(cooccur, eng_months or [m])
        raw = gb.aggregate_raw_graph(by_month.get(m, []), m)
        graphs.append(gb.build_invocation_graph(raw, engagement, cfg, month=m))
    run.config.update(build=cfg.as_dict(), months=months, engagement_scope=args.engagement_scope)
    return graphs, cfg, cooccur


def _spectrum(args, run: Run, cooccur=None) -> sp.Spectrum:
    if getattr(args, "spectrum", None):
        run.config["spectrum"] = {"file": str(args.spectrum)}
        return sp.read_spectrum(run.stream(args.spectrum))
    _require(args, "cooccur", "retweets")
    if cooccur is None:
        cooccur = ingest.parse_cooccurrence(run.stream(args.cooccur))
    totals = ingest.parse_retweet_totals(run.stream(args.retweets))
    if args.spectrum_months:
        months = ingest.parse_months(args.spectrum_months)
    else:
        available = sorted(t.month for t in totals)
        months = [m for m in available if m in DEFAULT_SPECTRUM_MONTHS] or available
    run.config["spectrum"] = {"months": months}
    return sp.compute_spectrum(cooccur, totals, months)


def _scored(G: gb.InvocationGraph, spec: sp.Spectrum) -> gb.InvocationGraph:
    missing = [n for n in G.nodes if n not in spec]
    if missing:
        log.warning("%s: dropping %d node(s) without a political score", G.month, len(missing))
        return em.restrict_to_scored(G, spec)
    return G


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_build_graph(args, run: Run) -> None:
    graphs, cfg, _ = _graphs(args, run)
    for G in graphs:
        edges, side = io.StringIO(), io.StringIO()
        gb.write_graph(G, cfg, edges, side)
        run.write_text(f"graph_{G.month}.csv", edges.getvalue())
        run.write_text(f"graph_{G.month}.json", side.getvalue())
        print(f"{G.month}: {len(G.nodes)} domains, {len(G.edges)} edges, total weight {G.total_weight}")


def cmd_spectrum(args, run: Run) -> None:
    if args.source == "reddit":
        _require(args, "comments")
        comments = ingest.parse_reddit_comments(run.stream(args.comments))
        spec = sp.reddit_spectrum(comments, args.clinton_sub, args.trump_sub)
        run.config["spectrum"] = {"source": "reddit", "clinton_sub": args.clinton_sub, "trump_sub": args.trump_sub}
        name = "reddit_spectrum"
    else:
        spec = _spectrum(args, run)
        name = "spectrum"
    buf = io.StringIO()
    sp.write_spectrum(spec, buf)
    run.write_text(f"{name}.csv", buf.getvalue())
    if args.svg:
        pts = [spec.points[d] for d in sorted(spec.points)]
        run.write_text(f"{name}.svg", svg.scatter([p.p_c for p in pts], [p.p_t for p in pts],
                                                  xlabel="p(x|C)", ylabel="p(x|T)", title=name))
    print(f"{len(spec)} domains scored")


def cmd_outlink(args, run: Run) -> None:
    graphs, _, cooccur = _graphs(args, run)
    spec = _spectrum(args, run, cooccur)
    run.config["weighted_regression"] = args.weighted
    slopes = []
    for G in graphs:
        G = _scored(G, spec)
        stats = em.all_outlink_stats(G, spec)
        run.write_csv(f"outlink_{G.month}.csv", ["domain", "score", "delta_out"],
                      ([st.domain, spec.score(st.domain), st.delta_out] for st in stats))
        res = em.slope(G, spec, weighted=args.weighted)
        slopes.append((G.month, res.slope))
        if args.svg:
            run.write_text(f"outlink_{G.month}.svg", svg.scatter(
                [spec.score(st.domain) for st in stats], [st.delta_out for st in stats],
                line=(res.slope, res.intercept), xlabel="s(x)", ylabel="delta_out(x)", title=G.month,
                xlim=(0.0, 1.0)))
        print(f"{G.month}: a(G) = {res.slope:.4f} over {res.n_points} domains")
    run.write_csv("slopes.csv", ["month", "slope"], slopes)
    if args.svg and len(slopes) > 1:
        run.write_text("slopes.svg", svg.scatter(list(range(len(slopes))), [s for _, s in slopes],
                                                 xlabel="month index", ylabel="a(G)", title="slope by month"))


def cmd_edge_lengths(args, run: Run) -> None:
    graphs, _, cooccur = _graphs(args, run)
    spec = _spectrum(args, run, cooccur)
    weighted = not args.unweighted
    run.config.update(bins=args.bins, weighted=weighted)
    for G in graphs:
        G = _scored(G, spec)
        hist = em.edge_length_histogram(G, spec, args.bins, weighted=weighted)
        edges = hist.bin_edges
        run.write_csv(f"edge_lengths_{G.month}.csv", ["bin_lo", "bin_hi", "mass"],
                      ((float(edges[i]), float(edges[i + 1]), float(hist.mass[i])) for i in range(len(hist.mass))))
        if args.svg:
            run.write_text(f"edge_lengths_{G.month}.svg", svg.bars(list(edges), list(hist.mass),
                                                                   xlabel="|s(x1) - s(x2)|", ylabel="mass",
                                                                   title=G.month))


def cmd_crossing(args, run: Run) -> None:
    graphs, _, cooccur = _graphs(args, run)
    spec = _spectrum(args, run, cooccur)
    mode = "weight" if args.weighted else "count"
    if args.null == "analytic" and mode != "weight":
        raise PreconditionError("--null analytic is exact only in weight mode; add --weighted or use --null mc")
    run.config.update(mode=mode, null=args.null, trials=args.trials, rng_seed=args.rng_seed)
    for G in graphs:
        G = _scored(G, spec)
        prof = em.crossing_profile(G, spec, mode)
        rows = prof.rows()
        header = ["y_lo", "y_hi", "f_right", "f_left"]
        if args.null == "none":
            out_rows = rows
        else:
            if args.null == "analytic":
                null = nm.analytic_expected_crossing(G, spec)
            else:
                null = nm.monte_carlo_crossing(G, spec, mode, args.trials, args.rng_seed)
                se = [(lo, hi, *_profile_se(null, lo, hi)) for lo, hi, _, _ in rows]
                run.write_csv(f"crossing_{G.month}_null_se.csv",
                              ["y_lo", "y_hi", "f_right_null_se", "f_left_null_se"], se)
            header += ["f_right_null", "f_left_null"]
            out_rows = [(lo, hi, fr, fl, *_profile_value(null, lo, hi)) for lo, hi, fr, fl in rows]
        run.write_csv(f"crossing_{G.month}.csv", header, out_rows)
        if args.svg:
            spans = [r for r in out_rows if r[0] != r[1]]
            names = ["f->", "f<-", "f-> null", "f<- null"][: len(header) - 2]
            series = {name: [(r[0], r[1], r[k + 2]) for r in spans] for k, name in enumerate(names)}
            run.write_text(f"crossing_{G.month}.svg", svg.steps(series, xlabel="y", ylabel=mode, title=G.month))


def _profile_value(prof: em.CrossingProfile, lo: float, hi: float) -> tuple[float, float]:
    return prof.value(lo if lo == hi else (lo + hi) / 2)


def _profile_se(prof: em.CrossingProfile, lo: float, hi: float) -> tuple[float, float]:
    b = prof.breakpoints
    y = lo if lo == hi else (lo + hi) / 2
    if len(b) == 0 or y < b[0] or y > b[-1]:
        return 0.0, 0.0
    j = int(np.searchsorted(b, y))
    if j < len(b) and b[j] == y:
        return float(prof.right_at_se[j]), float(prof.left_at_se[j])
    return float(prof.f_right_se[j - 1]), float(prof.f_left_se[j - 1])


def cmd_asymmetry(args, run: Run) -> None:
    graphs, _, cooccur = _graphs(args, run)
    spec = _spectrum(args, run, cooccur)
    weighted = not args.unweighted
    run.config["weighted_degrees"] = weighted
    slopes = []
    for G in graphs:
        G = _scored(G, spec)
        rep = em.asymmetry(G, spec, weighted=weighted)
        run.write_csv(f"asymmetry_{G.month}.csv", ["domain", "score", "r"],
                      ([st.domain, spec.score(st.domain), st.r] for st in rep.stats))
        slopes.append((G.month, "" if rep.slope is None else rep.slope))
        if args.svg:
            line = None if rep.slope is None else (rep.slope, rep.intercept)
            run.write_text(f"asymmetry_{G.month}.svg", svg.scatter(
                [spec.score(st.domain) for st in rep.stats], [st.r for st in rep.stats], line=line,
                xlabel="s(x)", ylabel="r(x)", title=G.month, xlim=(0.0, 1.0), ylim=(0.0, 1.0)))
        print(f"{G.month}: r(x) slope = {rep.slope}")
    run.write_csv("asymmetry_slopes.csv", ["month", "slope"], slopes)


def cmd_align(args, run: Run) -> None:
    if args.target and args.source:
        target = sp.read_spectrum(run.stream(args.target))
        source = sp.read_spectrum(run.stream(args.source))
        run.config["spectra"] = {"target": str(args.target), "source": str(args.source)}
    else:
        _require(args, "cooccur", "retweets")
        if not args.month_pair:
            raise PreconditionError("align needs --target/--source or --month-pair A,B")
        m_target, m_source = [ingest.check_month(m) for m in args.month_pair.split(",")]
        cooccur = ingest.parse_cooccurrence(run.stream(args.cooccur))
        totals = ingest.parse_retweet_totals(run.stream(args.retweets))
        target = sp.compute_spectrum(cooccur, totals, [m_target])
        source = sp.compute_spectrum(cooccur, totals, [m_source])
        run.config["spectra"] = {"target_month": m_target, "source_month": m_source}
    run.config.update(norm=args.norm, trials=args.trials, rng_seed=args.rng_seed)
    base = al.shuffled_alignment_baseline(target, source, args.norm, args.trials, args.rng_seed)
    res = base.real
    rows = []
    for d in sorted(res.per_domain_residuals):
        t, s = target.points[d], source.points[d]
        rows.append((d, t.p_c, t.p_t, res.scale_a * s.p_c, res.scale_b * s.p_t))
    run.write_csv("align.csv", ["domain", "p_c_target", "p_t_target", "p_c_scaled", "p_t_scaled"], rows)
    null = base.null_objectives
    run.write_json("align_summary.json", {
        "norm": args.norm,
        "scale_a": res.scale_a,
        "scale_b": res.scale_b,
        "objective": res.objective,
        "n_domains": len(rows),
        "null_trials": int(len(null)),
        "null_median": float(sorted(null)[len(null) // 2]),
        "null_min": float(null.min()),
        "quantile": base.quantile,
    })
    if args.svg:
        xs = [r[1] for r in rows] + [r[3] for r in rows]
        ys = [r[2] for r in rows] + [r[4] for r in rows]
        run.write_text("align.svg", svg.scatter(xs, ys, xlabel="p(x|C)", ylabel="p(x|T)",
                                                title=f"target and scaled source ({args.norm})"))
    print(f"a = {res.scale_a:.6g}, b = {res.scale_b:.6g}, {args.norm} objective = {res.objective:.6g}, "
          f"null quantile = {base.quantile:.4f}")


def _read_table(text: str) -> tuple[list[str], list[str]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["rank", "domain_a", "domain_b"]:
        raise ParseError("ranking table header must be rank,domain_a,domain_b", 1)
    rows = []
    for row in reader:
        if not row:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", reader.line_num)
        try:
            rows.append((int(row[0]), ingest.normalize_domain(row[1]), ingest.normalize_domain(row[2])))
        except ValueError as exc:
            raise ParseError(str(exc), reader.line_num) from None
    rows.sort()
    if [r[0] for r in rows] != list(range(1, len(rows) + 1)):
        raise ParseError("ranks must be 1..n without gaps")
    return [r[1] for r in rows], [r[2] for r in rows]


def cmd_rank_compare(args, run: Run) -> None:
    if args.spectrum_a and args.spectrum_b:
        spec_a = sp.read_spectrum(run.stream(args.spectrum_a))
        spec_b = sp.read_spectrum(run.stream(args.spectrum_b))
        common = sorted(set(spec_a.points) & set(spec_b.points))
        order_a = al.strict_ranking({d: spec_a.score(d) for d in common})
        order_b = al.strict_ranking({d: spec_b.score(d) for d in common})
    else:
        if args.table:
            text = run.read(args.table)
        else:
            text = resources.files("invograph").joinpath("data/table1.csv").read_text(encoding="utf-8")
            run.inputs.append({"path": "invograph:data/table1.csv",
                               "digest": "sha256:" + hashlib.sha256(text.encode()).hexdigest()})
        order_a, order_b = _read_table(text)
    run.config.update(trials=args.trials, rng_seed=args.rng_seed)
    d2 = al.spearman_sum_d2(order_a, order_b)
    rho = al.spearman(order_a, order_b)
    perm = nm.permutation_test_spearman(order_a, order_b, args.trials, args.rng_seed)
    run.write_csv("rank_compare.csv", ["rank", "domain_a", "domain_b"],
                  ((i + 1, a, b) for i, (a, b) in enumerate(zip(order_a, order_b))))
    run.write_json("rank_compare.json", {
        "n": len(order_a), "sum_d2": d2, "rho": rho,
        "trials": perm.trials, "null_max": perm.null_max, "fraction_at_least": perm.fraction_at_least,
    })
    print(f"rho = {rho:.3f} (sum d^2 = {d2}, n = {len(order_a)})")
    print(f"null max over {perm.trials} shuffles = {perm.null_max:.3f}; "
          f"fraction >= observed = {perm.fraction_at_least:g}")


def cmd_user_trends(args, run: Run) -> None:
    _require(args, "comments")
    comments = ingest.parse_reddit_comments(run.stream(args.comments))
    users = ul.classify_users(comments, args.clinton_sub, args.trump_sub)
    forum = [c for c in comments if c.subreddit == args.forum_sub]
    run.config.update(clinton_sub=args.clinton_sub, trump_sub=args.trump_sub, forum_sub=args.forum_sub,
                      window_days=args.window_days, trials=args.trials, scope=args.scope,
                      rng_seed=args.rng_seed, include_partial=args.include_partial,
                      include_self=not args.exclude_self)
    if not forum:
        raise DegenerateDataError(f"no comments in forum subreddit {args.forum_sub}")
    start = end = None
    if not args.include_partial:
        import datetime as _dt

        days = [c.created // ul.DAY for c in forum]
        epoch = _dt.date(1970, 1, 1)
        start = epoch + _dt.timedelta(days=min(days) + args.window_days - 1)
        end = epoch + _dt.timedelta(days=max(days))
    windows = ul.interaction_windows(forum, users, args.window_days, 1, start, end,
                                     include_self=not args.exclude_self)
    series = ul.cross_cutting_ratio(windows)
    run.write_csv("user_windows.csv", ["end_date", "n_cc", "n_ct", "n_tc", "n_tt"],
                  ((w.end_date.isoformat(), w.n_cc, w.n_ct, w.n_tc, w.n_tt) for w in windows))
    run.write_csv("user_ratio.csv", ["end_date", "ratio"], ((d.isoformat(), r) for d, r in series))
    sig = ul.trend_significance(series, forum, users, args.scope, args.trials, args.rng_seed,
                                args.window_days, 1, include_self=not args.exclude_self)
    run.write_json("user_trend.json", {
        "n_clinton_users": len(users.clinton), "n_trump_users": len(users.trump),
        "observed_slope": sig.observed_slope, "min_null_slope": sig.min_null_slope,
        "null_slopes": list(sig.null_slopes), "significant": sig.significant, "scope": args.scope,
    })
    if args.svg:
        base = series[0][0].toordinal() if series else 0
        run.write_text("user_ratio.svg", svg.scatter([d.toordinal() - base for d, _ in series],
                                                     [r for _, r in series], xlabel="days",
                                                     ylabel="(CC+TT)/(CT+TC)", title="cross-cutting ratio"))
    print(f"|U_C| = {len(users.clinton)}, |U_T| = {len(users.trump)}; slope = {sig.observed_slope:.3e}, "
          f"min null slope = {sig.min_null_slope:.3e}, significant = {sig.significant}")


def cmd_synth(args, run: Run) -> None:
    months = tuple(ingest.parse_months(args.months or "2016-01..2016-11"))
    lam = [float(v) for v in args.homophily.split(",")]
    cfg = synth.SynthConfig(
        n_domains=args.n_domains,
        homophily=lam[0] if len(lam) == 1 else tuple(lam),
        right_to_left_bias=args.bias,
        volume=args.volume,
        months=months,
        rng_seed=args.rng_seed,
        seed_domain=ingest.normalize_domain(args.seed_domain),
        n_noise_domains=args.noise_domains,
    )
    run.config.update(n_domains=cfg.n_domains, homophily=lam, right_to_left_bias=cfg.right_to_left_bias,
                      volume=cfg.volume, months=list(months), rng_seed=cfg.rng_seed,
                      seed_domain=cfg.seed_domain, n_noise_domains=cfg.n_noise_domains)
    data = synth.generate(cfg)
    for p in data.write(run.out_dir):
        run.outputs.append(str(p))
    if args.comments:
        comments = synth.generate_comments(synth.CommentSynthConfig(domain_scores=data.scores,
                                                                    rng_seed=args.rng_seed))
        run.outputs.append(str(synth.write_comments(comments, run.out_dir / "comments.jsonl")))
    print(f"{len(data.reply_pairs)} reply-pair rows over {len(months)} months written to {run.out_dir}")


COMMANDS = {
    "build-graph": cmd_build_graph,
    "spectrum": cmd_spectrum,
    "outlink": cmd_outlink,
    "edge-lengths": cmd_edge_lengths,
    "crossing": cmd_crossing,
    "asymmetry": cmd_asymmetry,
    "align": cmd_align,
    "rank-compare": cmd_rank_compare,
    "user-trends": cmd_user_trends,
    "synth": cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--engagement-threshold", type=int, default=10000, help="minimum political engagement p")
    g.add_argument("--edge-threshold", type=int, default=100, help="minimum edge weight W for BFS inclusion")
    g.add_argument("--seed-domain", default="nytimes.com")
    g.add_argument("--months", help="e.g. 2016-01..2016-11 or 2016-01,2016-10 (default: all in data)")
    g.add_argument("--spectrum-months",
                   help="months pooled into the spectrum (default: those of 2016-01..2016-09 present in the data)")
    g.add_argument("--engagement-scope", choices=["month", "period"], default="month")
    g.add_argument("--rng-seed", type=int, default=0)
    g.add_argument("--weighted", action="store_true",
                   help="use edge weights: weight-mode crossings, volume-weighted slope regression")
    g.add_argument("--out-dir", type=Path, default=Path("out"))
    g.add_argument("--svg", action="store_true", help="also write SVG plots")
    g.add_argument("-v", "--verbose", action="store_true")
    inp = common.add_argument_group("inputs")
    inp.add_argument("--reply-pairs", type=Path)
    inp.add_argument("--cooccur", type=Path)
    inp.add_argument("--retweets", type=Path)
    inp.add_argument("--blacklist", type=Path)
    inp.add_argument("--spectrum", type=Path, help="precomputed spectrum CSV (skips --cooccur/--retweets)")

    parser = argparse.ArgumentParser(prog="invograph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("build-graph", parents=[common], help="monthly invocation graphs")
    p = sub.add_parser("spectrum", parents=[common], help="political spectrum from co-occurrence or Reddit")
    p.add_argument("--source", choices=["twitter", "reddit"], default="twitter")
    p.add_argument("--comments", type=Path)
    p.add_argument("--clinton-sub", default="hillaryclinton")
    p.add_argument("--trump-sub", default="The_Donald")
    sub.add_parser("outlink", parents=[common], help="delta_out per domain and monthly slope a(G)")
    p = sub.add_parser("edge-lengths", parents=[common], help="edge length distribution")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--unweighted", action="store_true", help="count edges instead of weights")
    p = sub.add_parser("crossing", parents=[common], help="crossing profiles f->, f<- with rewired baseline")
    p.add_argument("--null", choices=["none", "analytic", "mc"], default="none")
    p.add_argument("--trials", type=int, default=1000)
    p = sub.add_parser("asymmetry", parents=[common], help="in/out ratio r(x) against score")
    p.add_argument("--unweighted", action="store_true", help="use edge counts for in/out degree")
    p = sub.add_parser("align", parents=[common], help="two-dimensional spectrum alignment")
    p.add_argument("--target", type=Path)
    p.add_argument("--source", type=Path)
    p.add_argument("--month-pair", help="TARGET,SOURCE months, e.g. 2016-01,2016-02")
    p.add_argument("--norm", choices=["l1", "l2"], default="l1")
    p.add_argument("--trials", type=int, default=1000)
    p = sub.add_parser("rank-compare", parents=[common], help="Spearman agreement of two rankings")
    p.add_argument("--table", type=Path, help="CSV rank,domain_a,domain_b (default: shipped table)")
    p.add_argument("--spectrum-a", type=Path)
    p.add_argument("--spectrum-b", type=Path)
    p.add_argument("--trials", type=int, default=10000)
    p = sub.add_parser("user-trends", parents=[common], help="user-level reply types over 30-day windows")
    p.add_argument("--comments", type=Path)
    p.add_argument("--clinton-sub", default="hillaryclinton")
    p.add_argument("--trump-sub", default="The_Donald")
    p.add_argument("--forum-sub", default="politics")
    p.add_argument("--window-days", type=int, default=30)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--scope", choices=["global", "monthly"], default="global")
    p.add_argument("--include-partial", action="store_true",
                   help="also report windows that extend past either end of the data")
    p.add_argument("--exclude-self", action="store_true", help="ignore users replying to themselves")
    p = sub.add_parser("synth", parents=[common], help="write a synthetic dataset")
    p.add_argument("--n-domains", type=int, default=40)
    p.add_argument("--homophily", default="0", help="one value, or one per month (comma-separated)")
    p.add_argument("--bias", type=float, default=1.0, help="right-to-left rate multiplier")
    p.add_argument("--volume", type=int, default=200)
    p.add_argument("--noise-domains", type=int, default=0)
    p.add_argument("--comments", action="store_true", help="also write a synthetic comments.jsonl")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="invograph: %(levelname)s: %(message)s")
    run = Run(args.command, args.out_dir, {})
    try:
        COMMANDS[args.command](args, run)
    except ParseError as exc:
        print(f"invograph: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"invograph: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DegenerateDataError as exc:
        print(f"invograph: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except InvographError as exc:
        print(f"invograph: error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"invograph: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    run.finish()
    return 0


if __name__ == "__main__":
    sys.exit(main())
