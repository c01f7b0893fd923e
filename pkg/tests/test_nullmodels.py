from __future__ import annotations

import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from invograph.embedmetrics import crossing_at
from invograph.errors import DegenerateDataError, PreconditionError
from invograph.graphbuild import InvocationGraph
from invograph.ingest import RedditComment
from invograph.nullmodels import (
    analytic_expected_crossing,
    comment_month,
    expected_crossing,
    monte_carlo_crossing,
    permutation_test_spearman,
    rewire,
    shuffle_users,
    trial_seeds,
)

from conftest import random_graph, spectrum_from_scores


def degrees(G):
    out, inn = Counter(), Counter()
    for (a, b), w in G.edges.items():
        out[a] += w
        inn[b] += w
    return out, inn


def test_single_edge_is_fixed():
    G = InvocationGraph("", frozenset({"a.com", "b.com"}), {("a.com", "b.com"): 7})
    for seed in range(5):
        assert dict(rewire(G, seed).edges) == {("a.com", "b.com"): 7}


def test_two_stub_matchings_are_equally_likely():
    G = InvocationGraph("", frozenset({"a.com", "b.com"}), {("a.com", "b.com"): 1, ("b.com", "a.com"): 1})
    outcomes = Counter()
    for seed in range(2000):
        R = rewire(G, seed)
        assert degrees(R) == degrees(G)
        outcomes[tuple(sorted(R.edges))] += 1
    same = (("a.com", "b.com"), ("b.com", "a.com"))
    loops = (("a.com", "a.com"), ("b.com", "b.com"))
    assert set(outcomes) == {same, loops}
    assert abs(outcomes[same] - 1000) < 4 * np.sqrt(500)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 15), st.integers(0, 2**63))
def test_rewire_preserves_weighted_degrees(gseed, n, seed):
    G, _ = random_graph(np.random.default_rng(gseed), n)
    assume(G.edges)
    R = rewire(G, seed)
    assert degrees(R) == degrees(G)
    assert sum(R.edges.values()) == sum(G.edges.values())


def test_rewire_is_deterministic(t3):
    G, _ = t3
    assert rewire(G, 42) == rewire(G, 42)
    assert trial_seeds(3, 5) == trial_seeds(3, 5)
    assert len(set(trial_seeds(3, 50))) == 50


def test_t3_analytic_at_half(t3):
    G, spec = t3
    prof = analytic_expected_crossing(G, spec)
    # right: out_w(A) = 3 times in_w(C) = 3; left: out_w(C) = 2 times in_w(A) = 1; total 6
    assert prof.value(0.5) == pytest.approx((1.5, 1 / 3))
    assert prof.value(0.05) == (0.0, 0.0)
    assert expected_crossing(G, spec, "weight").value(0.5) == prof.value(0.5)


def test_analytic_needs_edges():
    G = InvocationGraph("", frozenset({"a.com"}), {})
    with pytest.raises(DegenerateDataError):
        analytic_expected_crossing(G, spectrum_from_scores({"a.com": 0.5}))


def _independent_mc(G, scores, ys, trials, seed):
    """Plain-Python configuration model: shuffle a list of in-stubs with random.Random."""
    rng = random.Random(seed)
    outs, ins = [], []
    for (a, b), w in G.edges.items():
        outs += [a] * w
        ins += [b] * w
    acc = np.zeros((trials, len(ys), 2))
    for t in range(trials):
        rng.shuffle(ins)
        edges = Counter(zip(outs, ins))
        for k, y in enumerate(ys):
            acc[t, k] = [sum(1 for (a, b) in edges if scores[a] < y < scores[b]),
                         sum(1 for (a, b) in edges if scores[a] > y > scores[b])]
    return acc.mean(axis=0), acc.std(axis=0, ddof=1) / np.sqrt(trials)


def test_count_mode_mc_agrees_with_independent_simulation():
    G, spec = random_graph(np.random.default_rng(7), 8, p=0.5, max_w=4)
    scores = spec.scores()
    ys = sorted(set(np.round(np.linspace(0.05, 0.95, 7), 3)))
    mc = monte_carlo_crossing(G, spec, "count", trials=1000, rng_seed=1)
    ref, ref_se = _independent_mc(G, scores, ys, 1000, 2)
    for k, y in enumerate(ys):
        got = mc.value(y)
        j = int(np.searchsorted(mc.breakpoints, y)) - 1
        se = np.hypot([mc.f_right_se[j], mc.f_left_se[j]], ref_se[k])
        assert abs(got[0] - ref[k, 0]) <= 4 * se[0] + 1e-12
        assert abs(got[1] - ref[k, 1]) <= 4 * se[1] + 1e-12


def test_weight_mode_mc_brackets_analytic(t3):
    G, spec = t3
    mc = monte_carlo_crossing(G, spec, "weight", trials=2000, rng_seed=5)
    an = analytic_expected_crossing(G, spec)
    for j in range(len(an.f_right)):
        assert abs(mc.f_right[j] - an.f_right[j]) <= 4 * mc.f_right_se[j] + 1e-12
        assert abs(mc.f_left[j] - an.f_left[j]) <= 4 * mc.f_left_se[j] + 1e-12


def test_mc_single_trial_replays_with_rewire(t3):
    G, spec = t3
    seeds = trial_seeds(9, 2)
    mc = monte_carlo_crossing(G, spec, "count", trials=2, rng_seed=9)
    vals = [crossing_at(rewire(G, s), spec, 0.3, "count") for s in seeds]
    assert mc.value(0.3) == pytest.approx(tuple(np.mean(vals, axis=0)))


def test_mc_needs_two_trials(t3):
    G, spec = t3
    with pytest.raises(PreconditionError):
        monte_carlo_crossing(G, spec, trials=1)


def _comments(n, seed=0):
    rng = np.random.default_rng(seed)
    return [RedditComment(str(i), None, f"u{rng.integers(5)}", "politics",
                          1451606400 + int(rng.integers(0, 200)) * 86400, frozenset()) for i in range(n)]


def test_shuffle_single_comment():
    c = _comments(1)
    assert shuffle_users(c, rng_seed=3) == c


@pytest.mark.parametrize("seed", [0, 1, 2, 99])
def test_shuffle_preserves_author_multiset(seed):
    cs = _comments(200)
    out = shuffle_users(cs, "global", seed)
    assert Counter(c.author for c in out) == Counter(c.author for c in cs)
    assert [(c.id, c.created, c.subreddit) for c in out] == [(c.id, c.created, c.subreddit) for c in cs]


@pytest.mark.parametrize("seed", [0, 5])
def test_monthly_shuffle_preserves_per_month_counts(seed):
    cs = _comments(300)
    out = shuffle_users(cs, "monthly", seed)
    key = lambda cc: Counter((comment_month(c), c.author) for c in cc)  # noqa: E731
    assert key(out) == key(cs)
    assert out != cs


def test_shuffle_scope_validation():
    with pytest.raises(PreconditionError):
        shuffle_users(_comments(3), "weekly")


def test_shuffle_of_shuffle_has_same_null_distribution():
    # frequency of "comment 0 keeps author of comment 0" under one vs two shuffles
    cs = [RedditComment(str(i), None, f"u{i}", "p", 0, frozenset()) for i in range(4)]
    once = sum(shuffle_users(cs, rng_seed=s)[0].author == "u0" for s in range(4000))
    twice = sum(shuffle_users(shuffle_users(cs, rng_seed=s), rng_seed=s + 10**6)[0].author == "u0"
                for s in range(4000))
    assert abs(once - 1000) < 120 and abs(twice - 1000) < 120


def test_permutation_identity_and_reversal():
    items = [f"d{i}" for i in range(21)]
    assert permutation_test_spearman(items, items, 100).observed == 1.0
    assert permutation_test_spearman(items, items[::-1], 100).observed == -1.0


def test_permutation_rejects_mismatch():
    with pytest.raises(PreconditionError):
        permutation_test_spearman(["a", "b"], ["a", "c"], 10)


def test_permutation_null_is_centred():
    items = [f"d{i}" for i in range(21)]
    res = permutation_test_spearman(items, items, 20000, rng_seed=4)
    assert abs(res.null.mean()) < 0.01
    assert res.null.min() >= -1 and res.null.max() <= 1
    again = permutation_test_spearman(items, items, 20000, rng_seed=4)
    assert np.array_equal(res.null, again.null)
