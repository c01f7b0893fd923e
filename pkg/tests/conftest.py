from __future__ import annotations

import numpy as np
import pytest

from invograph.graphbuild import InvocationGraph
from invograph.spectrum import Spectrum, SpectrumPoint

T3_SCORES = {"a.com": 0.1, "b.com": 0.5, "c.com": 0.9}
T3_EDGES = {
    ("a.com", "c.com"): 2,
    ("a.com", "b.com"): 1,
    ("b.com", "c.com"): 1,
    ("c.com", "a.com"): 1,
    ("c.com", "b.com"): 1,
}


def spectrum_from_scores(scores: dict[str, float]) -> Spectrum:
    return Spectrum((), {d: SpectrumPoint(d, 1.0 - s, s) for d, s in scores.items()})


def random_graph(rng: np.random.Generator, n: int, p: float = 0.3, max_w: int = 20, month: str = "2016-01"):
    """Random directed weighted graph with distinct random scores on n nodes."""
    names = [f"n{i:03d}.com" for i in range(n)]
    edges = {}
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                edges[names[i], names[j]] = int(rng.integers(1, max_w + 1))
    scores = dict(zip(names, rng.permutation(np.linspace(0.01, 0.99, n)).tolist()))
    return InvocationGraph(month, frozenset(names), edges), spectrum_from_scores(scores)


@pytest.fixture
def t3():
    G = InvocationGraph("2016-01", frozenset(T3_SCORES), dict(T3_EDGES))
    return G, spectrum_from_scores(T3_SCORES)
