from __future__ import annotations

import csv
import io
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invograph.align import (
    align_spectra,
    alignment_objective,
    l1_objective,
    scaled_spectrum,
    shuffled_alignment_baseline,
    solve_l1_scale,
    solve_l2_scale,
    spearman,
    spearman_sum_d2,
    strict_ranking,
)
from invograph.errors import DegenerateDataError, PreconditionError
from invograph.spectrum import Spectrum, SpectrumPoint
from invograph.synth import perturbed_spectrum, random_spectrum


def table1():
    text = resources.files("invograph").joinpath("data/table1.csv").read_text(encoding="utf-8")
    rows = list(csv.DictReader(io.StringIO(text)))
    return [r["domain_a"] for r in rows], [r["domain_b"] for r in rows]


@pytest.mark.parametrize("u, v, c", [([1, 2, 3], [1, 2, 3], 1.0), ([2, 4], [1, 2], 2.0), ([1, 2], [1, 1], 1.5)])
def test_l2_examples(u, v, c):
    assert solve_l2_scale(u, v) == pytest.approx(c, abs=1e-15)


def test_l2_zero_vector():
    with pytest.raises(DegenerateDataError):
        solve_l2_scale([1, 2], [0, 0])


@pytest.mark.parametrize(
    "u, v, c, obj",
    [([1, 2, 10], [1, 1, 1], 2.0, 9.0), ([3, 6, 9], [1, 2, 3], 3.0, 0.0), ([1, 3], [1, 1], 1.0, 2.0)],
)
def test_l1_examples(u, v, c, obj):
    got = solve_l1_scale(u, v)
    assert got == c
    assert l1_objective(u, v, got) == pytest.approx(obj)


def test_l1_drops_zero_weights_and_rejects_all_zero():
    assert solve_l1_scale([5, 1, 2], [0, 1, 1]) == 1.0
    with pytest.raises(DegenerateDataError):
        solve_l1_scale([1, 2], [0, 0])
    with pytest.raises(PreconditionError):
        solve_l1_scale([1, 2], [1, -1])


vecs = st.lists(st.tuples(st.floats(0, 10), st.floats(0.01, 10)), min_size=1, max_size=15)


@settings(max_examples=200)
@given(vecs)
def test_l1_beats_every_candidate(pairs):
    u = np.array([p[0] for p in pairs])
    v = np.array([p[1] for p in pairs])
    c = solve_l1_scale(u, v)
    best = min(l1_objective(u, v, r) for r in u / v)
    assert l1_objective(u, v, c) <= best + 1e-9


@settings(max_examples=200)
@given(vecs, st.floats(0.1, 10))
def test_scale_equivariance(pairs, alpha):
    u = np.array([p[0] for p in pairs])
    v = np.array([p[1] for p in pairs])
    assert solve_l2_scale(alpha * u, v) == pytest.approx(alpha * solve_l2_scale(u, v), rel=1e-9, abs=1e-12)
    assert solve_l1_scale(alpha * u, v) == pytest.approx(alpha * solve_l1_scale(u, v), rel=1e-9, abs=1e-12)


@settings(max_examples=200)
@given(vecs)
def test_l2_gradient_vanishes(pairs):
    u = np.array([p[0] for p in pairs])
    v = np.array([p[1] for p in pairs])
    c = solve_l2_scale(u, v)
    grad = -2 * np.dot(v, u - c * v)
    assert abs(grad) <= 1e-9 * max(1.0, np.dot(u, u))


def test_align_identity_and_halving():
    spec = random_spectrum(12, rng_seed=1)
    res = align_spectra(spec, spec)
    assert (res.scale_a, res.scale_b, res.objective) == (pytest.approx(1), pytest.approx(1), pytest.approx(0, abs=1e-24))
    half = perturbed_spectrum(spec, 2.0, 2.0)  # both axes halved
    for norm in ("l1", "l2"):
        res = align_spectra(spec, half, norm)
        assert res.scale_a == pytest.approx(2) and res.scale_b == pytest.approx(2)
        assert res.objective == pytest.approx(0, abs=1e-12)


def test_align_local_optimality():
    rng = np.random.default_rng(3)
    for trial in range(20):
        a = random_spectrum(10, rng_seed=int(rng.integers(1 << 30)))
        b = random_spectrum(10, rng_seed=int(rng.integers(1 << 30)))
        res = align_spectra(a, b, "l2")
        base = alignment_objective(a, b, res.scale_a, res.scale_b, "l2")
        assert res.objective == pytest.approx(base, abs=1e-9)
        for da, db in [(1e-3, 0), (-1e-3, 0), (0, 1e-3), (0, -1e-3)]:
            assert base <= alignment_objective(a, b, res.scale_a + da, res.scale_b + db, "l2")


def test_align_uses_intersection():
    a = Spectrum((), {"x.com": SpectrumPoint("x.com", 0.2, 0.4), "y.com": SpectrumPoint("y.com", 0.1, 0.1)})
    b = Spectrum((), {"x.com": SpectrumPoint("x.com", 0.1, 0.2), "z.com": SpectrumPoint("z.com", 0.5, 0.5)})
    res = align_spectra(a, b)
    assert set(res.per_domain_residuals) == {"x.com"}
    assert res.scale_a == pytest.approx(2)
    with pytest.raises(PreconditionError):
        align_spectra(a, Spectrum((), {"q.com": SpectrumPoint("q.com", 1, 1)}))


def test_scaling_preserves_score_ordering():
    spec = random_spectrum(30, rng_seed=11)
    target = perturbed_spectrum(spec, 1.7, 0.6, noise=0.05, rng_seed=2)
    res = align_spectra(target, spec, "l1")
    scaled = scaled_spectrum(spec, res.scale_a, res.scale_b)
    names = sorted(spec.points)
    before = np.argsort([spec.score(d) for d in names], kind="stable")
    after = np.argsort([scaled.score(d) for d in names], kind="stable")
    assert np.array_equal(before, after)


def test_baseline_identity_and_single_domain():
    spec = random_spectrum(15, rng_seed=4)
    base = shuffled_alignment_baseline(spec, spec, "l1", 50, 0)
    assert base.real_objective == pytest.approx(0, abs=1e-12)
    assert np.all(base.real_objective <= base.null_objectives + 1e-12)
    one = Spectrum((), {"x.com": SpectrumPoint("x.com", 0.2, 0.3)})
    b1 = shuffled_alignment_baseline(one, perturbed_spectrum(one, 2, 3), "l2", 5, 0)
    assert np.allclose(b1.null_objectives, b1.real_objective)


def test_baseline_well_separated_spectra():
    spec = random_spectrum(20, rng_seed=8)
    other = perturbed_spectrum(spec, 0.8, 1.3, noise=0.02, rng_seed=9)
    base = shuffled_alignment_baseline(spec, other, "l1", 200, 1)
    assert base.real_objective < np.percentile(base.null_objectives, 5)


def test_table1_spearman():
    a, b = table1()
    assert len(a) == 21
    assert spearman_sum_d2(a, b) == 198
    assert spearman(a, b) == pytest.approx(1 - 6 * 198 / 9240, abs=1e-15)
    assert round(spearman(a, b), 3) == 0.871


def test_spearman_symmetry_and_relabel():
    a, b = table1()
    assert spearman(a, b) == spearman(b, a)
    ren = {d: f"item{i}" for i, d in enumerate(sorted(a))}
    assert spearman([ren[d] for d in a], [ren[d] for d in b]) == spearman(a, b)
    assert spearman(a, a) == 1.0
    assert spearman(a, a[::-1]) == -1.0


def test_spearman_errors():
    with pytest.raises(PreconditionError):
        spearman(["a", "b"], ["a", "c"])
    with pytest.raises(PreconditionError):
        spearman(["a", "a"], ["a", "a"])
    with pytest.raises(PreconditionError):
        strict_ranking({"a": 0.5, "b": 0.5})
    assert strict_ranking({"a": 0.2, "b": 0.9}) == ["b", "a"]
