from __future__ import annotations

import io

import pytest
from hypothesis import given, strategies as st

from invograph.errors import ParseError, PreconditionError
from invograph.ingest import CoOccurrenceRecord, RedditComment, RetweetTotals
from invograph.spectrum import (
    Spectrum,
    SpectrumPoint,
    compute_engagement,
    compute_spectrum,
    political_score,
    read_spectrum,
    reddit_spectrum,
    write_spectrum,
)


def test_engagement():
    assert compute_engagement([CoOccurrenceRecord("2016-01", "x.com", 3, 4)], ["2016-01"]) == {"x.com": 7}
    recs = [CoOccurrenceRecord("2016-01", "x.com", 1, 0), CoOccurrenceRecord("2016-02", "x.com", 0, 2)]
    assert compute_engagement(recs, ["2016-01", "2016-02"])["x.com"] == 3
    assert compute_engagement(recs, ["2016-01"]).get("y.com", 0) == 0


@pytest.mark.parametrize("p_c, p_t, s", [(0.02, 0.02, 0.5), (0.3, 0.0, 0.0), (0.01, 0.03, 0.75)])
def test_political_score(p_c, p_t, s):
    assert political_score(p_c, p_t) == pytest.approx(s, abs=1e-15)


def test_point_rejects_all_zero():
    with pytest.raises(PreconditionError):
        SpectrumPoint("x.com", 0.0, 0.0)


def test_compute_spectrum_pools_as_ratio_of_sums():
    co = [CoOccurrenceRecord("2016-01", "x.com", 10, 0), CoOccurrenceRecord("2016-02", "x.com", 0, 30)]
    tot = [RetweetTotals("2016-01", 100, 100), RetweetTotals("2016-02", 100, 200)]
    spec = compute_spectrum(co, tot, ["2016-01", "2016-02"])
    p = spec.points["x.com"]
    assert p.p_c == pytest.approx(10 / 200)
    assert p.p_t == pytest.approx(30 / 300)
    assert spec.score("x.com") == pytest.approx(0.1 / 0.15)


@pytest.mark.parametrize("tot", [[], [RetweetTotals("2016-01", 0, 10)]])
def test_compute_spectrum_bad_totals_name_month(tot):
    with pytest.raises(PreconditionError, match="2016-01"):
        compute_spectrum([CoOccurrenceRecord("2016-01", "x.com", 1, 1)], tot, ["2016-01"])


def _comments(sub, n, with_x):
    return [RedditComment(f"{sub}{i}", None, "u", sub, 0, frozenset({"x.com"}) if i < with_x else frozenset())
            for i in range(n)]


def test_reddit_spectrum_example():
    spec = reddit_spectrum(_comments("hc", 100, 2) + _comments("td", 300, 6), "hc", "td")
    p = spec.points["x.com"]
    assert (p.p_c, p.p_t) == (pytest.approx(0.02), pytest.approx(0.02))
    assert p.score == pytest.approx(0.5)


def test_reddit_spectrum_boundaries():
    spec = reddit_spectrum(_comments("hc", 10, 3) + _comments("td", 10, 0), "hc", "td")
    assert spec.score("x.com") == 0.0
    spec = reddit_spectrum(_comments("hc", 10, 0) + _comments("td", 10, 0), "hc", "td")
    assert "x.com" not in spec
    with pytest.raises(PreconditionError):
        reddit_spectrum(_comments("hc", 10, 0), "hc", "td")


@given(st.dictionaries(st.sampled_from(["a.com", "b.org", "c.co.uk"]),
                       st.tuples(st.floats(0, 1), st.floats(0, 1)).filter(lambda t: t[0] + t[1] > 0)))
def test_spectrum_csv_roundtrip(pts):
    spec = Spectrum((), {d: SpectrumPoint(d, a, b) for d, (a, b) in pts.items()})
    buf = io.StringIO()
    write_spectrum(spec, buf)
    assert read_spectrum(io.StringIO(buf.getvalue())).points == spec.points


def test_read_spectrum_checks_score_column():
    with pytest.raises(ParseError):
        read_spectrum(io.StringIO("domain,p_c,p_t,score\nx.com,0.5,0.5,0.9\n"))


def test_score_in_unit_interval_and_monotone():
    base = political_score(0.2, 0.3)
    assert 0 <= base <= 1
    assert political_score(0.2, 0.4) > base > political_score(0.3, 0.3)
