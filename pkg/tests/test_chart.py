import random

from hypothesis import given, settings, strategies as st

from quotring.chart import (
    FChar,
    chart_of,
    cover_stats,
    f_char,
    image_of,
    neighbor_relation,
    replace_span,
    split_nfc,
    virtual_members,
    _greedy_cover,
)
from quotring.construction import DESK
from quotring.freegroup import invert, reduce
from quotring.gfp import Occurrence, incident_monomials, maximal_occurrences

P = DESK.with_bound(3)
v, w = P.v, P.w


def test_chart_of_v():
    chart = chart_of(v, P)
    assert len(chart.members) == 1 and chart.members[0].measure == 1
    stats = cover_stats(v, P)
    assert (stats.n_min, stats.k_tau) == (1, 1)
    assert [o.span for o in stats.nfc] == [(0, len(v))] and stats.fc == ()


def test_w_cube_has_empty_chart():
    assert chart_of(w * 3, P).members == ()
    # w² is one measure-0 occurrence: no members, one covering element
    assert f_char(w * 2, P) == FChar(1, 0)


def test_cover_counts_pure_w_fragments():
    # the new end of a_j reads as v[:5]⁻¹ followed by the separator's first z;
    # N stays put only because the lone z's were already counted before
    u = v[1125:5015] + "zz" + v[:2000]
    a = maximal_occurrences(u, P)[0]
    a_j = reduce(v[1125:] + "TZ" + invert(v[5015:]))
    assert a_j in incident_monomials(a.path, P, max_syllables=2)
    rep = replace_span(u, a.start, a.end, a_j).word
    assert f_char(u, P) == f_char(rep, P) == FChar(4, 2)


def test_vwv_single_member():
    chart = chart_of(v + w + v, P)
    assert len(chart.members) == 1 and chart.members[0].measure == 2
    assert f_char(v + w + v, P) == FChar(1, 1)


def test_relations():
    # v·z is itself a fractional power (z opens the w-arc), so a single z makes the members touch
    touch = chart_of(v + "z" + v, P)
    assert [str(r) for r in touch.relations] == ["touch"]
    sep = chart_of(v + "zz" + v, P)
    assert [str(r) for r in sep.relations] == ["separated(z)"]
    assert f_char(v + "z" + v, P) == FChar(2, 2)
    assert cover_stats(v + "z" + v, P).n_min == 2


def test_overlap_relation():
    ys = [i for i, ch in enumerate(v) if ch == "y"]
    # a piece ending inside v followed by a fresh piece that re-reads its last letters elsewhere
    a = v[: ys[60] + 1]
    b = v[ys[10] + 1 :]
    word = a + b
    occ = maximal_occurrences(word, P)
    members = chart_of(word, P, occ).members
    rels = [neighbor_relation(x, y) for x, y in zip(members, members[1:])]
    for x, y, r in zip(members, members[1:], rels):
        if r.kind == "overlap":
            piece = word[y.start : min(x.end, y.end)]
            assert piece.count("y") + piece.count("Y") <= 1


def _occ(s, e):
    return Occurrence("x" * 100, s, e, None)


def test_fully_covered_middle():
    occ = [_occ(0, 10), _occ(5, 15), _occ(9, 20)]
    nfc, fc = split_nfc(occ)
    assert [o.span for o in fc] == [(5, 15)]
    assert _greedy_cover(occ) == 2


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 60), st.integers(1, 15)), min_size=1, max_size=12))
def test_greedy_cover_is_minimal(raw):
    # non-nested intervals, sorted by start, as produced by a maximal-occurrence scan
    spans = sorted({(s, s + L) for s, L in raw})
    kept = [x for x in spans if not any(y != x and y[0] <= x[0] and x[1] <= y[1] for y in spans)]
    occ = [_occ(s, e) for s, e in kept]
    # brute force: smallest subset whose union equals the union of all
    from itertools import combinations

    def union(ss):
        pts = set()
        for s, e in ss:
            pts |= set(range(s, e))
        return pts

    target = union(kept)
    best = next(k for k in range(1, len(kept) + 1) if any(union(c) == target for c in combinations(kept, k)))
    assert _greedy_cover(occ) == best


def test_virtual_member_thresholds():
    ys = [i for i, ch in enumerate(v) if ch == "y"]
    small = v[: ys[4] + 1]  # measure 5/100 < τ − 2ε
    word = small + "zz" + v
    members = virtual_members(word, P)
    assert [m.measure for m in members] == [1]
    band = v[: ys[8] + 1]  # 9/100, isolated: nothing can raise it
    assert [m.measure for m in virtual_members(band + "zz" + v, P)] == [1]


def test_images():
    word = v + "zz" + v
    a, b = maximal_occurrences(word, P)
    assert [o.span for o in image_of(word, a, a.word, b, P)] == [b.span]
    assert [o.word for o in image_of(word, a, w, b, P)] == [v]
    # replacing by the identity keeps b unchanged when nothing cancels into it
    assert [o.word for o in image_of(word, a, "", b, P)] == [v]
    # full cancellation through b: removing the middle v collapses v·zz·ZZ·v^-1
    word2 = v + "zz" + v + "ZZ" + invert(v)
    occ = maximal_occurrences(word2, P)
    middle = next(o for o in occ if o.word == v and o.start > 0)
    first = occ[0]
    assert image_of(word2, middle, "", first, P) == []


def test_f_char_ordering():
    assert FChar(1, 5) < FChar(2, 0)
    assert FChar(2, 1) < FChar(2, 2)
