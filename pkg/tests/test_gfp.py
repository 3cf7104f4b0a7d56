import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from quotring.construction import DESK, Params
from quotring.freegroup import invert, reduce
from quotring.gfp import (
    assemble,
    classify_path,
    incident_monomials,
    maximal_occurrences,
    maximal_occurrences_window,
    parse_gfp,
    raw_maximal_occurrences,
    shadow,
    spines,
)
from quotring.ratfun import ONE, V_SHADOW, Rat2

P = DESK.with_bound(3)
SMALL = Params(alpha=3, beta=6)  # v = xxxy xxxxy xxxxxy; not a valid desk configuration, fine for the scan


def rose_edges(p):
    """Directed labelled edges of the rose: O --v--> O and O --w--> O, split per letter."""
    edges = []
    for name, word in (("V", p.v), ("W", p.w)):
        nodes = ["O"] + [(name, i) for i in range(1, len(word))] + ["O"]
        for i, ch in enumerate(word):
            edges.append((nodes[i], ch, nodes[i + 1]))
    return edges


def is_gfp_oracle(word, p):
    edges = rose_edges(p)
    step = {}
    for a, ch, b in edges:
        step.setdefault((a, ch), set()).add(b)
        step.setdefault((b, ch.upper()), set()).add(a)
    states = {a for a, _, _ in edges} | {b for _, _, b in edges}
    for ch in word:
        states = set().union(*(step.get((s, ch), set()) for s in states)) if states else set()
        if not states:
            return False
    return True


def maximal_spans_oracle(word, p):
    n = len(word)
    good = [(i, e) for i in range(n) for e in range(i + 1, n + 1) if is_gfp_oracle(word[i:e], p)]
    return sorted(s for s in good if not any(o != s and o[0] <= s[0] and s[1] <= o[1] for o in good))


def pieces_word(rng, p, count):
    arcs = [p.v, invert(p.v), p.w, invert(p.w)]
    parts = []
    for _ in range(count):
        arc = rng.choice(arcs)
        i = rng.randint(0, len(arc) - 1)
        parts.append(arc[i : rng.randint(i + 1, len(arc))] if rng.random() < 0.6 else arc)
        if rng.random() < 0.3:
            parts.append(rng.choice("xyztXYZT"))
    return reduce("".join(parts))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_maximal_occurrences_match_oracle(seed, count):
    rng = random.Random(seed)
    word = pieces_word(rng, SMALL, count)
    found = raw_maximal_occurrences(word, SMALL)
    assert [o.span for o in found] == maximal_spans_oracle(word, SMALL)
    for o in found:
        assert assemble(o.path, SMALL) == o.word
        assert o.path.y_count == o.word.count("y") + o.word.count("Y")


def test_single_v():
    occ = maximal_occurrences(P.v, P)
    assert len(occ) == 1 and occ[0].span == (0, len(P.v))
    assert occ[0].measure == 1
    assert classify_path(occ[0].path) == "VV"
    assert occ[0].path.spine == (("v", 1),)


def test_w_powers_have_measure_zero_and_are_suppressed():
    for k in range(1, 4):
        path = parse_gfp(P.w * k, P)
        assert path is not None and path.measure == 0
        assert maximal_occurrences(P.w * k, P) == []


def test_vwv_is_one_occurrence_of_measure_two():
    word = P.v + P.w + P.v
    occ = maximal_occurrences(word, P)
    assert len(occ) == 1 and occ[0].measure == 2


def test_separated_by_double_z():
    word = P.v + "zz" + P.v
    occ = maximal_occurrences(word, P)
    assert [o.measure for o in occ] == [1, 1]
    assert occ[0].end < occ[1].start


def test_inverse_middle_piece():
    ys = [i for i, ch in enumerate(P.v) if ch == "y"]
    piece = invert(P.v[ys[39] + 1 : ys[59] + 1])
    path = parse_gfp(piece, P)
    assert path is not None and path.measure == Fraction(20, 100)
    assert path.spine == ()
    assert assemble(path, P) == piece


def test_not_a_gfp():
    assert parse_gfp("xz", P) is None


def test_path_types():
    v, w = P.v, P.w
    assert classify_path(parse_gfp(v[100:] + w[:1], P)) == "VW"
    assert classify_path(parse_gfp(w[1:] + v + w[:1], P)) == "WW"


def test_shadows():
    assert shadow(parse_gfp(P.v, P), P) == V_SHADOW
    assert shadow(parse_gfp(invert(P.v), P), P) == Rat2.make(0b11)
    assert shadow(parse_gfp(P.v + P.w, P), P) + shadow(parse_gfp(P.w + P.v, P), P) == Rat2.make(0)


def test_incident_monomials_of_identity_loop():
    path = parse_gfp(P.v + P.w, P)
    inc = incident_monomials(path, P, max_syllables=2)
    for word in ("", P.v, P.v + P.w):
        assert word in inc


def test_bound_zero_spines_have_no_w():
    assert all(var == 1 for t in spines(P, 0, 3) for var, _ in t)


def test_window_scan_agrees_with_full_scan():
    rng = random.Random(3)
    word = pieces_word(rng, P, 8)
    full = maximal_occurrences(word, P)
    for o in full:
        local = maximal_occurrences_window(word, o.start, o.end, P)
        assert o.span in [x.span for x in local]
