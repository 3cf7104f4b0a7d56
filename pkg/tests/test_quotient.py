import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from quotring.chart import f_char, replace_span, virtual_members
from quotring.construction import DESK
from quotring.freegroup import invert, multiply
from quotring.multiturn import RingElement, check_certificate
from quotring.quotient import (
    Diagram,
    DerivedWord,
    QuotientError,
    TensorChoice,
    Truncated,
    derived_monomials,
    equal_mod_I,
    find_forbidden,
    is_lambda_semicanonical,
    mu_apply,
    multiply_mod_I,
    satisfies_stilde,
    semicanonical_reduce,
)

from wordgen import forbidden_pair

P = DESK.with_bound(3)
v, w = P.v, P.w
V = invert(v)
YS = [i for i, ch in enumerate(v) if ch == "y"]


def element(*words):
    return RingElement.of(words)


def y_inverse_count(word):
    return word.count("Y")


def piece(first, last):
    """The part of v holding y-indices first..last (inclusive)."""
    start = 0 if first == 0 else YS[first - 1] + 1
    return v[start : YS[last] + 1]


def test_semicanonical_examples():
    assert is_lambda_semicanonical(v, P)
    assert not is_lambda_semicanonical(V, P)
    assert is_lambda_semicanonical(invert(piece(10, 59)), P)  # Λ = 1/2
    assert not is_lambda_semicanonical(invert(piece(10, 76)), P)  # Λ = 67/100


def test_reduce_examples():
    out, cert = semicanonical_reduce(element(V), P)
    assert out == element("", w)
    assert check_certificate(element(V, "", w), cert, P)
    same, empty = semicanonical_reduce(element(v, "xz"), P)
    assert same == element(v, "xz") and empty.pairs == ()
    out, cert = semicanonical_reduce(element("z" + V + "t"), P)
    assert out == element("z" + w + "t", "zt")
    assert check_certificate(element("z" + V + "t", "z" + w + "t", "zt"), cert, P)


def test_safe_mode_reduction():
    out, cert = semicanonical_reduce(element("z" + V + "t"), P, mode="safe")
    assert all(is_lambda_semicanonical(m, P) for m in out)
    assert check_certificate(element("z" + V + "t") + out, cert, P)


def test_letter_count_can_grow_at_desk_scale():
    # v_m^-1 over the first 67 segments: the rewrite v_f·w·v_i is longer than v_m^-1
    vm_inv = invert(piece(0, 66))
    log = []
    semicanonical_reduce(element(vm_inv), P, log=log)
    step = log[0]
    assert max(len(o) for o in step.outputs) > len(step.word)
    assert all(y_inverse_count(o) < y_inverse_count(step.word) for o in step.outputs)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9))
def test_reduction_invariants(seed):
    rng = random.Random(seed)
    parts = []
    for _ in range(rng.randint(1, 3)):
        a = rng.randint(0, 99)
        b = rng.randint(a, 99)
        parts.append(invert(piece(a, b)) if rng.random() < 0.7 else piece(a, b))
        parts.append(rng.choice(["z", "t", "zz", "T", w]))
    e = element("".join(parts))
    log = []
    out, cert = semicanonical_reduce(e, P, log=log)
    assert all(is_lambda_semicanonical(m, P) for m in out)
    assert check_certificate(e + out, cert, P)
    for step in log:
        assert all(y_inverse_count(o) < y_inverse_count(step.word) for o in step.outputs)


def test_stilde_examples():
    assert satisfies_stilde(v, P)
    assert satisfies_stilde(v + "zz" + v, P)
    assert not satisfies_stilde("z" + V + "t", P)


def test_derived_monomials():
    items = list(derived_monomials(v + w, P, budget=40, max_syllables=1))
    words = {i.word for i in items if isinstance(i, DerivedWord)}
    assert v in words and "" in words
    root = f_char(v + w, P)
    assert all(i.f <= root for i in items if isinstance(i, DerivedWord))
    assert [i.word for i in derived_monomials("xz", P)] == ["xz"]
    first_two = list(derived_monomials(v + w, P, budget=1))
    assert isinstance(first_two[-1], Truncated)


def test_mu_apply():
    base = v + "zz" + v + "zz" + v
    members = virtual_members(base, P)
    assert len(members) == 3
    same = tuple(m.word for m in members)
    assert mu_apply(TensorChoice(base, same), P) == base
    one_low = ("",) + same[1:]
    expected = replace_span(base, members[0].start, members[0].end, "").word
    assert mu_apply(TensorChoice(base, one_low), P) == expected
    assert mu_apply(TensorChoice(base, ("", "", "")), P) == RingElement()
    with pytest.raises(QuotientError, match="arity"):
        mu_apply(TensorChoice(base, ("",)), P)


def test_multiply_examples():
    u1 = v + "zz"
    out, diagram, cert = multiply_mod_I(u1, "", P)
    assert out == element(u1) and diagram.lenses == [] and cert.pairs == ()
    out, diagram, _ = multiply_mod_I(v, w, P)
    assert out == element(v + w) and diagram.lenses == []
    with pytest.raises(QuotientError, match="S̃"):
        multiply_mod_I("z" + V + "t", "", P)


def test_multiply_forced_merge():
    a, b = piece(0, 49), piece(50, 99)
    u1, u2 = "z" + invert(b), invert(a) + "t"
    out, diagram, cert = multiply_mod_I(u1, u2, P)
    assert multiply(u1, u2) == "z" + V + "t"
    assert "z" + v + "t" in out.monomials
    assert diagram.stages == 1
    assert all(satisfies_stilde(m, P) for m in out)
    assert check_certificate(element("z" + V + "t") + out, cert, P)
    data = json.loads(json.dumps(diagram.to_json()))
    again = Diagram.from_json(data)
    assert again.to_json() == diagram.to_json()
    dot = diagram.to_dot()
    assert "cluster_lens0" in dot and "P [shape=diamond" in dot


def test_multiply_random_family():
    rng = random.Random(11)
    for _ in range(5):
        u1, u2 = forbidden_pair(rng, P)
        if not (satisfies_stilde(u1, P) and satisfies_stilde(u2, P)):
            continue
        out, diagram, cert = multiply_mod_I(u1, u2, P)
        assert check_certificate(element(multiply(u1, u2)) + out, cert, P)
        assert diagram.stages <= 2


def test_equality():
    assert equal_mod_I(element("", v, v + w), RingElement(), P).equal
    res = equal_mod_I(element(V), element("", w), P)
    assert res.equal and check_certificate(element(V, "", w), res.certificate, P)
    res = equal_mod_I(element(v + w, v), element(""), P)
    assert res.equal and check_certificate(element(v + w, v, ""), res.certificate, P)
    res = equal_mod_I(element(v), element(""), P)
    assert res.status == "unknown" and "nonzero" in res.evidence


def _times(e, word):
    total = RingElement()
    for m in e:
        out, _, _ = multiply_mod_I(m, word, P)
        total = total + out
    return total


def _times_left(word, e):
    total = RingElement()
    for m in e:
        out, _, _ = multiply_mod_I(word, m, P)
        total = total + out
    return total


def test_associativity_spot_checks():
    rng = random.Random(12)
    checked = 0
    while checked < 3:
        a, b = forbidden_pair(rng, P)
        c = rng.choice(["z", "t", w, v[:200]])
        if not all(satisfies_stilde(x, P) for x in (a, b, c)):
            continue
        ab, _, _ = multiply_mod_I(a, b, P)
        if not all(satisfies_stilde(x, P) for x in ab):
            continue
        bc, _, _ = multiply_mod_I(b, c, P)
        if not all(satisfies_stilde(x, P) for x in bc):
            continue
        left = _times(ab, c)
        right = _times_left(a, bc)
        assert equal_mod_I(left, right, P).equal
        checked += 1
