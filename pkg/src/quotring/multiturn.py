"""Multi-turns, their supports and ideal-membership certificates.

A certificate is a list of word pairs ``(L, R)``; it certifies the element
``sum L·(1 + v + v·w)·R`` (freely reduced, summed mod 2).

Certificates for supports are derived, not searched for.  Given a vanishing
Laurent polynomial ``P(x1, x2)`` the derivation

1. sorts every term to ``x1^a x2^b`` by adjacent swaps, each swap being a
   conjugate of ``x1 x2 + x2 x1 = g + x1^-1 g x1`` (``g = 1 + x1 + x1 x2``);
2. multiplies by ``x1^-N`` so that no positive ``x1`` power is left;
3. rewrites ``x1^a x2^b`` (``a < 0``) to ``x1^(a+1) x2^b + x1^(a+1) x2^(b+1)``,
   witnessed by ``x1^a g x2^b``.

What remains is a Laurent polynomial in ``x2`` alone that vanishes at
``x2 = w``, hence is zero term by term.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .construction import Params
from .freegroup import invert, multiply, product, reduce
from .gfp import (
    GfpPath,
    O,
    Occurrence,
    Vertex,
    assemble,
    decompose_loop,
    left_frame,
    right_frame,
    rose_of,
    term_word,
)
from .ratfun import ZERO as RAT_ZERO
from .ratfun import LaurentPoly2, Term, normalize_term, rat_eval, term_eval, term_mul


class MultiTurnError(ValueError):
    pass


# --- ring elements ------------------------------------------------------------------

@dataclass(frozen=True)
class RingElement:
    """A finite sum of reduced words with coefficients in Z/2."""

    monomials: frozenset[str] = frozenset()

    @classmethod
    def of(cls, words: Iterable[str]) -> "RingElement":
        counts = Counter(reduce(w) for w in words)
        return cls(frozenset(w for w, c in counts.items() if c % 2))

    def __add__(self, other: "RingElement") -> "RingElement":
        return RingElement(self.monomials ^ other.monomials)

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def __len__(self) -> int:
        return len(self.monomials)

    def __iter__(self):
        return iter(self.sorted())

    def sorted(self) -> list[str]:
        return sorted(self.monomials)

    def to_json(self) -> list[str]:
        return self.sorted()


ZERO = RingElement()


# --- certificates ------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    pairs: tuple[tuple[str, str], ...] = ()

    def __add__(self, other: "Certificate") -> "Certificate":
        return Certificate(self.pairs + other.pairs)

    def wrap(self, left: str, right: str) -> "Certificate":
        """Two-sided multiplication ``(L, R) -> (left·L, R·right)``."""
        return Certificate(tuple((multiply(left, a), multiply(b, right)) for a, b in self.pairs))

    def to_json(self) -> list[list[str]]:
        return [[a, b] for a, b in self.pairs]


def generator_monomials(p: Params) -> tuple[str, str, str]:
    return ("", p.v, multiply(p.v, p.w))


def expand_certificate(c: Certificate, p: Params) -> RingElement:
    gens = generator_monomials(p)
    counts: Counter[str] = Counter()
    for left, right in c.pairs:
        for g in gens:
            counts[multiply(multiply(left, g), right)] += 1
    return RingElement(frozenset(w for w, k in counts.items() if k % 2))


def check_certificate(e: RingElement, c: Certificate, p: Params) -> bool:
    return expand_certificate(c, p) == e


# --- derivations for vanishing polynomials --------------------------------------------

_SWAP_CONJ = {
    (1, 1): ((), ()),
    (1, -1): (((1, -1),), ((1, -1),)),
    (-1, 1): (((2, -1),), ((2, -1),)),
    (-1, -1): (((1, -1), (2, -1)), ((2, -1), (1, -1))),
}
_COMMUTATOR_PAIRS: tuple[tuple[Term, Term], ...] = (((), ()), (((1, -1),), ((1, 1),)))


def _letters(t: Term) -> list[tuple[int, int]]:
    out = []
    for var, exp in t:
        out.extend([(var, 1 if exp > 0 else -1)] * abs(exp))
    return out


def derive_pairs(P: LaurentPoly2) -> list[tuple[Term, Term]]:
    """Term pairs ``(L, R)`` with ``sum L g R = P`` for a vanishing ``P``."""
    pairs: list[tuple[Term, Term]] = []
    normal: Counter[tuple[int, int]] = Counter()
    for t in P.sorted_terms():
        letters = _letters(t)
        # bubble x1 letters to the front
        changed = True
        while changed:
            changed = False
            for i in range(len(letters) - 1):
                (v1, e1), (v2, e2) = letters[i], letters[i + 1]
                if v1 == 2 and v2 == 1:
                    ctx_l, ctx_r = normalize_term(letters[:i]), normalize_term(letters[i + 2 :])
                    x, y = _SWAP_CONJ[(e1, e2)]
                    for lt, rt in _COMMUTATOR_PAIRS:
                        pairs.append((term_mul(term_mul(ctx_l, x), lt), term_mul(term_mul(rt, y), ctx_r)))
                    letters[i], letters[i + 1] = letters[i + 1], letters[i]
                    changed = True
        a = sum(e for v, e in letters if v == 1)
        b = sum(e for v, e in letters if v == 2)
        normal[(a, b)] += 1
    live = {k for k, c in normal.items() if c % 2}
    if not live:
        return pairs
    top = max(a for a, _ in live)
    shifted = {(a - top, b) for a, b in live}
    lift = ((1, top),) if top else ()
    while True:
        negative = [k for k in shifted if k[0] < 0]
        if not negative:
            break
        a, b = min(negative)
        shifted ^= {(a, b)}
        shifted ^= {(a + 1, b)}
        shifted ^= {(a + 1, b + 1)}
        pairs.append((term_mul(lift, normalize_term([(1, a)])), normalize_term([(2, b)])))
    if shifted:
        raise MultiTurnError("polynomial does not vanish at ((1+w)^-1, w)")
    return pairs


def certificate_from_poly(P: LaurentPoly2, left: str, right: str, p: Params) -> Certificate:
    pairs = derive_pairs(P)
    return Certificate(tuple((multiply(left, term_word(lt, p)), multiply(term_word(rt, p), right)) for lt, rt in pairs))


# --- frames and supports -----------------------------------------------------------

def read_from_origin(word: str, p: Params) -> Optional[Vertex]:
    """End vertex of the path that reads ``word`` starting at ``O``, if any."""
    rose = rose_of(p)
    j = 0
    while j < len(word):
        arc = rose.first.get(word[j])
        if arc is None:
            return None
        text = rose.arcs[arc]
        if word.startswith(text, j):
            j += len(text)
            continue
        rest = word[j:]
        if not text.startswith(rest):
            return None
        return rose.vertex(arc, len(rest))
    return O


@dataclass(frozen=True)
class Frame:
    kind: str
    left: str
    right: str

    def anchor(self, p: Params) -> tuple[Vertex, Vertex]:
        start = read_from_origin(invert(self.left), p)
        end = read_from_origin(self.right, p)
        if start is None or end is None:
            raise MultiTurnError("frame words are not arc fragments ending/starting at O")
        return (start, end)


TRIVIAL_FRAME = Frame("trivial", "", "")


def forward_frame(start: Vertex, end: Vertex, p: Params) -> Frame:
    kind = ("V" if start[0] != "W" else "W") + ("V" if end[0] != "W" else "W")
    return Frame(f"{kind}-forward", left_frame(start, p), right_frame(end, p))


@dataclass(frozen=True)
class Support:
    monomials: frozenset[str]
    frame: Frame
    poly: LaurentPoly2
    anchor: tuple[Vertex, Vertex]
    certificate: Optional[Certificate] = field(default=None, compare=False)

    def element(self) -> RingElement:
        return RingElement(self.monomials)


def support_from_poly(P: LaurentPoly2, frame: Frame, p: Params) -> Support:
    if not rat_eval(P).is_zero():
        raise MultiTurnError("polynomial does not vanish at ((1+w)^-1, w)")
    words = [reduce(frame.left + term_word(t, p) + frame.right) for t in P.sorted_terms()]
    monomials = RingElement.of(words).monomials
    cert = certificate_from_poly(P, frame.left, frame.right, p)
    return Support(monomials, frame, P, frame.anchor(p), cert)


def certificate_for(s: Support) -> Certificate:
    if s.certificate is None:
        raise MultiTurnError("no derivation recorded")
    return s.certificate


def support_shadow_sum(s: Support, p: Params):
    """Sum of shadows of the support's monomials relative to its anchor's forward frames."""
    start, end = s.anchor
    fl, fr = left_frame(start, p), right_frame(end, p)
    total = RAT_ZERO
    for word in s.monomials:
        term = decompose_loop(reduce(invert(fl) + word + invert(fr)), p)
        if term is None:
            raise MultiTurnError("monomial does not share the support anchor")
        total = total + term_eval(term)
    return total


# --- elementary and safe multi-turns ----------------------------------------------------

def path_frame(path: GfpPath, p: Params) -> Frame:
    return forward_frame(path.rose_start, path.rose_end, p)


def elementary_multi_turn(a_h: GfpPath, P: LaurentPoly2, p: Params) -> tuple[Support, frozenset[str]]:
    s = support_from_poly(P, path_frame(a_h, p), p)
    word = assemble(a_h, p)
    if word not in s.monomials:
        raise MultiTurnError("a_h is not a monomial of the support")
    return s, s.monomials - {word}


def _visits_origin(path: GfpPath, p: Params) -> bool:
    rose = rose_of(p)
    pieces = path.pieces
    if len(pieces) != 1:
        return True
    arc, s, e = pieces[0]
    return s == 0 or e == len(rose.arcs[arc])


def safe_frame(path: GfpPath, p: Params) -> Frame:
    """Frame for a safe multi-turn.

    Leading and trailing ``w``-runs of the path stay in the frame (the path's
    end points sit on the ``w``-arc of maximal power); ``v``-points use the
    forward frames.
    """
    fwd = path_frame(path, p)
    rose = rose_of(p)
    pieces = path.pieces
    if not _visits_origin(path, p) or all(arc >= 2 for arc, _, _ in pieces):
        return fwd
    lo = 0
    while lo < len(pieces) and pieces[lo][0] >= 2 and pieces[lo][0] == pieces[0][0]:
        lo += 1
    hi = len(pieces)
    while hi > lo and pieces[hi - 1][0] >= 2 and pieces[hi - 1][0] == pieces[-1][0]:
        hi -= 1
    text = lambda pcs: "".join(rose.arcs[arc][s:e] for arc, s, e in pcs)
    left = text(pieces[:lo]) if lo else fwd.left
    right = text(pieces[hi:]) if hi < len(pieces) else fwd.right
    return Frame(fwd.kind.replace("forward", "safe"), left, right)


def safe_targets(loop: Term) -> list[Term]:
    k = sum(e for v, e in loop if v == 2)
    l = sum(e for v, e in loop if v == 1)
    wk: Term = ((2, k),) if k else ()
    if l < 0:
        out: list[Term] = [wk]
        for _ in range(-l):
            out = [term_mul(t, f) for t in out for f in (((1, 1),), ((1, 1), (2, 2)))]
        return out
    if l == 0:
        return [term_mul(wk, ((1, 1),)), term_mul(wk, ((1, 1), (2, 1)))]
    target = term_mul(wk, ((1, l),))
    if target == loop:
        return [term_mul(loop, ((1, 1),)), term_mul(loop, ((1, 1), (2, 1)))]
    return [target]


def safe_multi_turn(a_h: GfpPath, p: Params) -> Support:
    frame = safe_frame(a_h, p)
    word = assemble(a_h, p)
    loop = decompose_loop(reduce(invert(frame.left) + word + invert(frame.right)), p)
    if loop is None:
        raise MultiTurnError("path does not close up through its frame")
    P = LaurentPoly2.of(loop, *safe_targets(loop))
    s = support_from_poly(P, frame, p)
    if word not in s.monomials:
        raise MultiTurnError("a_h cancelled out of its own safe support")
    return s


def apply_multi_turn(u_h: str, occ: Occurrence, s: Support) -> RingElement:
    word = occ.word
    if word not in s.monomials:
        raise MultiTurnError("occurrence word is not a monomial of the support")
    left, right = u_h[: occ.start], u_h[occ.end :]
    return RingElement.of(product(left, a_j, right) for a_j in s.monomials if a_j != word)


def apply_certificate(u_h: str, occ: Occurrence, s: Support) -> Certificate:
    """Certificate for ``u_h + apply_multi_turn(u_h, occ, s)``."""
    return certificate_for(s).wrap(u_h[: occ.start], u_h[occ.end :])
