"""Charts, coverings, virtual members and the f-characteristic of a word."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Sequence

from .construction import Params
from .freegroup import junction_cancellation
from .gfp import (
    Occurrence,
    incident_monomials,
    maximal_occurrences,
    maximal_occurrences_window,
    raw_maximal_occurrences,
)


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    kind: str  # "separated" | "touch" | "overlap"
    piece: str = ""  # gap word for "separated", shared word for "overlap"

    def __str__(self) -> str:
        return self.kind if self.kind == "touch" else f"{self.kind}({self.piece or '1'})"


@dataclass(frozen=True)
class Chart:
    host: str
    members: tuple[Occurrence, ...]
    relations: tuple[Relation, ...]


@dataclass(frozen=True)
class CoverStats:
    n_min: int
    k_tau: int
    nfc: tuple[Occurrence, ...]
    fc: tuple[Occurrence, ...]


@total_ordering
@dataclass(frozen=True)
class FChar:
    n: int
    k: int

    def __lt__(self, other: "FChar") -> bool:
        return (self.n, self.k) < (other.n, other.k)

    def __str__(self) -> str:
        return f"({self.n}, {self.k})"


# --- measures of sub-spans -----------------------------------------------------------

def span_y_count(occ: Occurrence, s: int, e: int) -> int:
    """Letters ``y``/``Y`` read on the ``v``-cycle inside ``[s, e)`` of an occurrence."""
    pos = occ.start
    count = 0
    for arc, a, b in occ.path.pieces:
        lo, hi = max(pos, s), min(pos + (b - a), e)
        if arc < 2 and lo < hi:
            text = occ.host[lo:hi]
            count += text.count("y") + text.count("Y")
        pos += b - a
    return count


def span_measure(occ: Occurrence, s: int, e: int, p: Params) -> Fraction:
    return p.measure(span_y_count(occ, s, e))


# --- relations -------------------------------------------------------------------

def neighbor_relation(a: Occurrence, b: Occurrence) -> Relation:
    if a.host is not b.host and a.host != b.host:
        raise ChartError("occurrences come from different hosts")
    if b.start < a.start:
        raise ChartError("first occurrence must start before the second")
    if b.start > a.end:
        return Relation("separated", a.host[a.end : b.start])
    if b.start == a.end:
        return Relation("touch")
    return Relation("overlap", a.host[b.start : min(a.end, b.end)])


def separated(a: Occurrence, b: Occurrence) -> bool:
    first, second = (a, b) if a.start <= b.start else (b, a)
    return second.start > first.end


def chart_of(u: str, p: Params, occurrences: Optional[Sequence[Occurrence]] = None) -> Chart:
    occ = maximal_occurrences(u, p) if occurrences is None else occurrences
    members = tuple(o for o in occ if o.measure >= p.tau)
    relations = tuple(neighbor_relation(a, b) for a, b in zip(members, members[1:]))
    return Chart(u, members, relations)


# --- coverings ---------------------------------------------------------------------

def split_nfc(occ: Sequence[Occurrence]) -> tuple[list[Occurrence], list[Occurrence]]:
    """Partition into occurrences not fully covered / fully covered by the others.

    Maximal occurrences are pairwise non-nested, so only the two neighbours in
    start order can help cover an occurrence.
    """
    nfc, fc = [], []
    for i, o in enumerate(occ):
        covered = 0 < i < len(occ) - 1 and occ[i - 1].end >= occ[i + 1].start
        (fc if covered else nfc).append(o)
    return nfc, fc


def _greedy_cover(occ: Sequence[Occurrence]) -> int:
    """Fewest occurrences whose union equals the union of ``occ`` (sorted by start)."""
    count, i, n = 0, 0, len(occ)
    while i < n:
        covered_to = occ[i].start
        while i < n and occ[i].start <= covered_to:
            best = covered_to
            while i < n and occ[i].start <= covered_to:
                best = max(best, occ[i].end)
                i += 1
            if best == covered_to:
                break
            count += 1
            covered_to = best
    return count


def _cover_count(u: str, p: Params, occ: Optional[Sequence[Occurrence]]) -> tuple[int, list[Occurrence]]:
    """N(U) over every maximal occurrence, pure ``w``-material included, plus the non-suppressed list."""
    raw = raw_maximal_occurrences(u, p)
    kept = [o for o in raw if o.path.uses_v] if occ is None else list(occ)
    return _greedy_cover(raw), kept


def cover_stats(u: str, p: Params, occurrences: Optional[Sequence[Occurrence]] = None) -> CoverStats:
    n_min, occ = _cover_count(u, p, occurrences)
    nfc, fc = split_nfc(occ)
    virtual = virtual_members(u, p, occ)
    return CoverStats(n_min, len(virtual), tuple(nfc), tuple(fc))


def essential_neighbour(occ: Sequence[Occurrence], target: Occurrence, side: str) -> Optional[Occurrence]:
    """Nearest M^nfc element on ``side`` ("left"/"right") not separated from ``target``."""
    nfc, _ = split_nfc(occ)
    best = None
    for c in nfc:
        if c.span == target.span:
            continue
        if side == "left" and c.start < target.start and c.end >= target.start:
            if best is None or c.start > best.start:
                best = c
        if side == "right" and c.start > target.start and c.start <= target.end:
            if best is None or c.start < best.start:
                best = c
    return best


# --- replacements and images ------------------------------------------------------------

@dataclass(frozen=True)
class Replacement:
    word: str  # the resulting word
    left_kept: int  # length of the surviving prefix L'
    right_skip: int  # letters of R cancelled
    right_pos: int  # position of R' inside ``word``


def replace_span(u: str, s: int, e: int, new: str) -> Replacement:
    """``L·new·R`` freely reduced, where ``u = L·u[s:e]·R``."""
    left, right = u[:s], u[e:]
    c1 = junction_cancellation(left, new)
    mid = left[: len(left) - c1] + new[c1:]
    c2 = junction_cancellation(mid, right)
    word = mid[: len(mid) - c2] + right[c2:]
    left_kept = min(len(left) - c1, len(mid) - c2)
    return Replacement(word, left_kept, c2, len(mid) - c2)


def surviving_span(rep: Replacement, a: Occurrence, b: Occurrence) -> Optional[tuple[int, int]]:
    """Where the part of ``b`` outside ``a`` sits after replacing ``a``; None if nothing survives."""
    if b.start < a.start:
        s, e = b.start, min(b.end, a.start, rep.left_kept)
        return (s, e) if s < e else None
    s = max(b.start, a.end) - a.end
    e = b.end - a.end
    s = max(s, rep.right_skip)
    if s >= e:
        return None
    shift = rep.right_pos - rep.right_skip
    return (s + shift, e + shift)


def images_in(word: str, span: tuple[int, int], p: Params) -> list[Occurrence]:
    s, e = span
    return [o for o in maximal_occurrences_window(word, s, e, p) if o.start <= s and o.end >= e]


def image_of(u_h: str, a_h: Occurrence, a_j: str, b_h: Occurrence, p: Params) -> list[Occurrence]:
    if a_h.host is not u_h and a_h.host != u_h:
        raise ChartError("a_h does not belong to u_h")
    if not any(o.span == a_h.span for o in maximal_occurrences_window(u_h, a_h.start, a_h.end, p)):
        raise ChartError("a_h is not a maximal occurrence of u_h")
    if b_h.span == a_h.span:
        raise ChartError("b_h must differ from a_h")
    rep = replace_span(u_h, a_h.start, a_h.end, a_j)
    span = surviving_span(rep, a_h, b_h)
    if span is None:
        return []
    return images_in(rep.word, span, p)


# --- virtual members ------------------------------------------------------------------

def _local(word: str, s: int, e: int, p: Params, levels: int = 2) -> list[Occurrence]:
    """Maximal occurrences around ``[s, e)``, grown ``levels`` times through touching neighbours."""
    lo, hi = s, e
    occ: list[Occurrence] = []
    for _ in range(levels + 1):
        occ = maximal_occurrences_window(word, max(0, lo - 1), min(len(word), hi + 1), p)
        if not occ:
            return occ
        lo, hi = min(lo, occ[0].start), max(hi, max(o.end for o in occ))
    return occ


def _dedupe_key(word: str, width: int) -> object:
    return word if len(word) <= 2 * width else (word[:width], word[-width:], len(word) > 4 * width)


def _side_gain(word: str, occ: list[Occurrence], b: Occurrence, side: str, p: Params, max_syllables: int) -> Fraction:
    """Best change of Λ(b) obtainable from one admissible replacement on ``side``."""
    floor = p.tau - 2 * p.epsilon
    base = b.measure
    best = Fraction(-1)
    width = 3 * p.beta
    for a in occ:
        if a.span == b.span or separated(a, b) or a.measure < floor:
            continue
        if (a.start < b.start) != (side == "left"):
            continue
        need = "right" if b.start > a.start else "left"
        if essential_neighbour(occ, a, need) is None:
            continue
        nbrs = [c for c in (essential_neighbour(occ, a, "left"), essential_neighbour(occ, a, "right")) if c is not None]
        seen: set = set()
        for a_j in incident_monomials(a.path, p, max_syllables=max_syllables):
            if a_j == a.word:
                continue
            key = _dedupe_key(a_j, width)
            if key in seen:
                continue
            seen.add(key)
            rep = replace_span(word, a.start, a.end, a_j)
            if rep.left_kept < a.start or rep.right_skip > 0:
                continue  # cancellation: a_j not visible in the new word
            aj_span = (a.start, a.start + len(a_j))
            if _covered(rep, a, aj_span, nbrs, p):
                continue
            span = surviving_span(rep, a, b)
            if span is None:
                continue
            for img in images_in(rep.word, span, p):
                gain = img.measure - base
                if gain > best:
                    best = gain
    return best


def _covered(rep: Replacement, a: Occurrence, span: tuple[int, int], nbrs: list[Occurrence], p: Params) -> bool:
    s, e = span
    if s >= e:
        return True
    pieces = []
    for c in nbrs:
        cs = surviving_span(rep, a, c)
        if cs is None:
            continue
        for img in images_in(rep.word, cs, p):
            pieces.append((img.start, img.end))
    pieces.sort()
    reach = s
    for ps, pe in pieces:
        if ps > reach:
            break
        reach = max(reach, pe)
    return reach >= e


def is_virtual(u: str, b: Occurrence, p: Params, max_syllables: int = 2) -> bool:
    """Virtual membership of an M^nfc occurrence ``b`` under the truncation bound.

    Measures at least τ are virtual and measures below τ-2ε are not.  In the
    band between, one admissible replacement is tried on each side of ``b``
    and the per-side gains are combined (the two sides act on disjoint
    occurrences, and each side can add at most ε).
    """
    if b.measure >= p.tau:
        return True
    if b.measure < p.tau - 2 * p.epsilon:
        return False
    local = _local(u, b.start, b.end, p)
    total = b.measure
    for side in ("left", "right"):
        gain = _side_gain(u, local, b, side, p, max_syllables)
        if gain > 0:
            total += gain
        if total >= p.tau:
            return True
    return False


def virtual_members(u: str, p: Params, occurrences: Optional[Sequence[Occurrence]] = None) -> list[Occurrence]:
    occ = maximal_occurrences(u, p) if occurrences is None else list(occurrences)
    nfc, _ = split_nfc(occ)
    return [b for b in nfc if is_virtual(u, b, p)]


def f_char(u: str, p: Params, occurrences: Optional[Sequence[Occurrence]] = None) -> FChar:
    n_min, occ = _cover_count(u, p, occurrences)
    return FChar(n_min, len(virtual_members(u, p, occ)))
