"""Generalized fractional powers (GFPs) and their maximal occurrences.

A GFP is a subword of a monomial over ``v`` and ``w``.  Because ``w`` does not
start or end with ``x``/``y`` (or inverses) and is cyclically reduced, the
graph made of one ``v``-cycle and one ``w``-cycle glued at a base point ``O``
is folded: a reduced word reads at most one path from any given start vertex,
and the GFPs are exactly the words readable as paths in it.

Rose vertices are tuples ``("O", 0)``, ``("V", o)`` with ``0 < o < |v|`` and
``("W", o)`` with ``0 < o < |w|``.  Arc pieces are kept in the coordinates
of one of four directed arc strings: ``v``, ``v^-1``, ``w``, ``w^-1``.

The occurrence scan is linear apart from a heap sweep:

* ``G[j]``: end of the longest path that starts at ``O`` on position ``j``;
* ``a[i]``: longest path that starts mid-arc and reaches ``O``;
* ``inner[i]``: longest path that stays inside the ``v``-cycle.

Prefix/suffix agreement with the arc strings is computed with vectorised
polynomial hashing, in-arc matches with a suffix automaton.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from .construction import Params
from .freegroup import invert, reduce
from .ratfun import Rat2, Term, normalize_term, term_eval

O = ("O", 0)
ARC_NAMES = ("v", "V", "w", "W")  # v, v^-1, w, w^-1
Vertex = tuple[str, int]


# --- hashing -------------------------------------------------------------------

_MODS = (2147483647, 2147483629)
_BASES = (911382323, 972663749)
_POW: list[np.ndarray] = [np.ones(1, dtype=np.int64), np.ones(1, dtype=np.int64)]


def _powers(n: int) -> list[np.ndarray]:
    for idx, (mod, base) in enumerate(zip(_MODS, _BASES)):
        cur = _POW[idx]
        while len(cur) < n + 1:
            m = len(cur)
            step = pow(base, m, mod)
            cur = np.concatenate([cur, cur * step % mod])
        _POW[idx] = cur
    return _POW


class _Hashed:
    __slots__ = ("text", "n", "codes", "prefix")

    def __init__(self, text: str) -> None:
        self.text = text
        self.n = len(text)
        self.codes = np.frombuffer(text.encode("ascii"), dtype=np.uint8).astype(np.int64) if text else np.zeros(0, dtype=np.int64)
        pw = _powers(self.n)
        self.prefix = []
        for idx, mod in enumerate(_MODS):
            vals = self.codes * pw[idx][: self.n] % mod
            h = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(vals, out=h[1:])
            self.prefix.append(h % mod)


_GALLOP = 16


def _gallop(ok_at, idx: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Binary search on ``[0, min(hi, 16)]`` first, widening only where that cap is reached."""
    cap = np.minimum(hi, _GALLOP)
    out = _bsearch(ok_at, idx, np.zeros(len(idx), dtype=np.int64), cap)
    more = (out == cap) & (cap < hi)
    if more.any():
        out[more] = _bsearch(ok_at, idx[more], cap[more], hi[more])
    return out


def _bsearch(ok_at, idx: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Largest ``m`` in ``[lo, hi]`` with ``ok_at(idx, m)``, assuming ``lo`` is valid and validity is monotone."""
    lo, hi = lo.copy(), hi.copy()
    while True:
        active = lo < hi
        if not active.any():
            return lo
        mid = (lo + hi + 1) // 2
        ok = ok_at(idx, mid) & active
        lo = np.where(ok, mid, lo)
        hi = np.where(ok | ~active, hi, mid - 1)


def _lcp_at(u: _Hashed, arc: _Hashed, js: np.ndarray) -> np.ndarray:
    """Longest common prefix of ``u[j:]`` and ``arc`` for each ``j`` in ``js``."""
    pw = _powers(max(u.n, arc.n))

    def ok_at(j, m):
        ok = np.ones(len(j), dtype=bool)
        for idx, mod in enumerate(_MODS):
            left = (u.prefix[idx][j + m] - u.prefix[idx][j]) % mod
            ok &= left == arc.prefix[idx][m] * pw[idx][j] % mod
        return ok

    hi = np.minimum(arc.n, u.n - js)
    return _gallop(ok_at, js, hi)


def _lcs_at(u: _Hashed, arc: _Hashed, ks: np.ndarray) -> np.ndarray:
    """Longest common suffix of ``u[:k]`` and ``arc`` for each ``k`` in ``ks``."""
    pw = _powers(max(u.n, arc.n))

    def ok_at(k, m):
        ok = np.ones(len(k), dtype=bool)
        for idx, mod in enumerate(_MODS):
            left = (u.prefix[idx][k] - u.prefix[idx][k - m]) % mod * pw[idx][arc.n - m] % mod
            right = (arc.prefix[idx][arc.n] - arc.prefix[idx][arc.n - m]) % mod * pw[idx][k - m] % mod
            ok &= left == right
        return ok

    hi = np.minimum(arc.n, ks)
    return _gallop(ok_at, ks, hi)


def _interval_max(n: int, lo: np.ndarray, hi: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """``out[i]`` = max of ``keys[t]`` over intervals ``lo[t] <= i <= hi[t]`` (-1 if none)."""
    out = np.full(n, -1, dtype=np.int64)
    if n == 0 or len(keys) == 0:
        return out
    length = hi - lo + 1
    level = np.floor(np.log2(np.maximum(length, 1))).astype(np.int64)
    levels = []
    for j in range(int(level.max()) + 1):
        table = np.full(n, -1, dtype=np.int64)
        sel = level == j
        if sel.any():
            np.maximum.at(table, lo[sel], keys[sel])
            np.maximum.at(table, hi[sel] - (1 << j) + 1, keys[sel])
        levels.append(table)
    for j in range(len(levels) - 1, 0, -1):
        half = 1 << (j - 1)
        top, below = levels[j], levels[j - 1]
        np.maximum(below, top, out=below)
        np.maximum(below[half:], top[: n - half], out=below[half:])
    return levels[0]


# --- suffix automaton for in-arc matching -----------------------------------------

class _SuffixAutomaton:
    def __init__(self, text: str) -> None:
        self.next: list[dict[str, int]] = [{}]
        self.link = [-1]
        self.length = [0]
        last = 0
        for ch in text:
            cur = len(self.next)
            self.next.append({})
            self.length.append(self.length[last] + 1)
            self.link.append(0)
            p = last
            while p != -1 and ch not in self.next[p]:
                self.next[p][ch] = cur
                p = self.link[p]
            if p != -1:
                q = self.next[p][ch]
                if self.length[p] + 1 == self.length[q]:
                    self.link[cur] = q
                else:
                    clone = len(self.next)
                    self.next.append(dict(self.next[q]))
                    self.length.append(self.length[p] + 1)
                    self.link.append(self.link[q])
                    while p != -1 and self.next[p].get(ch) == q:
                        self.next[p][ch] = clone
                        p = self.link[p]
                    self.link[q] = clone
                    self.link[cur] = clone
            last = cur
        self.alphabet = frozenset(text)

    def matching_statistics(self, u: str) -> np.ndarray:
        """``ms[k]`` = length of the longest suffix of ``u[:k]`` that occurs in the text."""
        ms = np.zeros(len(u) + 1, dtype=np.int64)
        nxt, link, length = self.next, self.link, self.length
        state, cur = 0, 0
        for k, ch in enumerate(u, 1):
            if ch not in self.alphabet:
                state, cur = 0, 0
                continue
            while state and ch not in nxt[state]:
                state = link[state]
                cur = length[state]
            if ch in nxt[state]:
                state = nxt[state][ch]
                cur += 1
            else:
                state, cur = 0, 0
            ms[k] = cur
        return ms


# --- the rose ------------------------------------------------------------------

@dataclass
class Rose:
    v: str
    w: str
    arcs: tuple[str, str, str, str]
    hashed: tuple[_Hashed, ...]
    first: dict[str, int]
    last: dict[str, int]
    automata: tuple[_SuffixAutomaton, _SuffixAutomaton]
    y_total: int

    def cycle(self, arc: int) -> str:
        return "V" if arc < 2 else "W"

    def cycle_length(self, arc: int) -> int:
        return len(self.v) if arc < 2 else len(self.w)

    def rose_offset(self, arc: int, t: int) -> int:
        """Rose offset of the point at string offset ``t`` of directed arc ``arc``."""
        m = self.cycle_length(arc)
        return t if arc % 2 == 0 else m - t

    def vertex(self, arc: int, t: int) -> Vertex:
        off = self.rose_offset(arc, t) % self.cycle_length(arc)
        return O if off == 0 else (self.cycle(arc), off)


def rose_of(p: Params) -> Rose:
    cached = p._cache.get("rose")
    if cached is None:
        v, w = p.v, p.w
        arcs = (v, invert(v), w, invert(w))
        cached = Rose(
            v=v,
            w=w,
            arcs=arcs,
            hashed=tuple(_Hashed(a) for a in arcs),
            first={a[0]: i for i, a in enumerate(arcs)},
            last={a[-1]: i for i, a in enumerate(arcs)},
            automata=(_SuffixAutomaton(arcs[0]), _SuffixAutomaton(arcs[1])),
            y_total=p.y_total,
        )
        p._cache["rose"] = cached
    return cached


# --- paths -----------------------------------------------------------------------

@dataclass(frozen=True)
class PathPoint:
    arc: str  # "V" or "W(k)"
    offset: int

    @property
    def power(self) -> int:
        return 0 if self.arc == "V" else int(self.arc[2:-1])

    def to_json(self) -> dict:
        return {"arc": self.arc, "offset": self.offset}


ORIGIN = PathPoint("V", 0)

Piece = tuple[int, int, int]  # (arc index, string start, string end)


@dataclass(frozen=True)
class GfpPath:
    start: PathPoint
    end: PathPoint
    spine: tuple[tuple[str, int], ...]
    prefix: str
    suffix: str
    y_count: int = field(default=0)
    y_total: int = field(default=1)
    rose_start: Vertex = field(default=O)
    rose_end: Vertex = field(default=O)
    pieces: tuple[Piece, ...] = field(default=(), compare=False, repr=False)

    @property
    def measure(self) -> Fraction:
        return Fraction(self.y_count, self.y_total)

    @property
    def uses_v(self) -> bool:
        return any(arc < 2 for arc, _, _ in self.pieces)

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "end": self.end.to_json(),
            "spine": [[g, e] for g, e in self.spine],
            "prefix": self.prefix,
            "suffix": self.suffix,
        }


def lambda_measure(path: GfpPath) -> Fraction:
    return path.measure


def assemble(path: GfpPath, p: Params) -> str:
    middle = []
    for g, e in path.spine:
        base = p.v if g == "v" else p.w
        middle.append((base if e > 0 else invert(base)) * abs(e))
    return reduce(path.prefix + "".join(middle) + path.suffix)


def _piece_text(rose: Rose, piece: Piece) -> str:
    arc, s, e = piece
    return rose.arcs[arc][s:e]


def _piece_y(rose: Rose, piece: Piece) -> int:
    if piece[0] >= 2:
        return 0
    text = _piece_text(rose, piece)
    return text.count("y") + text.count("Y")


def _w_point(arc: int, offset: int, count: int) -> PathPoint:
    return PathPoint(f"W({count if arc == 2 else -count})", offset)


def _v_point(rose: Rose, arc: int, t: int) -> PathPoint:
    return PathPoint("V", rose.rose_offset(arc, t))


def path_from_pieces(rose: Rose, pieces: list[Piece]) -> GfpPath:
    y_count = sum(_piece_y(rose, pc) for pc in pieces)
    if not pieces:
        return GfpPath(ORIGIN, ORIGIN, (), "", "", 0, rose.y_total, O, O, ())
    rose_start = rose.vertex(pieces[0][0], pieces[0][1])
    rose_end = rose.vertex(pieces[-1][0], pieces[-1][2])
    mlen = [len(a) for a in rose.arcs]
    start_partial = pieces[0][1] > 0
    end_partial = pieces[-1][2] < mlen[pieces[-1][0]]
    n = len(pieces)

    # whole path on one w-run entered or left mid-arc: a single W(k) arc
    first_arc = pieces[0][0]
    if first_arc >= 2 and all(pc[0] == first_arc for pc in pieces) and (start_partial or end_partial):
        word = "".join(_piece_text(rose, pc) for pc in pieces)
        k = n
        s = pieces[0][1]
        e = (n - 1) * len(rose.w) + pieces[-1][2]
        return GfpPath(_w_point(first_arc, s, k), _w_point(first_arc, e, k), (), word, "", y_count, rose.y_total, rose_start, rose_end, tuple(pieces))
    if n == 1 and start_partial and end_partial:
        arc, s, e = pieces[0]
        word = _piece_text(rose, pieces[0])
        return GfpPath(_v_point(rose, arc, s), _v_point(rose, arc, e), (), word, "", y_count, rose.y_total, rose_start, rose_end, tuple(pieces))

    lo, hi = 0, n
    start, prefix = ORIGIN, ""
    if start_partial:
        arc = pieces[0][0]
        if arc >= 2:
            stop = 1
            while stop < n - 1 and pieces[stop][0] == arc and pieces[stop][1] == 0 and pieces[stop][2] == mlen[arc]:
                stop += 1
            start = _w_point(arc, pieces[0][1], stop)
            prefix = "".join(_piece_text(rose, pc) for pc in pieces[:stop])
            lo = stop
        else:
            start = _v_point(rose, arc, pieces[0][1])
            prefix = _piece_text(rose, pieces[0])
            lo = 1
    end, suffix = ORIGIN, ""
    if end_partial:
        arc = pieces[-1][0]
        if arc >= 2:
            begin = n - 1
            while begin - 1 >= lo and pieces[begin - 1][0] == arc:
                begin -= 1
            count = n - begin
            end = _w_point(arc, (count - 1) * len(rose.w) + pieces[-1][2], count)
            suffix = "".join(_piece_text(rose, pc) for pc in pieces[begin:])
            hi = begin
        else:
            end = _v_point(rose, arc, pieces[-1][2])
            suffix = _piece_text(rose, pieces[-1])
            hi = n - 1
    spine: list[list] = []
    for arc, _, _ in pieces[lo:hi]:
        if arc < 2:
            spine.append(["v", 1 if arc == 0 else -1])
        else:
            sign = 1 if arc == 2 else -1
            if spine and spine[-1][0] == "w" and (spine[-1][1] > 0) == (sign > 0):
                spine[-1][1] += sign
            else:
                spine.append(["w", sign])
    return GfpPath(start, end, tuple((g, e) for g, e in spine), prefix, suffix, y_count, rose.y_total, rose_start, rose_end, tuple(pieces))


def classify_path(path: GfpPath) -> str:
    return ("V" if path.start.arc == "V" else "W") + ("V" if path.end.arc == "V" else "W")


# --- occurrences ------------------------------------------------------------------

@dataclass(frozen=True)
class Occurrence:
    host: str = field(repr=False)
    start: int
    end: int
    path: GfpPath = field(repr=False)

    @property
    def word(self) -> str:
        return self.host[self.start : self.end]

    @property
    def measure(self) -> Fraction:
        return self.path.measure

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def __len__(self) -> int:
        return self.end - self.start


class _Scan:
    """Per-word tables shared by occurrence enumeration and path reconstruction."""

    def __init__(self, u: str, rose: Rose) -> None:
        self.u = u
        self.rose = rose
        n = self.n = len(u)
        hashed = _Hashed(u)
        mlen = np.array([len(a) for a in rose.arcs], dtype=np.int64)
        self.mlen = mlen

        # arc leaving O at position j, and how far it matches
        self.start_arc = np.full(n + 1, -1, dtype=np.int64)
        self.pre = np.zeros(n + 1, dtype=np.int64)
        self.end_arc = np.full(n + 1, -1, dtype=np.int64)
        self.suf = np.zeros(n + 1, dtype=np.int64)
        codes = hashed.codes
        for idx, arc in enumerate(rose.arcs):
            js = np.nonzero(codes == ord(arc[0]))[0]
            if len(js):
                self.start_arc[js] = idx
                self.pre[js] = _lcp_at(hashed, rose.hashed[idx], js)
            ks = np.nonzero(codes == ord(arc[-1]))[0] + 1
            if len(ks):
                self.end_arc[ks] = idx
                self.suf[ks] = _lcs_at(hashed, rose.hashed[idx], ks)

        positions = np.arange(n + 1, dtype=np.int64)
        G = positions + self.pre
        full = np.nonzero((self.start_arc >= 0) & (self.pre == mlen[np.maximum(self.start_arc, 0)]))[0]
        G_list = G.tolist()
        for j in full[::-1].tolist():
            G_list[j] = G_list[j + int(mlen[self.start_arc[j]])]
        self.G = G_list

        # a[i] = max G[k] over k with u[i:k] a nonempty suffix of the arc ending at k
        ks = np.nonzero(self.suf > 0)[0]
        G_arr = np.array(G_list, dtype=np.int64)
        # ties on G go to the smallest k
        keys = G_arr[ks] * (n + 2) + (n + 1 - ks)
        best = _interval_max(n, ks - self.suf[ks], ks - 1, keys)
        hit = best >= 0
        self.a_val = np.where(hit, best // (n + 2), -1).tolist()
        self.a_arg = np.where(hit, n + 1 - best % (n + 2), -1).tolist()

        # paths staying inside the v-cycle
        inner = np.zeros(n, dtype=np.int64)
        inner_arc = np.zeros(n, dtype=np.int64)
        for idx, automaton in enumerate(rose.automata):
            ms = automaton.matching_statistics(u)
            starts = positions - ms  # nondecreasing in k
            reach = np.searchsorted(starts, positions[:n], side="right") - 1
            length = reach - positions[:n]
            better = length > inner
            inner[better] = length[better]
            inner_arc[better] = idx
        self.inner = inner
        self.inner_arc = inner_arc

        e = np.maximum(G_arr[:n], np.array(self.a_val, dtype=np.int64))
        e = np.maximum(e, positions[:n] + inner)
        self.e = e

    def maximal_spans(self) -> list[tuple[int, int]]:
        n = self.n
        if n == 0:
            return []
        e = self.e
        running = np.maximum.accumulate(e)
        prev = np.concatenate([[-1], running[:-1]])
        idx = np.nonzero((e > prev) & (e > np.arange(n)))[0]
        return [(int(i), int(e[i])) for i in idx]

    def _walk(self, j: int, stop: int, pieces: list[Piece]) -> None:
        while j < stop:
            arc = int(self.start_arc[j])
            m = int(self.mlen[arc])
            length = int(self.pre[j])
            if length == m:
                pieces.append((arc, 0, m))
                j += m
            else:
                pieces.append((arc, 0, length))
                j += length

    def path_at(self, i: int, e: int) -> GfpPath:
        pieces: list[Piece] = []
        if self.G[i] == e:
            self._walk(i, e, pieces)
        elif self.a_val[i] == e:
            k = self.a_arg[i]
            arc = int(self.end_arc[k])
            m = int(self.mlen[arc])
            pieces.append((arc, m - (k - i), m))
            self._walk(k, e, pieces)
        else:
            arc = int(self.inner_arc[i])
            text = self.rose.arcs[arc]
            s = text.find(self.u[i:e])
            pieces.append((arc, s, s + (e - i)))
        return path_from_pieces(self.rose, pieces)


def raw_maximal_occurrences(u: str, p: Params) -> list[Occurrence]:
    """All maximal GFP occurrences, including pure ``w``-material."""
    scan = _Scan(u, rose_of(p))
    return [Occurrence(u, i, e, scan.path_at(i, e)) for i, e in scan.maximal_spans()]


def maximal_occurrences(u: str, p: Params) -> list[Occurrence]:
    """Maximal occurrences, sorted by start; occurrences made only of ``w``-arcs are dropped."""
    return [o for o in raw_maximal_occurrences(u, p) if o.path.uses_v]


def maximal_occurrences_window(u: str, lo: int, hi: int, p: Params) -> list[Occurrence]:
    """Maximal occurrences of ``u`` that meet ``[lo, hi)``, computed on a local window.

    The window is widened until no reported occurrence touches a window edge
    that is not also an edge of ``u``.
    """
    n = len(u)
    pad = 2 * (p.beta + len(p.w))
    while True:
        a, b = max(0, lo - pad), min(n, hi + pad)
        local = u[a:b]
        found = maximal_occurrences(local, p)
        ok = True
        out: list[Occurrence] = []
        for o in found:
            s, e = o.start + a, o.end + a
            if e <= lo or s >= hi:
                if (o.start == 0 and a > 0) or (o.end == len(local) and b < n):
                    continue
                continue
            if (o.start == 0 and a > 0) or (o.end == len(local) and b < n):
                ok = False
                break
            out.append(Occurrence(u, s, e, o.path))
        if ok:
            return out
        pad *= 2


def parse_gfp(u: str, p: Params) -> Optional[GfpPath]:
    if not u:
        return path_from_pieces(rose_of(p), [])
    scan = _Scan(u, rose_of(p))
    if int(scan.e[0]) == len(u):
        return scan.path_at(0, len(u))
    return None


# --- frames, loops and incident monomials ---------------------------------------------

def left_frame(vertex: Vertex, p: Params) -> str:
    """Forward reading from ``vertex`` to ``O`` along its cycle."""
    kind, off = vertex
    if kind == "O":
        return ""
    return (p.v if kind == "V" else p.w)[off:]


def right_frame(vertex: Vertex, p: Params) -> str:
    """Forward reading from ``O`` to ``vertex`` along its cycle."""
    kind, off = vertex
    if kind == "O":
        return ""
    return (p.v if kind == "V" else p.w)[:off]


def decompose_loop(word: str, p: Params) -> Optional[Term]:
    """Write a closed path at ``O`` as a term in ``x1 = v``, ``x2 = w``."""
    rose = rose_of(p)
    syllables: list[tuple[int, int]] = []
    j = 0
    while j < len(word):
        arc = rose.first.get(word[j])
        if arc is None or not word.startswith(rose.arcs[arc], j):
            return None
        syllables.append((1 if arc < 2 else 2, 1 if arc % 2 == 0 else -1))
        j += len(rose.arcs[arc])
    return normalize_term(syllables)


def anchor(path: GfpPath) -> tuple[Vertex, Vertex]:
    return (path.rose_start, path.rose_end)


def loop_of(word: str, start: Vertex, end: Vertex, p: Params) -> Optional[Term]:
    core = reduce(invert(left_frame(start, p)) + word + invert(right_frame(end, p)))
    return decompose_loop(core, p)


def path_loop(path: GfpPath, p: Params) -> Term:
    term = loop_of(assemble(path, p), path.rose_start, path.rose_end, p)
    assert term is not None
    return term


def shadow(path: GfpPath, p: Params) -> Rat2:
    """Commutative image of the path's loop, relative to the forward frames of its anchor."""
    return term_eval(path_loop(path, p))


def term_word(term: Term, p: Params) -> str:
    parts = []
    for var, exp in term:
        base = p.v if var == 1 else p.w
        parts.append((base if exp > 0 else invert(base)) * abs(exp))
    return "".join(parts)


def spines(p: Params, bound: int, max_syllables: int) -> Iterator[Term]:
    """Alternating spines with v-exponents in [-1, bound] and w-exponents in [-bound, bound]."""
    v_exps = [-1] + list(range(1, bound + 1))
    w_exps = [e for e in range(-bound, bound + 1) if e != 0]
    yield ()

    def grow(prefix: Term, last: int) -> Iterator[Term]:
        if len(prefix) == max_syllables:
            return
        for var, exps in ((1, v_exps), (2, w_exps)):
            if var == last:
                continue
            for e in exps:
                t = prefix + ((var, e),)
                yield t
                yield from grow(t, var)

    yield from grow((), 0)


def incident_monomials(path: GfpPath, p: Params, bound: Optional[int] = None, max_syllables: int = 3) -> list[str]:
    """GFP words sharing the anchor ``(I, F)`` of ``path``, under the truncation bound."""
    k = p.w_exponent_bound if bound is None else bound
    left = left_frame(path.rose_start, p)
    right = right_frame(path.rose_end, p)
    out = {assemble(path, p)}
    for t in spines(p, k, max_syllables):
        out.add(reduce(left + term_word(t, p) + right))
    return sorted(out, key=lambda s: (len(s), s))
