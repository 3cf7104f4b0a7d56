"""Elements of the quotient ring: semicanonical reduction, the S̃ condition,
derived monomials, the tensor-choice map and certified multiplication."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .chart import (
    FChar,
    f_char,
    neighbor_relation,
    replace_span,
    virtual_members,
)
from .construction import Params
from .freegroup import invert, junction_cancellation, multiply, product, reduce
from .gfp import (
    Occurrence,
    decompose_loop,
    incident_monomials,
    maximal_occurrences,
    parse_gfp,
    rose_of,
)
from .multiturn import (
    Certificate,
    MultiTurnError,
    RingElement,
    apply_certificate,
    apply_multi_turn,
    certificate_from_poly,
    check_certificate,
    safe_multi_turn,
)
from .ratfun import LaurentPoly2, rat_eval

__all__ = [
    "RingElement",
    "Diagram",
    "Lens",
    "TensorChoice",
    "EqualityResult",
    "is_lambda_semicanonical",
    "semicanonical_reduce",
    "satisfies_stilde",
    "derived_monomials",
    "mu_apply",
    "multiply_mod_I",
    "equal_mod_I",
]


class QuotientError(ValueError):
    pass


# --- forbidden words --------------------------------------------------------------------

@dataclass(frozen=True)
class Forbidden:
    start: int
    end: int
    v_initial: str  # v_i
    v_final: str  # v_f

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def _inverse_v_runs(u: str, p: Params) -> tuple[np.ndarray, np.ndarray]:
    """Matching statistics against ``v^-1`` and the ``Y``-count of each matched suffix."""
    ms = rose_of(p).automata[1].matching_statistics(u)
    ycum = np.zeros(len(u) + 1, dtype=np.int64)
    if u:
        np.cumsum(np.frombuffer(u.encode("ascii"), dtype=np.uint8) == ord("Y"), out=ycum[1:])
    ks = np.arange(len(u) + 1)
    counts = ycum - ycum[ks - ms]
    return ms, counts


def _threshold(p: Params, lam: Fraction) -> int:
    """Largest ``y``-count that is still not ``> lam``."""
    return int(lam * p.y_total)


def find_forbidden(u: str, p: Params, lam: Optional[Fraction] = None) -> Optional[Forbidden]:
    """Leftmost maximal ``v_m^-1`` with ``Λ(v_m) > lam`` (default λ)."""
    lam = p.lam if lam is None else lam
    if "Y" not in u:
        return None
    ms, counts = _inverse_v_runs(u, p)
    bad = np.nonzero(counts > _threshold(p, lam))[0]
    if not len(bad):
        return None
    k = int(bad[0])
    while k < len(u) and ms[k + 1] == ms[k] + 1:
        k += 1
    start = k - int(ms[k])
    piece = u[start:k]
    vinv = rose_of(p).arcs[1]
    t = vinv.find(piece)
    n = len(p.v)
    # piece = v_m^-1 with v = v_i v_m v_f
    v_i = p.v[: n - t - len(piece)]
    v_f = p.v[n - t :]
    return Forbidden(start, k, v_i, v_f)


def is_lambda_semicanonical(u: str, p: Params, lam: Optional[Fraction] = None) -> bool:
    return find_forbidden(u, p, lam) is None


# --- semicanonical reduction ---------------------------------------------------------------

@dataclass(frozen=True)
class RewriteStep:
    word: str
    outputs: tuple[str, ...]
    span: tuple[int, int]


def rewrite_forbidden(u: str, hit: Forbidden, p: Params, mode: str = "eq23") -> tuple[list[str], Certificate]:
    """Rewrite one forbidden occurrence; returns the output words and the certificate of ``u + Σ outputs``."""
    left, right = u[: hit.start], u[hit.end :]
    if mode == "eq23":
        outputs = [product(left, hit.v_final, p.w, hit.v_initial, right), product(left, hit.v_final, hit.v_initial, right)]
        pair = (product(left, hit.v_final, invert(p.v)), multiply(hit.v_initial, right))
        return outputs, Certificate((pair,))
    if mode == "safe":
        piece = u[hit.start : hit.end]
        path = parse_gfp(piece, p)
        if path is None:
            raise QuotientError("forbidden piece is not a fractional power")
        s = safe_multi_turn(path, p)
        outputs = [product(left, a_j, right) for a_j in sorted(s.monomials) if a_j != piece]
        occ = Occurrence(u, hit.start, hit.end, path)
        return outputs, apply_certificate(u, occ, s)
    raise QuotientError(f"unknown reduction mode {mode!r}")


def semicanonical_reduce(
    e: RingElement,
    p: Params,
    mode: str = "eq23",
    log: Optional[list[RewriteStep]] = None,
    max_steps: int = 100_000,
) -> tuple[RingElement, Certificate]:
    """Rewrite forbidden words until every monomial is λ-semicanonical.

    Each step lowers the number of ``Y`` letters of the rewritten monomial,
    which bounds the number of steps.
    """
    current = set(e.monomials)
    pairs: list[tuple[str, str]] = []
    steps = 0
    while True:
        dirty = sorted((w for w in current if find_forbidden(w, p) is not None), key=lambda w: (len(w), w))
        if not dirty:
            break
        for word in dirty:
            if word not in current:
                continue
            hit = find_forbidden(word, p)
            if hit is None:
                continue
            outputs, cert = rewrite_forbidden(word, hit, p, mode)
            pairs.extend(cert.pairs)
            current ^= {word}
            for o in RingElement.of(outputs).monomials:
                current ^= {o}
            if log is not None:
                log.append(RewriteStep(word, tuple(outputs), hit.span))
            steps += 1
            if steps > max_steps:
                raise QuotientError("reduction step limit exceeded")
    return RingElement(frozenset(current)), Certificate(tuple(pairs))


# --- S̃_λ ---------------------------------------------------------------------------------

def stilde_violations(u: str, p: Params, occurrences: Optional[Sequence[Occurrence]] = None) -> list[Occurrence]:
    """Virtual members whose middle part (between overlaps with neighbour virtual members) is not λ-semicanonical."""
    occ = maximal_occurrences(u, p) if occurrences is None else list(occurrences)
    virtual = virtual_members(u, p, occ)
    bad = []
    for idx, a in enumerate(virtual):
        lo, hi = a.start, a.end
        if idx > 0 and virtual[idx - 1].end > a.start:
            lo = min(virtual[idx - 1].end, a.end)
        if idx + 1 < len(virtual) and virtual[idx + 1].start < a.end:
            hi = max(virtual[idx + 1].start, lo)
        if not is_lambda_semicanonical(u[lo:hi], p):
            bad.append(a)
    return bad


def satisfies_stilde(u: str, p: Params) -> bool:
    if find_forbidden(u, p, p.lam + 2 * p.epsilon) is not None:
        return False
    return not stilde_violations(u, p)


# --- derived monomials ------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivedWord:
    word: str
    f: FChar
    depth: int


@dataclass(frozen=True)
class Truncated:
    explored: int


def derived_monomials(
    u: str, p: Params, budget: int = 64, max_syllables: int = 2
) -> Iterator[Union[DerivedWord, Truncated]]:
    """Breadth-first closure of ``u`` under replacement of virtual members by incident monomials."""
    queue: deque[tuple[str, int]] = deque([(u, 0)])
    seen = {u}
    explored = 0
    while queue:
        if explored >= budget:
            yield Truncated(explored)
            return
        word, depth = queue.popleft()
        explored += 1
        occ = maximal_occurrences(word, p)
        yield DerivedWord(word, f_char(word, p, occ), depth)
        for a in virtual_members(word, p, occ):
            for a_j in incident_monomials(a.path, p, max_syllables=max_syllables):
                if a_j == a.word:
                    continue
                new = replace_span(word, a.start, a.end, a_j).word
                if new not in seen:
                    seen.add(new)
                    queue.append((new, depth + 1))


# --- the tensor-choice map ------------------------------------------------------------------

@dataclass(frozen=True)
class TensorChoice:
    base: str
    choices: tuple[str, ...]


def compose_replacements(u: str, members: Sequence[Occurrence], choices: Sequence[str]) -> str:
    """Replace every member at once; overlaps ``c`` between neighbours become ``c^-1`` joints."""
    parts = [u[: members[0].start]] if members else [u]
    for idx, (a, b_word) in enumerate(zip(members, choices)):
        parts.append(b_word)
        if idx + 1 < len(members):
            rel = neighbor_relation(a, members[idx + 1])
            if rel.kind == "separated":
                parts.append(rel.piece)
            elif rel.kind == "overlap":
                parts.append(invert(rel.piece))
        else:
            parts.append(u[a.end :])
    return reduce("".join(parts))


def mu_apply(t: TensorChoice, p: Params) -> Union[str, RingElement]:
    """Apply one incident choice per virtual member.

    A choice is *low* when replacing that member alone strictly lowers f.
    More than two low choices map to 0; otherwise all replacements are made
    and cancellations are performed once at the end.
    """
    occ = maximal_occurrences(t.base, p)
    members = virtual_members(t.base, p, occ)
    if len(members) != len(t.choices):
        raise QuotientError(f"arity mismatch: {len(members)} virtual members, {len(t.choices)} choices")
    base_f = f_char(t.base, p, occ)
    low = 0
    for a, b in zip(members, t.choices):
        if b == a.word:
            continue
        if f_char(replace_span(t.base, a.start, a.end, b).word, p) < base_f:
            low += 1
    if low > 2:
        return RingElement()
    return compose_replacements(t.base, members, t.choices)


# --- multiplication -------------------------------------------------------------------------

@dataclass(frozen=True)
class Lens:
    stage: int
    host: str = field(repr=False)
    start: int  # glue point I in the host word
    end: int  # glue point F
    attach: int  # meeting point P of the two factors
    replaced: str = field(repr=False)
    outputs: tuple[str, ...] = field(repr=False)

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "I": self.start,
            "F": self.end,
            "P": self.attach,
            "replaced": self.replaced,
            "outputs": list(self.outputs),
            "host": self.host,
        }


@dataclass
class Diagram:
    left: str
    right: str
    cancelled: str
    meeting_point: int
    product: str
    lenses: list[Lens] = field(default_factory=list)
    results: list[str] = field(default_factory=list)

    @property
    def stages(self) -> int:
        return max((l.stage for l in self.lenses), default=0)

    def nodes(self) -> list[dict]:
        out = [{"id": "S", "label": "start"}, {"id": "P", "label": f"P@{self.meeting_point}"}, {"id": "E", "label": "end"}]
        for idx, lens in enumerate(self.lenses):
            out.append({"id": f"I{idx}", "label": f"I@{lens.start}"})
            out.append({"id": f"F{idx}", "label": f"F@{lens.end}"})
        return out

    def segments(self) -> list[dict]:
        segs = [
            {"from": "S", "to": "P", "label": self.left, "role": "top"},
            {"from": "P", "to": "E", "label": self.right, "role": "top"},
            {"from": "P", "to": "P", "label": self.cancelled, "role": "cancelled"},
        ]
        for idx, lens in enumerate(self.lenses):
            segs.append({"from": f"I{idx}", "to": f"F{idx}", "label": lens.replaced, "role": f"lens{idx}-upper"})
            for j, out in enumerate(lens.outputs):
                segs.append({"from": f"I{idx}", "to": f"F{idx}", "label": out, "role": f"lens{idx}-lower{j}"})
        for r in self.results:
            segs.append({"from": "S", "to": "E", "label": r, "role": "bottom"})
        return segs

    def to_json(self) -> dict:
        return {
            "top": [self.left, self.right],
            "cancelled": self.cancelled,
            "P": self.meeting_point,
            "product": self.product,
            "nodes": self.nodes(),
            "segments": self.segments(),
            "lenses": [l.to_json() for l in self.lenses],
            "results": list(self.results),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        lenses = [
            Lens(l["stage"], l.get("host", ""), l["I"], l["F"], l["P"], l["replaced"], tuple(l["outputs"]))
            for l in data.get("lenses", [])
        ]
        left, right = data["top"]
        return cls(left, right, data["cancelled"], data["P"], data["product"], lenses, list(data.get("results", [])))

    def to_dot(self) -> str:
        def short(word: str) -> str:
            if not word:
                return "1"
            return word if len(word) <= 24 else f"{word[:10]}…{word[-10:]} ({len(word)})"

        lines = ["digraph multiplication {", "  rankdir=LR;", "  node [shape=point];"]
        lines.append('  S [shape=circle,label="S"]; E [shape=circle,label="E"]; P [shape=diamond,label="P"];')
        lines.append(f'  S -> P [label="{short(self.left)}"];')
        lines.append(f'  P -> E [label="{short(self.right)}"];')
        if self.cancelled:
            lines.append(f'  P -> P [label="{short(self.cancelled)}",style=dashed];')
        for idx, lens in enumerate(self.lenses):
            lines.append(f"  subgraph cluster_lens{idx} {{")
            lines.append(f'    label="lens {idx} (stage {lens.stage})";')
            lines.append(f'    I{idx} [shape=circle,label="I"]; F{idx} [shape=circle,label="F"];')
            lines.append(f'    I{idx} -> F{idx} [label="{short(lens.replaced)}"];')
            for out in lens.outputs:
                lines.append(f'    I{idx} -> F{idx} [label="{short(out)}",style=dotted];')
            lines.append("  }")
            lines.append(f"  P -> I{idx} [style=invis];")
        for r in self.results:
            lines.append(f'  S -> E [label="{short(r)}",color=blue];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def multiply_mod_I(u1: str, u2: str, p: Params, max_stages: int = 4) -> tuple[RingElement, Diagram, Certificate]:
    """Product of two S̃_λ words as a sum of S̃_λ words, with its diagram and certificate."""
    for name, word in (("first", u1), ("second", u2)):
        if not satisfies_stilde(word, p):
            raise QuotientError(f"{name} factor does not satisfy the S̃_λ condition")
    k = junction_cancellation(u1, u2)
    joined = u1[: len(u1) - k] + u2[k:]
    meeting = len(u1) - k
    diagram = Diagram(u1, u2, u2[:k], meeting, joined)
    pending = {joined}
    done: set[str] = set()
    pairs: list[tuple[str, str]] = []
    for stage in range(1, max_stages + 1):
        nxt: set[str] = set()
        for word in sorted(pending, key=lambda s: (len(s), s)):
            bad = stilde_violations(word, p)
            if not bad:
                done ^= {word}
                continue
            target = bad[0]
            s = safe_multi_turn(target.path, p)
            outputs = apply_multi_turn(word, target, s)
            pairs.extend(apply_certificate(word, target, s).pairs)
            diagram.lenses.append(Lens(stage, word, target.start, target.end, meeting, target.word, tuple(outputs.sorted())))
            for o in outputs.monomials:
                nxt ^= {o}
        pending = nxt
        if not pending:
            break
    result = RingElement(frozenset(done ^ pending))
    diagram.results = result.sorted()
    return result, diagram, Certificate(tuple(pairs))


# --- equality --------------------------------------------------------------------------------

@dataclass(frozen=True)
class EqualityResult:
    status: str  # "equal" | "unknown"
    certificate: Optional[Certificate] = None
    evidence: str = ""

    @property
    def equal(self) -> bool:
        return self.status == "equal"


def _common_prefix(words: Sequence[str]) -> str:
    if not words:
        return ""
    lo, hi = min(words), max(words)
    k = 0
    while k < len(lo) and lo[k] == hi[k]:
        k += 1
    return lo[:k]


def _single_anchor_poly(d: RingElement, p: Params) -> Optional[tuple[LaurentPoly2, str, str]]:
    """Write ``d`` as ``L·P(v, w)·R`` for one frame ``(L, R)``, if the simple candidates allow it."""
    words = d.sorted()
    pre = _common_prefix(words)
    suf = invert(_common_prefix([invert(w) for w in words]))
    for left in dict.fromkeys((pre, "")):
        for right in dict.fromkeys((suf, "")):
            terms = []
            for w in words:
                core = reduce(invert(left) + w + invert(right))
                term = decompose_loop(core, p)
                if term is None:
                    break
                terms.append(term)
            else:
                return LaurentPoly2.of(*terms), left, right
    return None


def equal_mod_I(a: RingElement, b: RingElement, p: Params) -> EqualityResult:
    """Semi-decision for ``a ≡ b`` modulo the ideal; never claims inequality."""
    ra, ca = semicanonical_reduce(a, p)
    rb, cb = semicanonical_reduce(b, p)
    base = ca + cb
    if ra == rb:
        return EqualityResult("equal", base)
    diff = ra + rb
    framed = _single_anchor_poly(diff, p)
    if framed is None:
        return EqualityResult("unknown", evidence="difference is not a single-frame combination")
    P, left, right = framed
    value = rat_eval(P)
    if value.is_zero():
        try:
            cert = certificate_from_poly(P, left, right, p)
        except MultiTurnError:
            return EqualityResult("unknown", evidence="derivation failed")
        if check_certificate(diff, cert, p):
            return EqualityResult("equal", base + cert)
        return EqualityResult("unknown", evidence="derived certificate did not verify")
    return EqualityResult("unknown", evidence=f"shadow of difference is {value} (nonzero)")


def element_to_json(e: RingElement) -> str:
    return json.dumps(e.to_json())
