"""Construction parameters and the long relator word ``v``.

``v = x^α y x^(α+1) y ... x^(β-1) y`` and ``w`` is a short primitive word.
Every measure is an exact :class:`~fractions.Fraction` with denominator
``β - α``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any

from .freegroup import DEFAULT_ALPHABET, WordError, is_cyclically_reduced_primitive, is_reduced, parse_word


class ConstructionError(ValueError):
    """A violated side condition on the construction parameters."""


@dataclass(frozen=True)
class VWord:
    word: str
    y_positions: tuple[int, ...]


def _v_string(alpha: int, beta: int) -> str:
    return "".join("x" * i + "y" for i in range(alpha, beta))


@dataclass(frozen=True)
class Params:
    w: str = "zt"
    alpha: int = 5
    beta: int = 105
    tau: Fraction = Fraction(1, 10)
    lam: Fraction = Fraction(2, 3)
    w_exponent_bound: int = 4
    alphabet: str = DEFAULT_ALPHABET
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, self.beta - self.alpha)

    @property
    def y_total(self) -> int:
        return self.beta - self.alpha

    @cached_property
    def v(self) -> str:
        return _v_string(self.alpha, self.beta)

    def measure(self, y_count: int) -> Fraction:
        return Fraction(y_count, self.y_total)

    def with_bound(self, bound: int) -> "Params":
        return validate(replace(self, w_exponent_bound=bound, _cache={}))

    def to_dict(self) -> dict[str, Any]:
        return {
            "alphabet": self.alphabet,
            "w": self.w,
            "alpha": self.alpha,
            "beta": self.beta,
            "tau": str(self.tau),
            "lambda": str(self.lam),
            "w_exponent_bound": self.w_exponent_bound,
        }


def validate(p: Params) -> Params:
    """Check every side condition; each failure names the condition it violates."""
    if len(set(p.alphabet)) != len(p.alphabet) or not p.alphabet.islower() or not p.alphabet.isalpha():
        raise ConstructionError("alphabet must be distinct lowercase letters")
    if len(p.alphabet) < 4:
        raise ConstructionError("alphabet must have at least 4 generators")
    if "x" not in p.alphabet or "y" not in p.alphabet:
        raise ConstructionError("alphabet must contain x and y")
    if not p.w:
        raise ConstructionError("identity is not admissible as w")
    if set(p.w.lower()) - set(p.alphabet):
        raise ConstructionError("w uses letters outside the alphabet")
    if not is_reduced(p.w):
        raise ConstructionError("w is not freely reduced")
    for end, letter in (("starts", p.w[0]), ("ends", p.w[-1])):
        if letter in "xyXY":
            raise ConstructionError(f"w {end} with {letter}")
    try:
        primitive = is_cyclically_reduced_primitive(p.w)
    except WordError as exc:
        raise ConstructionError(str(exc)) from exc
    if not primitive:
        raise ConstructionError("w is not cyclically reduced and primitive")
    if not (0 < len(p.w) < p.alpha):
        raise ConstructionError("|w| < α violated")
    if not p.alpha < p.beta:
        raise ConstructionError("α < β violated")
    tau, lam = Fraction(p.tau), Fraction(p.lam)
    eps = Fraction(1, p.beta - p.alpha)
    if tau < 10 * eps:
        raise ConstructionError("τ ≥ 10ε violated")
    if not Fraction(1, 2) < lam < 1:
        raise ConstructionError("1/2 < λ < 1 violated")
    if not lam + 2 * eps < 1:
        raise ConstructionError("λ + 2ε < 1 violated")
    if not isinstance(p.w_exponent_bound, int) or p.w_exponent_bound < 0:
        raise ConstructionError("w_exponent_bound must be a non-negative integer")
    if tau != p.tau or lam != p.lam:
        p = replace(p, tau=tau, lam=lam, _cache={})
    return p


def build_v(p: Params) -> VWord:
    word = p.v
    return VWord(word=word, y_positions=tuple(i for i, ch in enumerate(word) if ch == "y"))


DESK = Params()

_KEYS = {"alphabet", "w", "alpha", "beta", "tau", "lambda", "w_exponent_bound"}


def params_from_mapping(raw: dict[str, str]) -> Params:
    unknown = set(raw) - _KEYS
    if unknown:
        raise ConstructionError(f"unknown configuration keys: {', '.join(sorted(unknown))}")
    kwargs: dict[str, Any] = {}
    try:
        if "alphabet" in raw:
            kwargs["alphabet"] = raw["alphabet"].strip()
        alphabet = kwargs.get("alphabet", DEFAULT_ALPHABET)
        if "w" in raw:
            kwargs["w"] = parse_word(raw["w"], alphabet) if raw["w"].strip() not in ("", "1") else ""
        for key in ("alpha", "beta", "w_exponent_bound"):
            if key in raw:
                kwargs[key] = int(raw[key])
        if "tau" in raw:
            kwargs["tau"] = Fraction(raw["tau"].strip())
        if "lambda" in raw:
            kwargs["lam"] = Fraction(raw["lambda"].strip())
    except (ValueError, ZeroDivisionError, WordError) as exc:
        raise ConstructionError(f"invalid configuration value: {exc}") from exc
    return validate(Params(**kwargs))


def load_config(path: str | Path) -> Params:
    """Read a ``key=value`` configuration file (``#`` starts a comment)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConstructionError(f"line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        raw[key.strip()] = value.strip()
    return params_from_mapping(raw)
