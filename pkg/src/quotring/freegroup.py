"""Reduced words in a free group.

A word is a plain ``str``: a lowercase letter is a generator, the matching
uppercase letter is its inverse and the empty string is the identity.
Keeping words as strings lets the pattern matching in :mod:`quotring.gfp`
lean on the C-level string routines.
"""

from __future__ import annotations

import re
from collections.abc import Iterable

DEFAULT_ALPHABET = "xyzt"


class WordError(ValueError):
    """Raised for malformed word text."""


def inverse_letter(letter: str) -> str:
    return letter.swapcase()


# zero-width match before every letter followed by its inverse
_CANCEL = re.compile(r"(?=([a-zA-Z])(?!\1)(?i:\1))")


def reduce(raw: Iterable[str]) -> str:
    """Freely reduce a letter sequence (any iterable of one-character strings).

    The text is cut between every adjacent cancelling pair; the pieces are
    reduced and are folded together with :func:`junction_cancellation`.
    """
    text = raw if isinstance(raw, str) else "".join(raw)
    cuts = [m.start() + 1 for m in _CANCEL.finditer(text)]
    if not cuts:
        return text
    stack: list[str] = []
    for lo, hi in zip([0] + cuts, cuts + [len(text)]):
        piece = text[lo:hi]
        while stack and piece:
            k = junction_cancellation(stack[-1], piece)
            if k == 0:
                break
            top = stack.pop()
            piece = piece[k:]
            if k < len(top):
                stack.append(top[: len(top) - k])
                break
        if piece:
            stack.append(piece)
    return "".join(stack)


def is_reduced(word: str) -> bool:
    return _CANCEL.search(word) is None


def junction_cancellation(a: str, b: str) -> int:
    """Number of letters cancelled when the reduced words ``a`` and ``b`` are joined."""
    k = 0
    limit = min(len(a), len(b))
    while k < limit and a[-1 - k] == b[k].swapcase():
        k += 1
    return k


def multiply(a: str, b: str) -> str:
    k = junction_cancellation(a, b)
    return a[: len(a) - k] + b[k:]


def product(*words: str) -> str:
    out = ""
    for w in words:
        out = multiply(out, w)
    return out


def invert(a: str) -> str:
    return a[::-1].swapcase()


def power(a: str, k: int) -> str:
    """``a`` raised to an integer power (``a`` need not be cyclically reduced)."""
    if k < 0:
        a, k = invert(a), -k
    out = ""
    for _ in range(k):
        out = multiply(out, a)
    return out


def is_cyclically_reduced_primitive(a: str) -> bool:
    if not a:
        raise WordError("identity is not admissible as w")
    if len(a) > 1 and a[0] == a[-1].swapcase():
        return False
    n = len(a)
    for d in range(1, n):
        if n % d == 0 and a[:d] * (n // d) == a:
            return False
    return True


def parse_word(text: str, alphabet: str = DEFAULT_ALPHABET) -> str:
    """Parse the text form of a word and freely reduce it.

    ``""`` and ``"1"`` denote the identity; whitespace and ``.``/``·`` separators
    are ignored.
    """
    cleaned = "".join(ch for ch in text.strip() if ch not in " \t.·*")
    if cleaned in ("", "1"):
        return ""
    allowed = set(alphabet) | set(alphabet.upper())
    bad = sorted(set(cleaned) - allowed)
    if bad:
        raise WordError(f"malformed word: letters {''.join(bad)!r} not in alphabet {alphabet!r}")
    return reduce(cleaned)


def format_word(word: str) -> str:
    return word if word else "1"


def count_letters(word: str, generator: str) -> int:
    """Occurrences of ``generator`` or its inverse."""
    return word.count(generator) + word.count(generator.swapcase())
