"""Command line front end: ``quotring <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (bad word, bad config,
failed verification, non-S̃ input) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .chart import ChartError, chart_of, cover_stats, f_char
from .construction import DESK, ConstructionError, Params, load_config, validate
from .freegroup import WordError, invert, parse_word
from .gfp import classify_path, maximal_occurrences, parse_gfp
from .multiturn import Certificate, MultiTurnError, RingElement, check_certificate, expand_certificate
from .quotient import (
    Diagram,
    DerivedWord,
    QuotientError,
    Truncated,
    derived_monomials,
    multiply_mod_I,
    semicanonical_reduce,
)

_INVERSE_TOKEN = re.compile(r"([vw])(?:\^-1|⁻¹|\^\{-1\})")


# --- I/O helpers ----------------------------------------------------------------------

def fmt_fraction(x: Fraction, p: Params) -> str:
    """``p/q`` with ``q = β-α`` when ``x`` is a multiple of ``1/(β-α)``, else lowest terms."""
    q = p.y_total
    scaled = x * q
    if scaled.denominator == 1:
        return f"{scaled.numerator}/{q}"
    return f"{x.numerator}/{x.denominator}"


def expand_word(text: str, p: Params) -> str:
    """Parse a word, expanding ``v``/``w`` (and ``V``/``W`` or ``v^-1``) to the active words."""
    text = _INVERSE_TOKEN.sub(lambda m: m.group(1).upper(), text)
    letters = set(p.alphabet) | set(p.alphabet.upper())
    table = {"v": p.v, "V": invert(p.v), "w": p.w, "W": invert(p.w)}
    out = []
    for ch in text:
        if ch in table and ch not in letters:
            out.append(table[ch])
        else:
            out.append(ch)
    return parse_word("".join(out), p.alphabet)


def read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        return Path(arg[1:]).read_text()
    return arg


def read_element(path: str, p: Params) -> RingElement:
    data = _load_json(path)
    if not isinstance(data, list) or not all(isinstance(w, str) for w in data):
        raise WordError(f"{path}: element file must be a JSON array of word strings")
    return RingElement.of(expand_word(w, p) for w in data)


def read_certificate(path: str, p: Params) -> Certificate:
    data = _load_json(path)
    if not isinstance(data, list) or not all(
        isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair) for pair in data
    ):
        raise WordError(f"{path}: certificate file must be a JSON array of [left, right] pairs")
    return Certificate(tuple((expand_word(a, p), expand_word(b, p)) for a, b in data))


def _load_json(path: str):
    try:
        return json.loads(read_text(path if path == "-" else "@" + path))
    except json.JSONDecodeError as exc:
        raise WordError(f"{path}: invalid JSON ({exc})") from exc


def dump(obj, path: Optional[str]) -> None:
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _side_path(out: Optional[str], suffix: str, explicit: Optional[str]) -> Optional[str]:
    if explicit:
        return explicit
    if out and out != "-":
        return str(Path(out).with_suffix("")) + suffix
    return None


def short(word: str, width: int = 40) -> str:
    if not word:
        return "1"
    if len(word) <= width:
        return word
    return f"{word[:15]}...{word[-15:]} [{len(word)}]"


# --- subcommands ---------------------------------------------------------------------

def cmd_params(args, p: Params) -> int:
    print(f"alphabet = {p.alphabet}")
    print(f"w = {p.w}")
    print(f"alpha = {p.alpha}")
    print(f"beta = {p.beta}")
    print(f"epsilon = {fmt_fraction(p.epsilon, p)}")
    print(f"tau = {fmt_fraction(p.tau, p)}")
    print(f"lambda = {fmt_fraction(p.lam, p)}")
    print(f"w_exponent_bound = {p.w_exponent_bound}")
    print(f"|v| = {len(p.v)}")
    return 0


def cmd_chart(args, p: Params) -> int:
    u = expand_word(read_text(args.word), p)
    occ = maximal_occurrences(u, p)
    chart = chart_of(u, p, occ)
    print(f"|u| = {len(u)}")
    print(f"members = {len(chart.members)}")
    for idx, m in enumerate(chart.members):
        print(f"  [{idx}] span={m.start}:{m.end} measure={fmt_fraction(m.measure, p)} type={classify_path(m.path)}")
        if idx < len(chart.relations):
            print(f"      {chart.relations[idx]}")
    stats = cover_stats(u, p, occ)
    print(f"N = {stats.n_min}")
    print(f"K_tau = {stats.k_tau}")
    print(f"f = {f_char(u, p, occ)}")
    return 0


def cmd_measure(args, p: Params) -> int:
    u = expand_word(read_text(args.word), p)
    path = parse_gfp(u, p)
    if path is None:
        print("not a generalized fractional power", file=sys.stderr)
        return 1
    print(fmt_fraction(path.measure, p))
    return 0


def cmd_reduce(args, p: Params) -> int:
    e = read_element(args.element, p)
    result, cert = semicanonical_reduce(e, p, mode=args.mode)
    dump(result.to_json(), args.out)
    cert_path = _side_path(args.out, ".cert.json", args.cert)
    if cert_path:
        dump(cert.to_json(), cert_path)
    return 0


def cmd_multiply(args, p: Params) -> int:
    u1 = expand_word(read_text(args.left), p)
    u2 = expand_word(read_text(args.right), p)
    result, diagram, cert = multiply_mod_I(u1, u2, p)
    dump(result.to_json(), args.out)
    cert_path = _side_path(args.out, ".cert.json", args.cert)
    if cert_path:
        dump(cert.to_json(), cert_path)
    diagram_path = _side_path(args.out, ".diagram.json", args.diagram)
    if diagram_path:
        dump(diagram.to_json(), diagram_path)
    return 0


def cmd_verify(args, p: Params) -> int:
    e = read_element(args.element, p)
    cert = read_certificate(args.certificate, p)
    if check_certificate(e, cert, p):
        print("PASS")
        return 0
    diff = expand_certificate(cert, p) + e
    print("FAIL")
    print(f"difference has {len(diff)} monomials:")
    for w in diff.sorted():
        print(f"  {short(w)}")
    return 1


def cmd_derived(args, p: Params) -> int:
    u = expand_word(read_text(args.word), p)
    for item in derived_monomials(u, p, budget=args.budget):
        if isinstance(item, Truncated):
            print(f"# truncated after {item.explored} words")
        elif isinstance(item, DerivedWord):
            print(f"f={item.f} depth={item.depth} {short(item.word) if args.short else (item.word or '1')}")
    return 0


def cmd_diagram(args, p: Params) -> int:
    data = _load_json(args.diagram)
    try:
        diagram = Diagram.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise WordError(f"{args.diagram}: not a diagram file ({exc})") from exc
    if args.emit == "json":
        dump(diagram.to_json(), args.out)
    else:
        text = diagram.to_dot()
        if args.out in (None, "-"):
            sys.stdout.write(text)
        else:
            Path(args.out).write_text(text)
    return 0


# --- argument parsing ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value parameter file")
    common.add_argument("--bound", type=int, help="override w_exponent_bound")
    common.add_argument("--out", help="output path (default: stdout)")

    parser = argparse.ArgumentParser(prog="quotring", description="Computations in Z2F/I for the v(1+w)=1 construction.")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("params", parents=[common], help="print the validated parameters")

    s = sub.add_parser("chart", parents=[common], help="chart, cover statistics and f of a word")
    s.add_argument("word", help="word text, @file or - for stdin; v and w abbreviate the fixed words")

    s = sub.add_parser("measure", parents=[common], help="Λ of the whole word if it is one fractional power")
    s.add_argument("word")

    s = sub.add_parser("reduce", parents=[common], help="semicanonical form of an element file")
    s.add_argument("element", help="JSON array of words")
    s.add_argument("--mode", choices=("eq23", "safe"), default="eq23")
    s.add_argument("--cert", help="certificate output path")

    s = sub.add_parser("multiply", parents=[common], help="product of two S̃ words")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--cert", help="certificate output path")
    s.add_argument("--diagram", help="diagram output path (JSON)")

    s = sub.add_parser("verify", parents=[common], help="check a certificate against an element")
    s.add_argument("element")
    s.add_argument("certificate")

    s = sub.add_parser("derived", parents=[common], help="stream derived monomials with their f")
    s.add_argument("word")
    s.add_argument("--budget", type=int, default=32)
    s.add_argument("--short", action="store_true", help="abbreviate long words")

    s = sub.add_parser("diagram", parents=[common], help="render a stored diagram")
    s.add_argument("diagram", help="diagram JSON file")
    s.add_argument("--emit", choices=("dot", "json"), default="dot")
    return parser


_HANDLERS = {
    "params": cmd_params,
    "chart": cmd_chart,
    "measure": cmd_measure,
    "reduce": cmd_reduce,
    "multiply": cmd_multiply,
    "verify": cmd_verify,
    "derived": cmd_derived,
    "diagram": cmd_diagram,
}


def resolve_params(args) -> Params:
    p = load_config(args.config) if args.config else DESK
    if args.bound is not None:
        p = p.with_bound(args.bound)
    return validate(p)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        p = resolve_params(args)
        return _HANDLERS[args.command](args, p)
    except (WordError, ConstructionError, ChartError, MultiTurnError, QuotientError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
