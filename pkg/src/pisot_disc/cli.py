"""``pisot-disc`` command line.

Exit codes: 0 pure discrete (or success), 3 not detected, 2 precondition
failed, 1 internal error, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import List, Optional

import sympy

from . import __version__
from .automata import DigitAlphabet, determinize, minimize, state_count
from .interior import (NOT_DETECTED, PRECONDITION_FAILED, PURE_DISCRETE, SubstitutionContext,
                       decide_pure_discreteness, default_extended_alphabet, interior_language)
from .numberfield import FieldError, MonicIntPoly, NumberField
from .substitution import SubstitutionError, classify, parse_substitution

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PRECONDITION = 2
EXIT_NOT_DETECTED = 3
EXIT_USAGE = 64

STATUS_EXIT = {PURE_DISCRETE: EXIT_OK, NOT_DETECTED: EXIT_NOT_DETECTED,
               PRECONDITION_FAILED: EXIT_PRECONDITION}

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(data: dict, json_path: Optional[str]) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if json_path:
        Path(json_path).write_text(text + "\n")
    else:
        print(text)


def _meta(args, t0: float) -> dict:
    return {"version": __version__, "seed": args.seed, "elapsed_s": round(time.perf_counter() - t0, 4)}


def _substitution(text: str):
    try:
        return parse_substitution(text)
    except SubstitutionError as exc:
        raise UsageError(str(exc)) from exc


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def parse_element(text: str, field: NumberField):
    """Integer polynomial in ``b`` (the field generator), e.g. ``"b^2 - 2*b"``."""
    b = sympy.Symbol("b")
    try:
        expr = sympy.sympify(re.sub(r"\^", "**", text), locals={"b": b})
        coeffs = sympy.Poly(expr, b).all_coeffs()[::-1]
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise UsageError(f"cannot parse field element {text!r}") from exc
    if any(not c.is_integer for c in coeffs):
        raise UsageError(f"field element {text!r} must have integer coefficients")
    return field.from_poly_coeffs([int(c) for c in coeffs])


# --------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    t0 = time.perf_counter()
    s = _substitution(args.substitution)
    automata = {} if args.dot else None
    report = decide_pure_discreteness(s, radii=tuple(range(args.radius + 1)),
                                      all_letters=args.all_letters, automata_out=automata)
    data = report.to_dict(meta=not args.no_meta)
    if not args.no_meta:
        data["meta"] = _meta(args, t0)
    _emit(data, args.json)
    if args.json:
        print(report.status)
    if automata:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        for b, aut in automata.items():
            (out / f"interior_{b}.dot").write_text(aut.to_dot(f"interior_{b}"))
    return STATUS_EXIT[report.status]


def cmd_interior(args) -> int:
    t0 = time.perf_counter()
    s = _substitution(args.substitution)
    rep = classify(s)
    if not rep.ok:
        _emit({"schema": "pisot-disc/interior/1", "status": PRECONDITION_FAILED,
               "reasons": rep.reasons}, args.json)
        return EXIT_PRECONDITION
    ctx = SubstitutionContext(s, rep)
    letters = [args.letter] if args.letter else list(s.alphabet)
    for b in letters:
        if b not in s.alphabet:
            raise UsageError(f"letter {b!r} not in the alphabet")
    extended = default_extended_alphabet(ctx, args.radius)
    counts = {}
    for b in letters:
        aut = interior_language(ctx, b, extended)
        counts[b] = state_count(aut)
        if args.dot:
            Path(args.dot).mkdir(parents=True, exist_ok=True)
            (Path(args.dot) / f"interior_{b}.dot").write_text(aut.to_dot(f"interior_{b}"))
    data = {"schema": "pisot-disc/interior/1", "substitution": str(s), "power": ctx.power,
            "radius": args.radius, "state_counts": counts,
            "language_state_counts": {b: state_count(minimize(determinize(ctx.language(b))))
                                      for b in letters}}
    if not args.no_meta:
        data["meta"] = _meta(args, t0)
    _emit(data, args.json)
    return EXIT_OK


def cmd_render(args) -> int:
    from .geometry import project_cloud, render
    s = _substitution(args.substitution)
    rep = classify(s)
    if not rep.ok:
        print("PRECONDITION_FAILED: " + "; ".join(rep.reasons), file=sys.stderr)
        return EXIT_PRECONDITION
    automata = None
    if args.interior:
        automata = {}
        decide_pure_discreteness(s, radii=(args.radius,), all_letters=True, automata_out=automata)
    cloud = project_cloud(s, args.depth, automata)
    render(cloud, args.out, args.format)
    print(f"{len(cloud)} points -> {args.out}")
    return EXIT_OK


def cmd_cutproject(args) -> int:
    from .geometry import DegenerateLine, cut_and_project_word
    v, c = _floats(args.dir), _floats(args.offset)
    if len(v) != len(c):
        raise UsageError("--dir and --offset must have the same length")
    if any(x <= 0 for x in v):
        raise UsageError("--dir must be strictly positive")
    try:
        word = cut_and_project_word(v, c, args.n)
    except DegenerateLine as exc:
        print(f"PRECONDITION_FAILED: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    sep = "" if len(v) < 10 else " "
    print(sep.join(str(i) for i in word))
    return EXIT_OK


def cmd_family(args) -> int:
    from . import families
    t0 = time.perf_counter()
    if args.family == "sk":
        if args.certificate:
            cert = families.verify_sk_certificate(args.k, args.window)
            data = {"schema": "pisot-disc/sk-certificate/1", **cert.to_dict()}
            code = EXIT_OK if cert.passed else EXIT_NOT_DETECTED
        else:
            report = decide_pure_discreteness(families.sk_substitution(args.k))
            data = report.to_dict(meta=not args.no_meta)
            code = STATUS_EXIT[report.status]
        if args.eigen:
            data["eigenvalue_bounds"] = families.eigenvalue_bounds(args.k)
    elif args.family == "slk":
        if args.l is None:
            raise UsageError("family slk needs --l")
        ok = families.verify_slk_inclusion(args.l, args.k)
        data = {"schema": "pisot-disc/slk-inclusion/1", "l": args.l, "k": args.k, "inclusion": ok}
        code = EXIT_OK if ok else EXIT_NOT_DETECTED
    else:
        raise UsageError(f"unknown family {args.family!r}")
    if not args.no_meta:
        data["meta"] = _meta(args, t0)
    _emit(data, args.json)
    return code


def cmd_sadic(args) -> int:
    from . import sadic
    t0 = time.perf_counter()
    full = not args.printed_difference_set
    data = {"schema": "pisot-disc/sadic/1", "full_difference_set": full,
            "state_counts": sadic.sadic_state_counts(full)}
    if args.certificates:
        certs = sadic.sadic_inclusion_certificates(max_k=args.max_k,
                                                   system=sadic.sadic_system(full))
        data["certificates"] = {p: (c.to_dict() if c else None) for p, c in certs.items()}
        data["all_found"] = all(c is not None for c in certs.values())
    if not args.no_meta:
        data["meta"] = _meta(args, t0)
    _emit(data, args.json)
    return EXIT_OK


def cmd_zeroauto(args) -> int:
    from .relations import build_zero_automaton
    t0 = time.perf_counter()
    try:
        poly = MonicIntPoly.parse(args.poly)
        field = NumberField(poly)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc
    scalars = [parse_element(x, field) for x in args.digits.split(",")]
    base = parse_element(args.base, field) if args.base else None
    alphabet = DigitAlphabet.from_scalars(scalars)
    aut = build_zero_automaton(alphabet, field, base=base, order=args.order)
    data = {"schema": "pisot-disc/zero-automaton/1", "polynomial": str(poly),
            "digits": alphabet.names(), "base": args.base or "b", "order": args.order,
            "states": state_count(aut), "automaton": aut.to_json_dict()}
    if not args.no_meta:
        data["meta"] = _meta(args, t0)
    if args.dot:
        Path(args.dot).write_text(aut.to_dot("zero"))
    _emit(data, args.json)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pisot-disc",
                description="Decide pure discrete spectrum of unit Pisot substitutions "
                            "with interior languages of digit automata.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="FILE", help="write JSON here instead of stdout")
    common.add_argument("--no-meta", action="store_true",
                        help="omit timings and version so output is byte-identical across runs")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed (default 0; no command draws randomness)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="decide pure discreteness")
    c.add_argument("substitution", help='e.g. "a->ab;b->ac;c->a"')
    c.add_argument("--radius", type=int, default=2, help="largest radius of the ladder 0..r (default 2)")
    c.add_argument("--all-letters", action="store_true", help="compute the interior for every letter")
    c.add_argument("--dot", metavar="DIR", help="write interior automata as DOT files")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("interior", parents=[common], help="interior automata state counts")
    c.add_argument("substitution")
    c.add_argument("--letter", help="target letter (default: all)")
    c.add_argument("--radius", type=int, default=1, help="extended digit radius (default 1)")
    c.add_argument("--dot", metavar="DIR")
    c.set_defaults(func=cmd_interior)

    c = sub.add_parser("render", parents=[common], help="draw the Rauzy fractal cloud")
    c.add_argument("substitution")
    c.add_argument("--depth", type=int, default=8)
    c.add_argument("--out", required=True)
    c.add_argument("--format", choices=["svg", "ppm"], help="default: from the file suffix")
    c.add_argument("--interior", action="store_true", help="highlight interior points")
    c.add_argument("--radius", type=int, default=1, help="radius for --interior (default 1)")
    c.set_defaults(func=cmd_render)

    c = sub.add_parser("cutproject", parents=[common], help="cut-and-project word of a line")
    c.add_argument("--dir", required=True, help="positive direction, e.g. 1,1.618")
    c.add_argument("--offset", required=True, help="offset, e.g. 0.1,0.3")
    c.add_argument("--n", type=int, default=1000)
    c.set_defaults(func=cmd_cutproject)

    c = sub.add_parser("family", parents=[common], help="s_k and s_{l,k} families")
    c.add_argument("family", choices=["sk", "slk"])
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--l", type=int)
    c.add_argument("--certificate", action="store_true", help="sk: disk-covering certificate")
    c.add_argument("--window", type=int, default=3, help="sk certificate translation window")
    c.add_argument("--eigen", action="store_true", help="sk: eigenvalue bound checks")
    c.set_defaults(func=cmd_family)

    c = sub.add_parser("sadic", parents=[common], help="S-adic state counts and certificates")
    c.add_argument("--certificates", action="store_true", help="search certificates for all length-6 prefixes")
    c.add_argument("--max-k", type=int, default=6)
    c.add_argument("--printed-difference-set", action="store_true",
                   help="build L0 on the difference set without -2")
    c.set_defaults(func=cmd_sadic)

    c = sub.add_parser("zeroauto", parents=[common], help="zero automaton of a digit set")
    c.add_argument("--poly", required=True, help='"X^3 - 2*X^2 - 1" or "[-1, 0, -2, 1]"')
    c.add_argument("--digits", required=True, help='comma-separated elements in b; use --digits=-1,0,1,b-1 when the list starts with a minus')
    c.add_argument("--base", help="base element (default b)")
    c.add_argument("--order", choices=["lsb", "msb"], default="lsb")
    c.add_argument("--dot", metavar="FILE")
    c.set_defaults(func=cmd_zeroauto)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"pisot-disc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - surfaced as exit code 1
        print(f"pisot-disc: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
