"""Command-line entry point.

All results go to stdout as a single JSON document; progress and diagnostics
go to stderr.  Exit codes: 0 success / zero residual, 1 check failure,
2 usage or domain error, 3 resource error, 4 accuracy error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields

from .alphabet import Alphabet, enumerate_lyndon, parse_word, word_name
from .braid import build_quotient, flatness_check, relators
from .chen.connections import OneFormConnection
from .chen.iterated import chen_series
from .chen.kz import kz3_verify, kz4_connection_check
from .chen.polylog import hyperlog_eval, polylog_eval
from .chen.quadrature import PathSpec, QuadratureConfig
from .chen.volterra import volterra_iterate
from .checks import run_all
from .domains import RATIONAL
from .errors import AccuracyError, DomainError, ResourceError
from .lie_bases import LyndonBasis, pi1_project
from .series import NcPoly, max_abs_diff

__all__ = ["main", "RunConfig"]


@dataclass
class RunConfig:
    """Defaults shared by the subcommands; a JSON config file may override."""

    cap: int = 3
    tol: float = 1e-10
    gauss_order: int = 32
    panels: int = 8
    lyndon_cap: int = 10 ** 6

    def __post_init__(self):
        if self.cap < 0 or self.gauss_order < 2 or self.panels < 1 or self.lyndon_cap < 1:
            raise DomainError("config values must be positive")
        if self.tol <= 0:
            raise DomainError("config tolerance must be positive")

    @classmethod
    def load(cls, path: str | None) -> "RunConfig":
        if path is None:
            return cls()
        with open(path) as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(gauss_order=self.gauss_order, panels=self.panels,
                                tol=self.tol)


def _alphabet(args) -> Alphabet:
    if getattr(args, "n", None):
        return Alphabet.braid(args.n)
    if getattr(args, "alphabet", None):
        return Alphabet.free([s.strip() for s in args.alphabet.split(",")])
    raise DomainError("pass --alphabet letters or --n strands")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise DomainError(f"cannot parse complex number {text!r}") from None


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


# -- subcommands -----------------------------------------------------------------


def cmd_lyndon(args, cfg: RunConfig) -> int:
    alpha = _alphabet(args)
    words = enumerate_lyndon(alpha, args.max_len, cap=cfg.lyndon_cap)
    _emit({"count": len(words), "words": [[a.name for a in w] for w in words]})
    return 0


def cmd_product(args, cfg: RunConfig, kind: str) -> int:
    alpha = _alphabet(args)
    left = NcPoly.from_word(RATIONAL, parse_word(args.left, alpha))
    right = NcPoly.from_word(RATIONAL, parse_word(args.right, alpha))
    result = left.shuffle(right) if kind == "shuffle" else left.half_shuffle(right)
    _emit(result.to_json())
    return 0


def cmd_pbw(args, cfg: RunConfig) -> int:
    alpha = _alphabet(args)
    w = parse_word(args.word, alpha)
    basis = LyndonBasis(alpha, max(len(w), 1), lyndon_cap=cfg.lyndon_cap)
    poly = basis.p(w) if args.family == "p" else basis.s(w)
    _emit(poly.to_json())
    return 0


def cmd_pi1(args, cfg: RunConfig) -> int:
    alpha = _alphabet(args)
    _emit(pi1_project(parse_word(args.word, alpha)).to_json())
    return 0


def cmd_diagonal(args, cfg: RunConfig) -> int:
    from .diagonal import log_diagonal_check, mrs_identity_check, theorem_diagonal_check

    cap = args.cap or cfg.cap
    if args.check in ("mrs", "log"):
        alpha = _alphabet(args)
        residual = (mrs_identity_check if args.check == "mrs" else log_diagonal_check)(alpha, cap)
        _emit({"check": args.check, "cap": cap, "residual_terms": len(residual.terms),
               "residual": residual.to_json()})
        return 0 if residual.is_zero() else 1
    if args.check == "split":
        if not args.n:
            raise DomainError("--check split needs --n")
        rep = theorem_diagonal_check(args.n, cap)
        payload = rep.to_json()
        payload["form1_residual"] = {
            k: v.to_json() for k, v in rep.form1_residuals.items() if not v.is_zero()
        }
        _emit(payload)
        return 0 if rep.form2_residual.is_zero() and rep.chosen_reading else 1
    raise DomainError(f"unknown diagonal check {args.check!r}")


def cmd_braid(args, cfg: RunConfig) -> int:
    cap = args.cap or 2
    if args.check == "dims":
        quotient = build_quotient(args.n, args.variant, cap)
        _emit({"n": args.n, "variant": args.variant, "dims": quotient.dims(),
               "relators": len(relators(args.n, args.variant))})
        return 0
    if args.check == "central":
        quotient = build_quotient(args.n, args.variant, 2)
        alpha = Alphabet.braid(args.n)
        total = NcPoly(RATIONAL, {(a,): 1 for a in alpha.letters})
        residuals = {}
        for a in alpha.letters:
            t = NcPoly.from_letter(RATIONAL, a)
            nf = quotient.normal_form(total.conc(t) - t.conc(total))
            residuals[a.name] = len(nf.terms)
        _emit({"n": args.n, "central_residual_terms": residuals})
        return 0 if all(v == 0 for v in residuals.values()) else 1
    if args.check == "flat":
        import random

        rng = random.Random(7)
        samples = []
        while len(samples) < 3:
            pt = tuple(complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                       for _ in range(args.n))
            import itertools as it

            if min(abs(a - b) for a, b in it.combinations(pt, 2)) > 0.4:
                samples.append(pt)
        rep = flatness_check(args.n, samples, tol=1e-10)
        _emit(rep.to_json())
        return 0 if rep.ok else 1
    raise DomainError(f"unknown braid check {args.check!r}")


def cmd_chen(args, cfg: RunConfig) -> int:
    conn = OneFormConnection.kz(args.n)
    with open(args.path) as fh:
        path = PathSpec.from_json(json.load(fh))
    series = chen_series(conn, path, cfg.quadrature(), args.cap or cfg.cap)
    _emit(series.to_json())
    return 0


def cmd_li(args, cfg: RunConfig) -> int:
    value = polylog_eval(args.word, _complex(args.z), args.tol or 1e-12)
    _emit({"word": args.word, "z": args.z, "value": [value.real, value.imag]})
    return 0


def cmd_hyperlog(args, cfg: RunConfig) -> int:
    sing = [_complex(s) for s in args.sing.split(",")]
    value = hyperlog_eval(args.word, _complex(args.z), sing, cfg.quadrature())
    _emit({"word": args.word, "z": args.z, "sing": args.sing,
           "value": [value.real, value.imag]})
    return 0


_DEFAULT_VOLTERRA_PATH = PathSpec.line((1.3, 0.1, 0.4 + 0.2j), (1.5, -0.1, 0.55 + 0.1j))


def cmd_volterra(args, cfg: RunConfig) -> int:
    conn = OneFormConnection.kz(args.n)
    alpha = conn.alphabet
    if args.split.upper() == f"T{args.n}":
        base = list(alpha.base_block())
    else:
        base = [alpha.letter(nm.strip()) for nm in args.split.split(",")]
    if args.path:
        with open(args.path) as fh:
            path = PathSpec.from_json(json.load(fh))
    else:
        if args.n != 3:
            raise DomainError("pass --path for n != 3")
        path = _DEFAULT_VOLTERRA_PATH
    cap = args.cap or cfg.cap
    quad = cfg.quadrature()
    flow = volterra_iterate(conn, base, path, quad, cap, args.k, hat=args.hat)
    chen = chen_series(conn, path, quad, cap)
    err = max_abs_diff(flow.total, chen)
    _emit({
        "n": args.n,
        "base": [a.name for a in base],
        "iterations": args.k,
        "cap": cap,
        "hat": args.hat,
        "max_coeff_error_vs_chen": err,
        "terms": [t.to_json() for t in flow.terms],
    })
    return 0 if (args.hat or err < 1e-6) else 1


def cmd_kz3(args, cfg: RunConfig) -> int:
    if args.samples:
        with open(args.samples) as fh:
            data = json.load(fh)
        samples = [tuple(complex(re, im) for re, im in s) for s in data]
    else:
        samples = [(1.3, 0.1, 0.4 + 0.2j), (2.0, -0.3, 0.5 + 0.4j), (1.1 + 0.2j, 0.0, 0.3)]
    rep = kz3_verify(samples, cap=args.cap or 2)
    _emit(rep.to_json())
    return 0 if max(rep.max_residual, rep.max_residual_left) < 1e-5 else 1


def cmd_kz4(args, cfg: RunConfig) -> int:
    rep = kz4_connection_check()
    _emit(rep.to_json())
    return 0 if rep.ok else 1


def cmd_checkall(args, cfg: RunConfig) -> int:
    results = run_all(args.profile)
    for r in results:
        print(r.line(), file=sys.stderr)
    _emit({"profile": args.profile, "passed": sum(r.ok for r in results),
           "failed": [r.name for r in results if not r.ok],
           "checks": [r.to_json() for r in results]})
    return 0 if all(r.ok for r in results) else 1


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nckz",
        description="Noncommutative series toolkit: Lyndon bases, shuffle "
                    "algebra, diagonal factorizations, braid ideals, and "
                    "numeric iterated-integral engines.",
    )
    parser.add_argument("--config", help="JSON config file", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_alpha(p):
        p.add_argument("--alphabet", help="comma-separated letter names")
        p.add_argument("--n", type=int, help="braid alphabet strand count")

    p = sub.add_parser("lyndon", help="enumerate Lyndon words")
    add_alpha(p)
    p.add_argument("--max-len", type=int, required=True)

    for name in ("shuffle", "halfshuffle"):
        p = sub.add_parser(name, help=f"{name} product of two words")
        add_alpha(p)
        p.add_argument("--left", required=True)
        p.add_argument("--right", required=True)

    p = sub.add_parser("pbw", help="dual basis elements on a word")
    add_alpha(p)
    p.add_argument("--word", required=True)
    p.add_argument("--family", choices=("p", "s"), default="p")

    p = sub.add_parser("pi1", help="primitive projection of a word")
    add_alpha(p)
    p.add_argument("--word", required=True)

    p = sub.add_parser("diagonal", help="diagonal-series identity checks")
    add_alpha(p)
    p.add_argument("--check", choices=("mrs", "log", "split"), required=True)
    p.add_argument("--cap", type=int)

    p = sub.add_parser("braid", help="relator ideal checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--variant", choices=("R", "Rprime"), default="R")
    p.add_argument("--cap", type=int)
    p.add_argument("--check", choices=("dims", "central", "flat"), required=True)

    p = sub.add_parser("chen", help="Chen series along a path")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--path", required=True, help="waypoints JSON file")
    p.add_argument("--cap", type=int)

    p = sub.add_parser("li", help="polylogarithm value")
    p.add_argument("--word", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("hyperlog", help="hyperlogarithm value")
    p.add_argument("--sing", required=True, help="comma-separated singularities, 0 first")
    p.add_argument("--word", required=True)
    p.add_argument("--z", required=True)

    p = sub.add_parser("volterra", help="iterative Chen reconstruction")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--split", required=True, help="T<n> or comma-separated base letters")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cap", type=int)
    p.add_argument("--path", help="waypoints JSON file")
    p.add_argument("--hat", action="store_true", help="abelianized seed")

    p = sub.add_parser("kz3", help="three-strand finite-difference verification")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--cap", type=int)
    p.add_argument("--samples", help="JSON file of sample points")

    p = sub.add_parser("kz4", help="four-strand connection identity")
    p.add_argument("--connection-check", action="store_true")

    p = sub.add_parser("checkall", help="run the acceptance suite")
    p.add_argument("--profile", choices=("fast", "full"), default="fast")
    return parser


_DISPATCH = {
    "lyndon": cmd_lyndon,
    "shuffle": lambda a, c: cmd_product(a, c, "shuffle"),
    "halfshuffle": lambda a, c: cmd_product(a, c, "halfshuffle"),
    "pbw": cmd_pbw,
    "pi1": cmd_pi1,
    "diagonal": cmd_diagonal,
    "braid": cmd_braid,
    "chen": cmd_chen,
    "li": cmd_li,
    "hyperlog": cmd_hyperlog,
    "volterra": cmd_volterra,
    "kz3": cmd_kz3,
    "kz4": cmd_kz4,
    "checkall": cmd_checkall,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.load(args.config)
        return _DISPATCH[args.command](args, cfg)
    except (DomainError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 3
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
