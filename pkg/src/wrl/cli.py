"""Command-line front end: ``wrl rank | decompose | witness | census | verify``.

Exit codes: 0 success, 1 usage or parse error, 2 bounds only, 3 prediction mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .binaryforms import BinaryForm, complex_rank_binary, decompose_binary, real_rank_binary, witness_rank_d
from .census import CensusError, CensusSpec, THEOREMS, run_census, summary_rows, verify_theorem, write_results, CSV_HEADER
from .exactmath import GaussianRational, parse_rational
from .rankcert import certified_rank_multi
from .veronese import PointConfiguration, SymmetricForm, border_rank_lower

EXIT_OK, EXIT_USAGE, EXIT_BOUNDS, EXIT_MISMATCH = 0, 1, 2, 3
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {text!r}")


def _rational(text: str):
    try:
        return parse_rational(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad rational {text!r}: {exc}") from None


def _gaussian(text: str) -> GaussianRational:
    """``"p/q"`` or ``"re,im"``."""
    parts = text.split(",")
    if len(parts) == 1:
        return GaussianRational(_rational(parts[0]))
    if len(parts) == 2:
        return GaussianRational(_rational(parts[0]), _rational(parts[1]))
    raise UsageError(f"bad Gaussian rational {text!r}; use 'p/q' or 're,im'")


def parse_binary(text: str, weighted: bool) -> BinaryForm:
    """Comma list of coefficients in descending powers of ``z`` (``x1^(d-i) x0^i``)."""
    coeffs = [_rational(x) for x in text.split(",") if x.strip()]
    if len(coeffs) < 2:
        raise UsageError("a binary form needs at least 2 coefficients")
    if not any(coeffs):
        raise UsageError("the zero form has no rank")
    try:
        return BinaryForm.from_coeffs(coeffs[::-1], weighted=weighted)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_form(args):
    if args.binary is not None:
        return parse_binary(args.binary, args.weighted), None
    if args.form is None:
        raise UsageError("give --binary or --form")
    try:
        obj = json.loads(Path(args.form).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.form}: {exc}") from None
    config = None
    if "form" in obj:
        config = obj.get("config")
        obj = obj["form"]
    try:
        if "m" not in obj:
            return BinaryForm.from_json(obj), None
        f = SymmetricForm.from_json(obj)
        cfg = PointConfiguration.from_json(config) if config else None
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad form file {args.form}: {exc}") from None
    if f.m == 1 and cfg is None:
        return f.as_binary(), None
    return f, cfg


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True, indent=2))


def cmd_rank(args) -> int:
    f, cfg = _load_form(args)
    if isinstance(f, BinaryForm):
        if not f.is_real():
            raise UsageError("real rank needs real coefficients")
        cert = real_rank_binary(f, seed=args.seed)
        _emit({"seed": args.seed, "form": f.to_json(), "certificate": cert.to_json()})
        return EXIT_OK if cert.status == "exact" else EXIT_BOUNDS
    if cfg is None:
        lower, k = border_rank_lower(f)
        _emit({"seed": args.seed, "form": f.to_json(), "border_lower": lower, "border_k": k,
               "status": "bounds-only", "note": "no point configuration given"})
        return EXIT_BOUNDS
    cert = certified_rank_multi(f, cfg)
    _emit({"seed": args.seed, "certificate": cert.to_json()})
    return EXIT_OK if cert.status == "certified-exact" else EXIT_BOUNDS


def cmd_decompose(args) -> int:
    f, _ = _load_form(args)
    if not isinstance(f, BinaryForm):
        raise UsageError("decompose takes a binary form")
    if args.complex:
        r, w = complex_rank_binary(f, seed=args.seed)
        dec = decompose_binary(f, w, r)
        _emit({"seed": args.seed, "field": "complex", "rank": r, "decomposition": dec.to_json()})
        return EXIT_OK
    cert = real_rank_binary(f, seed=args.seed)
    _emit({"seed": args.seed, "field": "real", "rank": cert.rank, "status": cert.status,
           "decomposition": cert.witness_decomposition.to_json()})
    return EXIT_OK if cert.status == "exact" else EXIT_BOUNDS


def cmd_witness(args) -> int:
    c = _gaussian(args.c)
    if not c:
        raise UsageError("c must be nonzero")
    if args.d < 2:
        raise UsageError("d must be >= 2")
    slots = []
    for item in args.perturb or []:
        try:
            k, p = item.split(":")
        except ValueError:
            raise UsageError(f"bad --perturb {item!r}; use 'coef:point'") from None
        slots.append((_gaussian(k), _gaussian(p)))
    try:
        w = witness_rank_d(args.d, c, slots)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = w.to_json()
    out["plain_coeffs_descending"] = [str(x) for x in w.form.plain_coeffs[::-1]]
    if args.certify:
        out["rank"] = real_rank_binary(w.form, seed=args.seed).to_json()
    _emit(out)
    return EXIT_OK


def _types(text: str | None):
    if not text:
        return ()
    out = []
    for item in text.split(","):
        try:
            e, a = (int(x) for x in item.split(":"))
        except ValueError:
            raise UsageError(f"bad type {item!r}; use 'e:a'") from None
        out.append((e, a))
    return tuple(out)


def _print_summary(summary) -> None:
    print(",".join(CSV_HEADER))
    for row in summary_rows(summary):
        print(",".join(map(str, row)))


def cmd_census(args) -> int:
    if args.spec:
        try:
            obj = json.loads(Path(args.spec).read_text())
            obj["types"] = tuple(tuple(t) for t in obj.get("types", ()))
            spec = CensusSpec(**obj)
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise UsageError(f"bad spec file {args.spec}: {exc}") from None
    else:
        if None in (args.m, args.d, args.b):
            raise UsageError("census needs --m, --d and --b (or --spec)")
        spec = CensusSpec(args.m, args.d, args.b, types=_types(args.types),
                          samples_per_type=args.samples, seed=args.seed,
                          point_height=args.height, span_height=args.span_height,
                          construction=args.construction, workers=args.workers)
    records, summary = run_census(spec)
    if args.out:
        paths = write_results(records, summary, args.out, spec.tag)
        print(f"# wrote {paths[0]} and {paths[1]}", file=sys.stderr)
    print(f"# seed {spec.seed}", file=sys.stderr)
    _print_summary(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.m is None and args.theorem in ("u1", "u2"):
        args.m = 1
    if args.m is None or args.d is None:
        raise UsageError("verify needs --m and --d")
    report = verify_theorem(args.theorem, args.m, args.d, args.b, samples=args.samples,
                            seed=args.seed, workers=args.workers, point_height=args.height)
    if args.out:
        write_results(report.records, _summary_of(report), args.out,
                      f"verify_{args.theorem}_m{args.m}_d{args.d}_s{args.seed}")
    _emit(report.to_json())
    if not report.passed:
        missing = sorted(set(report.expected) - set(report.observed))
        extra = sorted(set(report.observed) - set(report.expected))
        print(f"mismatch: expected {report.expected}, observed {report.observed}; "
              f"missing {missing}, unexpected {extra}", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def _summary_of(report):
    from .census import summarize

    return summarize([r for r in report.records if len(r.type) == 2])


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wrl", description="Exact real and complex Waring ranks of symmetric forms.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def form_args(sp):
        sp.add_argument("--binary", help='coefficients "p/q,..." in descending powers of z')
        sp.add_argument("--weighted", type=_bool, default=True,
                        help="coefficients carry binomial weights (default true)")
        sp.add_argument("--form", help="JSON file with a form (optionally with its point configuration)")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sp = sub.add_parser("rank", help="real rank with certificate")
    form_args(sp)
    sp.set_defaults(func=cmd_rank)

    sp = sub.add_parser("decompose", help="explicit Waring decomposition of a binary form")
    form_args(sp)
    sp.add_argument("--complex", action="store_true", help="minimal complex decomposition")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("witness", help="rank-d binary witness near c(z-i)^d + conj")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--c", default="1", help='"p/q" or "re,im"')
    sp.add_argument("--perturb", action="append", help='"coef:point", each "p/q" or "re,im"')
    sp.add_argument("--certify", action="store_true", help="also run the real-rank certificate")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(func=cmd_witness)

    def run_args(sp):
        sp.add_argument("--m", type=int)
        sp.add_argument("--d", type=int)
        sp.add_argument("--b", type=int)
        sp.add_argument("--samples", type=int, default=10)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--height", type=int, default=10, help="point coordinate height bound")
        sp.add_argument("--workers", type=int, default=1, help="capped by WRL_THREADS")
        sp.add_argument("--out", help="output directory for JSONL/CSV files")

    sp = sub.add_parser("census", help="rank census over type strata")
    run_args(sp)
    sp.add_argument("--types", help='comma list "e:a,..." (default: all strata)')
    sp.add_argument("--span-height", type=int, default=100)
    sp.add_argument("--construction", choices=("uniform", "perturbation"), default="uniform")
    sp.add_argument("--spec", help="JSON file with CensusSpec fields")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("verify", help="reproduce a theorem's predicted ranks")
    sp.add_argument("theorem", choices=THEOREMS)
    run_args(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CensusError) as exc:
        print(f"wrl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
