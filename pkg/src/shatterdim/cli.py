"""Command-line entry point: compute, construct, transpose, verify.

Exit codes: 0 ok, 2 matrix parse error, 3 bad spec or parameters,
4 size or time guard, 5 a verified claim failed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import constructions as C
from .dimensions import default_workers, dimension
from .errors import (
    BudgetExceeded,
    MatrixError,
    ParseError,
    SizeLimitError,
    SpecError,
)
from .harness import catalog, format_table, get_case, reports_json, run_all, run_case
from .matrix import format_matrix, format_rational, read_matrix, to_rational, transpose, write_matrix
from .shattering import Kind, ShatterSpec

EXIT_OK, EXIT_PARSE, EXIT_SPEC, EXIT_GUARD, EXIT_FAIL = 0, 2, 3, 4, 5

DIM_KINDS = {"vc": Kind.VC, "pdim": Kind.P, "vdim": Kind.V, "pfat": Kind.P_GAMMA, "vfat": Kind.V_GAMMA}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_SPEC)


def _gamma(text: str | None) -> Fraction | None:
    if text is None:
        return None
    try:
        return to_rational(text)
    except MatrixError as exc:
        raise SpecError(f"--gamma: {exc}") from None


def build_spec(dim: str, gamma: str | None, dual: bool) -> ShatterSpec:
    kind = DIM_KINDS[dim]
    if kind.has_width and gamma is None:
        raise SpecError(f"--dim {dim} requires --gamma p/q")
    if not kind.has_width and gamma is not None:
        raise SpecError(f"--gamma is meaningless with --dim {dim}")
    return ShatterSpec(kind, _gamma(gamma), dual)


def cmd_compute(args) -> int:
    A = read_matrix(args.input)
    spec = build_spec(args.dim, args.gamma, args.dual)
    deadline = None if args.timeout is None else time.monotonic() + args.timeout
    if spec.kind is Kind.VC and not A.is_boolean():
        raise SpecError("--dim vc needs a 0/1 matrix")
    d, w = dimension(A, spec, deadline=deadline, workers=args.threads)
    print(d)
    if args.witness:
        payload = w.to_json() if w is not None else "null\n"
        Path(args.witness).write_text(payload, encoding="utf-8")
    return EXIT_OK


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise SpecError(f"expected comma-separated integers, got {text!r}") from None


def _claim(dim, value, gamma=None, dual=False, relation="=="):
    return {
        "dim": dim,
        "gamma": None if gamma is None else format_rational(Fraction(gamma)),
        "dual": dual,
        "relation": relation,
        "value": value,
    }


def construct(name: str, args) -> tuple:
    """Return (matrix, params, claims) for a named construction."""
    def need(attr):
        v = getattr(args, attr)
        if v is None:
            raise SpecError(f"construction {name!r} needs --{attr}")
        return v

    if name == "b_d":
        d = need("d")
        return C.make_b_d(d), {"d": d}, [
            _claim("vc", d), _claim("vc", d.bit_length() - 1, dual=True)
        ]
    if name == "blocks":
        sizes = _int_list(need("sizes"))
        spec = C.BlockSpec(sizes, args.orientation)
        dual = spec.orientation == C.ROW_BLOCKS
        return C.make_block_matrix(spec), {"sizes": list(sizes), "orientation": spec.orientation}, [
            _claim("vdim", max(sizes), dual=dual), _claim("pdim", sum(sizes), dual=dual)
        ]
    if name == "lemma53":
        d, k = need("d"), need("k")
        return C.make_lemma_5_3(d, k), {"d": d, "k": k}, [
            _claim("pdim", d), _claim("vdim", 2 ** d, dual=True), _claim("pdim", k * 2 ** d, dual=True)
        ]
    if name == "lemma54":
        k = need("k")
        return C.make_lemma_5_4(k), {"k": k}, [_claim("pdim", 1), _claim("pdim", k + 2, dual=True)]
    if name == "merge":
        family, K = need("family"), need("K")
        if family == "blocks":
            d = need("d")
            fam = C.corollary_5_2_family(d, K)
            claims = [_claim("pdim", d)] + [
                _claim("pfat", k * d, Fraction(1, 2 * k), relation=">=") for k in range(1, K + 1)
            ]
        elif family == "lemma53":
            d = need("d")
            fam = C.lemma_5_3_family(d, K)
            claims = [_claim("pdim", d)] + [
                _claim("pfat", k * 2 ** d, Fraction(1, 2 * k), dual=True) for k in range(1, K + 1)
            ]
        elif family == "lemma54":
            d = None
            fam = C.lemma_5_4_family(K)
            claims = [_claim("pdim", 1)] + [
                _claim("pfat", k + 2, Fraction(1, 2 * k), dual=True) for k in range(2, K + 1)
            ]
        else:
            raise SpecError(f"unknown merge family {family!r}")
        params = {"family": family, "K": K}
        if d is not None:
            params["d"] = d
        return C.merge(fam), params, claims
    raise SpecError(f"unknown construction {name!r}")


def cmd_construct(args) -> int:
    A, params, claims = construct(args.name, args)
    comments = [f"construction {args.name} " + json.dumps(params, sort_keys=True)]
    if args.output is None:
        sys.stdout.write(format_matrix(A, comments))
        return EXIT_OK
    write_matrix(A, args.output, comments)
    sidecar = {"construction": args.name, "params": params, "claims": claims}
    Path(str(args.output) + ".json").write_text(
        json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return EXIT_OK


def cmd_transpose(args) -> int:
    A = transpose(read_matrix(args.input))
    if args.output is None:
        sys.stdout.write(format_matrix(A))
    else:
        write_matrix(A, args.output)
    return EXIT_OK


def _overrides(case_id: str, args) -> dict:
    """Map --d/--k/--K/--samples onto whatever parameters the case uses."""
    case = get_case(case_id)
    p = case.params
    out = {}
    if args.d is not None and args.k is not None and "dk" in p:
        out["dk"] = [[args.d, args.k]]
    else:
        if args.d is not None and "d" in p:
            out["d"] = args.d
        if args.k is not None:
            if "k" in p:
                out["k"] = [args.k] if isinstance(p["k"], list) else args.k
            elif "part2" in p:
                out["part2"] = [args.k]
    if case_id == "thm-4.2" and args.d is not None and args.k is not None:
        out = {"part1": [[args.d, args.k]], "part2": []}
    if args.K is not None:
        for key in ("K", "K1", "K2", "k_max"):
            if key in p:
                out[key] = args.K
    if args.samples is not None and "samples" in p:
        out["samples"] = args.samples
    given = [a for a in ("d", "k", "K", "samples") if getattr(args, a) is not None]
    if given and not out:
        raise SpecError(f"case {case_id} takes none of --{', --'.join(given)}")
    return out


def cmd_verify(args) -> int:
    if args.case == "all":
        reports = run_all(args.budget, seed=args.seed, witness_dir=args.witness_dir)
    else:
        overrides = _overrides(args.case, args)
        if args.seed is not None:
            overrides["seed"] = args.seed
        case = get_case(args.case, **overrides)
        deadline = None if args.budget is None else time.monotonic() + args.budget
        reports = [run_case(case, deadline, args.witness_dir)]
    text = reports_json(reports, timing=args.timing)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    print(format_table(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shatterdim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="dimension of a matrix file")
    p.add_argument("input")
    p.add_argument("--dim", required=True, choices=sorted(DIM_KINDS))
    p.add_argument("--gamma", help="width as an exact rational p/q")
    p.add_argument("--dual", action="store_true")
    p.add_argument("--witness", help="write the witness JSON here")
    p.add_argument("--threads", type=int, default=default_workers())
    p.add_argument("--timeout", type=float, help="seconds before giving up (exit 4)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("construct", help="write one of the extremal matrices")
    p.add_argument("name", choices=["b_d", "blocks", "lemma53", "lemma54", "merge"])
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--sizes")
    p.add_argument("--orientation", default=C.COLUMN_BLOCKS, choices=[C.COLUMN_BLOCKS, C.ROW_BLOCKS])
    p.add_argument("--family", choices=["blocks", "lemma53", "lemma54"])
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("transpose", help="transpose a matrix file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transpose)

    p = sub.add_parser("verify", help="run catalog cases")
    p.add_argument("case", help="case id or 'all'; see --list")
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=float, help="seconds for the whole run")
    p.add_argument("--json", help="write the report JSON here")
    p.add_argument("--witness-dir")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms in the JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cases", help="list catalog case ids")
    p.set_defaults(func=lambda a: print("\n".join(f"{c.id}\t{c.description}" for c in catalog())) or 0)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SizeLimitError, BudgetExceeded) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (SpecError, MatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
