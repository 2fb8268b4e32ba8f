"""Command line interface: ``thetaunits <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 domain error,
3 precision exhaustion, 4 hypothesis not satisfied.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import mpmath
from mpmath import mp

from . import __version__
from .bigreal import DEFAULT_PREC, GUARD, to_decimal
from .errors import DomainError, ThetaUnitsError

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_PRECISION, EXIT_HYPOTHESIS = 0, 1, 2, 3, 4


def _emit(doc: dict, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        out.write(render_json(doc))
    else:
        out.write(render_text(doc))


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_text(doc, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key, val in doc.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1).rstrip("\n"))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}:")
            for item in val:
                body = render_text(item, indent + 2).splitlines()
                lines.append(f"{pad}  - {body[0].lstrip()}")
                lines.extend(body[1:])
        elif isinstance(val, list):
            lines.append(f"{pad}{key}: " + ", ".join(str(v) for v in val))
        else:
            lines.append(f"{pad}{key}: {val}")
    return "\n".join(lines) + "\n"


def _fmt_res(x) -> str:
    return mpmath.nstr(x, 6)


# -- commands -----------------------------------------------------------------

def cmd_eval(args) -> dict:
    from . import qseries
    from .bigreal import rel_diff

    prec = args.prec
    kind = args.kind
    doc: dict = {"command": "eval", "kind": kind, "prec": prec}
    if kind in ("b", "a"):
        if args.m is None or args.n is None:
            raise DomainError("eval --kind b/a needs --m and --n")
        m = Fraction(args.m)
        n = int(Fraction(args.n))
        if Fraction(args.n) != n:
            raise DomainError("n must be an integer")
        doc.update(m=str(m), n=n)
        if kind == "b":
            if n == 1:
                value, residuals = qseries.b_numeric(m, n, prec), {}
            else:
                reps = qseries.b_representations(m, n, prec)
                value = qseries.b_numeric(m, n, prec, check=True)
                residuals = {f"theta_vs_{k}": _fmt_res(rel_diff(reps["theta"], v))
                             for k, v in reps.items() if k != "theta"}
        elif n == 1:
            value, residuals = qseries.a_numeric(m, n, prec), {}
        else:
            reps = qseries.a_representations(m, n, prec)
            value = qseries.a_numeric(m, n, prec, check=True)
            residuals = {"product_vs_sum": _fmt_res(rel_diff(reps["product"], reps["sum"]))}
    else:
        if args.n is None:
            raise DomainError(f"eval --kind {kind} needs --n")
        n = Fraction(args.n)
        doc.update(n=str(n))
        value = qseries.class_invariant_numeric(kind, n, prec)
        residuals = {}
    doc["value"] = to_decimal(value, prec)
    doc["residuals"] = residuals
    return doc


def cmd_derive(args) -> dict:
    from .derive import derive_b

    report = derive_b(args.m, args.n, args.prec)
    doc = {"command": "derive"}
    doc.update(report.as_dict())
    return doc


def cmd_verify_paper(args) -> dict:
    from .corpus import load_corpus, read_corpus, verify_corpus

    entries = read_corpus(args.corpus) if args.corpus else load_corpus()
    results = verify_corpus(entries, args.prec, args.parallel)
    counts: dict[str, dict[str, int]] = {}
    for r in results:
        c = counts.setdefault(r.kind, {"passed": 0, "total": 0, "typo_flagged": 0})
        c["total"] += 1
        c["passed"] += int(r.passed)
        c["typo_flagged"] += int(r.typo_flagged)
    failed = [r.id for r in results if not r.passed]
    return {
        "command": "verify-paper", "prec": args.prec,
        "entries": [r.as_dict() for r in results],
        "summary": counts, "failed": failed, "ok": not failed,
    }


def cmd_enumerate(args) -> dict:
    from .derive import enumerate_admissible

    pairs = enumerate_admissible(args.bound, canonical=not args.all_orders, extended=args.extended)
    return {
        "command": "enumerate", "bound": args.bound,
        "pairs": [{"m": m, "n": n, "b_index": [2 * m, n], "case": tag} for m, n, tag in pairs],
        "counts": {
            "one-class": sum(1 for p in pairs if p[2] == "one-class"),
            "two-class": sum(1 for p in pairs if p[2] == "two-class"),
        },
    }


def cmd_classdata(args) -> dict:
    from .quadfields import class_data, decompositions, is_fundamental

    cd = class_data(args.d)
    doc = {"command": "classdata"}
    doc.update(cd.as_dict())
    doc["fundamental"] = is_fundamental(args.d)
    if doc["fundamental"]:
        doc["decompositions"] = [
            {"d1": x.d1, "d2": x.d2, "h1": x.h1, "h2": x.h2, "w2": x.w2,
             "eps": None if x.eps is None else str(x.eps),
             "eps_norm": None if x.eps is None else x.eps.norm}
            for x in decompositions(args.d)
        ]
    return doc


def _literal_bits(text: str) -> int:
    """Bits carried by the significant digits of a decimal literal."""
    mant = text.strip().lstrip("+-").lower().split("e")[0].replace(".", "").lstrip("0")
    return int(len(mant) * 3.3219)


def cmd_recognize(args) -> dict:
    from .algrec import is_unit_poly, min_poly

    with mp.workprec(args.prec + GUARD):
        try:
            x = mpmath.mpf(args.value)
        except (ValueError, TypeError):
            raise DomainError(f"not a decimal literal: {args.value!r}") from None
    prec = min(args.prec, _literal_bits(args.value))
    p = min_poly(x, args.max_deg, prec)
    return {
        "command": "recognize", "value": args.value, "prec": prec,
        "poly": str(p), "coeffs": list(p.coeffs), "degree": p.degree,
        "is_unit": is_unit_poly(p),
    }


def cmd_derive_gn(args) -> dict:
    from .modeq import derive_gn_pipeline, modular_residual

    pair = derive_gn_pipeline(args.m, args.prec)
    doc = {"command": "derive-gn"}
    doc.update(pair.as_dict())
    doc["modular_residual"] = _fmt_res(modular_residual(pair.big, pair.small, args.prec))
    return doc


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=DEFAULT_PREC, help="working precision in bits (default 256)")
    common.add_argument("--json", action="store_true", help="emit one JSON object")

    p = argparse.ArgumentParser(prog="thetaunits", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate b, a, g or G numerically")
    s.add_argument("--kind", choices=["b", "a", "g", "G"], default="b")
    s.add_argument("--m", help="rational m, e.g. 10 or 7/3")
    s.add_argument("--n", help="integer n (rational for g/G)")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("derive", parents=[common], help="unit-product closed form of b_{2m,n}")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_derive)

    s = sub.add_parser("verify-paper", parents=[common], help="check the bundled corpus of published values")
    s.add_argument("--parallel", action="store_true")
    s.add_argument("--corpus", help="alternative corpus file (JSON lines)")
    s.set_defaults(func=cmd_verify_paper)

    s = sub.add_parser("enumerate", parents=[common], help="admissible (m, n) with 8mn <= bound")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--extended", action="store_true", help="admit fields with more than four genera")
    s.add_argument("--all-orders", action="store_true", help="do not require m > n")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classdata", parents=[common], help="class data of a negative discriminant")
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(func=cmd_classdata)

    s = sub.add_parser("recognize", parents=[common], help="minimal polynomial of a decimal literal")
    s.add_argument("value")
    s.add_argument("--max-deg", type=int, default=8)
    s.set_defaults(func=cmd_recognize)

    s = sub.add_parser("derive-gn", parents=[common], help="g_{7m}, g_{m/7} from b_{m,7}")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_derive_gn)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prec < 64:
        print("error: --prec must be at least 64", file=sys.stderr)
        return EXIT_DOMAIN
    t0 = time.perf_counter()
    try:
        doc = args.func(args)
    except ThetaUnitsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    _emit(doc, args.json)
    print(f"elapsed: {time.perf_counter() - t0:.3f} s", file=sys.stderr)
    if doc.get("ok") is False:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
