"""Published closed forms shipped with the package, and their checker.

The corpus is a UTF-8 JSON-lines file, one record per entry::

    {"id": "b_10_3", "kind": "b-value", "expr": "(pow (sub (sqrt 2) 1) 2)",
     "args": {"m": 10, "n": 3}, "provenance": "...", "typo": null}

``kind`` is one of ``b-value``, ``class-data``, ``g-value`` or
``modular-identity``.  A ``typo`` record holds ``notes`` and the corrected
``corrected_expr`` / ``corrected_args``; a flagged entry passes when the
corrected data agrees with the engine.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

import mpmath
from mpmath import mp, mpf

from .algrec import ClosedFormExpr, eval_closed_form, parse
from .bigreal import DEFAULT_PREC, eps, rel_diff

KINDS = ("b-value", "class-data", "g-value", "modular-identity")


@dataclass(frozen=True)
class PaperCorpusEntry:
    id: str
    kind: str
    expr: ClosedFormExpr
    args: dict
    provenance: str
    typo: Optional[dict] = None

    @property
    def corrected_expr(self) -> ClosedFormExpr:
        if self.typo and self.typo.get("corrected_expr"):
            return parse(self.typo["corrected_expr"])
        return self.expr

    @property
    def corrected_args(self) -> dict:
        out = dict(self.args)
        if self.typo:
            out.update(self.typo.get("corrected_args", {}))
        return out

    @classmethod
    def from_record(cls, rec: dict) -> "PaperCorpusEntry":
        missing = {"id", "kind", "expr", "provenance"} - rec.keys()
        if missing:
            raise ValueError(f"corpus record lacks {sorted(missing)}")
        if rec["kind"] not in KINDS:
            raise ValueError(f"unknown corpus kind {rec['kind']!r}")
        return cls(rec["id"], rec["kind"], parse(rec["expr"]), rec.get("args", {}),
                   rec["provenance"], rec.get("typo"))


@dataclass
class EntryResult:
    id: str
    kind: str
    passed: bool
    residual: Optional[mpf]
    notes: list[str] = field(default_factory=list)
    typo_flagged: bool = False

    def as_dict(self) -> dict:
        return {
            "id": self.id, "kind": self.kind, "passed": self.passed,
            "residual": None if self.residual is None else mpmath.nstr(self.residual, 6),
            "typo_flagged": self.typo_flagged, "notes": list(self.notes),
        }


def default_corpus_path() -> Path:
    return Path(str(resources.files("thetaunits") / "data" / "published_values.jsonl"))


def read_corpus(path) -> dict[str, PaperCorpusEntry]:
    out: dict[str, PaperCorpusEntry] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                entry = PaperCorpusEntry.from_record(json.loads(line))
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            if entry.id in out:
                raise ValueError(f"{path}:{lineno}: duplicate id {entry.id}")
            out[entry.id] = entry
    return out


@lru_cache(maxsize=1)
def load_corpus() -> dict[str, PaperCorpusEntry]:
    return read_corpus(default_corpus_path())


# -- comparisons -----------------------------------------------------------------

def _dec_key(dec: dict) -> tuple:
    return (dec["d1"], dec["d2"])


def _engine_decs(report) -> dict[tuple, dict]:
    out = {}
    for row in report.selected:
        d = row.dec
        out[(d.d1, d.d2)] = {"d1": d.d1, "d2": d.d2, "h1": d.h1, "h2": d.h2, "w2": d.w2, "eps": d.eps}
    return out


def _table_mismatches(args: dict, report, prec: int) -> list[str]:
    notes = []
    cd = report.classes
    for key, val in (("d", cd.d), ("h", cd.h), ("w", cd.w), ("classes_per_genus", cd.classes_per_genus)):
        if key in args and args[key] != val:
            notes.append(f"{key}: printed {args[key]}, engine {val}")
    engine = _engine_decs(report)
    printed = {_dec_key(d): d for d in args.get("decompositions", [])}
    for key in sorted(set(printed) - set(engine)):
        notes.append(f"decomposition {key[0]} x ({key[1]}) printed but not selected by the engine")
    for key in sorted(set(engine) - set(printed)):
        notes.append(f"decomposition {key[0]} x ({key[1]}) selected by the engine but not printed")
    for key in sorted(set(engine) & set(printed)):
        p, e = printed[key], engine[key]
        for f in ("h1", "h2", "w2"):
            if p[f] != e[f]:
                notes.append(f"{f} for {key[0]} x ({key[1]}): printed {p[f]}, engine {e[f]}")
        if not _same(eval_closed_form(p["eps"], prec), e["eps"].value(prec), prec - 64):
            notes.append(f"eps for {key[0]} x ({key[1]}): printed {p['eps']}, engine {e['eps']}")
    return notes


def _same(a: mpf, b: mpf, bits: int) -> bool:
    return rel_diff(a, b) < eps(bits)


def compare_class_data(entry: PaperCorpusEntry, report, prec: int = DEFAULT_PREC) -> list[str]:
    """Differences between the printed proof table and the engine's data."""
    notes = _table_mismatches(entry.args, report, prec)
    N = len(report.selected)
    with mp.workprec(prec + 64):
        target = report.unit_product.power(N).value(prec)
        if not _same(eval_closed_form(entry.expr, prec + 64), target, prec - 64):
            notes.append(f"printed b^{N} display {entry.expr} differs from the engine unit product")
    return notes


def check_entry(entry: PaperCorpusEntry, prec: int = DEFAULT_PREC) -> EntryResult:
    """Compare one corpus entry with the engine's independent computation."""
    checker = {
        "b-value": _check_b,
        "class-data": _check_class,
        "g-value": _check_g,
        "modular-identity": _check_modeq,
    }[entry.kind]
    try:
        return checker(entry, prec)
    except Exception as exc:  # any engine failure is a failed entry, not a crash
        return EntryResult(entry.id, entry.kind, False, None, [f"error: {type(exc).__name__}: {exc}"],
                           entry.typo is not None)


def _judge(entry: PaperCorpusEntry, printed_ok: bool, corrected_ok: bool, residual,
           notes: list[str]) -> EntryResult:
    if entry.typo is None:
        return EntryResult(entry.id, entry.kind, printed_ok, residual, notes)
    tn = [f"typo: {t}" for t in entry.typo.get("notes", [])]
    if printed_ok:
        tn.append("printed form agrees although flagged as a typo")
    return EntryResult(entry.id, entry.kind, corrected_ok, residual, tn + notes, True)


def _check_b(entry: PaperCorpusEntry, prec: int) -> EntryResult:
    from .qseries import b_numeric

    m, n = Fraction(entry.args["m"]), int(entry.args["n"])
    tol = prec - 64
    with mp.workprec(prec + 64):
        engine = b_numeric(m, n, prec)
        printed = eval_closed_form(entry.expr, prec + 64)
        corrected = eval_closed_form(entry.corrected_expr, prec + 64)
        residual = abs(engine - corrected)
    return _judge(entry, _same(engine, printed, tol), _same(engine, corrected, tol), residual, [])


def _check_class(entry: PaperCorpusEntry, prec: int) -> EntryResult:
    from .derive import derive_b

    report = derive_b(int(entry.args["m"]), int(entry.args["n"]), prec)
    printed_notes = compare_class_data(entry, report, prec)
    fixed = PaperCorpusEntry(entry.id, entry.kind, entry.corrected_expr, entry.corrected_args,
                             entry.provenance)
    corrected_notes = compare_class_data(fixed, report, prec)
    N = len(report.selected)
    with mp.workprec(prec + 64):
        residual = abs(eval_closed_form(fixed.expr, prec + 64) - report.unit_product.power(N).value(prec))
    notes = printed_notes if entry.typo else []
    return _judge(entry, not printed_notes, not corrected_notes, residual,
                  [f"printed table: {x}" for x in notes] + corrected_notes if entry.typo else printed_notes)


def _sign(branch: str) -> int:
    if branch not in ("direct", "reciprocal"):
        raise ValueError(f"unknown branch {branch!r}")
    return 1 if branch == "direct" else -1


def _check_g(entry: PaperCorpusEntry, prec: int) -> EntryResult:
    from .modeq import derive_gn_pipeline
    from .qseries import class_invariant_numeric

    n = Fraction(entry.args["n"])
    k = _sign(entry.args.get("branch", "direct"))
    notes = []
    with mp.workprec(prec + 64):
        engine = class_invariant_numeric("g", n, prec)
        if "m" in entry.args:
            pair = derive_gn_pipeline(int(entry.args["m"]), prec)
            if not _same(pair.big, engine, prec - 64):
                notes.append("pipeline value differs from the q-series value")
        target = engine ** k
        printed = eval_closed_form(entry.expr, prec + 64)
        corrected = eval_closed_form(entry.corrected_expr, prec + 64)
        residual = abs(corrected - target)
    if k == -1:
        notes.append("matches up to reciprocal branch: printed form equals 1/g")
    ok = not any("differs" in s for s in notes)
    return _judge(entry, ok and _same(printed, target, prec - 64), ok and _same(corrected, target, prec - 64),
                  residual, notes)


def _check_modeq(entry: PaperCorpusEntry, prec: int) -> EntryResult:
    from .modeq import derive_gn_pipeline

    pair = derive_gn_pipeline(int(entry.args["m"]), prec)
    quantity = entry.args["quantity"]
    k = _sign(entry.args.get("branch", "direct")) * int(entry.args.get("power", 1))
    notes = []
    with mp.workprec(prec + 64):
        value = {"x": pair.x, "ratio": pair.ratio, "product": pair.product, "S": pair.S}[quantity]
        target = value ** k
        printed = eval_closed_form(entry.expr, prec + 64)
        corrected = eval_closed_form(entry.corrected_expr, prec + 64)
        residual = abs(corrected - target)
    if k < 0:
        notes.append(f"matches up to reciprocal branch: printed form equals {quantity}^{k}")
    return _judge(entry, _same(printed, target, prec - 64), _same(corrected, target, prec - 64),
                  residual, notes)


def verify_corpus(entries: dict[str, PaperCorpusEntry], prec: int = DEFAULT_PREC,
                  parallel: bool = False) -> list[EntryResult]:
    """Check every entry; results are ordered by entry id."""
    ids = sorted(entries)
    if parallel and len(ids) > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(check_entry, [entries[i] for i in ids], [prec] * len(ids)))
    else:
        results = [check_entry(entries[i], prec) for i in ids]
    return results
