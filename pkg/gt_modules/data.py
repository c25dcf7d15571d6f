"""
JSON codec for tableaux, relation sets, vectors, families and reports.

Rationals are written "p/q" (integers as plain ints inside rows); every loader
raises ParseError naming the offending location, e.g. "$.rows[1][0]".
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from gt_modules.action import FormalVector
from gt_modules.gamma import EigenFingerprint, GammaCheck
from gt_modules.gg import GGVerdict, IndexFamily
from gt_modules.relations import RelationSet, parse_relations
from gt_modules.tableau import INTEGER_ANCHOR, Entry, Tableau, parse_rows
from gt_modules.utils import format_fraction, to_fraction
from gt_modules.verifier import (
    Check,
    CrossValidation,
    FrzResult,
    HighestWeightModule,
    TableauModuleReport,
    VerificationReport,
    Violation,
)


class ParseError(ValueError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


def _expect(obj, kind, location: str):
    if not isinstance(obj, kind) or isinstance(obj, bool):
        raise ParseError(location, f"expected {kind.__name__}, got {type(obj).__name__}")
    return obj


def _field(obj: dict, key: str, location: str):
    if key not in obj:
        raise ParseError(location, f"missing field {key!r}")
    return obj[key]


def read_json_argument(value: str) -> Any:
    """Inline JSON, or the path of a file holding it."""
    path = Path(value)
    try:
        is_file = path.is_file()
    except OSError:
        is_file = False
    text = path.read_text() if is_file else value
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        source = str(path) if is_file else "argument"
        raise ParseError(f"{source}:{err.lineno}:{err.colno}", err.msg) from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# tableaux


def _load_entry(value, location: str):
    if isinstance(value, bool):
        raise ParseError(location, "booleans are not entries")
    if isinstance(value, dict):
        anchor = _expect(_field(value, "anchor", location), str, f"{location}.anchor")
        offset = _expect(value.get("offset", 0), int, f"{location}.offset")
        return Entry(anchor, offset)
    if isinstance(value, (int, str)):
        return value
    raise ParseError(location, f"expected an integer, a rational string or an anchor, got {value!r}")


def load_tableau(obj, location: str = "$") -> Tableau:
    _expect(obj, dict, location)
    rows = _expect(_field(obj, "rows", location), list, f"{location}.rows")
    anchors = _expect(obj.get("anchors", {}), dict, f"{location}.anchors")

    table = {}
    for anchor, value in anchors.items():
        try:
            table[anchor] = to_fraction(value)
        except ValueError as err:
            raise ParseError(f"{location}.anchors.{anchor}", str(err)) from None

    parsed = []
    for k, row in enumerate(rows):
        _expect(row, list, f"{location}.rows[{k}]")
        parsed.append([_load_entry(v, f"{location}.rows[{k}][{i}]") for i, v in enumerate(row)])

    if "n" in obj and obj["n"] != len(rows):
        raise ParseError(f"{location}.n", f"n = {obj['n']} but {len(rows)} rows are given")
    try:
        entries, table = parse_rows(parsed, table)
        return Tableau(entries, table)
    except ValueError as err:
        raise ParseError(location, str(err)) from None


def _dump_entry(entry: Entry):
    if entry.anchor == INTEGER_ANCHOR:
        return entry.offset
    return {"anchor": entry.anchor, "offset": entry.offset}


def dump_tableau(T: Tableau) -> dict:
    return {
        "n": T.n,
        "anchors": {a: format_fraction(v) for a, v in T.anchors.items() if a != INTEGER_ANCHOR},
        "rows": [[_dump_entry(entry) for entry in row] for row in T.rows()],
    }


# relation sets


def load_relation_set(obj, location: str = "$") -> RelationSet:
    _expect(obj, dict, location)
    n = _expect(_field(obj, "n", location), int, f"{location}.n")
    relations = _field(obj, "relations", location)
    try:
        if isinstance(relations, str):
            return parse_relations(relations, n)

        _expect(relations, list, f"{location}.relations")
        triples = []
        for index, item in enumerate(relations):
            where = f"{location}.relations[{index}]"
            _expect(item, dict, where)
            high = tuple(_expect(_field(item, "from", where), list, f"{where}.from"))
            low = tuple(_expect(_field(item, "to", where), list, f"{where}.to"))
            rel = _field(item, "rel", where)
            if rel in ("<", "<="):
                high, low = low, high
            elif rel not in (">", ">="):
                raise ParseError(f"{where}.rel", f"unknown relation {rel!r}")
            triples.append((high, low, rel in (">", "<")))
        return RelationSet(n, triples)
    except ParseError:
        raise
    except (ValueError, TypeError) as err:
        raise ParseError(location, str(err)) from None


def dump_relation_set(C: RelationSet) -> dict:
    return {
        "n": C.n,
        "relations": [
            {"from": list(r.high), "rel": r.symbol, "to": list(r.low)} for r in C
        ],
    }


# vectors


def load_vector(obj, location: str = "$") -> FormalVector:
    _expect(obj, list, location)
    v = FormalVector()
    for index, term in enumerate(obj):
        where = f"{location}[{index}]"
        _expect(term, dict, where)
        try:
            coeff = to_fraction(_field(term, "coeff", where))
        except ValueError as err:
            raise ParseError(f"{where}.coeff", str(err)) from None
        v.add_term(load_tableau(_field(term, "tableau", where), f"{where}.tableau"), coeff)
    return v


def dump_vector(v: FormalVector) -> list:
    return [{"coeff": format_fraction(c), "tableau": dump_tableau(T)} for T, c in v.terms()]


# families


def load_family(obj, location: str = "$") -> IndexFamily:
    _expect(obj, list, location)
    for index, pair in enumerate(obj):
        _expect(pair, list, f"{location}[{index}]")
        if len(pair) != 2:
            raise ParseError(f"{location}[{index}]", "a pair has two entries")
    try:
        return IndexFamily(obj)
    except (ValueError, TypeError) as err:
        raise ParseError(location, str(err)) from None


def load_row(obj, location: str = "$") -> list[Fraction]:
    _expect(obj, list, location)
    try:
        return [to_fraction(v) for v in obj]
    except ValueError as err:
        raise ParseError(location, str(err)) from None


# reports


def dump_fingerprint(F: EigenFingerprint) -> dict:
    return {
        "gamma": {
            f"{m},{k}": None if value is None else format_fraction(value)
            for (m, k), value in sorted(F.values.items())
        },
        "row_multisets": {str(m): [format_fraction(v) for v in row] for m, row in F.row_multisets.items()},
    }


def dump_check(check: Check) -> dict:
    return {
        "relation": check.relation,
        "tableau": dump_tableau(check.tableau),
        "passed": check.passed,
        "defect": dump_vector(check.defect),
    }


def dump_violation(violation: Violation | None):
    if violation is None:
        return None
    return {
        "relation": violation.relation,
        "tableau": dump_tableau(violation.tableau),
        "defect": dump_vector(violation.defect),
    }


def dump_report(report: VerificationReport) -> dict:
    return {
        "description": report.description,
        "radius": report.radius,
        "passed": report.passed,
        "checks": len(report.checks),
        "tableaux": report.tableaux,
        "seed_rng": report.seed_rng,
        "failures": [dump_check(check) for check in report.failures],
    }


def dump_gamma_check(check: GammaCheck) -> dict:
    return {
        "m": check.m,
        "k": check.k,
        "eigenvalue": format_fraction(check.eigenvalue),
        "passed": check.passed,
        "defect": dump_vector(check.defect),
    }


def dump_cross_validation(result: CrossValidation) -> dict:
    return {
        "relations": dump_relation_set(result.relations),
        "admissible": result.admissible,
        "samples": result.samples,
        "conclusive": result.conclusive,
        "agreed": result.agreed,
        "inconclusive": result.inconclusive,
        "seed_rng": result.seed_rng,
        "violation": dump_violation(result.violation),
    }


def dump_frz(result: FrzResult) -> dict:
    return {
        "relations": None if result.relations is None else dump_relation_set(result.relations),
        "candidates": [dump_relation_set(C) for C in result.candidates],
        "ambiguous": result.ambiguous,
        "exhausted": result.exhausted,
    }


def dump_module_report(report: TableauModuleReport) -> dict:
    return {
        "conditions": dict(report.conditions),
        "passed": report.passed,
        "relation_failures": [dump_check(check) for check in report.relation_failures],
        "repeated_fingerprints": [[dump_tableau(S), dump_tableau(T)] for S, T in report.repeated],
        "gamma_failures": [
            {"tableau": dump_tableau(T), **dump_gamma_check(check)} for T, check in report.gamma_failures
        ],
    }


def dump_highest_weight(module: HighestWeightModule) -> dict:
    return {
        "relations": dump_relation_set(module.relations),
        "seed": dump_tableau(module.seed),
        "admissible": module.admissible,
        "realization": module.realization,
        "seed_killed": module.seed_killed,
    }


def dump_verdict(verdict: GGVerdict) -> dict:
    return {
        "family": [list(pair) for pair in verdict.family],
        "top_row": [format_fraction(v) for v in verdict.top_row],
        "verdict": "Module" if verdict.module else "NotModule",
        "lp": verdict.lp,
        "admissible": verdict.admissible,
        "agreed": verdict.agreed,
        "witness": None if verdict.witness is None else dump_tableau(verdict.witness),
        "relation": verdict.relation,
        "defect": None if verdict.defect is None else dump_vector(verdict.defect),
        "report": None if verdict.report is None else dump_report(verdict.report),
    }
