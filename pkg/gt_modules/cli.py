import argparse
import re
import sys

from gt_modules.action import BasisSpec, FormalVector, NotInBasis, apply_Eij, apply_h, enumerate_ball
from gt_modules.data import (
    ParseError,
    dump_cross_validation,
    dump_fingerprint,
    dump_frz,
    dump_gamma_check,
    dump_highest_weight,
    dump_module_report,
    dump_relation_set,
    dump_report,
    dump_tableau,
    dump_vector,
    dump_verdict,
    dumps,
    load_family,
    load_relation_set,
    load_row,
    load_tableau,
    read_json_argument,
)
from gt_modules.gamma import (
    MAX_CMK_ORDER,
    GammaBudgetExceeded,
    SingularRow,
    apply_cmk,
    check_gamma_action,
    fingerprint,
    multiplicity_one_check,
)
from gt_modules.gg import gg_sweep, theorem1_check
from gt_modules.realization import NoCaseApplies, critical_witness, sample_realization
from gt_modules.relations import (
    CriticalSet,
    NotReleasable,
    OrderUndetermined,
    UnsatisfiableSet,
    admissibility_defects,
    critical_pairs_of,
    detect_crosses,
    is_admissible,
    is_noncritical_set,
    is_pre_admissible,
    is_reduced,
    orient,
    reduce,
    rr_reachable,
    sigma_action,
)
from gt_modules.tableau import (
    CriticalTableau,
    InfiniteEnumeration,
    critical_pairs,
    enumerate_standard,
    is_noncritical_tableau,
    is_standard,
    parse_rows,
)
from gt_modules.utils import format_fraction
from gt_modules.verifier import (
    DEFAULT_ANCHOR_ASSIGNMENTS,
    DEFAULT_RADIUS,
    DEFAULT_SAMPLES,
    FRZ_SEARCH_LIMIT,
    NotRealization,
    PreconditionFailed,
    check_defining_relations,
    cross_validate,
    frz_check,
    hw_module_build,
    is_irreducible,
    sweep_small_sets,
    tableau_module_check,
)

EXIT_PASSED = 0
EXIT_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_UNDEFINED = 3

# well-formed input whose requested object does not exist
DOMAIN_OUTCOMES = (
    CriticalSet,
    CriticalTableau,
    GammaBudgetExceeded,
    InfiniteEnumeration,
    NoCaseApplies,
    NotInBasis,
    NotRealization,
    NotReleasable,
    OrderUndetermined,
    PreconditionFailed,
    SingularRow,
    UnsatisfiableSet,
)

_GENERATOR = re.compile(r"^(?:([efh])(\d+)|E(\d)(\d)|c(\d)(\d))$")


# inputs


def _require(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise ParseError(f"--{name.replace('_', '-')}", "required by this command")
    return value


def _relations(args):
    return load_relation_set(read_json_argument(_require(args, "relations")), "relations")


def _tableau(args, name: str = "tableau"):
    return load_tableau(read_json_argument(_require(args, name)), name)


def _basis(args) -> BasisSpec:
    C = _relations(args)
    if args.seed is None:
        return BasisSpec(C, sample_realization(C, rng=args.seed_rng))
    return BasisSpec(C, _tableau(args, "seed"))


def _render(T, args) -> str:
    return T.render() if args.format == "text" else str(T)


# commands; each returns (passed, payload, text lines)


def check_standard_command(args):
    T = _tableau(args)
    standard = is_standard(T)
    return standard, {"standard": standard, "tableau": dump_tableau(T)}, [f"standard: {standard}"]


def check_noncritical_command(args):
    if args.relations is not None:
        C = _relations(args)
        pairs = critical_pairs_of(C)
        witness = critical_witness(C, rng=args.seed_rng)
        payload = {
            "noncritical": not pairs,
            "critical_pairs": [[list(p), list(q)] for p, q in pairs],
            "witness": None if witness is None else dump_tableau(witness),
        }
        lines = [f"noncritical: {not pairs}"] + [f"critical pair {p} {q}" for p, q in pairs]
        return not pairs, payload, lines

    T = _tableau(args)
    pairs = critical_pairs(T)
    payload = {"noncritical": is_noncritical_tableau(T), "critical_pairs": [[list(p), list(q)] for p, q in pairs]}
    return not pairs, payload, [f"noncritical: {not pairs}"] + [f"equal entries {p} {q}" for p, q in pairs]


def decompose_command(args):
    C = _relations(args)
    parts = C.components
    return True, {"components": [dump_relation_set(part) for part in parts]}, [str(part) for part in parts]


def reduce_command(args):
    C = _relations(args)
    reduced = reduce(C)
    payload = {"reduced": dump_relation_set(reduced), "input_reduced": is_reduced(C)}
    return True, payload, [str(reduced)]


def check_admissible_command(args):
    if args.relations is None:
        n = _require(args, "n")
        sweep = sweep_small_sets(
            n,
            args.max_relations,
            args.samples,
            args.radius,
            args.anchor_assignments,
            rng=args.seed_rng,
            progress=args.progress,
        )
        payload = {
            "checked": sweep.checked,
            "enumerated": sweep.enumerated,
            "inconclusive": len(sweep.inconclusive),
            "seed_rng": sweep.seed_rng,
            "disagreements": [dump_cross_validation(result) for result in sweep.disagreements],
        }
        lines = [
            f"checked {sweep.checked} of {sweep.enumerated} sets, {len(sweep.disagreements)} disagreements, "
            f"{len(sweep.inconclusive)} inconclusive"
        ]
        return not sweep.disagreements, payload, lines

    C = _relations(args)
    oriented = sigma_action(orient(C), C)
    admissible = is_admissible(C)
    payload = {
        "admissible": admissible,
        "noncritical": is_noncritical_set(C),
        "pre_admissible": is_pre_admissible(oriented),
        "crosses": [list(x) for x in detect_crosses(oriented)],
        "defects": [[list(p), list(q)] for p, q in admissibility_defects(oriented)],
    }
    lines = [f"admissible: {admissible}"]
    lines += [f"pair {p} {q} is not held apart" for p, q in admissibility_defects(oriented)]

    if args.cross_validate:
        result = cross_validate(C, args.samples, args.radius, args.anchor_assignments, rng=args.seed_rng)
        payload["cross_validation"] = dump_cross_validation(result)
        if result.inconclusive:
            lines.append(f"cross validation inconclusive: no sample realizes only {C}")
        else:
            lines.append(f"cross validation agreed: {result.agreed} ({result.conclusive} conclusive samples)")
        return result.agreed, payload, lines
    return admissible, payload, lines


def sample_realization_command(args):
    C = _relations(args)
    top = None
    anchors = None
    if args.top is not None:
        (top,), anchors = parse_rows([load_row(read_json_argument(args.top), "top")])
    T = sample_realization(C, rng=args.seed_rng, top_row=top, anchors=anchors)
    return True, {"tableau": dump_tableau(T), "seed_rng": args.seed_rng}, [_render(T, args)]


def enumerate_basis_command(args):
    if args.relations is None:
        tableaux = enumerate_standard(load_row(read_json_argument(_require(args, "top")), "top"))
    else:
        tableaux = enumerate_ball(_basis(args), args.radius)
    payload = {"count": len(tableaux), "tableaux": [dump_tableau(T) for T in tableaux]}
    return True, payload, [f"{len(tableaux)} tableaux"] + [str(T) for T in tableaux]


def _apply_generator(B, generator: str, T):
    if generator is None:
        raise ParseError("--generator", "required by this command")
    match = _GENERATOR.match(generator)
    if match is None:
        raise ParseError("--generator", f"unknown generator {generator!r}")
    letter, k, i, j, m, c = match.groups()
    v = FormalVector.of(T)
    if letter == "e":
        return apply_Eij(B, int(k), int(k) + 1, v)
    if letter == "f":
        return apply_Eij(B, int(k) + 1, int(k), v)
    if letter == "h":
        return apply_h(B, int(k), v)
    if i is not None:
        return apply_Eij(B, int(i), int(j), v)
    return apply_cmk(B, int(m), int(c), T)


def apply_command(args):
    B = _basis(args)
    T = _tableau(args) if args.tableau is not None else B.seed
    result = _apply_generator(B, args.generator, T)
    return True, {"result": dump_vector(result)}, [str(result)]


def verify_module_command(args):
    if args.weight is not None:
        module = hw_module_build(load_row(read_json_argument(args.weight), "weight"))
        report = check_defining_relations(
            BasisSpec(module.relations, module.seed),
            args.radius,
            args.progress,
            args.anchor_assignments,
            rng=args.seed_rng,
        )
        payload = {"module": dump_highest_weight(module), "report": dump_report(report)}
        passed = report.passed and module.admissible and module.seed_killed
        return passed, payload, [repr(report), f"admissible: {module.admissible}"]

    if args.tableau is not None:
        listed = read_json_argument(args.tableau)
        if not isinstance(listed, list):
            raise ParseError("tableau", "an explicit basis is a list of tableaux")
        tableaux = [load_tableau(obj, f"tableau[{index}]") for index, obj in enumerate(listed)]
        report = tableau_module_check(tableaux, args.progress)
        lines = [f"{name}: {value}" for name, value in report.conditions.items()]
        return report.passed, dump_module_report(report), lines

    report = check_defining_relations(
        _basis(args),
        args.radius,
        args.progress,
        args.anchor_assignments,
        rng=args.seed_rng,
    )
    lines = [repr(report)] + [f"{check.relation} at {check.tableau}: {check.defect}" for check in report.failures]
    return report.passed, dump_report(report), lines


def gamma_command(args):
    T = _tableau(args)
    F = fingerprint(T)
    payload = {"fingerprint": dump_fingerprint(F)}
    lines = [f"gamma_{m}{k} = {'-' if v is None else format_fraction(v)}" for (m, k), v in sorted(F.values.items())]
    if args.relations is None:
        return True, payload, lines

    B = BasisSpec(_relations(args), _tableau(args, "seed") if args.seed is not None else T)
    checks = [
        check_gamma_action(B, T, m, k)
        for m in range(1, min(T.n, MAX_CMK_ORDER) + 1)
        for k in range(1, m + 1)
        if F.values[m, k] is not None
    ]
    payload["checks"] = [dump_gamma_check(check) for check in checks]
    lines += [f"c_{c.m}{c.k} acts by gamma: {c.passed}" for c in checks]
    return all(checks), payload, lines


def fingerprint_command(args):
    F = fingerprint(_tableau(args))
    return True, dump_fingerprint(F), [repr(F)]


def multiplicity_command(args):
    passed = multiplicity_one_check(_basis(args), args.radius)
    return passed, {"multiplicity_one": passed}, [f"multiplicity one: {passed}"]


def irreducible_command(args):
    irreducible = is_irreducible(_relations(args), _tableau(args))
    return irreducible, {"irreducible": irreducible}, [f"irreducible: {irreducible}"]


def frz_command(args):
    result = frz_check(_tableau(args), args.limit)
    lines = [f"relations: {result.relations}", f"ambiguous: {result.ambiguous}"]
    return bool(result), dump_frz(result), lines


def gg_check_command(args):
    family = load_family(read_json_argument(_require(args, "family")), "family")
    if args.n is not None and args.n != family.n:
        raise ParseError("--n", f"family {family} is for n = {family.n}")
    top = load_row(read_json_argument(_require(args, "top")), "top")
    verdict = theorem1_check(family, top, args.radius, rng=args.seed_rng)
    lines = [f"{family}: {'Module' if verdict.module else 'NotModule'} (lp={verdict.lp})"]
    if verdict.witness is not None and not verdict.module:
        lines += [_render(verdict.witness, args), f"{verdict.relation}: {verdict.defect}"]
    return verdict.module, dump_verdict(verdict), lines


def gg_sweep_command(args):
    n = _require(args, "n")
    tops = read_json_argument(_require(args, "top"))
    if tops and not isinstance(tops[0], list):
        tops = [tops]
    top_rows = [load_row(top, f"top[{index}]") for index, top in enumerate(tops)]
    verdicts = gg_sweep(n, top_rows, args.radius, rng=args.seed_rng, progress=args.progress)
    agreed = all(v.agreed for v in verdicts)
    payload = {"agreed": agreed, "verdicts": [dump_verdict(v) for v in verdicts]}
    lines = [
        f"{v.family} {[format_fraction(x) for x in v.top_row]}: "
        f"{'Module' if v.module else 'NotModule'} lp={v.lp} admissible={v.admissible}"
        for v in verdicts
    ]
    return agreed, payload, lines


def rr_explore_command(args):
    n = _require(args, "n")
    reachable = sorted(rr_reachable(n, args.limit, args.progress), key=lambda C: C.sort_key())
    failing = [C for C in reachable if not is_admissible(C)]
    payload = {
        "count": len(reachable),
        "not_admissible": [dump_relation_set(C) for C in failing],
        "sets": [dump_relation_set(C) for C in reachable],
    }
    lines = [f"{len(reachable)} sets reached, {len(failing)} not admissible"]
    return not failing, payload, lines


COMMANDS = {
    "check-standard": check_standard_command,
    "check-noncritical": check_noncritical_command,
    "decompose": decompose_command,
    "reduce": reduce_command,
    "check-admissible": check_admissible_command,
    "sample-realization": sample_realization_command,
    "enumerate-basis": enumerate_basis_command,
    "apply": apply_command,
    "verify-module": verify_module_command,
    "gamma": gamma_command,
    "fingerprint": fingerprint_command,
    "multiplicity": multiplicity_command,
    "irreducible": irreducible_command,
    "frz": frz_command,
    "gg-check": gg_check_command,
    "gg-sweep": gg_sweep_command,
    "rr-explore": rr_explore_command,
}

# commands whose output depends on --seed-rng
SAMPLING_COMMANDS = {
    "check-noncritical",
    "check-admissible",
    "sample-realization",
    "enumerate-basis",
    "apply",
    "verify-module",
    "multiplicity",
    "gg-check",
    "gg-sweep",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gt-modules",
        description="Construct and verify Gelfand-Tsetlin modules of gl_n in exact arithmetic",
    )
    parser.add_argument("command", choices=sorted(COMMANDS), help="Operation to run")
    parser.add_argument(
        "--relations",
        type=str,
        default=None,
        help="Relation set JSON, inline or a file path",
    )
    parser.add_argument(
        "--seed",
        type=str,
        default=None,
        help="Seed tableau JSON of the basis, inline or a file path",
    )
    parser.add_argument(
        "--tableau",
        type=str,
        default=None,
        help="Tableau JSON (a list of tableaux for an explicit basis)",
    )
    parser.add_argument(
        "--radius",
        type=int,
        default=DEFAULT_RADIUS,
        help="Max-norm radius of the checked shifts around the seed",
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=DEFAULT_SAMPLES,
        help="Number of sampled realizations for cross validation",
    )
    parser.add_argument(
        "--anchor-assignments",
        type=int,
        default=DEFAULT_ANCHOR_ASSIGNMENTS,
        help="Anchor value assignments tried per sampled realization",
    )
    parser.add_argument(
        "--format",
        type=str,
        default="json",
        choices=["json", "text"],
        help="Output format",
    )
    parser.add_argument(
        "--seed-rng",
        type=int,
        default=0,
        help="Seed for sampled realizations and anchor values",
    )
    parser.add_argument("--n", type=int, default=None, help="Height of the tableaux")
    parser.add_argument("--family", type=str, default=None, help="Index family JSON, e.g. [[0,2],[0,3]]")
    parser.add_argument("--top", type=str, default=None, help="Top row JSON (a list of rows for gg-sweep)")
    parser.add_argument("--weight", type=str, default=None, help="Highest weight JSON")
    parser.add_argument(
        "--generator",
        type=str,
        default=None,
        help="Generator to apply: e1, f2, h1, E13 or c22",
    )
    parser.add_argument(
        "--limit",
        type=int,
        default=FRZ_SEARCH_LIMIT,
        help="Node limit for searches",
    )
    parser.add_argument(
        "--max-relations",
        type=int,
        default=2,
        help="Largest relation set size in a small-set sweep",
    )
    parser.add_argument(
        "--cross-validate",
        action="store_true",
        help="Also compare admissibility with direct verification",
    )
    parser.add_argument("--progress", action="store_true", help="Show progress bars")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        passed, payload, lines = COMMANDS[args.command](args)
    except DOMAIN_OUTCOMES as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_UNDEFINED
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    if args.format == "json":
        payload = {"command": args.command, "passed": passed, **payload}
        if args.command in SAMPLING_COMMANDS:
            payload.setdefault("seed_rng", args.seed_rng)
        print(dumps(payload))
    else:
        print("\n".join(lines))
    return EXIT_PASSED if passed else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
