import json

import pytest

from gt_modules.cli import EXIT_FAILED, EXIT_INPUT_ERROR, EXIT_PASSED, EXIT_UNDEFINED, main
from gt_modules.data import dump_relation_set, dump_tableau, dumps
from gt_modules.relations import RelationSet, ge, gt, standard_set
from gt_modules.tableau import Tableau

S2 = dumps(dump_relation_set(standard_set(2)))
S3 = dumps(dump_relation_set(standard_set(3)))
ADJOINT_SEED = dumps(dump_tableau(Tableau.from_rows([[2, 0, -2], [2, 0], [1]])))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_verify_module_on_the_adjoint(capsys):
    code, payload = run_json(capsys, "verify-module", "--relations", S3, "--seed", ADJOINT_SEED, "--radius", "1")
    assert code == EXIT_PASSED
    assert payload["command"] == "verify-module"
    assert payload["passed"]
    assert payload["failures"] == []


def test_verify_highest_weight_module(capsys):
    code, payload = run_json(capsys, "verify-module", "--weight", "[1,0,0]", "--radius", "1")
    assert code == EXIT_PASSED
    assert payload["module"]["admissible"]
    assert payload["module"]["seed_killed"]


def test_seed_from_a_file(capsys, tmp_path):
    seed = tmp_path / "seed.json"
    seed.write_text(ADJOINT_SEED)
    code, _ = run_json(capsys, "verify-module", "--relations", S3, "--seed", str(seed), "--radius", "0")
    assert code == EXIT_PASSED


def test_incompatible_family_is_not_a_module(capsys):
    code, payload = run_json(capsys, "gg-check", "--family", "[[0,1],[0,3]]", "--top", "[3,1,-1]", "--radius", "1")
    assert code == EXIT_FAILED
    assert payload["verdict"] == "NotModule"
    assert payload["agreed"]
    assert payload["defect"]


def test_one_sided_set_is_not_admissible(capsys):
    C = RelationSet(3, [gt((2, 1), (3, 2)), ge((3, 2), (2, 2))])
    code, payload = run_json(capsys, "check-admissible", "--relations", dumps(dump_relation_set(C)))
    assert code == EXIT_FAILED
    assert not payload["admissible"]
    assert payload["defects"] == [[[2, 1], [2, 2]]]


def test_small_set_sweep(capsys):
    code, payload = run_json(
        capsys,
        "check-admissible",
        "--n", "2",
        "--max-relations", "1",
        "--samples", "1",
        "--radius", "1",
        "--anchor-assignments", "1",
    )
    assert code == EXIT_PASSED
    assert payload["checked"] == 4
    assert payload["enumerated"] == 7
    assert payload["inconclusive"] == 0
    assert payload["seed_rng"] == 0
    assert payload["disagreements"] == []


def test_enumerate_basis(capsys):
    code, payload = run_json(capsys, "enumerate-basis", "--top", "[2,0,-2]")
    assert code == EXIT_PASSED
    assert payload["count"] == 8

    code, out, _ = run(capsys, "enumerate-basis", "--top", "[2,0,-2]", "--format", "text")
    assert code == EXIT_PASSED
    assert out.splitlines()[0] == "8 tableaux"


def test_apply_raising_operator(capsys):
    seed = dumps(dump_tableau(Tableau.from_rows([[1, -1], [0]])))
    code, payload = run_json(capsys, "apply", "--relations", S2, "--seed", seed, "--generator", "e1")
    assert code == EXIT_PASSED
    assert payload["result"] == [{"coeff": "1", "tableau": {"n": 2, "anchors": {}, "rows": [[1, -1], [1]]}}]


def test_relations_removal_exploration(capsys):
    code, payload = run_json(capsys, "rr-explore", "--n", "2", "--limit", "100")
    assert code == EXIT_PASSED
    assert payload["count"] == 4
    assert payload["not_admissible"] == []


def test_critical_set_reports_a_witness(capsys):
    C = RelationSet(3, [ge((3, 1), (2, 1)), ge((3, 1), (2, 2))])
    code, payload = run_json(capsys, "check-noncritical", "--relations", dumps(dump_relation_set(C)))
    assert code == EXIT_FAILED
    assert payload["critical_pairs"] == [[[2, 1], [2, 2]]]
    assert payload["witness"] is not None


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-module", "--relations", "{"],
        ["reduce"],
        ["apply", "--relations", S2, "--generator", "x1"],
        ["gg-check", "--family", "[[0,3]]", "--top", "[1,0]"],
    ],
)
def test_input_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_INPUT_ERROR
    assert out == ""
    assert err.startswith("error:")


CRITICAL = dumps(dump_relation_set(RelationSet(3, [ge((3, 1), (2, 1)), ge((3, 1), (2, 2))])))


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-module", "--weight", "[0,1,5]"],
        ["sample-realization", "--relations", CRITICAL],
        ["reduce", "--relations", CRITICAL],
        ["verify-module", "--relations", S3, "--seed", dumps(dump_tableau(Tableau.from_rows([[2, 0, -2], [2, 0], [5]])))],
    ],
)
def test_undefined_outcomes(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_UNDEFINED
    assert out == ""
    assert err.startswith("error:")


def test_sampling_commands_record_the_rng_seed(capsys):
    code, payload = run_json(capsys, "verify-module", "--relations", S2, "--radius", "1", "--seed-rng", "11")
    assert code == EXIT_PASSED
    assert payload["seed_rng"] == 11

    _, payload = run_json(capsys, "reduce", "--relations", S2)
    assert "seed_rng" not in payload
