"""Command-line harness: exit codes, JSON records, CSV schema."""

import json
import os

import pytest

from cdle.cli import classify_costs, main

from conftest import CORPUS, NEGATIVE, REPO


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def corpus(*stems):
    return [os.path.join(CORPUS, s + ".cdl") for s in stems]


def test_check_full_corpus_exit_zero(capsys):
    code, out, _ = run(capsys, "check", *corpus(*[
        "base", "list", "vec", "reuse", "append", "identity",
        "combinators", "packaged", "examples", "schemes"]))
    assert code == 0
    assert "117/117" in out


def test_check_negative_exit_one_with_code(capsys):
    path = os.path.join(NEGATIVE, "erased_var.cdl")
    code, out, _ = run(capsys, "check", path, "--root", CORPUS, "--json")
    assert code == 1
    records = [json.loads(line) for line in out.strip().splitlines()]
    assert all(set(r) <= {"def", "status", "errorCode", "span"} for r in records)
    bad = [r for r in records if r["status"] == "error"]
    assert len(bad) == 1
    assert bad[0]["errorCode"] == "ErasedVarOccursFree"
    assert "span" in bad[0]


def test_check_missing_file_exit_two(capsys):
    code, _, err = run(capsys, "check", "no/such/file.cdl")
    assert code == 2
    assert "error" in err


def test_check_json_deterministic(capsys):
    path = os.path.join(NEGATIVE, "phi_mismatch.cdl")
    code1, out1, _ = run(capsys, "check", path, "--root", CORPUS, "--json")
    code2, out2, _ = run(capsys, "check", path, "--root", CORPUS, "--json")
    assert (code1, out1) == (code2, out2)


def test_erase_zero_cost_conversion(capsys):
    code, out, _ = run(capsys, "erase", os.path.join(CORPUS, "reuse.cdl"), "v2l!")
    assert code == 0
    assert out.strip() == "λ xs. xs"


def test_erase_nil_constructor(capsys):
    code, out, _ = run(capsys, "erase", os.path.join(CORPUS, "list.cdl"), "nilL")
    assert code == 0
    assert out.strip() == "λ cN. λ cC. cN"


def test_erase_unknown_name_exit_one(capsys):
    code, _, err = run(capsys, "erase", os.path.join(CORPUS, "list.cdl"), "nosuch")
    assert code == 1


def test_eq_shared_erasures(capsys):
    code, out, _ = run(capsys, "eq", os.path.join(CORPUS, "append.cdl"), "appL", "appV")
    assert code == 0
    code, out, _ = run(capsys, "eq", os.path.join(CORPUS, "list.cdl"), "nilL", "nilV")
    assert code == 2  # nilV lives in vec.cdl, not reachable from list.cdl

    code, out, _ = run(capsys, "eq", os.path.join(CORPUS, "vec.cdl"), "nilVC", "nilV")
    assert code == 0
    code, out, _ = run(capsys, "eq", os.path.join(CORPUS, "list.cdl"), "nilL", "consL")
    assert code == 1


def test_normalize_term(capsys):
    code, out, _ = run(capsys, "normalize", "--term", "(λ x. λ y. x) a b")
    assert code == 0
    assert out.splitlines()[0] == "a"
    assert "beta_steps=2" in out


def test_normalize_definition(capsys):
    code, out, _ = run(capsys, "normalize", os.path.join(CORPUS, "append.cdl"), "appL")
    assert code == 0
    assert out.splitlines()[0] == "λ xs. xs (λ ys. ys) (λ x. λ ih. λ ys. λ cN. λ cC. cC x (ih ys cN cC))"


def test_cost_constant_and_linear(capsys):
    code, out, _ = run(capsys, "cost", "v2l!", "--sizes", "8,64,512", "--root", CORPUS)
    assert code == 0 and "classification: constant" in out
    code, out, _ = run(capsys, "cost", "v2l", "--sizes", "8,16,32,64", "--root", CORPUS)
    assert code == 0 and "classification: linear" in out


def test_cost_csv_schema(capsys):
    code, out, _ = run(capsys, "cost", "l2v!", "--sizes", "4,8", "--csv", "--root", CORPUS)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "name,n,beta_steps,eta_steps,fuel_exhausted"
    assert lines[1].startswith("l2v!,4,")


def test_cost_usage_errors(capsys):
    code, _, err = run(capsys, "cost", "v2l!", "--sizes", "", "--root", CORPUS)
    assert code == 2
    code, _, err = run(capsys, "cost", "nosuch", "--sizes", "8", "--root", CORPUS)
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["cost", "v2l!"])  # missing --sizes entirely
    assert exc.value.code == 2


def test_classify_costs_rule():
    assert classify_costs([(8, 5, False), (64, 5, False), (512, 5, False)]) == "constant"
    assert classify_costs([(8, 89, False), (16, 169, False), (32, 329, False), (64, 649, False)]) == "linear"
    assert classify_costs([(8, 10, False), (16, 100, False), (32, 10000, False)]) == "other"
    assert classify_costs([(8, 5, True)]) == "other"
