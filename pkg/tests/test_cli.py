import json

import pytest

from golden_cases import CASES, DATA, golden_path, run_case
from dupcut.cli import EXIT_GENOMES, EXIT_IO, EXIT_LIMIT, EXIT_PARSE, EXIT_USAGE


def flatten(value, prefix=""):
    """``{dotted path: text}`` the way a reader would index a JSON document."""
    out = {}
    if isinstance(value, dict):
        for k, v in value.items():
            out.update(flatten(v, f"{prefix}.{k}" if prefix else k))
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, v in enumerate(value):
            out.update(flatten(v, f"{prefix}[{i}]"))
    elif isinstance(value, list):
        out[prefix] = " ".join(str(v) for v in value) if value else "[]"
    elif isinstance(value, bool):
        out[prefix] = "yes" if value else "no"
    elif value is None:
        out[prefix] = "-"
    else:
        out[prefix] = str(value)
    return out


def parse_text(text):
    out = {}
    for line in text.splitlines():
        key, _, val = line.partition(": ")
        out[key] = val
    return out


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    for fmt, extra in (("txt", []), ("json", ["--json"])):
        code, out, _ = run_case(CASES[name] + extra)
        assert f"exit {code}\n{out}" == golden_path(name, fmt).read_text(encoding="utf-8")


@pytest.mark.parametrize("name", sorted(CASES))
def test_text_and_json_agree(name):
    _, text, _ = run_case(CASES[name])
    _, js, _ = run_case(CASES[name] + ["--json"])
    if text.startswith("graph"):
        dot_end = text.index("}\n") + 2
        assert text[:dot_end] == js[:dot_end]
        text, js = text[dot_end:], js[dot_end:]
    assert parse_text(text) == flatten(json.loads(js))


@pytest.mark.parametrize("name", sorted(CASES))
def test_reruns_are_byte_identical(name):
    assert run_case(CASES[name] + ["--json"]) == run_case(CASES[name] + ["--json"])


def test_examples_from_outputs():
    _, out, _ = run_case(["approx", "tight.nwk", "--json"])
    res = json.loads(out)["result"]
    assert res["bipartition"] == {"left": ["a", "b"], "right": ["c", "d"]}
    assert (res["relaxed_value"], res["realized_cost"]) == (1, 0)
    res = json.loads(run_case(["approx", "cherry.nwk", "--json"])[1])["result"]
    assert res["realized_cost"] == 0
    res = json.loads(run_case(["exact", "apparent.nwk", "--json"])[1])["result"]
    assert res["cost"] == 1
    res = json.loads(run_case(["mdpp", "apparent.nwk", "--json"])[1])["result"]
    assert (res["size"], res["prefix"]) == (1, [1])
    res = json.loads(run_case(["partition", "shared.nwk", "--json"])[1])["result"]
    assert res["PB"] == res["PP"] == [["a"], ["b"], ["c"]] and res["equal"]
    for forest, species, d in (("apparent.nwk", "species_abc.nwk", 1), ("cherry.nwk", "species_ab.nwk", 0), ("aa.nwk", "species_ab.nwk", 1)):
        res = json.loads(run_case(["dupcost", forest, species, "--json"])[1])["result"]
        assert res["duplications"] == d
    for forest, tree in (("tight.nwk", "((a,b),(c,d));"), ("cherry.nwk", "(a,b);"), ("two_trees.nwk", "((a,b),(c,d));")):
        assert json.loads(run_case(["greedy", forest, "--json"])[1])["result"]["species_tree"] == tree
    res = json.loads(run_case(["graph", "tight.nwk", "--json"])[1])["result"]
    assert (res["edges"], res["labels"]) == (2, 1)
    res = json.loads(run_case(["graph", "tight.nwk", "--which", "I", "--json"])[1])["result"]
    assert (res["edges"], res["distinct_pairs"], res["labels"]) == (8, 6, 3)
    assert json.loads(run_case(["graph", "cherry.nwk", "--json"])[1])["result"]["edges"] == 0


def test_certify_reports_both_bounds():
    _, out, _ = run_case(["approx", "tight.nwk", "--certify", "--json"])
    cert = json.loads(out)["result"]["certificate"]
    assert cert["exact_cost"] == 0 and cert["bound_2d_plus_1"] == 1 and cert["bound_2d_plus_1_holds"]


def test_check_counterexample_is_reported_not_failed():
    code, out, _ = run_case(["check", "tight.nwk", "--json"])
    res = json.loads(out)["result"]
    assert code == 0 and res["f_H_counterexample"]["deficit"] == 1


def test_bench_budget_and_growth():
    code, out, _ = run_case(["bench", "--sizes", "6,8,10", "--json"])
    doc = json.loads(out)
    assert code == 0 and doc["result"]["exact_growth_monotone"]
    assert all(r["within_budget"] for r in doc["result"]["instances"])
    assert "approx_ms" in doc["result"]["instances"][0]


def test_timing_is_opt_in():
    assert "timing_ms" not in run_case(["exact", "tight.nwk", "--json"])[1]
    assert "timing_ms" in json.loads(run_case(["exact", "tight.nwk", "--json", "--timing"])[1])


def test_gen_writes_files(tmp_path):
    out, sp, rep = tmp_path / "f.nwk", tmp_path / "s.nwk", tmp_path / "r.json"
    argv = ["gen", "--k", "4", "--trees", "3", "--p-dup", "0.2", "--seed", "1",
            "--out", str(out), "--species-out", str(sp), "--report-out", str(rep)]
    assert run_case(argv)[0] == 0
    assert out.read_text().count(";") == json.loads(rep.read_text())["forest_digest"]["trees"]
    assert sp.read_text().endswith(";\n")


@pytest.mark.parametrize(
    "argv,code",
    [
        (["approx", "malformed.nwk"], EXIT_PARSE),
        (["approx", "missing.nwk"], EXIT_IO),
        (["exact", "tight.nwk", "--limit", "3"], EXIT_LIMIT),
        (["approx", "tight.nwk", "--certify", "--limit", "3"], EXIT_LIMIT),
        (["dupcost", "apparent.nwk", "species_ab.nwk"], EXIT_GENOMES),
        (["dupcost", "apparent.nwk", "malformed.nwk"], EXIT_PARSE),
        (["graph", "tight.nwk", "--dot", str(DATA / "no" / "such" / "dir.dot")], EXIT_IO),
        (["check", "empty.nwk"], EXIT_USAGE),
        (["check"], EXIT_USAGE),
        (["gen", "--mode", "uniform", "--k", "3", "--p-dup", "0.1", "--leaves", "3"], EXIT_USAGE),
        (["gen", "--k", "3", "--leaves", "3"], EXIT_USAGE),
        (["bench", "--sizes", "30"], EXIT_LIMIT),
        (["decide", "apparent.nwk"], EXIT_USAGE),
        (["decide", "apparent.nwk", "--edge", "a", "zz", "1"], EXIT_USAGE),
        (["decide", "apparent.nwk", "--edge", "b", "c", "1"], EXIT_USAGE),
        (["approx", "aa.nwk"], EXIT_USAGE),
        (["frobnicate"], EXIT_USAGE),
    ],
)
def test_exit_codes(argv, code):
    got, out, err = run_case(argv)
    assert got == code
    assert out == "" and err.startswith("dupcut: ")


def test_parse_error_names_position():
    _, _, err = run_case(["approx", "malformed.nwk"])
    assert "position" in err
