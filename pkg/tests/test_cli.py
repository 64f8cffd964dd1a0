import json
import subprocess
import sys

import pytest

from paraf import catalog
from paraf.bundlefile import to_bundle_text
from paraf.cli import main

PRODUCT = ["--structure", "para_c_product", "--param", "a=2", "--param", "n=1", "--param", "p=2"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_product_passes_everything(capsys):
    code, out, _ = run(PRODUCT + ["--checks", "all", "--samples", "20"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["classification"]["class"] == "weak_para_C"
    assert set(rep) == {"config", "results", "classification", "summary", "version"}
    assert rep["summary"]["fail"] == 0


def test_classify_only_json(capsys):
    code, out, _ = run(["--structure", "para_sasakian_r3", "--checks", "classify", "--format", "json",
                        "--samples", "20"], capsys)
    assert code == 0
    assert '"class": "para_S"' in out
    assert {r["suite"] for r in json.loads(out)["results"]} == {"classify"}


def test_failing_checks_exit_one(capsys):
    # the master formula as printed misses a term off the normal class
    code, out, _ = run(["--structure", "nonnormal_apc3", "--checks", "tensors", "--samples", "10"], capsys)
    assert code == 1
    failed = {r["check"] for r in json.loads(out)["results"] if r["status"] == "fail"}
    assert failed == {"nabla_f.master_formula"}


def test_rank_failure_exits_two(capsys):
    code, out, err = run(["--structure", "para_c_product", "--param", "a=0"], capsys)
    assert code == 2
    assert out == ""
    assert "rank" in err


def test_unknown_key_names_the_nearest(capsys):
    code, _, err = run(["--structure", "para_sasakain_r3"], capsys)
    assert code == 2
    assert "para_sasakian_r3" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["--structure", "para_c_product", "--checks", "axioms,bogus"],
        ["--structure", "para_c_product", "--tol", "A3=-1"],
        ["--structure", "para_c_product", "--tol", "A3=abc"],
        ["--structure", "para_c_product", "--tol", "nope=1e-3"],
        ["--structure", "para_c_product", "--samples", "0"],
        ["--structure", "para_c_product", "--param", "a"],
        ["--structure", "para_c_product", "--bundle", "x.bundle"],
        ["--structure", "para_c_product", "--derivatives", "symbolic"],
        [],
    ],
)
def test_configuration_errors_exit_two(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 2
    assert out == ""


def test_tolerance_override_can_fail_a_passing_check(capsys):
    base = ["--structure", "nonnormal_apc3", "--checks", "classify", "--samples", "5"]
    _, out, _ = run(base, capsys)
    assert json.loads(out)["classification"]["predicates"]["normal"]["passed"] is False
    _, out, _ = run(base + ["--tol", "normal=1e3"], capsys)
    assert json.loads(out)["classification"]["predicates"]["normal"]["passed"] is True


def test_json_is_byte_identical_across_runs(capsys):
    argv = ["--structure", "weak_almost_para_s3", "--samples", "15", "--seed", "7"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b
    rows = json.loads(a)["results"]
    keys = [(r["suite"], r["check"], r["sample"]) for r in rows]
    assert keys == sorted(keys)


def test_markdown_report(capsys, tmp_path):
    out_path = tmp_path / "report.md"
    code, out, _ = run(PRODUCT + ["--format", "markdown", "--samples", "10", "--out", str(out_path)], capsys)
    assert code == 0 and out == ""
    text = out_path.read_text()
    assert text.startswith("# Structure report: para_c_product")
    for heading in ("## Axioms", "## Tensor identities", "### Nijenhuis torsion", "## Classification",
                    "## Theorem reports", "## Summary"):
        assert heading in text
    assert "class: **weak_para_C**" in text


def test_bundle_file_input(capsys, tmp_path):
    path = tmp_path / "s.bundle"
    path.write_text(to_bundle_text(catalog.make_para_sasakian_r3()))
    code, out, _ = run(["--bundle", str(path), "--checks", "classify", "--samples", "8"], capsys)
    assert code == 0
    assert json.loads(out)["classification"]["class"] == "para_S"


def test_malformed_bundle_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.bundle"
    text = to_bundle_text(catalog.make_para_sasakian_r3()).replace("[f]\n", "[f]\n(1 + , 0, 0\n", 1)
    path.write_text(text)
    code, _, err = run(["--bundle", str(path)], capsys)
    assert code == 2
    assert "line" in err and "column" in err


def test_missing_bundle_file(capsys, tmp_path):
    code, _, err = run(["--bundle", str(tmp_path / "absent.bundle")], capsys)
    assert code == 2


@pytest.mark.parametrize("strategy", ["dual", "fd"])
def test_derivative_strategies_agree_on_the_class(capsys, strategy):
    code, out, _ = run(["--structure", "para_sasakian_r3", "--checks", "classify", "--samples", "10",
                        "--derivatives", strategy], capsys)
    assert code == 0
    assert json.loads(out)["classification"]["class"] == "para_S"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "paraf", "--structure", "para_c_product", "--checks", "axioms",
                           "--samples", "3"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["fail"] == 0
