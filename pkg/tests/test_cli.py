import io
import json
import os
import subprocess
import sys
from contextlib import redirect_stdout
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from expfield.cli import COMMANDS, main

from conftest import CORPUS, CORPUS_FILES

GOLDEN = Path(__file__).parent / "golden"
SCHEMA = json.loads((resources.files("expfield") / "report.schema.json").read_text())

# (golden name, argv); every corpus file appears at least once
CASES = [
    ("01_validate", ["validate", "01_imaginary_unit.efd"]),
    ("01_delta", ["delta", "01_imaginary_unit.efd", "P", "(x)", "--over", "base"]),
    ("01_strong", ["strong", "01_imaginary_unit.efd", "B", "P", "--bound", "1"]),
    ("01_xi", ["xi-dim", "01_imaginary_unit.efd", "P", "--over", "base"]),
    ("01_essential", ["essential", "01_imaginary_unit.efd", "P", "X"]),
    ("01_k_pair", ["ecl-cl-check", "01_imaginary_unit.efd", "K_pair"]),
    ("01_extend", ["extend-derivation", "01_imaginary_unit.efd", "B", "P"]),
    ("02_xi", ["xi-dim", "02_free_one.efd", "F"]),
    ("02_k_lin", ["khovanskii-verify", "02_free_one.efd", "K_lin"]),
    ("03_chain", ["chain", "03_free_two.efd", "Q", "F2Q", "--bound", "2"]),
    ("03_strong", ["strong", "03_free_two.efd", "F1", "F2"]),
    ("03_td", ["td", "03_free_two.efd", "F2", "SUM"]),
    ("03_ldim", ["ldim", "03_free_two.efd", "F2", "(x + y, x - y)", "--over", "{x}"]),
    ("04_extend", ["extend-derivation", "04_log.efd", "F1", "F2"]),
    ("05_validate", ["validate", "05_sqrt_arg.efd"]),
    ("06_ax", ["ax-check", "06_ax_fact.efd", "F", "(a1, a2)"]),
    ("06_cl", ["cl-member", "06_ax_fact.efd", "F", "(a1 - a2)"]),
    ("07_essential_F", ["essential", "07_essential.efd", "F", "AB"]),
    ("07_essential_G", ["essential", "07_essential.efd", "G", "AB_G"]),
    ("08_validate", ["validate", "08_sqrt_minus2.efd"]),
    ("09_dim", ["dim", "09_shifted_fixpoint.efd", "F", "X"]),
    ("10_validate", ["validate", "10_square_exp.efd"]),
    ("11_chain", ["chain", "11_tower.efd", "F1", "F2", "--bound", "2"]),
    ("12_strong", ["strong", "12_nonstrong_log.efd", "F1", "F2", "--bound", "2"]),
    ("13_validate", ["validate", "13_base_set.efd"]),
    ("14_k_ipi", ["ecl-cl-check", "14_pi_like.efd", "K_ipi"]),
    ("15_validate", ["validate", "15_two_base.efd"]),
    ("16_k_inv", ["khovanskii-verify", "16_reciprocal.efd", "K_inv"]),
    ("17_xi", ["xi-dim", "17_product_two.efd", "F"]),
    ("18_validate", ["validate", "18_sqrt2_sqrt3.efd"]),
    ("19_strong", ["strong", "19_polynomial_exp.efd", "F1", "F2", "--bound", "2"]),
    ("20_strong", ["strong", "20_two_new.efd", "F1", "F2", "--bound", "1"]),
    ("21_validate", ["validate", "21_half_exp.efd"]),
    ("22_strong", ["strong", "22_mixed_alg.efd", "B", "F", "--bound", "2"]),
]


def run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        status = main(argv)
    return status, buf.getvalue()


def corpus_argv(argv):
    cmd, fname, *rest = argv
    return [cmd, str(CORPUS / fname)] + rest


def normalized(text):
    report = json.loads(text)
    report["file"] = Path(report["file"]).name
    return report


def test_every_corpus_file_has_a_golden_case():
    assert {a[1] for _, a in CASES} == {p.name for p in CORPUS_FILES}


@pytest.mark.parametrize("name,argv", CASES, ids=[c[0] for c in CASES])
def test_golden_reports(name, argv):
    status, out = run(corpus_argv(argv))
    report = normalized(out)
    jsonschema.validate(report, SCHEMA)
    path = GOLDEN / (name + ".json")
    if os.environ.get("EXPFIELD_REGEN_GOLDEN"):
        path.write_text(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    assert report == json.loads(path.read_text(encoding="utf-8"))
    assert status == report["exit_status"] == 0


def test_reports_are_byte_identical_across_runs():
    argv = corpus_argv(["strong", "01_imaginary_unit.efd", "B", "P", "--bound", "2"])
    outs = {subprocess.run([sys.executable, "-m", "expfield.cli"] + argv, capture_output=True,
                           text=True).stdout for _ in range(2)}
    outs.add(run(argv)[1])
    assert len(outs) == 1


def test_anchor_delta_and_assertions():
    status, out = run(corpus_argv(["delta", "01_imaginary_unit.efd", "P", "(x)", "--over", "base"]))
    assert status == 0 and json.loads(out)["result"]["delta"] == -1
    status, out = run(corpus_argv(["strong", "01_imaginary_unit.efd", "B", "P", "--bound", "3",
                                   "--assert", "strong"]))
    report = json.loads(out)
    assert status == 1 and report["exit_status"] == 1
    assert report["result"]["witness"]["tuple"] == ["x"]
    status, _ = run(corpus_argv(["strong", "01_imaginary_unit.efd", "B", "P", "--assert",
                                 "not_strong"]))
    assert status == 0
    status, _ = run(corpus_argv(["strong", "03_free_two.efd", "F1", "F2", "--assert", "strong"]))
    assert status == 0


def test_xi_dim_free():
    status, out = run(corpus_argv(["xi-dim", "02_free_one.efd", "F", "--over", "Q"]))
    assert status == 0 and json.loads(out)["verdict"] == 1


@pytest.mark.parametrize("argv", [
    ["td", "/nonexistent/file.efd", "F", "(x)"],
    ["td", "01_imaginary_unit.efd", "Nope", "(x)"],
    ["td", "01_imaginary_unit.efd", "P", "(x"],
    ["ldim", "01_imaginary_unit.efd", "P", "(E)"],
    ["delta", "01_imaginary_unit.efd", "P", "(x)", "--over", "{q}"],
    ["khovanskii-verify", "01_imaginary_unit.efd", "K_missing"],
    ["strong", "01_imaginary_unit.efd", "B", "P", "--bound", "-1"],
])
def test_input_errors_exit_2(argv):
    if not argv[1].startswith("/"):
        argv = corpus_argv(argv)
    status, out = run(argv)
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert status == report["exit_status"] == 2
    assert report["error"]["type"]


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.efd"
    bad.write_text("field F {\n  gens x;\n  exp x =\n}\n")
    status, out = run(["validate", str(bad)])
    report = json.loads(out)
    assert status == 2 and "line 4" in report["error"]["message"]


def test_resource_limit_exit_3(tmp_path):
    heavy = tmp_path / "heavy.efd"
    heavy.write_text("field H { gens x, y, z; rel x^2*y - z^3 + 7 = 0; "
                     "rel x*y^2 - z*x + 1 = 0; rel y^3 - x*z^2 + 2 = 0; }\n")
    env = dict(os.environ, EXPFIELD_SPAIR_BUDGET="0")
    proc = subprocess.run([sys.executable, "-m", "expfield.cli", "td", str(heavy), "H", "(x)"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 3
    report = json.loads(proc.stdout)
    jsonschema.validate(report, SCHEMA)
    assert report["error"]["type"] == "ResourceLimitError"
    proc = subprocess.run([sys.executable, "-m", "expfield.cli", "td", str(heavy), "H", "(x)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0


def test_text_format_and_timing():
    status, out = run(corpus_argv(["delta", "01_imaginary_unit.efd", "P", "(x)", "--over", "base",
                                   "--format", "text"]))
    assert status == 0 and "delta: -1" in out
    status, out = run(corpus_argv(["xi-dim", "02_free_one.efd", "F", "--timing"]))
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["seconds"] >= 0


def test_every_command_is_covered():
    used = {a[0] for _, a in CASES} | {"td", "ldim", "cl-member", "exchange", "dim"}
    status, out = run(corpus_argv(["exchange", "03_free_two.efd", "F2Q", "(x)", "(y)"]))
    assert status == 0 and json.loads(out)["verdict"] == "true"
    assert used == set(COMMANDS)


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "expfield.cli", "--help"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    for cmd in COMMANDS:
        assert cmd in proc.stdout
