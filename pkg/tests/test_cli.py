import io
import json
import math
import pathlib
import subprocess
import sys

import jsonschema
import numpy as np
import pytest
from referencing import Registry, Resource

from dirac_enclosures.cli import main, parse_complex, read_config
from dirac_enclosures.enclosures import lambda_pm

SCHEMAS = pathlib.Path(__file__).resolve().parents[1] / "docs" / "schemas"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.json"):
        schema = json.loads(path.read_text())
        resources.append((schema["$id"], Resource.from_contents(schema)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_parse_complex():
    assert parse_complex("0,3") == 3j
    assert parse_complex(" -1.5 , 2e-3") == complex(-1.5, 2e-3)
    with pytest.raises(Exception):
        parse_complex("3")


def test_eval_examples():
    code, text = run("eval", "--m", 1, "--lambda", "0,3", "--bound", "stein", "--p", "inf")
    assert code == 0
    doc = json.loads(text)
    validate(doc, "eval")
    assert doc["bound_value"] == pytest.approx(0.3162278, abs=1e-7)
    assert doc["dist"] == pytest.approx(math.sqrt(10))
    code, text = run("eval", "--m", 0, "--lambda", "0,1", "--bound", "young", "--q", "inf", "--Q", 2)
    doc = json.loads(text)
    validate(doc, "eval")
    assert doc["bound_value"] == pytest.approx(0.5257311, abs=1e-7)
    assert doc["k"]["re"] == pytest.approx((3 - math.sqrt(5)) / 2)
    assert doc["in_region_d"] is True and doc["member_given_Q"] is True


def test_eval_seventeen_digits():
    _, text = run("eval", "--m", 1, "--lambda", "0,3", "--bound", "stein", "--p", "inf")
    assert '"bound_value": 0.31622776601683794' in text


@pytest.mark.parametrize("bound, extra", [
    ("l1", []), ("stein", ["--p", 2]), ("young", ["--p", 3]),
    ("young-hs", ["--q", 2]), ("stein-improved", ["--p", "inf"]),
])
def test_eval_every_bound(bound, extra):
    code, text = run("eval", "--m", 0.5, "--lambda", "0.2,0.8", "--bound", bound, "--Q", 0.5, *extra)
    assert code == 0
    validate(json.loads(text), "eval")


def test_eval_l1_membership_on_spectrum_point_is_rejected(capsys):
    code, _ = run("eval", "--m", 1, "--lambda", "1.5,0", "--bound", "l1")
    assert code == 2
    err = capsys.readouterr().err
    assert "lambda lies in the essential spectrum" in err
    assert err.count("\n") == 1


@pytest.mark.parametrize("argv", [
    ["eval", "--m", "1", "--bound", "young", "--p", "2"],
    ["eval", "--m", "-1", "--lambda", "0,3", "--bound", "young", "--p", "2"],
    ["eval", "--m", "1", "--lambda", "0,3", "--bound", "young"],
    ["eval", "--m", "1", "--lambda", "0,3", "--bound", "young", "--p", "0.5"],
    ["eval", "--m", "1", "--lambda", "0,3", "--bound", "young", "--p", "2", "--q", "2"],
    ["eval", "--m", "1", "--lambda", "0,3", "--bound", "l1", "--p", "2"],
    ["eval", "--m", "1", "--lambda", "0,3", "--bound", "stein", "--p", "1"],
    ["classify", "--m", "1", "--Q", str(math.sqrt(1.25))],
    ["spectrum", "--m", "1", "--potential", "/nonexistent/file", "--N", "50"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv, out=io.StringIO()) == 2
    assert capsys.readouterr().err.strip()


def test_classify():
    code, text = run("classify", "--m", 1, "--Q", 1.0)
    lines = text.split()
    assert code == 0 and lines[0] == "two-loops"
    assert float(lines[1]) == pytest.approx(1.5 - math.sqrt(5) / 2, abs=1e-12)
    assert float(lines[2]) == pytest.approx(1.25, abs=1e-12)


def test_trace_l1_json(tmp_path):
    out = tmp_path / "c.json"
    code, text = run("trace", "--m", 1, "--Q", 0.5, "--bound", "l1", "--out", out)
    assert code == 0 and text.strip() == "4"
    doc = json.loads(out.read_text())
    validate(doc, "curveset")
    assert doc["component_count"] == 4 and len(doc["components"]) == 4
    assert all(c["closed"] for c in doc["components"])


def test_trace_young_flags_csv(tmp_path):
    out = tmp_path / "g.csv"
    code, _ = run("trace", "--m", 0.5, "--Q", 0.9, "--bound", "young", "--q", "inf",
                  "--flag-region-d", "--out", out, "--format", "csv")
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "component_id,x,y,flag"
    flags = np.array([int(r.split(",")[3]) for r in lines[1:]])
    assert flags.mean() >= 0.99


def test_trace_json_flags_validate(tmp_path):
    out = tmp_path / "g.json"
    run("trace", "--m", 0.5, "--Q", 0.75, "--bound", "young", "--q", "inf", "--flag-region-d",
        "--out", out, "--nx", 200, "--ny", 100)
    doc = json.loads(out.read_text())
    validate(doc, "curveset")
    assert len(doc["components"][0]["points"][0]) == 3


def test_trace_at_threshold_still_traces(tmp_path):
    code, text = run("trace", "--m", 1, "--Q", math.sqrt(1.25), "--bound", "l1",
                     "--out", tmp_path / "t.json", "--box", "-5,5,-5,5", "--nx", 200, "--ny", 200)
    assert code == 0 and int(text) >= 1


def test_trace_bad_grid(tmp_path, capsys):
    code, _ = run("trace", "--m", 1, "--Q", 0.5, "--bound", "l1", "--out", tmp_path / "t.json", "--nx", 4)
    assert code == 2
    code, _ = run("trace", "--m", 1, "--Q", 0.5, "--bound", "l1", "--out", tmp_path / "t.json",
                  "--box", "1,0,0,1")
    assert code == 2


def test_trace_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        run("trace", "--m", 0.5, "--Q", 0.8, "--bound", "stein-improved", "--p", 2, "--out", path,
            "--format", "csv", "--nx", 300, "--ny", 150)
    assert a.read_bytes() == b.read_bytes()


def test_trace_crossings_match_lambda_pm(tmp_path):
    out = tmp_path / "c.csv"
    run("trace", "--m", 1, "--Q", 0.5, "--bound", "l1", "--out", out, "--format", "csv")
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    lm, lp = lambda_pm(1.0, 0.5)
    near = rows[np.abs(rows[:, 2]) < 0.02]
    assert np.min(np.abs(near[:, 1] - lm)) < 1e-2
    assert np.min(np.abs(near[:, 1] - lp)) < 1e-2


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# evaluation\nm = 1\nlambda = 0,3\nbound = stein\np = inf  # literal\n")
    assert read_config(cfg)["p"] == "inf"
    code, text = run("eval", "--config", cfg)
    assert code == 0 and json.loads(text)["bound_value"] == pytest.approx(1 / math.sqrt(10))
    code, text = run("eval", "--config", cfg, "--m", 0)
    assert json.loads(text)["m"] == 0


def test_config_file_bad_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("m 1\n")
    assert run("classify", "--config", cfg, "--Q", 1)[0] == 2


def test_spectrum_csv(tmp_path):
    pot = tmp_path / "v.txt"
    pot.write_text("# two sites\n0 -2 0 0 0 0 0 -2 0\n3 0 0.5 0 0 0 0 0 0.5\n")
    code, text = run("spectrum", "--m", 1, "--potential", pot, "--N", 60)
    assert code == 0
    rows = text.splitlines()
    assert rows[0] == "re,im,genuine" and len(rows) == 1 + 4 * 60 + 2
    genuine = [r for r in rows[1:] if r.endswith(",1")]
    assert genuine


def test_probe():
    code, text = run("probe", "--m", 1, "--lambda", "0,3", "--N", 300, "--jmax", 10)
    assert code == 0 and json.loads(text)["max_deviation"] <= 1e-8


def test_verify_containment_small():
    code, text = run("verify", "--suite", "containment", "--m", 1, "--p", 1, "--Q", 0.5,
                     "--trials", 2, "--N", 200, "--seed", 7)
    assert code == 0
    doc = json.loads(text)
    validate(doc, "containment")
    assert doc["violations"] == 0


def test_verify_containment_infinite_p_schema():
    code, text = run("verify", "--suite", "containment", "--kind", "stein", "--m", 1, "--p", "inf",
                     "--Q", 0.5, "--trials", 1, "--N", 200, "--seed", 1)
    assert code == 0
    doc = json.loads(text)
    validate(doc, "containment")
    assert doc["p"] == "inf"


def test_verify_optimality_and_bs():
    code, text = run("verify", "--suite", "optimality", "--m", 0.5, "--Q", 0.9, "--count", 2,
                     "--N", 200, "--seed", 0)
    assert code == 0
    validate(json.loads(text), "optimality")
    code, text = run("verify", "--suite", "bs", "--trials", 2, "--N", 200, "--seed", 1)
    assert code == 0
    validate(json.loads(text), "bs")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dirac_enclosures", "classify", "--m", "1", "--Q", "0.5"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.startswith("four-loops")
    res = subprocess.run([sys.executable, "-m", "dirac_enclosures", "bogus"], capture_output=True, text=True)
    assert res.returncode == 2


def test_negative_pairs_are_values():
    _, a = run("eval", "--m", 0.5, "--lambda", "0.2,0.8", "--bound", "young", "--p", 2)
    _, b = run("eval", "--m", 0.5, "--lambda", "-0.2,-0.8", "--bound", "young", "--p", 2)
    assert json.loads(a)["bound_value"] == pytest.approx(json.loads(b)["bound_value"], rel=1e-13)


def test_numerical_failure_exit_3(tmp_path, monkeypatch, capsys):
    from dirac_enclosures import cli
    from dirac_enclosures.errors import NonFinite

    def boom(*args, **kwargs):
        raise NonFinite("level function is not finite on the unmasked grid")

    monkeypatch.setattr(cli, "trace_level_set", boom)
    code, _ = run("trace", "--m", 1, "--Q", 0.5, "--bound", "l1", "--out", tmp_path / "t.json")
    assert code == 3
    assert "not finite" in capsys.readouterr().err


def test_verification_failure_exit_1(monkeypatch):
    from dirac_enclosures import cli
    from dirac_enclosures.verify import ContainmentReport

    def fake(m, p, Q, kind, trials, N, seed):
        return ContainmentReport(kind.value, m, p, Q, N, seed, violations=1, tested=1)

    monkeypatch.setattr(cli.verify, "run_containment", fake)
    code, text = run("verify", "--suite", "containment", "--m", 1, "--p", 1, "--Q", 0.5, "--seed", 7)
    assert code == 1 and json.loads(text)["violations"] == 1
