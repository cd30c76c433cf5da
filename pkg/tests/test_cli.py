import csv
import io
import json
import math

import pytest
from click.testing import CliRunner

from nmlgauss.cli import cli, main, read_sequence, to_json

RESULT_KEYS = {"attenuation", "log_attenuation", "method", "std_error", "regions"}


def run(args, input=None, env=None):
    result = CliRunner().invoke(cli, args, input=input, env=env)
    return result


def run_main(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


class TestAtten:
    def test_example2_golden(self):
        res = run(["atten", "--n", "2", "--alpha", "1"])
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert set(doc) == {"config", "result", "checks"}
        assert set(doc["result"]) == RESULT_KEYS
        assert doc["result"]["attenuation"] == pytest.approx(1.0 + 1.0 / math.sqrt(math.pi), rel=1e-15)
        assert doc["result"]["regions"].keys() == {"r1", "r2", "r3"}
        assert doc["checks"] is None

    def test_single_pdf_is_one(self):
        doc = json.loads(run(["atten", "--n", "1", "--alpha", "0"]).output)
        assert doc["result"]["attenuation"] == 1.0

    def test_seventeen_digits(self):
        out = run(["atten", "--n", "2", "--alpha", "1"]).output
        assert '"attenuation": 1.5641895835477562' in out

    def test_human(self):
        res = run(["atten", "--n", "2", "--alpha", "1", "--format", "human"])
        assert res.exit_code == 0
        assert "1.56419" in res.output

    def test_quadrature_checks(self):
        doc = json.loads(run(["atten", "--n", "1", "--alpha", "1", "--sigma-max", str(math.e),
                              "--method", "quadrature"]).output)
        assert doc["checks"][0]["passed"]
        assert doc["result"]["method"] == "quadrature"

    def test_mc_seeded(self):
        args = ["atten", "--n", "3", "--method", "mc", "--samples", "100000", "--seed", "7"]
        first = run(args)
        assert first.exit_code == 0
        doc = json.loads(first.output)
        assert doc["checks"][0]["passed"]
        assert doc["result"]["std_error"] > 0
        assert run(args).output == first.output
        assert run(args + ["--threads", "3"]).output.replace('"threads": 3', '"threads": 1') == first.output

    def test_seed_env(self):
        base = ["atten", "--n", "3", "--method", "mc", "--samples", "20000"]
        via_env = run(base, env={"NMLG_SEED": "5"}).output
        assert via_env == run(base + ["--seed", "5"]).output
        assert json.loads(via_env)["config"]["seed"] == 5

    def test_overflow_prints_inf(self):
        doc = json.loads(run(["atten", "--n", "10", "--alpha", "1e300", "--sigma-min", "1e-300"]).output)
        assert doc["result"]["attenuation"] == "inf"
        assert math.isfinite(doc["result"]["log_attenuation"])


class TestExitCodes:
    def test_success(self, capsys):
        code, out, _ = run_main(["atten", "--n", "1"], capsys)
        assert code == 0 and out

    @pytest.mark.parametrize("args", [
        ["atten", "--n", "2", "--sigma-min", "2", "--sigma-max", "1"],
        ["atten", "--n", "0"],
        ["atten", "--n", "2", "--alpha", "-1"],
        ["atten", "--n", "3", "--method", "quadrature"],
        ["atten", "--n", "3", "--method", "mc", "--samples", "10"],
        ["atten", "--n", "1", "--method", "mc"],
        ["bogus"],
    ])
    def test_invalid_parameters(self, args, capsys):
        code, out, err = run_main(args, capsys)
        assert code == 2
        assert out == ""
        assert err

    def test_failed_check_exits_3(self, capsys, monkeypatch):
        from nmlgauss import cli as cli_mod
        from nmlgauss.report import Check

        monkeypatch.setattr(cli_mod, "run_checks",
                            lambda *a, **k: [Check("forced", False, 1.0, 0.0, 1.0, 0.1)])
        code, out, err = run_main(["verify", "--only", "reductions"], capsys)
        assert code == 3
        assert json.loads(out)["checks"][0]["passed"] is False
        assert "failed" in err


class TestScan:
    def rows(self, args):
        res = run(["scan", *args])
        assert res.exit_code == 0
        return list(csv.DictReader(io.StringIO(res.output)))

    def test_header(self):
        res = run(["scan", "--n-max", "3"])
        assert res.output.splitlines()[0] == "n,exact,log_exact,approx,t1,t2,t3,I_n,exact_over_n,exact_over_sqrt_n"

    def test_singleton_column_of_ones(self):
        rows = self.rows(["--alpha", "0", "--n-min", "1", "--n-max", "64"])
        assert len(rows) == 64
        assert all(float(r["exact"]) == 1.0 for r in rows)

    def test_two_parameter_linear(self):
        rows = self.rows(["--alpha", "1", "--sigma-min", "0.5", "--sigma-max", "2", "--powers-of-two", "20"])
        tail = [float(r["exact_over_n"]) for r in rows[-3:]]
        assert max(tail) / min(tail) - 1.0 <= 0.02

    def test_mean_only_sqrt(self):
        rows = self.rows(["--alpha", "1", "--powers-of-two", "24"])
        assert float(rows[-1]["exact_over_sqrt_n"]) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-3)

    def test_n1_has_no_approx(self):
        assert self.rows(["--n-max", "2"])[0]["approx"] == ""


class TestSequenceCommands:
    DATA = "# comment line\n0.5\n\n-1.0  # trailing\n2.0\n"

    def test_read_sequence(self):
        assert read_sequence(io.StringIO(self.DATA)) == [0.5, -1.0, 2.0]

    @pytest.mark.parametrize("text", ["", "# only\n", "abc\n", "nan\n"])
    def test_read_sequence_rejects(self, text, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
        code, out, _ = run_main(["mle"], capsys)
        assert code == 2 and out == ""

    def test_mle_stdin(self):
        doc = json.loads(run(["mle", "--alpha", "1", "--sigma-min", "0.5", "--sigma-max", "2"],
                             input=self.DATA).output)
        r = doc["result"]
        assert r["n"] == 3
        assert r["mean"] == pytest.approx(0.5)
        assert r["mu_hat"] == 0.5
        assert r["sigma_hat_sq"] == pytest.approx(4.5 / 3.0)

    def test_mle_file(self, tmp_path):
        path = tmp_path / "x.txt"
        path.write_text(self.DATA, encoding="utf-8")
        assert json.loads(run(["mle", str(path)]).output)["result"]["n"] == 3

    def test_logq(self):
        doc = json.loads(run(["logq", "--alpha", "0"], input="0\n").output)
        r = doc["result"]
        assert r["log_q_star"] == pytest.approx(-0.5 * math.log(2.0 * math.pi), rel=1e-15)
        assert r["bits"] == pytest.approx(-r["log_q_star"] / math.log(2.0), rel=1e-15)
        assert r["log_attenuation"] == 0.0


class TestOtherCommands:
    def test_envelope_csv(self):
        res = run(["envelope", "--alpha", "1", "--x-min", "-1", "--x-max", "1", "--points", "3"])
        rows = list(csv.reader(io.StringIO(res.output)))
        assert rows[0] == ["x", "envelope", "log_envelope"]
        assert len(rows) == 4
        assert float(rows[2][1]) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-15)

    def test_envelope_bad_range(self, capsys):
        code, _, _ = run_main(["envelope", "--x-min", "1", "--x-max", "0"], capsys)
        assert code == 2

    def test_in_closed_form(self):
        doc = json.loads(run(["in", "--n", "2"]).output)
        assert doc["result"]["I_n"] == pytest.approx(math.erf(1.0), abs=1e-15)

    def test_in_mc(self):
        doc = json.loads(run(["in", "--n", "5", "--mc", "--samples", "100000", "--seed", "3"]).output)
        assert doc["checks"][0]["passed"]
        assert {"distance_to_1", "distance_to_half"} <= doc["result"].keys()

    def test_verify_atten1d(self):
        res = run(["verify", "--only", "atten1d"])
        assert res.exit_code == 0
        doc = json.loads(res.output)
        assert doc["result"]["total"] == doc["result"]["passed"] == 4
        assert all(c["name"].startswith("atten1d") for c in doc["checks"])

    def test_verify_human(self):
        res = run(["verify", "--only", "reductions", "--format", "human"])
        assert res.exit_code == 0
        assert "PASS" in res.output and "FAIL" not in res.output


def test_to_json_rejects_unknown():
    with pytest.raises(TypeError):
        to_json(object())


def test_to_json_special_values():
    assert to_json({"a": math.inf, "b": None, "c": [1, 2.5], "d": True}) == \
        '{"a": "inf", "b": null, "c": [1, 2.5], "d": true}'
