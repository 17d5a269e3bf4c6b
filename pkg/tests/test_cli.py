import json

import pytest

from tangentkit.cli import main
from tangentkit.report import SCHEMA_VERSION
from tangentkit.suites import SUITE_NAMES, run_suite


class TestVerify:
    def test_fast_suite_exits_zero(self, capsys):
        assert main(["verify", "quotients", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_json_schema(self, capsys):
        assert main(["verify", "quotients", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["schema_version"] == SCHEMA_VERSION
        assert payload["suite"] == "quotients"
        assert payload["seed"] == 0
        assert payload["passed"] is True
        for check in payload["checks"]:
            assert set(check) >= {"name", "anchor", "value", "tolerance",
                                  "passed", "wall_time"}

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        assert main(["verify", "quotients", "--format", "json",
                     "--output", str(path)]) == 0
        payload = json.loads(path.read_text())
        assert payload["passed"] is True
        assert capsys.readouterr().out == ""

    def test_unknown_suite_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "nonsense"])
        assert exc.value.code == 2


class TestBracket:
    def test_text_output(self, capsys):
        assert main(["bracket", "--group", "so3", "--samples", "10"]) == 0
        assert "structure_constants" in capsys.readouterr().out

    def test_json_includes_constants(self, capsys):
        assert main(["bracket", "--group", "heisenberg3",
                     "--samples", "5", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        c = payload["structure_constants"]
        assert c[0][1][2] == 1.0 and c[1][0][2] == -1.0

    def test_unknown_group_exits_2(self, capsys):
        assert main(["bracket", "--group", "e8"]) == 2
        assert "error:" in capsys.readouterr().err


class TestVanestAndPeriod:
    def test_vanest_abelian(self, capsys):
        assert main(["vanest", "--group", "rn:2",
                     "--omega", "symplectic", "--degree", "5"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_unknown_omega_exits_2(self):
        assert main(["vanest", "--group", "rn:2", "--omega", "volume"]) == 2

    def test_period_value(self, capsys):
        assert main(["period", "--group", "torus2", "--omega", "symplectic",
                     "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["period"][0] - 1.0) <= 1e-10


class TestCatalogAndEval:
    def test_catalog_lists_names(self, capsys):
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out
        for token in ("so3", "torus2", "symplectic", "Z2"):
            assert token in out

    def test_catalog_json(self, capsys):
        assert main(["catalog", "--format", "json"]) == 0
        listing = json.loads(capsys.readouterr().out)
        assert "groups" in listing and "su2" in listing["groups"]

    def test_eval_round_trip(self, capsys):
        assert main(["eval", "--program", "(lambda (x0 x1) (* x0 x1))",
                     "--inputs", "3,4", "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["outputs"] == [12.0]

    def test_eval_tangent_doubles_arity(self, capsys):
        assert main(["eval", "--program", "(lambda (x0) (pow x0 2))",
                     "--tangent", "1", "--inputs", "3,1",
                     "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["outputs"] == [9.0, 6.0]

    def test_eval_bad_program_exits_2(self):
        assert main(["eval", "--program", "(lambda (x0) (sinh x0))"]) == 2


class TestDeterminism:
    def test_suite_names_resolve(self):
        assert "all" in SUITE_NAMES

    @pytest.mark.parametrize("suite", ["quotients", "brackets"])
    def test_reports_byte_identical_modulo_time(self, suite):
        a = run_suite(suite, seed=11).to_json(include_time=False)
        b = run_suite(suite, seed=11).to_json(include_time=False)
        assert a == b
