import json
from fractions import Fraction

import pytest

from qmforms.cli import FormSpecError, main, parse_form_spec
from qmforms.forms import G1, G2, G3
from qmforms.qseries import eisenstein


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestFormSpec:
    def test_examples(self):
        assert parse_form_spec("g2") == G2
        assert parse_form_spec("3/4*g1^2*g2 - g3") == Fraction(3, 4) * G1 * G1 * G2 - G3
        assert parse_form_spec(" g1 ^ 2 ") == G1 * G1
        assert parse_form_spec("-g3 + 2*g3") == G3
        assert parse_form_spec("(g1 + g1)^2") == 4 * G1 * G1

    def test_rationals(self):
        assert parse_form_spec("5") == 5 * parse_form_spec("1")
        assert parse_form_spec("2/3*g2") == Fraction(2, 3) * G2

    def test_errors(self):
        for bad in ("g4", "g1 +", "^2", "3//4*g1", "(g1"):
            with pytest.raises(FormSpecError):
                parse_form_spec(bad)

    def test_inhomogeneous_rejected(self):
        with pytest.raises(ValueError):
            parse_form_spec("g1 + g2")


class TestExpandCommand:
    def test_example(self, capsys):
        code, rep = run(capsys, ["expand", "--weight", "4", "--terms", "g2", "--order", "2"])
        assert code == 0
        assert rep["outputs"]["series"] == ["12/1", "2880/1", "25920/1"]

    def test_constant(self, capsys):
        code, rep = run(capsys, ["expand", "--weight", "0", "--terms", "1", "--order", "3"])
        assert code == 0
        assert rep["outputs"]["series"] == ["1/1", "0/1", "0/1", "0/1"]

    def test_odd_weight_exit_3(self, capsys):
        code, _ = run(capsys, ["expand", "--weight", "3", "--terms", "g1", "--order", "2"])
        assert code == 3

    def test_weight_mismatch_exit_3(self, capsys):
        code, _ = run(capsys, ["expand", "--weight", "6", "--terms", "g2", "--order", "2"])
        assert code == 3

    def test_parse_error_exit_2(self, capsys):
        code, _ = run(capsys, ["expand", "--weight", "4", "--terms", "g2 @@", "--order", "2"])
        assert code == 2


class TestDecomposeCommand:
    def test_round_trip(self, capsys, tmp_path):
        path = tmp_path / "series.json"
        path.write_text((12 * G1.expand(12).theta()).to_json())
        code, rep = run(
            capsys, ["decompose", "--weight", "4", "--depth", "2", "--series", str(path)]
        )
        assert code == 0
        terms = {(t["a"], t["b"], t["c"]): t["coeff"] for t in rep["outputs"]["form"]["terms"]}
        assert terms == {(2, 0, 0): "1/1", (0, 1, 0): "-1/12"}

    def test_no_solution_exit_4(self, capsys, tmp_path):
        path = tmp_path / "e1.json"
        path.write_text(eisenstein(1, 10).to_json())
        code, rep = run(
            capsys, ["decompose", "--weight", "2", "--depth", "0", "--series", str(path)]
        )
        assert code == 4
        assert rep["outputs"]["kind"] == "NoSolution"

    def test_insufficient_order_exit_5(self, capsys, tmp_path):
        path = tmp_path / "short.json"
        path.write_text(G2.expand(3).to_json())
        code, rep = run(
            capsys, ["decompose", "--weight", "4", "--depth", "2", "--series", str(path)]
        )
        assert code == 5

    def test_bad_file_exit_2(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _ = run(capsys, ["decompose", "--weight", "4", "--depth", "0", "--series", str(path)])
        assert code == 2


class TestVerifyCommand:
    def test_flatness_suite(self, capsys):
        code, rep = run(capsys, ["verify", "flatness"])
        assert code == 0
        assert all(c["pass"] for c in rep["checks"])
        assert rep["seed"] == 0
        assert rep["elapsed_ms"] >= 0

    def test_detB_suite(self, capsys):
        code, rep = run(capsys, ["verify", "detB"])
        assert code == 0

    def test_seed_echoed_and_deterministic(self, capsys):
        code1, rep1 = run(capsys, ["verify", "hecke", "--seed", "5"])
        code2, rep2 = run(capsys, ["verify", "hecke", "--seed", "5"])
        assert code1 == code2 == 0
        assert rep1["seed"] == 5
        assert rep1["checks"] == rep2["checks"]

    def test_unknown_suite_rejected(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["verify", "nonsense"])
        assert err.value.code == 2
