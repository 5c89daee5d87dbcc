import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from genuslab.cli import emit, load_report, main, parse_input
from genuslab.errors import ParseError
from genuslab.series import PuiseuxQSeries

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")


def fx(name):
    return os.path.join(FIXTURES, name)


def call(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestExitCodes:
    def test_ahat(self, capsys):
        code, out, _ = call(capsys, "ahat", fx("k3.toml"), "--format", "json")
        assert code == 0 and json.loads(out)["ahat"] == "2"

    def test_two_pole_vanishes(self, capsys):
        code, out, _ = call(capsys, "localize", fx("two_pole.toml"), "--expect-vanish", "--order", 11)
        assert code == 0
        assert "vanishes: yes" in out

    def test_non_vanishing(self, capsys):
        code, out, _ = call(capsys, "localize", fx("point_weight2.toml"), "--expect-vanish", "--format", "json")
        assert code == 1
        assert json.loads(out)["vanishes"] is False
        assert call(capsys, "localize", fx("point_weight2.toml"))[0] == 0

    def test_odd_weight(self, capsys):
        code, out, err = call(capsys, "localize", fx("odd_weight.toml"))
        assert code == 2 and out == ""
        assert "OddWeightSum" in err

    def test_witten_k3(self, capsys):
        code, out, _ = call(capsys, "witten", fx("k3.toml"), "--format", "json", "--order", 6)
        rep = load_report(out)
        assert code == 0
        assert rep["phi"] == PuiseuxQSeries([2, -48, -144, -192, -336, -288])
        assert rep["integral"] is True
        assert rep["zagier"] is None

    def test_witten_checks(self, capsys):
        assert call(capsys, "witten", fx("dim8_a.toml"), "--check", "zagier", "--check", "modular")[0] == 0
        assert call(capsys, "witten", fx("nonspin.toml"), "--check", "integral")[0] == 1
        code, out, _ = call(capsys, "witten", fx("k3.toml"), "--check", "zagier")
        assert code == 2 and out == ""

    def test_ramond(self, capsys):
        code, out, _ = call(capsys, "ramond", fx("k3.toml"), "--format", "json", "--order", 3)
        rep = load_report(out)
        assert code == 0 and rep["eta_identity"] is True
        assert rep["ramond"] == PuiseuxQSeries([2, -40, -308], Fraction(-1, 6))

    def test_modular(self, capsys):
        code, out, _ = call(capsys, "modular-check", fx("dim8_b.toml"), "--format", "json")
        assert code == 0 and json.loads(out)["fit"]["coordinates"] == {"E4": "-4"}

    def test_fock_check(self, capsys):
        code, out, _ = call(capsys, "fock-check", "--modes", "1:1", "--cutoff", 4, "--format", "json")
        rep = json.loads(out)
        assert code == 0
        verdicts = [v for spec in rep.values() for v in spec.values()]
        assert verdicts and all(v["pass"] for v in verdicts)

    def test_fock_check_fixture(self, capsys):
        code, out, _ = call(capsys, "fock-check", fx("fock_pair.toml"), "--cutoff", 3)
        assert code == 0 and "pass: yes" in out

    def test_usage_errors(self, capsys):
        assert call(capsys, "nonsense")[0] == 2
        code, out, _ = call(capsys, "ahat", fx("missing.toml"))
        assert code == 2 and out == ""
        assert call(capsys, "ahat", fx("k3.toml"), "--order", 0)[0] == 2
        assert call(capsys, "ahat")[0] == 2
        assert call(capsys, "ahat", fx("two_pole.toml"))[0] == 2


class TestParsing:
    def test_parse_error_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.toml"
        bad.write_text("[manifold]\ndim = 4\nroots = [\n")
        with pytest.raises(ParseError) as info:
            parse_input(bad)
        assert info.value.line is not None and info.value.line >= 3
        code, out, err = call(capsys, "ahat", bad)
        assert code == 2 and out == "" and "ParseError" in err

    def test_missing_pairing(self, tmp_path, capsys):
        f = tmp_path / "m.toml"
        f.write_text("[manifold]\ndim = 8\n[manifold.pairings]\np2 = 1\n")
        code, _, err = call(capsys, "ahat", f)
        assert code == 2 and "MissingPairing" in err

    def test_p1_zero_fills_pairings(self, tmp_path):
        f = tmp_path / "m.toml"
        f.write_text("[manifold]\ndim = 8\np1_zero = true\n[manifold.pairings]\np2 = -1440\n")
        M = parse_input(f)
        assert M.p1_zero and M.dim == 8


class TestEmit:
    def test_round_trip(self):
        rep = {
            "phi": PuiseuxQSeries([2, Fraction(-1, 3), 0], Fraction(1, 2)),
            "n": 3,
            "flag": True,
            "none": None,
            "nested": {"x": [PuiseuxQSeries([1])]},
        }
        back = load_report(emit(rep, "json"))
        assert back["phi"] == rep["phi"]
        assert back["nested"]["x"][0] == PuiseuxQSeries([1])
        assert back["flag"] is True and back["none"] is None and back["n"] == 3

    def test_zero_series(self):
        assert emit(PuiseuxQSeries([0, 0, 0])) == "0\n"

    def test_text_values(self):
        out = emit({"flag": False, "none": None, "xs": [1, 2]})
        assert out.splitlines() == ["flag: no", "none: -", "xs: [1, 2]"]
        assert all(line == line.rstrip() for line in out.splitlines())

    def test_deterministic_bytes(self):
        args = [sys.executable, "-m", "genuslab.cli", "witten", fx("dim8_a.toml"), "--order", "5"]
        a = subprocess.run(args, capture_output=True, check=True).stdout
        b = subprocess.run(args, capture_output=True, check=True).stdout
        assert a == b and a
