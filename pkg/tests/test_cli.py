import json
from fractions import Fraction
from pathlib import Path

import pytest

from nsdensity import cli
from nsdensity.constants import cache_load

CACHE_PATH = str(Path(__file__).resolve().parents[1] / "nsdensity.cache")


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEnumerate:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--f", "9")
        assert code == 0
        lines = out.rstrip("\n").split("\n")
        assert lines[0] == "f = 9: 21 semigroups, 256 numerical sets"
        assert lines[-1] == "sum P(S) = 256 = 2^8: ok"
        assert len(lines) == 21 + 4  # intro, header, rule, footer

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--f", "9", "--format", "csv")
        assert code == 0
        lines = out.rstrip("\n").split("\n")
        assert lines[0] == "d,m,r,p,mu,mu_decimal"
        assert len(lines) == 1 + 21 + 1
        assert lines[-1].startswith("TOTAL,")
        assert ",256," in lines[-1]

    def test_json(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--f", "9", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert doc["semigroups"] == 21
        assert doc["sum_p"] == 256 and doc["sum_identity_ok"] is True
        assert len(doc["rows"]) == 21
        top = doc["rows"][0]
        assert top["d"] == "∅" and top["p"] == "140"

    def test_smallest_f(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--f", "1", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["semigroups"] == 1 and doc["sum_p"] == 1


class TestGamma:
    def test_shipped_cache_value(self, capsys):
        code, out, _ = run(
            capsys, "gamma", "--d", "", "--depth", "15",
            "--cache", CACHE_PATH, "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["value_decimal"] == "0.48990"
        assert doc["interval_decimal"]["lo"] == "0.47654"
        assert doc["a_d"] == 1 and len(doc["terms"]) == 15
        assert doc["positivity_bound"] is None

    def test_small_depth_text(self, capsys):
        code, out, _ = run(capsys, "gamma", "--d", "1", "--depth", "2")
        assert code == 0
        assert "value     = 3/16" in out
        assert "positivity: gamma_D >= a_t/2^(t+1) = 7/384" in out

    def test_empty_d_text_mentions_no_bound(self, capsys):
        code, out, _ = run(capsys, "gamma", "--d", "", "--depth", "2")
        assert code == 0
        assert "no structural bound" in out

    def test_csv_row(self, capsys):
        code, out, _ = run(
            capsys, "gamma", "--d", "1,3", "--depth", "3", "--format", "csv"
        )
        assert code == 0
        lines = out.rstrip("\n").split("\n")
        assert len(lines) == 2
        assert lines[1].startswith('"1,3",3,3/64,')


class TestTable:
    def test_leading_rows(self, capsys):
        code, out, _ = run(
            capsys, "table", "--max-t", "4", "--depth", "15",
            "--cache", CACHE_PATH, "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert [r["d"] for r in doc["rows"][:5]] == ["∅", "1", "2", "3", "1,3"]
        assert len(doc["rows"]) == 16
        assert doc["distinct_pairs"] + doc["inconclusive_pairs"] == 16 * 15 // 2

    def test_text_footer(self, capsys):
        code, out, _ = run(
            capsys, "table", "--max-t", "2", "--depth", "6"
        )
        assert code == 0
        assert "distinctness:" in out


class TestAlpha:
    def test_n2_overlaps_reference_band(self, capsys):
        code, out, _ = run(
            capsys, "alpha", "--n", "2", "--depth", "15",
            "--cache", CACHE_PATH, "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        lo = Fraction(doc["interval"]["lo"])
        hi = Fraction(doc["interval"]["hi"])
        assert lo <= Fraction("0.08186") and Fraction("0.07338") <= hi
        assert [c["d"] for c in doc["components"]] == ["2", "1,2"]

    def test_text(self, capsys):
        code, out, _ = run(capsys, "alpha", "--n", "-1", "--depth", "3")
        assert code == 0
        assert "alpha_-1" in out and "components (1):" in out


class TestGLimit:
    def test_small(self, capsys):
        code, out, _ = run(
            capsys, "glimit", "--l", "1", "--depth", "3", "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["lo"] == "5/64" and doc["hi"] == "11/64"
        assert [c["c"] for c in doc["c_constants"]] == [1, 1, 1]

    def test_text(self, capsys):
        code, out, _ = run(capsys, "glimit", "--l", "1", "--depth", "4")
        assert code == 0
        assert "C_(1,k) for k <= 4: 1, 1, 1, 3" in out


class TestVerify:
    def test_oracle_suite_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "oracle")
        assert code == 0
        lines = out.rstrip("\n").split("\n")
        assert all(line.startswith("[PASS]") for line in lines[:-1])
        assert "0 failed" in lines[-1]

    def test_json_shape(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--suite", "oracle", "--format", "json"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_passed"] is True
        assert all(c["passed"] for c in doc["checks"])


class TestExitCodes:
    def test_unknown_suite(self, capsys):
        code, _, err = run(capsys, "verify", "--suite", "nope")
        assert code == 2 and "usage error" in err

    def test_enum_budget(self, capsys):
        code, _, err = run(capsys, "enumerate", "--f", "40")
        assert code == 2 and "budget error" in err

    def test_depth_budget(self, capsys):
        code, _, err = run(capsys, "gamma", "--d", "1", "--depth", "20")
        assert code == 2 and "budget error" in err

    def test_unsorted_d(self, capsys):
        code, _, err = run(capsys, "gamma", "--d", "3,1", "--depth", "5")
        assert code == 2 and "usage error" in err

    def test_alpha_n_zero(self, capsys):
        code, _, err = run(capsys, "alpha", "--n", "0", "--depth", "5")
        assert code == 2

    def test_alpha_n_above_depth(self, capsys):
        code, _, err = run(capsys, "alpha", "--n", "5", "--depth", "3")
        assert code == 2

    def test_corrupt_cache_is_inconsistency(self, capsys, tmp_path):
        bad = tmp_path / "bad.cache"
        bad.write_text("A|1|7\n", encoding="utf-8")  # truth is 1
        code, _, err = run(
            capsys, "gamma", "--d", "1", "--depth", "3", "--cache", str(bad)
        )
        assert code == 1 and "internal inconsistency" in err


class TestDeterminismAndCache:
    def test_workers_do_not_change_output(self, capsys):
        _, out1, _ = run(
            capsys, "gamma", "--d", "2", "--depth", "6", "--format", "csv",
            "--workers", "1",
        )
        _, out2, _ = run(
            capsys, "gamma", "--d", "2", "--depth", "6", "--format", "csv",
            "--workers", "2",
        )
        assert out1 == out2

    def test_missing_cache_falls_back_to_fresh(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("NSDENSITY_CACHE", raising=False)
        code, out, _ = run(capsys, "gamma", "--d", "1", "--depth", "4")
        assert code == 0
        assert not (tmp_path / "nsdensity.cache").exists()

    def test_write_cache_creates_file(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("NSDENSITY_CACHE", raising=False)
        code, _, _ = run(
            capsys, "gamma", "--d", "1", "--depth", "4", "--write-cache"
        )
        assert code == 0
        written = cache_load(tmp_path / "nsdensity.cache")
        assert written.a_depth() == 4
        assert written.provenance["a-depth"] == "4"

    def test_env_var_resolution(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)  # no ./nsdensity.cache here
        monkeypatch.setenv("NSDENSITY_CACHE", CACHE_PATH)
        code, out, _ = run(
            capsys, "gamma", "--d", "", "--depth", "15", "--format", "json"
        )
        assert code == 0
        assert json.loads(out)["value_decimal"] == "0.48990"
