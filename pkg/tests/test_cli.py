import json
import logging

import pytest

from ustsat.analysis import Unipolarity, is_unipolar, skewness
from ustsat.cli import main
from ustsat.cnf import load_formula
from ustsat.database import open_store, sqlite_url
from ustsat.store import load_records


@pytest.fixture(autouse=True)
def restore_logging():
    # main() reconfigures the root logger onto the captured stderr
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def cnf(tmp_path):
    def write(text, name="input.cnf"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


class TestAnalyze:

    def test_example(self, example51_file, capsys):
        assert main(["analyze", str(example51_file)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("instance")
        assert out[1].startswith("example51.cnf")
        detail = out[2]
        for part in ("poslit=4", "neglit=5", "p=0.444", "rho={v2}", "|rho|=1", "hp=0.333",
                     "initially_unipolar=false", "unipolar_after_rho=true"):
            assert part in detail

    def test_json(self, example51_file, capsys):
        assert main(["analyze", "--json", str(example51_file)]) == 0
        record = json.loads(capsys.readouterr().out)
        assert (record["p"], record["rho_size"], record["hp"]) == (0.444, 1, 0.333)
        assert record["initially_unipolar"] is False
        assert record["unipolar_after_rho"] is True

    def test_write_inverted(self, example51_file, tmp_path):
        out = tmp_path / "inverted.cnf"
        assert main(["analyze", str(example51_file), "--write-inverted", str(out)]) == 0
        inverted = load_formula(out)
        assert inverted.clauses == ((1, -2, 3), (-1, 2, -3), (-1, -2, -3))
        assert is_unipolar(inverted) is Unipolarity.NO_POSITIVE
        assert skewness(inverted).rho == []

    def test_write_inverted_keeps_raw_occurrences(self, cnf, tmp_path, capsys):
        # v1 occurs three times unnegated, once through a repeated literal
        path = cnf("p cnf 2 3\n1 1 -2 0\n1 0\n-2 2 0\n")
        out = tmp_path / "inverted.cnf"
        assert main(["analyze", "--json", path, "--write-inverted", str(out)]) == 0
        original = json.loads(capsys.readouterr().out)
        assert (original["p"], original["rho_size"], original["hp"]) == (0.333, 1, 0.167)
        assert out.read_text().endswith("p cnf 2 3\n-1 -1 -2 0\n-1 0\n-2 2 0\n")

        assert main(["analyze", "--json", str(out)]) == 0
        again = json.loads(capsys.readouterr().out)
        assert again["p"] == original["hp"]
        assert again["rho_size"] == 0

    def test_write_inverted_normalized(self, cnf, tmp_path, capsys):
        path = cnf("p cnf 2 3\n-1 -1 0\n1 0\n-2 2 0\n")
        out = tmp_path / "inverted.cnf"
        assert main(["analyze", "--json", "--counting", "normalized", path, "--write-inverted", str(out)]) == 0
        original = json.loads(capsys.readouterr().out)
        assert main(["analyze", "--json", "--counting", "normalized", str(out)]) == 0
        assert json.loads(capsys.readouterr().out)["p"] == original["hp"] == 0.5
        assert load_formula(out).clauses == ((-1,), (1,))

    def test_write_inverted_needs_one_file(self, example51_file, tmp_path, capsys):
        code = main(["analyze", str(example51_file), str(example51_file), "--write-inverted", str(tmp_path / "x.cnf")])
        assert code == 1
        assert "single input file" in capsys.readouterr().err

    def test_summary_over_files(self, example51_file, cnf, capsys):
        other = cnf("p cnf 2 2\n-1 0\n-2 0\n", "negative.cnf")
        assert main(["analyze", str(example51_file), other]) == 0
        last = capsys.readouterr().out.splitlines()[-1]
        assert last == "files=2 p=0.000-0.444 hp=0.000-0.333 initially_unipolar=1"


class TestSolve:

    def test_ust(self, example51_file, capsys):
        assert main(["solve", str(example51_file)]) == 10
        assert capsys.readouterr().out.splitlines() == [
            "s SATISFIABLE",
            "c mode=ust n_u=1 n_a=- gain=- remainder_pct=33.3 conflicts=0 assignments=1 trail_length=1",
            "v -1 2 3 0",
        ]

    def test_measure_json(self, example51_file, capsys):
        assert main(["solve", "--mode", "measure", "--json", str(example51_file)]) == 10
        record = json.loads(capsys.readouterr().out)
        assert record["result"] == "SAT"
        assert (record["n_u"], record["n_a"], record["gain"]) == (1, 2, 2.0)
        assert record["model"] == [-1, 2, -3]

    def test_reveal(self, example51_file, capsys):
        assert main(["solve", "--reveal", str(example51_file)]) == 10
        out = capsys.readouterr().out
        assert "n_u=0" in out
        assert "v -1 2 -3 0" in out

    def test_initially_unipolar(self, cnf, capsys):
        path = cnf("p cnf 4 3\n-1 -2 0\n-3 4 0\n-4 0\n")
        assert main(["solve", "--mode", "ust", path]) == 10
        out = capsys.readouterr().out
        assert "n_u=0" in out
        assert "v -1 -2 -3 -4 0" in out

    def test_unsat(self, cnf, capsys):
        assert main(["solve", cnf("p cnf 1 2\n1 0\n-1 0\n")]) == 20
        out = capsys.readouterr().out
        assert out.startswith("s UNSATISFIABLE\n")
        assert "\nv " not in out

    def test_budget(self, cnf, capsys):
        assert main(["solve", "--budget", "1", cnf("p cnf 1 2\n1 0\n-1 0\n")]) == 30
        assert capsys.readouterr().out.startswith("s UNKNOWN\n")

    def test_malformed_input(self, cnf, capsys):
        assert main(["solve", cnf("p cnf 2 1\n1 x 0\n")]) == 1
        assert "error: line 2, offset 3" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["solve", str(tmp_path / "absent.cnf")]) == 1
        assert "absent.cnf" in capsys.readouterr().err

    def test_binary_input(self, tmp_path, capsys):
        path = tmp_path / "latin1.cnf"
        path.write_bytes(b"c caf\xe9\np cnf 1 1\n1 0\n")
        assert main(["solve", str(path)]) == 1
        err = capsys.readouterr().err
        assert "error: latin1.cnf: not valid UTF-8" in err
        assert "Traceback" not in err

    @pytest.mark.parametrize("argv", [
        ["solve"],
        ["solve", "x.cnf", "--mode", "fast"],
        ["bench", "--r", "2.0"],
        ["bench", "--table1", "--p", "0.1"],
        ["frobnicate"],
    ])
    def test_usage_errors(self, argv, capsys):
        assert main(argv) == 1
        assert capsys.readouterr().err.startswith("error:")


class TestGenerate:

    def test_writes_files(self, tmp_path, capsys):
        out = tmp_path / "gen"
        argv = ["generate", "--n", "10", "--r", "2.0", "--p", "0.2", "--seed", "5", "--count", "2", "--out", str(out)]
        assert main(argv) == 0
        printed = capsys.readouterr().out.split()
        assert [p.rsplit("/", 1)[-1] for p in printed] == ["k3_n10_m20_p0.2_s5.cnf", "k3_n10_m20_p0.2_s6.cnf"]
        assert load_formula(out / "k3_n10_m20_p0.2_s5.cnf").num_clauses == 20

    def test_invalid_parameters(self, tmp_path, capsys):
        argv = ["generate", "--n", "2", "--m", "4", "--p", "0.2", "--seed", "1", "--out", str(tmp_path)]
        assert main(argv) == 1
        assert "invalid generator parameters" in capsys.readouterr().err


class TestBench:

    ARGS = ["bench", "--p", "0.3", "--r", "2.0", "3.0", "--n", "20", "--count", "4", "--seed", "5", "--quiet"]

    def test_csv_and_audit_log(self, tmp_path, capsys):
        log_path = tmp_path / "audit.db"
        assert main(self.ARGS + ["--per-instance", str(log_path)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "p,r,mean_gain,mean_remainder_pct,sat,unsat,indet,init_unipolar,count,n,seed"
        assert [line.split(",")[:2] for line in lines[1:]] == [["0.3", "2"], ["0.3", "3"]]
        assert len(load_records(open_store(sqlite_url(log_path)), 1)) == 8

    def test_repeatable_across_workers(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(self.ARGS + ["--out", str(first)]) == 0
        assert main(self.ARGS + ["--out", str(second), "--workers", "2"]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_markdown(self, capsys):
        assert main(self.ARGS + ["--format", "markdown"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[2].startswith("| 0.3 | r | 2.00 | 3.00 |")

    def test_trail_steps(self, tmp_path, capsys):
        log_path = tmp_path / "audit.db"
        assert main(self.ARGS + ["--steps", "trail", "--extended", "--per-instance", str(log_path)]) == 0
        rows = [line.split(",") for line in capsys.readouterr().out.splitlines()[1:]]
        records = load_records(open_store(sqlite_url(log_path)), 1)
        for r_index, row in enumerate(rows):
            solved = [rec for rec in records if rec.r_index == r_index and rec.verdict.value == "SAT"]
            assert int(row[12]) == sum(rec.trail_u for rec in solved)
            assert int(row[13]) == sum(rec.trail_a for rec in solved)
