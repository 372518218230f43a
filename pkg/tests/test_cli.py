import pytest

from comonoid.cli import EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, UsageError, parse_point, run
from comonoid.core import Crossword
from comonoid.crossword import validate
from comonoid.structure_file import load


@pytest.fixture
def down_up_file(tmp_path):
    path = tmp_path / "down_up3.chu2"
    assert run(["gen", "down-up", "3", "-o", str(path)]) == EXIT_OK
    return path


def test_gen_to_stdout(capsys):
    assert run(["gen", "power-set", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "chu2-family v1\nsize 2\n00\n10\n01\n11\n"


def test_gen_unknown_and_bad_params(capsys):
    assert run(["gen", "nope", "3"]) == EXIT_USAGE
    assert run(["gen", "power-set"]) == EXIT_USAGE
    assert run(["gen", "grid", "2", "x"]) == EXIT_USAGE


@pytest.mark.parametrize(
    "argv, size",
    [
        (["gen", "chain-down", "3"], 3),
        (["gen", "omega-infty", "3"], 4),
        (["gen", "coordinates", "2", "--complements"], 4),
        (["gen", "antichain", "0,1", "1,2", "0,2"], 3),
        (["gen", "grid", "2", "2"], 4),
        (["gen", "trivial", "5"], 5),
    ],
)
def test_gen_constructions(tmp_path, argv, size):
    path = tmp_path / "family.chu2"
    assert run(argv + ["-o", str(path)]) == EXIT_OK
    assert load(path).ground.size == size


def test_check_counterexample(down_up_file, capsys):
    capsys.readouterr()
    assert run(["--machine", "check", str(down_up_file)]) == EXIT_NEGATIVE
    assert capsys.readouterr().out == "000\n110\n110\n"


def test_check_report(down_up_file, capsys):
    capsys.readouterr()
    assert run(["check", str(down_up_file)]) == EXIT_NEGATIVE
    out = capsys.readouterr().out
    assert "010" in out
    assert "❌" in out


def test_check_ok_in_spanish(tmp_path, capsys):
    path = tmp_path / "power.chu2"
    run(["gen", "power-set", "3", "-o", str(path)])
    capsys.readouterr()
    assert run(["--lang", "es", "check", str(path)]) == EXIT_OK
    assert "Comonoide" in capsys.readouterr().out


def test_check_missing_constant(tmp_path, capsys):
    path = tmp_path / "w.chu2"
    path.write_text("chu2-family v1\nsize 2\n10\n11\n", encoding="utf-8")
    assert run(["--machine", "check", str(path)]) == EXIT_NEGATIVE
    assert capsys.readouterr().out == "00\n"


def test_check_budget(down_up_file):
    assert run(["--budget", "1", "check", str(down_up_file)]) == EXIT_BUDGET


def test_close(down_up_file, tmp_path, capsys):
    out_path = tmp_path / "closed.chu2"
    assert run(["close", str(down_up_file), "-o", str(out_path)]) == EXIT_OK
    assert len(load(out_path)) == 8
    assert "meet" in capsys.readouterr().out


def test_close_budget(tmp_path):
    path = tmp_path / "trivial.chu2"
    run(["gen", "trivial", "2", "-o", str(path)])
    assert run(["--budget", "1", "close", str(path)]) == EXIT_BUDGET


def test_solve(down_up_file, capsys):
    capsys.readouterr()
    assert run(["--machine", "solve", str(down_up_file), "010"]) == EXIT_OK
    assert capsys.readouterr().out == "000\n110\n110\n"


def test_solve_unsat(tmp_path, capsys):
    path = tmp_path / "trivial.chu2"
    run(["gen", "trivial", "2", "-o", str(path)])
    capsys.readouterr()
    assert run(["solve", str(path), "10"]) == EXIT_NEGATIVE
    assert "UNSAT (exhaustive)" in capsys.readouterr().out


def test_solve_budget(tmp_path):
    path = tmp_path / "power.chu2"
    run(["gen", "power-set", "3", "-o", str(path)])
    assert run(["--budget", "2", "solve", str(path), "101"]) == EXIT_BUDGET


def test_solve_bad_target(down_up_file):
    assert run(["solve", str(down_up_file), "01"]) == EXIT_USAGE


def test_classify_machine(tmp_path, capsys):
    path = tmp_path / "omega.chu2"
    run(["gen", "omega-infty", "3", "-o", str(path)])
    capsys.readouterr()
    assert run(["--machine", "classify", str(path)]) == EXIT_OK
    assert capsys.readouterr().out == "0 0 0\n"


def test_analyze(tmp_path, capsys):
    path = tmp_path / "power.chu2"
    run(["gen", "power-set", "3", "-o", str(path)])
    capsys.readouterr()
    assert run(["analyze", str(path), "--element", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "3" in out
    assert run(["analyze", str(path), "--dual"]) == EXIT_OK
    assert run(["analyze", str(path), "--element", "7"]) == EXIT_USAGE


def test_chains(capsys):
    assert run(["chains", "union", "--grid", "3", "3"]) == EXIT_OK
    assert run(["chains", "continuum", "--grid", "4", "4"]) == EXIT_OK
    assert run(["chains", "crossword", "--grid", "3", "3"]) == EXIT_OK
    assert run(["chains", "union"]) == EXIT_USAGE


def test_chains_hypothesis(capsys):
    argv = ["--machine", "chains", "continuum", "--size", "2", "--xs", "11", "10", "00", "--ys", "00", "10", "11"]
    assert run(argv) == EXIT_NEGATIVE
    assert capsys.readouterr().out == "1 1\n"


def test_sunflower(capsys):
    assert run(["sunflower", "a,b", "a,c", "d,e"]) == EXIT_OK
    assert run(["sunflower", "a,b", "a,c", "d,e", "--threshold", "3"]) == EXIT_NEGATIVE


def test_cx(capsys):
    assert run(["--machine", "cx", "eval", "--point", "0:0,1:0/10", "--n", "0", "--gamma", "0"]) == EXIT_OK
    assert capsys.readouterr().out == "1\n"
    assert run(["cx", "stratum", "--point", "0:0,1:3/10", "--beta", "3"]) == EXIT_NEGATIVE
    assert run(["cx", "separate", "--point", "0:0,1:0/10", "--other", "0:0,1:0/11"]) == EXIT_OK
    assert run(["cx", "eval", "--point", "0:0,1:0/10"]) == EXIT_USAGE


def test_parse_point():
    point = parse_point("0:1,2:3/01")
    assert point.aprime == ((0, 1), (2, 3))
    assert point.adoubleprime == (0, 1)
    with pytest.raises(UsageError):
        parse_point("0:1")
    with pytest.raises(UsageError):
        parse_point("0:1:2/0")


def test_freeness(tmp_path):
    path = tmp_path / "antichain.chu2"
    run(["gen", "antichain", "0,1", "1,2", "0,2", "-o", str(path)])
    assert run(["freeness", str(path)]) == EXIT_NEGATIVE
    coords = tmp_path / "coords.chu2"
    run(["gen", "coordinates", "3", "-o", str(coords)])
    assert run(["freeness", str(coords)]) == EXIT_OK
    assert run(["freeness", str(coords), "--blocks", "0,1", "2"]) == EXIT_OK


def test_usage_errors(capsys):
    assert run([]) == EXIT_USAGE
    assert run(["bogus"]) == EXIT_USAGE
    assert run(["--help"]) == EXIT_OK


def test_parse_and_file_errors(tmp_path, capsys):
    path = tmp_path / "bad.chu2"
    path.write_text("not a structure\n", encoding="utf-8")
    assert run(["check", str(path)]) == EXIT_USAGE
    assert "line 1" in capsys.readouterr().out
    assert run(["check", str(tmp_path / "missing.chu2")]) == EXIT_USAGE


def test_debug_prints_traceback(tmp_path, capsys):
    assert run(["--debug", "gen", "omega-infty", "0"]) == EXIT_USAGE
    captured = capsys.readouterr()
    assert "Traceback" in captured.err


def _emitted_crossword(capsys, family, argv):
    capsys.readouterr()
    code = run(argv)
    rows = capsys.readouterr().out.split()
    return code, Crossword.from_bitstrings(family.ground, rows)


def test_emitted_counterexample_revalidates(down_up_file, capsys):
    family = load(down_up_file)
    code, crossword = _emitted_crossword(capsys, family, ["--machine", "check", str(down_up_file)])
    assert code == EXIT_NEGATIVE
    report = validate(crossword, family)
    assert report.rows_ok and report.cols_ok
    assert not report.diag_in_w


def test_emitted_solution_revalidates(down_up_file, capsys):
    family = load(down_up_file)
    code, crossword = _emitted_crossword(capsys, family, ["--machine", "solve", str(down_up_file), "010"])
    assert code == EXIT_OK
    report = validate(crossword, family)
    assert report.is_crossword
    assert report.diagonal.to_bitstring() == "010"


@pytest.mark.parametrize("command", ["check", "close", "classify", "analyze"])
def test_output_is_deterministic(down_up_file, capsys, command):
    argv = [command, str(down_up_file)]
    capsys.readouterr()
    first_code = run(argv)
    first = capsys.readouterr().out
    assert run(argv) == first_code
    assert capsys.readouterr().out == first
    assert first
