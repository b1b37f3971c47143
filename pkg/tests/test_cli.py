"""Command-line interface: grid syntax, exit codes, config files and deterministic CSV."""
import csv
import io

import pytest

from axionqfi import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_parse_grid():
    assert cli.parse_grid("3") == [3.0]
    assert cli.parse_grid("0:10:40") == [0.0, 10.0, 20.0, 30.0, 40.0]
    assert cli.parse_grid("0.5:0.05:1") == pytest.approx([0.5 + 0.05 * i for i in range(11)])
    assert cli.parse_grid("1e-4:3:1e-2:log") == pytest.approx([1e-4, 1e-3, 1e-2])
    assert cli.parse_grid("2:1:1") == []
    assert cli.parse_grid("1:0:10:log") == []
    for bad in ("a", "1:2", "0:0:1", "0:3:1:log", "1:2:3:lin"):
        with pytest.raises(cli.UsageError):
            cli.parse_grid(bad)


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "advantage", "--source", "smss", "--receiver", "bell")[0] == cli.EXIT_USAGE
    assert run(capsys, "advantage", "--nt", "x")[0] == cli.EXIT_USAGE
    assert run(capsys, "advantage", "--fixed-t", "-1")[0] == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        cli.main(["advantage", "--source", "laser"])
    assert info.value.code == 2


def test_advantage_row(capsys):
    code, out, _ = run(capsys, "advantage", "--gamma-tau", "1e-3", "--g-db", "0:10:20")
    assert code == 0
    rows = table(out)
    assert [float(r["G_dB"]) for r in rows] == [0.0, 10.0, 20.0]
    assert float(rows[0]["advantage_dB"]) == pytest.approx(0.0, abs=1e-6)
    assert all(r["error"] == "" for r in rows)
    assert out.startswith("# axionqfi ")
    assert "# config_hash: " in out


def test_empty_grid_gives_header_only(capsys):
    code, out, _ = run(capsys, "advantage", "--g-db", "5:1:1")
    assert code == 0
    assert out.splitlines()[-1].startswith("source,receiver,")
    assert table(out) == []


def test_strict_exit_on_failed_point(capsys):
    code, out, err = run(capsys, "advantage", "--nt", "0", "--gamma-tau", "1e-3")
    assert code == 0 and "1 grid point(s) failed" in err
    assert "DivergenceError" in table(out)[0]["error"]
    assert run(capsys, "advantage", "--nt", "0", "--gamma-tau", "1e-3", "--strict")[0] == cli.EXIT_NUMERICAL


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\ngamma-tau = 1e-3\ng_db = 10\nreceiver = hom\n")
    code, out, _ = run(capsys, "advantage", "--config", str(cfg))
    rows = table(out)
    assert code == 0 and rows[0]["receiver"] == "hom" and float(rows[0]["G_dB"]) == 10.0
    rows = table(run(capsys, "advantage", "--config", str(cfg), "--g-db", "20")[1])
    assert float(rows[0]["G_dB"]) == 20.0
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert run(capsys, "advantage", "--config", str(bad))[0] == cli.EXIT_USAGE


def test_out_file_matches_stdout(tmp_path, capsys):
    args = ["scanrate", "--gamma-tau", "1e-4:2:1e-3:log"]
    stdout = run(capsys, *args)[1]
    path = tmp_path / "out.csv"
    assert run(capsys, *args, "--out", str(path))[0] == 0
    assert path.read_text() == stdout


def test_threads_do_not_change_output(capsys):
    args = ["advantage", "--gamma-tau", "1e-4:3:1e-2:log", "--g-db", "10"]
    one = run(capsys, *args)[1]
    two = run(capsys, *args, "--threads", "2")[1]
    assert one == two


def test_fisher_alpha_and_measurement(capsys):
    code, out, _ = run(capsys, "fisher-alpha", "--kappa", "0.9:0.1:1", "--n-max", "16")
    assert code == 0 and len(table(out)) == 2
    code, out, _ = run(capsys, "measurement", "--gamma-tau", "1e-3", "--g-db", "10", "--no-null")
    assert code == 0 and len(table(out)) >= 1


def test_selfcheck_fast(capsys):
    code, out, _ = run(capsys, "selfcheck", "--fast")
    assert code == 0
    assert "FAIL" not in out
