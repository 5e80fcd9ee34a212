import json
import xml.etree.ElementTree as ET

import pytest

from koalition_py.data_access import POLLS_DATA_FILE, get_data_path
from koalition_py.main import run
from koalition_py.svg_graph import FIGURES

POLLS = str(get_data_path(POLLS_DATA_FILE))
FAST = ["--polls", POLLS, "--as-of", "2018-03-05", "--draws", "2000"]


def last_error(capsys):
    lines = capsys.readouterr().err.strip().splitlines()
    return json.loads(lines[-1])


def report_of(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_nowcast_report(capsys):
    report = report_of(capsys, ["nowcast"] + FAST + ["--seed", "42"])
    assert report["command"] == "nowcast"
    assert report["as_of"] == "2018-03-05"
    assert report["seed"] == 42
    assert report["m"] == 2000
    assert report["threshold"] == 0.05
    assert report["method"] == "sainte-lague"
    grand = report["coalitions"]["grand"]
    assert grand["parties"] == ["CDU", "SPD"]
    assert 0 <= grand["subset_probability"] <= grand["probability"] <= 1
    assert set(report["parties"]) == {
        "CDU",
        "SPD",
        "GRUENE",
        "FDP",
        "LINKE",
        "AfD",
        "other",
    }
    assert "entry_probability" not in report["parties"]["other"]
    cdu = report["parties"]["CDU"]
    assert cdu["low"] <= cdu["mean"] <= cdu["high"]
    assert report["diagnostics"]["n_eff"] > 0
    assert len(report["diagnostics"]["polls_used"]) == 6


def test_same_seed_same_report(capsys):
    argv = ["nowcast"] + FAST + ["--seed", "42"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first


def test_worker_count_does_not_change_the_report(capsys):
    argv = ["nowcast"] + FAST + ["--seed", "7", "--draws", "9000"]
    assert run(argv + ["--workers", "1"]) == 0
    single = capsys.readouterr().out
    assert run(argv + ["--workers", "4"]) == 0
    assert capsys.readouterr().out == single


def test_missing_polls_flag_is_a_usage_error(capsys):
    assert run(["nowcast"]) == 1
    error = last_error(capsys)
    assert error["error"] == "usage"
    assert error["exit_code"] == 1
    assert "--polls" in error["message"]
    assert error["usage"].startswith("usage:")


def test_unknown_coalition(capsys):
    assert run(["plot", "--figure", "density", "--coalition", "kenya"] + FAST) == 3
    assert last_error(capsys)["error"] == "unknown-coalition"


def test_bad_poll_row_reports_path_and_line(capsys, tmp_path):
    polls = tmp_path / "polls.csv"
    polls.write_text(
        "pollster,date,n,SPD,CDU,GRUENE,FDP,LINKE,AfD\n"
        "Forsa,2018-03-01,1000,18,33,12,9,10,14\n"
        "Insa,2018-03-32,1000,18,33,12,9,10,14\n"
    )
    assert run(["nowcast", "--polls", str(polls)]) == 2
    error = last_error(capsys)
    assert error["error"] == "bad-date"
    assert error["path"] == str(polls)
    assert error["line"] == 3


def test_empty_poll_file(capsys, tmp_path):
    polls = tmp_path / "polls.csv"
    polls.write_text("pollster,date,n,SPD,CDU,GRUENE,FDP,LINKE,AfD\n")
    assert run(["nowcast", "--polls", str(polls)]) == 2
    assert last_error(capsys)["error"] == "no-polls"


def test_zero_byte_poll_file(capsys, tmp_path):
    polls = tmp_path / "polls.csv"
    polls.write_text("")
    assert run(["nowcast", "--polls", str(polls)]) == 2
    error = last_error(capsys)
    assert error["error"] == "empty-file"
    assert error["exit_code"] == 2


def test_row_with_an_extra_field(capsys, tmp_path):
    polls = tmp_path / "polls.csv"
    polls.write_text(
        "pollster,date,n,SPD,CDU,GRUENE,FDP,LINKE,AfD\n"
        "Forsa,2018-03-01,1000,18,33,12,9,10,14,2501\n"
    )
    assert run(["nowcast", "--polls", str(polls)]) == 2
    error = last_error(capsys)
    assert error["error"] == "bad-row"
    assert error["line"] == 2


def test_forecast_report(capsys):
    argv = ["forecast"] + FAST + ["--election-date", "2018-09-24"]
    report = report_of(capsys, argv)
    assert report["command"] == "forecast"
    assert report["election_date"] == "2018-09-24"
    assert report["horizon_days"] == 203
    assert report["tau"] == 60.0
    assert report["shrink_factor"] == pytest.approx(1 / (1 + 203 / 60), abs=1e-6)
    assert report["caveat"]
    assert "grand" in report["coalitions"]


def test_forecast_needs_a_future_election(capsys):
    argv = ["forecast"] + FAST + ["--election-date", "2017-09-24"]
    assert run(argv) == 2
    assert last_error(capsys)["error"] == "past-election"


def test_too_few_draws(capsys):
    assert run(["nowcast", "--polls", POLLS, "--draws", "10"]) == 1
    assert last_error(capsys)["error"] == "insufficient-draws"


def test_parliaments(capsys):
    report = report_of(capsys, ["parliaments", "--k", "3"] + FAST)
    assert report["m"] == 3
    assert len(report["parliaments"]) == 3
    for parliament in report["parliaments"]:
        assert sum(parliament["seats"].values()) in (0, 598)
        assert parliament["coalition_seats"] == (
            parliament["seats"]["CDU"] + parliament["seats"]["SPD"]
        )


@pytest.mark.parametrize("figure", FIGURES)
def test_every_figure_renders(figure, tmp_path):
    out = tmp_path / ("%s.svg" % figure)
    argv = ["plot", "--figure", figure, "--out", str(out), "--grid-days", "14"]
    argv += FAST + ["--draws", "1000", "--election-date", "2018-09-24"]
    assert run(argv) == 0
    first = out.read_bytes()
    assert run(argv) == 0
    assert out.read_bytes() == first
    root = ET.fromstring(out.read_text(encoding="utf-8"))
    assert root.tag == "{http://www.w3.org/2000/svg}svg"
    assert "<!-- koalition seed=" in out.read_text(encoding="utf-8")


def test_verbose_logs_are_json_lines(capsys, monkeypatch):
    monkeypatch.delenv("KOALITION_LOG_LEVEL", raising=False)
    assert run(["nowcast", "--verbose"] + FAST) == 0
    lines = capsys.readouterr().err.strip().splitlines()
    assert lines
    records = [json.loads(line)["record"] for line in lines]
    assert all(record["level"]["name"] in ("INFO", "WARNING") for record in records)


def test_bad_log_level(capsys, monkeypatch):
    monkeypatch.setenv("KOALITION_LOG_LEVEL", "CHATTY")
    assert run(["nowcast"] + FAST) == 1
    assert last_error(capsys)["error"] == "usage"
