from __future__ import annotations

import json

import pytest

from conflictlens import cli
from conflictlens.config import AnalysisLimits, RunConfig, load_config_or_exit, load_settings
from conflictlens.errors import ConfigurationError
from conflictlens.telemetry import configure_logging, log_fields
from conflictlens.utils.shutdown import SearchInterrupted, check_stop, request_stop, reset, stopping


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    monkeypatch.delenv("CONFLICTLENS_LOG", raising=False)
    monkeypatch.delenv("CONFLICTLENS_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
    yield
    reset()


def test_defaults_come_from_the_bundled_toml() -> None:
    config = load_settings()
    assert config.max_level == "C4"
    assert config.strategy_bound == 100000
    assert config.limits() == AnalysisLimits()


def test_precedence_flags_over_env_over_file(monkeypatch, tmp_path) -> None:
    path = tmp_path / "custom.toml"
    path.write_text('[analysis]\nmax_level = "C2"\n[solver]\nseed = 7\n[telemetry]\nlog_level = "INFO"\n')
    monkeypatch.setenv("CONFLICTLENS_CONFIG", str(path))
    config = load_settings()
    assert (config.max_level, config.seed, config.log_level) == ("C2", 7, "INFO")
    monkeypatch.setenv("CONFLICTLENS_LOG", "debug")
    assert load_settings().log_level == "debug"
    config = load_settings({"max_level": "C3", "seed": None})
    assert (config.max_level, config.seed) == ("C3", 7)


def test_invalid_settings_are_configuration_errors(monkeypatch, tmp_path) -> None:
    with pytest.raises(ConfigurationError):
        load_settings({"jobs": 0})
    with pytest.raises(ConfigurationError):
        load_settings({"colour": "blue"})
    broken = tmp_path / "broken.toml"
    broken.write_text("[analysis\n")
    monkeypatch.setenv("CONFLICTLENS_CONFIG", str(broken))
    with pytest.raises(ConfigurationError):
        load_settings()
    with pytest.raises(SystemExit) as info:
        load_config_or_exit()
    assert info.value.code == 3


def test_broken_config_file_stops_the_cli(monkeypatch, tmp_path, capsys) -> None:
    broken = tmp_path / "broken.toml"
    broken.write_text('[analysis]\nmax_level = "C7"\n')
    monkeypatch.setenv("CONFLICTLENS_CONFIG", str(broken))
    with pytest.raises(SystemExit) as info:
        cli.main(["analyze", "highway_ex3", "--output", "json"])
    assert info.value.code == cli.EXIT_ERROR
    captured = capsys.readouterr()
    assert "FATAL" in captured.err
    assert captured.out == ""
    assert cli.main(["schema"]) == 0


def test_run_config_is_frozen() -> None:
    config = RunConfig()
    with pytest.raises(Exception):
        config.seed = 3
    with pytest.raises(ValueError):
        AnalysisLimits(jobs=0)


def test_logging_setup() -> None:
    assert configure_logging("info") == "INFO"
    assert configure_logging("chatty") == "WARNING"
    assert configure_logging("") == "WARNING"
    assert log_fields("RUN_START", mode="resolve", seed=0) == "RUN_START | mode=resolve | seed=0"


def test_stop_requests_interrupt_searches() -> None:
    check_stop("idle")
    request_stop()
    assert stopping()
    with pytest.raises(SearchInterrupted):
        check_stop("search")
    reset()
    assert not stopping()


def test_schema_and_fixture_listing(capsys) -> None:
    assert cli.main(["schema"]) == 0
    schema = json.loads(capsys.readouterr().out)
    assert "verdict" in schema["properties"]
    assert cli.main(["fixtures"]) == 0
    assert capsys.readouterr().out.split() == [f"highway_ex{i}.cfl" for i in range(3, 8)]


def test_bad_input_exits_3(capsys) -> None:
    assert cli.main(["resolve", "no_such_scenario.cfl"]) == cli.EXIT_ERROR
    assert "FATAL" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        cli.main(["resolve", "highway_ex3", "--max-level", "C9"])
    assert info.value.code == cli.EXIT_ERROR
    with pytest.raises(SystemExit) as info:
        cli.main([])
    assert info.value.code == cli.EXIT_ERROR


def test_invalid_scenario_file_exits_3(tmp_path, capsys) -> None:
    path = tmp_path / "bad.cfl"
    path.write_text("VARS\n  x : 0..1 $\n")
    assert cli.main(["analyze", str(path)]) == cli.EXIT_ERROR
    assert "2:12" in capsys.readouterr().err


def test_solve_reports_models_and_cores(tmp_path, capsys) -> None:
    sat = tmp_path / "sat.cnf"
    sat.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    assert cli.main(["solve", str(sat)]) == cli.EXIT_SAT
    out = capsys.readouterr().out.splitlines()
    assert out == ["s SATISFIABLE", "v -1 2 0"]

    unsat = tmp_path / "unsat.cnf"
    unsat.write_text("p cnf 1 2\n1 0\n-1 0\n")
    assert cli.main(["solve", str(unsat)]) == cli.EXIT_UNSAT
    assert capsys.readouterr().out.splitlines()[0] == "s UNSATISFIABLE"

    assert cli.main(["solve", str(sat), "--assume", "1"]) == cli.EXIT_UNSAT
    assert capsys.readouterr().out.splitlines() == ["s UNSATISFIABLE", "c core 1"]
