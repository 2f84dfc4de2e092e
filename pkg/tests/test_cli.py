import json
import logging

import pytest

from drspace import cli
from drspace.report import CheckReport


def write(tmp_path, text, name="run.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_gets_defaults(tmp_path):
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: [thm-forward]\n"))
    assert cfg.checks == ("thm-forward",)
    assert cfg.t_grid == (1e-3, 1e-1, 32)
    assert cfg.profile["kind"] == "spectral_power"


def test_unknown_key_is_named(tmp_path):
    with pytest.raises(cli.ConfigError, match="alpha_jacobi"):
        cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nalpha_jacobi: 2\n"))
    with pytest.raises(cli.ConfigError, match="modulus.*'order'"):
        cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nmodulus: {order: 2}\n"))


def test_odd_m_surfaces_with_context(tmp_path):
    with pytest.raises(cli.ConfigError, match=r"run\.yaml: space: m must be even"):
        cli.load_config(write(tmp_path, "space: {m: 3, k: 1}\n"))


def test_parse_error_has_line_number(tmp_path):
    with pytest.raises(cli.ConfigError, match="line 3"):
        cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nseed: 1\n  bad: 2\nchecks: []\n"))


def test_unknown_check_and_missing_file(tmp_path):
    with pytest.raises(cli.ConfigError, match="thm-nope"):
        cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: [thm-nope]\n"))
    with pytest.raises(cli.ConfigError, match="does not exist"):
        cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nprofile: {kind: file, path: nope.txt}\n"))


def test_alias_and_order_alias(tmp_path):
    cfg = cli.load_config(write(tmp_path, "space: {m: 4, l: 3}\nchecks: [phi_bounds_audit, converse_titchmarsh]\n"))
    assert cfg.checks == ("lemma-phi-bounds", "thm-converse")
    assert (cfg.m, cfg.k) == (4, 3)
    with pytest.raises(cli.ConfigError, match="not both"):
        cli.load_config(write(tmp_path, "space: {m: 4, k: 3, l: 3}\n"))


def test_phi_bounds_exit_zero(tmp_path):
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: [phi_bounds_audit]\n"))
    assert cli.run_checks(cfg, tmp_path / "out") == 0
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["reports"]["lemma-phi-bounds"]["verdict"] == "pass"
    assert len((tmp_path / "out" / "lemma-phi-bounds.csv").read_text().splitlines()) == 101


def test_converse_with_t_squared_is_inconclusive(tmp_path):
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nmodulus: {kind: power, alpha: 2, k: 2}\nchecks: [converse_titchmarsh]\n"))
    assert cli.run_checks(cfg, tmp_path / "out") == 3


def test_failing_check_exit_two(tmp_path):
    # an absurdly tight spread tolerance makes the corollary check fail
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\ngrids: {t_grid: {n: 4}}\nchecks: [cor-lipcor]\ntolerances: {spread_max: 1.00001}\n"))
    assert cli.run_checks(cfg, tmp_path / "out") == 2


def test_empty_checks_warns(tmp_path, caplog):
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: []\n"))
    with caplog.at_level(logging.WARNING):
        assert cli.run_checks(cfg, tmp_path / "out") == 0
    assert "no checks" in caplog.text


def test_io_failure_exit_four(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: [converse-hypotheses]\n"))
    assert cli.run_checks(cfg, blocker / "out") == 4


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env_out"))
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: [converse-hypotheses]\n"))
    assert cli.run_checks(cfg) == 0
    assert (tmp_path / "env_out" / "converse-hypotheses.csv").exists()


def test_emit_plot_data_format(tmp_path):
    r = CheckReport("x", None, [0.5, 0.25], [1.0, 2.0], [4.0, 0.0], 0.25, 0.25, [], "fail")
    cli.emit_plot_data(r, tmp_path / "x.csv")
    text = (tmp_path / "x.csv").read_text()
    assert text == (
        "grid,lhs,rhs,ratio\n"
        "5.00000000000000000e-01,1.00000000000000000e+00,4.00000000000000000e+00,2.50000000000000000e-01\n"
        "2.50000000000000000e-01,2.00000000000000000e+00,0.00000000000000000e+00,inf\n"
    )
    cli.emit_plot_data(CheckReport("e", None, [], [], [], 0.0, 0.0), tmp_path / "e.csv")
    assert (tmp_path / "e.csv").read_text() == "grid,lhs,rhs,ratio\n"


def test_forward_report_has_32_rows_and_is_deterministic(tmp_path):
    cfg = cli.load_config(write(tmp_path, "space: {m: 2, k: 1}\nchecks: [thm-forward, lem-dyadic]\n"))
    assert cli.run_checks(cfg, tmp_path / "a") == 0
    assert cli.run_checks(cfg, tmp_path / "b", jobs=2) == 0
    for name in ("thm-forward.csv", "thm-forward.txt", "lem-dyadic.csv", "summary.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert len((tmp_path / "a" / "thm-forward.csv").read_text().splitlines()) == 33


def test_main_subcommands(tmp_path, capsys):
    assert cli.main(["params", "2", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["d"] == 4
    assert cli.main(["phi", "2", "1", "--lam", "1", "--t", "0,0.5"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "lambda,t,value,method,est_error" and out[1].startswith("1.0,0.0,1.0")
    assert cli.main(["params", "3", "1"]) == 1
    cfgp = write(tmp_path, "space: {m: 2, k: 1}\nprofile: {kind: gaussian, width: 1}\n")
    assert cli.main(["transform", "--config", str(cfgp), "--out", str(tmp_path / "t")]) == 0
    assert "parseval" in capsys.readouterr().out
    assert cli.main(["check", "--config", str(cfgp), "--out", str(tmp_path / "c"), "--tol-scale", "-1"]) == 1
