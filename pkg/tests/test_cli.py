#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the `petcsim` command line."""

from click.testing import CliRunner
from petcsim import __version__ as version
from petcsim import cli
from petcsim.bounds import BOUND_FIELDS
from petcsim.export import ARTIFACTS
import numpy as np
import os
import pandas as pd
import petcsim.sim

test_yaml = """
    metadata:
      name: cli_test
    plant:
      model: point_mass
      joints: 2
    constraints:
      q_min_rad: [-1.0, -1.0]
      q_max_rad: [1.0, 1.0]
      v_min_rad_s: [-2.0, -2.0]
      v_max_rad_s: [2.0, 2.0]
      u_min_nm: [-10.0, -10.0]
      u_max_nm: [10.0, 10.0]
    reference:
      kind: sinusoidal
      amplitude_rad: [0.2, 0.1]
      frequency_rad_s: [1.0, 1.0]
    gains:
      k_diag: [5.0, 5.0]
      rho: 2.0
      omega: 1.0
      gamma1: 1.0
      gamma2: 0.4
      eta: 10.0
    trigger:
      alpha: 0.01
      beta0: 0.02
      h_s: 0.002
      prescribed_time_s: 0.25
    sim:
      dt_s: 0.001
      t_end_s: 0.5
      initial_offset_deg: 5.0
"""


def _scenario_file(tmpdir, text=test_yaml):
    filename = tmpdir.join("scenario.yaml")
    filename.write(text)
    return str(filename)


def test_command_line_interface():
    """Test the CLI."""
    runner = CliRunner()
    result = runner.invoke(cli.main)
    assert result.exit_code == 0
    assert "main" in result.output
    help_result = runner.invoke(cli.main, ["--help"])
    assert help_result.exit_code == 0
    assert "Show this message and exit." in help_result.output


def test_command_line_version():
    """Test CLI version."""
    runner = CliRunner()
    version_result = runner.invoke(cli.main, ["--version"])
    assert f"{version}" in version_result.output


def test_cli_run(tmpdir):
    """Test run writes every artifact."""
    runner = CliRunner()
    output_dir = str(tmpdir.join("out"))
    result = runner.invoke(
        cli.main,
        ["run", "--from", "yaml_file", _scenario_file(tmpdir), "-o", output_dir, "-q"],
    )
    assert result.exit_code == 0
    for name in ARTIFACTS:
        assert os.path.exists(os.path.join(output_dir, name))
        assert f"Wrote {os.path.join(output_dir, name)}" in result.output
    assert "transmission_pct" in result.output


def test_cli_invalid_scenario(tmpdir):
    """Test invalid scenarios exit with the validation code."""
    runner = CliRunner()
    bad = _scenario_file(tmpdir, test_yaml.replace("h_s: 0.002", "h_s: 0.0025"))
    for command in ("run", "bounds", "validate"):
        result = runner.invoke(cli.main, [command, "--from", "yaml_file", bad])
        assert result.exit_code == 3
        assert "trigger.h_s" in result.output


def test_cli_numerical_failure(tmpdir, monkeypatch):
    """Test a diverging run exits with the numerical code."""
    monkeypatch.setattr(
        petcsim.sim,
        "forward_dynamics",
        lambda plant, q, qd, u, d: np.full(plant.n, np.nan),
    )
    runner = CliRunner()
    result = runner.invoke(
        cli.main,
        ["run", "--from", "yaml_file", _scenario_file(tmpdir), "-o", str(tmpdir), "-q"],
    )
    assert result.exit_code == 4
    assert "Numerical failure at t = 0.001 s" in result.output


def test_cli_bounds_contraction_failure(tmpdir):
    """Test bounds exits with the validation code when a >= 1."""
    runner = CliRunner()
    filename = _scenario_file(tmpdir, test_yaml.replace("rho: 2.0", "rho: 1.0e-300"))
    result = runner.invoke(cli.main, ["bounds", "--from", "yaml_file", filename])
    assert result.exit_code == 3
    assert "uncertainty branch" in result.output
    missing = runner.invoke(
        cli.main, ["validate", "--from", "yaml_file", str(tmpdir.join("none.yaml"))]
    )
    assert missing.exit_code == 3
    unknown = runner.invoke(cli.main, ["validate", "--from", "bundled", "missing"])
    assert unknown.exit_code == 3


def test_cli_bounds(tmpdir):
    """Test bounds prints every field and classifies h."""
    runner = CliRunner()
    filename = _scenario_file(tmpdir)
    result = runner.invoke(
        cli.main, ["bounds", "--from", "yaml_file", filename, "--to", "kv"]
    )
    assert result.exit_code == 0
    lines = result.output.splitlines()
    for name in BOUND_FIELDS:
        assert any(_.startswith(f"{name} = ") for _ in lines)
    assert any(_.startswith("h = 0.002 s: ") for _ in lines)
    table = runner.invoke(
        cli.main, ["bounds", "--from", "yaml_file", filename, "--to", "table"]
    )
    assert table.exit_code == 0
    assert table.output.splitlines()[0].split() == ["bound", "value", "unit"]
    compared = runner.invoke(
        cli.main,
        ["bounds", "--from", "yaml_file", filename, "--compare-omega", "2", "-q"],
    )
    assert compared.exit_code == 0
    assert "omega 1.0 -> 2.0" in compared.output
    assert "h_star with a and l1 held fixed = " in compared.output


def test_cli_sweep(tmpdir):
    """Test sweep writes one row per value."""
    runner = CliRunner()
    output_dir = str(tmpdir.join("sweep"))
    result = runner.invoke(
        cli.main,
        [
            "sweep",
            "--from",
            "yaml_file",
            _scenario_file(tmpdir),
            "--param",
            "h",
            "--values",
            "dt,2.5dt,2dt",
            "-o",
            output_dir,
            "-q",
        ],
    )
    assert result.exit_code == 0
    table = pd.read_csv(os.path.join(output_dir, "sweep.csv"))
    assert list(table["status"]) == ["ok", "failed", "ok"]
    failed = runner.invoke(
        cli.main,
        [
            "sweep",
            "--from",
            "yaml_file",
            _scenario_file(tmpdir),
            "-p",
            "h",
            "-v",
            "2.5dt",
            "-o",
            output_dir,
            "-q",
        ],
    )
    assert failed.exit_code == 3


def test_cli_validate():
    """Test validate on a bundled scenario."""
    runner = CliRunner()
    result = runner.invoke(
        cli.main, ["validate", "--from", "bundled", "two_link_default"]
    )
    assert result.exit_code == 0
    assert result.output.strip() == "Scenario two_link_default is valid."


def test_list_bundled():
    """Test list-bundled."""
    runner = CliRunner()
    result = runner.invoke(cli.main, ["list-bundled"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "Bundled scenarios:"
    assert "  two_link_default" in result.output
    assert "  point_mass_sine" in result.output
