#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for run artifacts."""

from petcsim import Scenario
from petcsim.export import (
    ARTIFACTS,
    events_frame,
    format_summary,
    parse_summary,
    plot_script,
    read_events,
    read_telemetry,
    write_csv,
    write_run,
)
from petcsim.metrics import compute_run_metrics
from petcsim.sim import run
import numpy as np
import os
import pandas as pd
import pytest
import yaml

test_yaml = """
    metadata:
      name: export_test
    plant:
      model: point_mass
      joints: 1
    constraints:
      q_min_rad: [-1.0]
      q_max_rad: [1.0]
      v_min_rad_s: [-2.0]
      v_max_rad_s: [2.0]
      u_min_nm: [-10.0]
      u_max_nm: [10.0]
    reference:
      kind: sinusoidal
      amplitude_rad: [0.3]
      frequency_rad_s: [2.0]
    gains:
      k_diag: [5.0]
      rho: 2.0
      omega: 1.0
      gamma1: 1.0
      gamma2: 0.4
      eta: 10.0
    trigger:
      alpha: 0.01
      beta0: 0.02
      h_s: 0.002
      prescribed_time_s: 0.3
    sim:
      dt_s: 0.001
      t_end_s: 0.5
      initial_offset_deg: 3.0
      record_stride: 7
"""


@pytest.fixture(scope="module")
def result():
    return run(Scenario.from_yaml(test_yaml))


def test_write_run(result, tmpdir):
    """Test every artifact is written and reads back."""
    metrics = compute_run_metrics(result)
    paths = write_run(result, metrics, str(tmpdir.join("out")))
    assert [os.path.basename(_) for _ in paths] == list(ARTIFACTS)
    telemetry = read_telemetry(paths[0], 1)
    assert telemetry["t_s"].iloc[-1] == pytest.approx(0.5)
    assert np.array_equal(
        telemetry["q_1"].to_numpy(), result.telemetry["q_1"].to_numpy()
    )
    events = read_events(paths[1])
    assert list(events["t_k_s"]) == [_.t for _ in result.event_log]
    metrics_csv = pd.read_csv(paths[2])
    assert metrics_csv["n_events"][0] == metrics.n_events
    with open(paths[3]) as f:
        summary = parse_summary(f.read())
    assert summary["scenario"] == "export_test"
    assert int(summary["n_events"]) == len(result.event_log)
    assert "rmse_q_1_deg" in summary


def test_artifacts_are_reproducible(result, tmpdir):
    """Test a repeated run writes byte-identical artifacts."""
    again = run(Scenario.from_yaml(test_yaml))
    first = write_run(result, compute_run_metrics(result), str(tmpdir.join("a")))
    second = write_run(again, compute_run_metrics(again), str(tmpdir.join("b")))
    for a, b in zip(first, second):
        with open(a, "rb") as f, open(b, "rb") as g:
            assert f.read() == g.read()


def test_read_telemetry_checks_header(result, tmpdir):
    """Test a mismatched header is rejected."""
    filename = str(tmpdir.join("telemetry.csv"))
    write_csv(result.telemetry.drop(columns=["V"]), filename)
    with pytest.raises(ValueError):
        read_telemetry(filename, 1)
    with pytest.raises(ValueError):
        read_events(filename)


def test_events_frame(result):
    """Test the event table layout."""
    frame = events_frame(result.event_log)
    assert list(frame.columns) == [
        "k",
        "t_k_s",
        "norm_ue_nm",
        "norm_u_held_nm",
        "beta_nm",
    ]
    assert frame["k"][0] == 0
    assert frame["norm_u_held_nm"][0] == 0.0


def test_summary_round_trip():
    """Test summary text parses back."""
    text = format_summary({"scenario": "x", "n_events": 3, "h_s": 0.0002})
    assert text == "scenario = x\nn_events = 3\nh_s = 0.0002\n"
    assert parse_summary(text) == {"scenario": "x", "n_events": "3", "h_s": "0.0002"}


def test_plot_script():
    """Test the gnuplot script draws each panel with its limits."""
    script = plot_script(Scenario.from_yaml(test_yaml))
    assert sum(_.startswith("plot ") for _ in script.splitlines()) == 3
    assert "using 1:2 with lines title 'q_1'" in script
    assert "10.0 with lines" in script
    assert "-2.0 with lines" in script
    assert script.endswith("unset multiplot\n")
