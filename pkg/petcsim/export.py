# -*- coding: utf-8 -*-

"""
Run artifacts: CSV tables, a key-value summary and a gnuplot script.

Floats in CSV files are written with 17 significant digits so that they re-parse to
the same doubles.
"""

from .sim import telemetry_columns
import logging
import os
import pandas as pd

logger = logging.getLogger("petcsim")

FLOAT_FORMAT = "%.17g"

EVENT_COLUMNS = ["k", "t_k_s", "norm_ue_nm", "norm_u_held_nm", "beta_nm"]

ARTIFACTS = ("telemetry.csv", "events.csv", "metrics.csv", "summary.txt", "plot.gp")


def events_frame(event_log):
    """`pandas.DataFrame`: Event log in the ``events.csv`` column layout."""
    return pd.DataFrame(
        [(e.k, e.t, e.norm_ue, e.norm_u_held, e.beta) for e in event_log],
        columns=EVENT_COLUMNS,
    )


def write_csv(frame, filename):
    """Write ``frame`` to ``filename`` without index, floats at full precision."""
    frame.to_csv(filename, index=False, float_format=FLOAT_FORMAT)


def read_telemetry(filename, n, record_envelope=False):
    """
    Read ``telemetry.csv`` and check its header.

    Parameters
    ----------
    filename : `str`
        Path
    n : `int`
        Number of joints
    record_envelope : `bool`
        Whether envelope columns are expected

    Raises
    ------
    ValueError
        Header differs from the declared columns
    """
    frame = pd.read_csv(filename)
    expected = telemetry_columns(n, record_envelope)
    if list(frame.columns) != expected:
        raise ValueError("Unexpected telemetry columns %s." % list(frame.columns))
    return frame


def read_events(filename):
    """Read ``events.csv`` and check its header."""
    frame = pd.read_csv(filename)
    if list(frame.columns) != EVENT_COLUMNS:
        raise ValueError("Unexpected event columns %s." % list(frame.columns))
    return frame


def format_summary(summary):
    """`str`: ``key = value`` lines, one per entry."""
    return "".join("%s = %s\n" % (k, v) for k, v in summary.items())


def parse_summary(text):
    """`dict`: Inverse of :func:`format_summary`, values as strings."""
    pairs = (line.split(" = ", 1) for line in text.splitlines() if " = " in line)
    return {k: v for k, v in pairs}


def plot_script(scenario):
    """
    Build a gnuplot script drawing positions, velocities and torques of
    ``telemetry.csv`` against the constraint limits.

    Returns
    -------
    `str`
    """
    n = scenario.plant.n
    box = scenario.constraints
    columns = telemetry_columns(n, scenario.sim.record_envelope)

    def col(name):
        return columns.index(name) + 1

    panels = (
        ("q", "joint position [rad]", box.q_lo, box.q_hi),
        ("qd", "joint velocity [rad/s]", box.v_lo, box.v_hi),
        ("u", "joint torque [N m]", box.u_lo, box.u_hi),
    )
    lines = [
        "# gnuplot script for %s" % scenario.name,
        "set datafile separator ','",
        "set key autotitle columnhead outside",
        "set xlabel 'time [s]'",
        "set grid",
        "set terminal pngcairo size 900,1200",
        "set output 'plot.png'",
        "set multiplot layout 3,1",
    ]
    for prefix, label, lo, hi in panels:
        lines.append("set ylabel '%s'" % label)
        plots = []
        for j in range(1, n + 1):
            plots.append(
                "'telemetry.csv' using 1:%d with lines title '%s_%d'"
                % (col("%s_%d" % (prefix, j)), prefix, j)
            )
            if prefix != "u":
                plots.append(
                    "'telemetry.csv' using 1:%d with lines dashtype 2 title 'ref_%d'"
                    % (col("%s_r_%d" % (prefix, j)), j)
                )
            plots.append("%r with lines dashtype 3 lc 'red' notitle" % float(lo[j - 1]))
            plots.append("%r with lines dashtype 3 lc 'red' notitle" % float(hi[j - 1]))
        lines.append("plot " + ", \\\n     ".join(plots))
    lines.append("unset multiplot")
    return "\n".join(lines) + "\n"


def write_run(result, metrics, output_dir):
    """
    Write every run artifact into ``output_dir``.

    Parameters
    ----------
    result : `SimResult`
        Simulation result
    metrics : `RunMetrics`
        Metrics of the run
    output_dir : `str`
        Directory, created if missing

    Returns
    -------
    `list` of `str`
        Paths written, in `ARTIFACTS` order
    """
    os.makedirs(output_dir, exist_ok=True)
    paths = [os.path.join(output_dir, _) for _ in ARTIFACTS]
    write_csv(result.telemetry, paths[0])
    write_csv(events_frame(result.event_log), paths[1])
    write_csv(pd.DataFrame([metrics.as_row()]), paths[2])
    with open(paths[3], "w") as f:
        f.write(format_summary({**result.summary, **metrics.as_row()}))
    with open(paths[4], "w") as f:
        f.write(plot_script(result.scenario))
    logger.info("Wrote %s", ", ".join(paths))
    return paths
