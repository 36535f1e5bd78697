# -*- coding: utf-8 -*-

"""
Post-run evaluation: steady-state RMSE, transmission rate, inter-event times and
Lyapunov diagnostics.
"""

from collections import namedtuple
from .bounds import residual_threshold
from .exceptions import ConfigurationException
import numpy as np


class EventStats(
    namedtuple(
        "EventStats",
        [
            "transmission_pct",
            "n_events",
            "iet_min",
            "iet_max",
            "iet_mean",
            "mean_event_instant",
        ],
    )
):
    """
    Event counts and inter-event time (IET) statistics.

    ``iet_mean`` is ``(t_last - t_first) / (n_events - 1)``; ``mean_event_instant`` is
    the mean of the event instants. IET statistics are NaN with a single event.
    """

    __slots__ = ()


class LyapunovTrace(namedtuple("LyapunovTrace", ["max_v", "min_v", "flagged"])):
    """
    Lyapunov diagnostics.

    Attributes
    ----------
    max_v, min_v : `float`
        Extremes of ``V`` over the recorded rows
    flagged : `list` of `tuple`
        ``(t_start, t_end)`` spans where ``V`` increased while ``||xi||`` exceeded the
        residual threshold
    """

    __slots__ = ()


class RunMetrics(
    namedtuple(
        "RunMetrics",
        [
            "rmse_q",
            "rmse_qdot",
            "transmission_pct",
            "n_events",
            "iet_min",
            "iet_max",
            "iet_mean",
            "mean_event_instant",
            "max_norm_xi",
            "bound_margin",
            "eps_bound",
            "nu",
            "max_v",
            "n_flagged",
        ],
    )
):
    """
    Metrics of one run.

    Attributes
    ----------
    rmse_q : `numpy.ndarray`
        Steady-state position RMSE per joint, in deg
    rmse_qdot : `numpy.ndarray`
        Steady-state velocity RMSE per joint, in deg/s
    transmission_pct : `float`
        Events per simulation step, in %
    n_events : `int`
        Number of events
    iet_min, iet_max, iet_mean : `float`
        Inter-event time statistics, in s
    mean_event_instant : `float`
        Mean of the event instants, in s
    max_norm_xi : `float`
        Largest ``||xi||`` over every step
    bound_margin : `float`
        ``eps_bound - max_{t >= T} ||[e; e_dot]||``
    eps_bound : `float`
        Prescribed error bound
    nu : `float`
        Minimum inter-event time bound, in s
    max_v : `float`
        Largest Lyapunov value
    n_flagged : `int`
        Number of flagged Lyapunov spans
    """

    __slots__ = ()

    def as_row(self):
        """`dict`: Flat mapping for CSV output, one column per joint for RMSE."""
        row = {}
        for j, value in enumerate(self.rmse_q, start=1):
            row["rmse_q_%d_deg" % j] = float(value)
        for j, value in enumerate(self.rmse_qdot, start=1):
            row["rmse_qd_%d_deg_s" % j] = float(value)
        for name in self._fields[2:]:
            row[name] = getattr(self, name)
        return row


def _joint_errors(telemetry):
    n = sum(1 for _ in telemetry.columns if _.startswith("q_r_"))
    joints = range(1, n + 1)
    e = telemetry[["q_%d" % j for j in joints]].to_numpy() - telemetry[
        ["q_r_%d" % j for j in joints]
    ].to_numpy()
    e_dot = telemetry[["qd_%d" % j for j in joints]].to_numpy() - telemetry[
        ["qd_r_%d" % j for j in joints]
    ].to_numpy()
    return e, e_dot


def steady_state_rmse(telemetry, T):
    """
    Per-joint RMSE of the position and velocity errors over rows with ``t >= T``.

    Parameters
    ----------
    telemetry : `pandas.DataFrame`
        Telemetry with ``t_s``, ``q_i``, ``qd_i``, ``q_r_i`` and ``qd_r_i`` columns
    T : `float`
        Prescribed time, in s

    Returns
    -------
    `tuple` of `numpy.ndarray`
        ``(rmse_q, rmse_qdot)`` in deg and deg/s

    Raises
    ------
    ConfigurationException
        No rows at or after ``T``
    """
    mask = telemetry["t_s"].to_numpy() >= T
    if not mask.any():
        raise ConfigurationException(
            "No telemetry at or after T = %s s; extend t_end." % T
        )
    e, e_dot = _joint_errors(telemetry)
    rmse = np.sqrt(np.mean(e[mask] ** 2, axis=0))
    rmse_dot = np.sqrt(np.mean(e_dot[mask] ** 2, axis=0))
    return np.rad2deg(rmse), np.rad2deg(rmse_dot)


def event_stats(event_times, n_samples):
    """
    Compute the transmission rate and inter-event time statistics.

    Parameters
    ----------
    event_times : array_like
        Event instants, in s, nonempty
    n_samples : `int`
        Number of sample instants

    Returns
    -------
    EventStats
    """
    times = np.asarray(event_times, dtype=float)
    if not len(times):
        raise ConfigurationException("Event log is empty.")
    n = len(times)
    if n > 1:
        iet = np.diff(times)
        iet_min, iet_max = float(iet.min()), float(iet.max())
        iet_mean = float((times[-1] - times[0]) / (n - 1))
    else:
        iet_min = iet_max = iet_mean = float("nan")
    return EventStats(
        transmission_pct=100.0 * n / n_samples,
        n_events=n,
        iet_min=iet_min,
        iet_max=iet_max,
        iet_mean=iet_mean,
        mean_event_instant=float(times.mean()),
    )


def lyapunov_trace(telemetry, threshold):
    """
    Find spans where ``V`` grows although ``||xi||`` is above ``threshold``.

    Parameters
    ----------
    telemetry : `pandas.DataFrame`
        Telemetry with ``t_s``, ``V`` and ``norm_xi`` columns
    threshold : `float`
        Residual threshold on ``||xi||``

    Returns
    -------
    LyapunovTrace
    """
    t = telemetry["t_s"].to_numpy()
    V = telemetry["V"].to_numpy()
    norm_xi = telemetry["norm_xi"].to_numpy()
    tol = 1e-12 * np.maximum(1.0, np.abs(V[:-1]))
    rising = (V[1:] - V[:-1] > tol) & (norm_xi[:-1] > threshold)
    flagged = []
    for k in np.flatnonzero(rising):
        if flagged and flagged[-1][1] == t[k]:
            flagged[-1] = (flagged[-1][0], float(t[k + 1]))
        else:
            flagged.append((float(t[k]), float(t[k + 1])))
    return LyapunovTrace(float(V.max()), float(V.min()), flagged)


def tracking_error_norm(telemetry):
    """`numpy.ndarray`: ``||[e; e_dot]||`` for every row."""
    e, e_dot = _joint_errors(telemetry)
    return np.sqrt(np.sum(e ** 2, axis=1) + np.sum(e_dot ** 2, axis=1))


def compute_run_metrics(result):
    """
    Compute :class:`RunMetrics` for a simulation result.

    Parameters
    ----------
    result : `SimResult`
        Output of :func:`petcsim.sim.run`

    Returns
    -------
    RunMetrics
    """
    scenario = result.scenario
    telemetry = result.telemetry
    T = scenario.trigger.T
    bound_set = scenario.bound_set()
    rmse_q, rmse_qdot = steady_state_rmse(telemetry, T)
    stats = event_stats([_.t for _ in result.event_log], result.summary["n_steps"])
    after_T = telemetry["t_s"].to_numpy() >= T
    trace = lyapunov_trace(telemetry, residual_threshold(bound_set))
    return RunMetrics(
        rmse_q=rmse_q,
        rmse_qdot=rmse_qdot,
        transmission_pct=stats.transmission_pct,
        n_events=stats.n_events,
        iet_min=stats.iet_min,
        iet_max=stats.iet_max,
        iet_mean=stats.iet_mean,
        mean_event_instant=stats.mean_event_instant,
        max_norm_xi=result.summary["max_norm_xi"],
        bound_margin=bound_set.eps_bound
        - float(tracking_error_norm(telemetry)[after_T].max()),
        eps_bound=bound_set.eps_bound,
        nu=bound_set.nu,
        max_v=trace.max_v,
        n_flagged=len(trace.flagged),
    )


def format_metrics(metrics):
    """`str`: Aligned two-column text table of ``metrics``."""
    row = metrics.as_row()
    width = max(len(_) for _ in row)
    return "\n".join(
        "{:<{w}}  {:.6g}".format(k, v, w=width) for k, v in row.items()
    )
