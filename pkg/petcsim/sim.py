# -*- coding: utf-8 -*-

"""
Fixed-step closed-loop simulation.

Each step measures the state, evaluates the control law, lets the trigger decide
whether to transmit, and advances ``(q, qd, chi)`` with classical RK4 while the applied
torque and the disturbance are held constant over the step.
"""

from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor
from .controller import (
    chi_derivative,
    control_law,
    ControllerState,
    envelope,
    filtered_error,
)
from .exceptions import ConfigurationException, NumericalException, PetcSimException
from .plant import forward_dynamics
from .tbg import transformed_error
from .trigger import beta, step as trigger_step, TriggerState
import logging
import numpy as np
import pandas as pd

logger = logging.getLogger("petcsim")

SWEEP_PARAMETERS = ("h", "alpha", "beta0", "T", "omega", "offset_deg", "payload_kg")


class SimConfig(
    namedtuple(
        "SimConfig",
        ["dt", "t_end", "q0", "qd0", "record_stride", "record_envelope"],
        defaults=(1, False),
    )
):
    """
    Integration settings and initial state.

    Attributes
    ----------
    dt : `float`
        Step, in s
    t_end : `float`
        Final time, in s
    q0, qd0 : `numpy.ndarray`
        Initial joint positions (rad) and velocities (rad/s)
    record_stride : `int`
        Record every ``record_stride`` steps (the final step is always recorded)
    record_envelope : `bool`
        Add envelope columns to the telemetry
    """

    __slots__ = ()

    def __new__(cls, dt, t_end, q0, qd0, record_stride=1, record_envelope=False):
        if not (dt > 0 and t_end > 0):
            raise ConfigurationException("dt and t_end must be > 0.")
        if int(record_stride) < 1:
            raise ConfigurationException("record_stride must be >= 1.")
        return super().__new__(
            cls,
            float(dt),
            float(t_end),
            np.array(q0, dtype=float),
            np.array(qd0, dtype=float),
            int(record_stride),
            bool(record_envelope),
        )

    @property
    def n_steps(self):
        """`int`: Number of integration steps."""
        return int(round(self.t_end / self.dt))


class SimResult(
    namedtuple(
        "SimResult", ["telemetry", "event_log", "summary", "times", "u_c", "scenario"]
    )
):
    """
    Output of :func:`run`.

    Attributes
    ----------
    telemetry : `pandas.DataFrame`
        Recorded rows, in the column order of :func:`telemetry_columns`
    event_log : `list` of `EventRecord`
        Trigger events
    summary : `dict`
        Run counters
    times : `numpy.ndarray`
        Time of every trigger call, shape (N,)
    u_c : `numpy.ndarray`
        Saturated control at every trigger call, shape (N, n)
    scenario : `Scenario`
        Scenario that was run
    """

    __slots__ = ()


def telemetry_columns(n, record_envelope=False):
    """`list` of `str`: Telemetry column names for ``n`` joints."""
    joints = range(1, n + 1)
    columns = ["t_s"]
    for prefix in ("q", "qd", "q_r", "qd_r", "u"):
        columns += ["%s_%d" % (prefix, j) for j in joints]
    columns += [
        "norm_xi",
        "norm_eps",
        "Pi",
        "norm_chi",
        "beta",
        "fired",
        "feasible",
        "violation",
        "V",
    ]
    if record_envelope:
        for prefix in ("e1_lo", "e1_hi", "psi0_lo", "psi0_hi"):
            columns += ["%s_%d" % (prefix, j) for j in joints]
    return columns


def rk4_step(f, t, x, dt):
    """`numpy.ndarray`: One classical Runge-Kutta step of ``x' = f(t, x)``."""
    k1 = f(t, x)
    k2 = f(t + dt / 2.0, x + dt / 2.0 * k1)
    k3 = f(t + dt / 2.0, x + dt / 2.0 * k2)
    k4 = f(t + dt, x + dt * k3)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def lyapunov_value(plant, q, xi, chi, gamma1):
    """`float`: ``0.5 xi^T M(q) xi + chi^T chi / (2 gamma1)``."""
    return plant.kinetic_energy(q, xi) + float(chi @ chi) / (2.0 * gamma1)


def _closed_loop(scenario, e0, e0_dot):
    plant = scenario.plant
    traj = scenario.reference
    gains = scenario.gains
    tbg = scenario.tbg_params
    n = plant.n

    def f(t, x, u, d):
        q, qd, chi = x[:n], x[n : 2 * n], x[2 * n :]
        q_r, qd_r, _ = traj.evaluate(t)
        eps, eps_dot = transformed_error(q - q_r, qd - qd_r, e0, e0_dot, t, tbg)
        xi = filtered_error(eps, eps_dot, gains.K)
        return np.concatenate(
            (
                qd,
                forward_dynamics(plant, q, qd, u, d),
                chi_derivative(chi, xi, gains.gamma1, gains.gamma2),
            )
        )

    return f


def run(scenario):
    """
    Simulate a scenario in closed loop.

    Parameters
    ----------
    scenario : `Scenario`
        Validated scenario

    Returns
    -------
    SimResult

    Raises
    ------
    NumericalException
        A state component became non-finite; carries the time and state
    """
    plant = scenario.plant
    box = scenario.constraints
    traj = scenario.reference
    gains = scenario.gains
    trig = scenario.trigger
    cfg = scenario.sim
    tbg = scenario.tbg_params
    n = plant.n
    dt = cfg.dt
    N = cfg.n_steps

    e0, e0_dot = scenario.initial_errors
    ctrl = ControllerState.initial(e0, e0_dot)
    f = _closed_loop(scenario, e0, e0_dot)
    x = np.concatenate((cfg.q0, cfg.qd0, ctrl.chi))
    trigger_state = TriggerState()

    times = np.arange(N) * dt
    u_c_stream = np.empty((N, n))
    rows = []
    counters = {"clamp_count": 0, "violation_count": 0, "infeasible_count": 0}
    max_norm_xi = 0.0
    logger.info("Running %s: %d steps of %s s (%s).", scenario.name, N, dt, trig.mode)

    u = None
    for i in range(N + 1):
        t = i * dt
        q, qd, chi = x[:n], x[n : 2 * n], x[2 * n :]
        q_r, qd_r, _ = traj.evaluate(t)
        e, e_dot = q - q_r, qd - qd_r
        eps, eps_dot = transformed_error(e, e_dot, e0, e0_dot, t, tbg)
        out = control_law(
            eps, eps_dot, chi, gains, box, warn=counters["clamp_count"] == 0
        )
        counters["clamp_count"] += out.clamped
        norm_xi = float(np.linalg.norm(out.xi))
        max_norm_xi = max(max_norm_xi, norm_xi)

        fired = False
        if i < N:
            u_c_stream[i] = out.u_c
            u, fired = trigger_step(trigger_state, out.u_c, t, trig, index=i)
        violation = not (box.contains_state(q, qd) and box.contains_input(u))
        counters["violation_count"] += violation

        if i % cfg.record_stride == 0 or i == N:
            snap = envelope(e, eps, t, box, traj, gains, e0, e0_dot, tbg)
            if not snap.feasible:
                if counters["infeasible_count"] == 0:
                    logger.warning("Constraint envelope infeasible from t = %s s.", t)
                counters["infeasible_count"] += 1
            row = [t, *q, *qd, *q_r, *qd_r, *u]
            row += [
                norm_xi,
                float(np.linalg.norm(eps)),
                out.Pi,
                float(np.linalg.norm(chi)),
                beta(t, trig.beta0, trig.T),
                fired,
                snap.feasible,
                violation,
                lyapunov_value(plant, q, out.xi, chi, gains.gamma1),
            ]
            if cfg.record_envelope:
                row += [*snap.e1_lo, *snap.e1_hi, *snap.psi0_lo, *snap.psi0_hi]
            rows.append(row)

        if i == N:
            break
        d = scenario.disturbance.at(t)
        x = rk4_step(lambda s, y: f(s, y, u, d), t, x, dt)
        if not np.all(np.isfinite(x)):
            raise NumericalException(
                "State became non-finite at t = %s s." % (t + dt), t=t + dt, state=x
            )

    telemetry = pd.DataFrame(rows, columns=telemetry_columns(n, cfg.record_envelope))
    for column in ("fired", "feasible", "violation"):
        telemetry[column] = telemetry[column].astype(bool)
    event_log = list(trigger_state.event_log)
    summary = {
        "scenario": scenario.name,
        "mode": trig.mode,
        "dt_s": dt,
        "h_s": trig.h,
        "t_end_s": cfg.t_end,
        "n_steps": N,
        "n_events": len(event_log),
        "max_norm_xi": max_norm_xi,
        **counters,
    }
    logger.info("Finished %s: %d events.", scenario.name, len(event_log))
    return SimResult(telemetry, event_log, summary, times, u_c_stream, scenario)


def parse_sweep_values(text, dt):
    """
    Parse a comma-separated list of sweep values.

    A value ending in ``dt`` is a multiple of the simulation step, so ``"dt,2dt,5dt"``
    becomes ``[dt, 2 dt, 5 dt]``.

    Raises
    ------
    ConfigurationException
        A value does not parse
    """
    values = []
    for token in (_.strip() for _ in text.split(",")):
        if not token:
            continue
        try:
            if token.endswith("dt"):
                factor = token[:-2].strip()
                values.append((float(factor) if factor else 1.0) * dt)
            else:
                values.append(float(token))
        except ValueError:
            raise ConfigurationException('Cannot parse sweep value "%s".' % token)
    if not values:
        raise ConfigurationException("No sweep values given.")
    return values


def _sweep_one(settings, param, value):
    from marshmallow import ValidationError
    from .metrics import compute_run_metrics
    from .scenario import Scenario

    row = {"param": param, "value": value}
    try:
        scenario = Scenario.from_dict(settings).with_param(param, value)
        metrics = compute_run_metrics(run(scenario))
    except (PetcSimException, ValidationError) as err:
        logger.warning("Sweep run %s = %s failed: %s", param, value, err)
        return {**row, "status": "failed", "error": str(err)}
    return {**row, "status": "ok", "error": "", **metrics.as_row()}


def sweep(scenario, param, values, workers=1):
    """
    Run one simulation per parameter value.

    Failures are recorded in their row instead of aborting the sweep.

    Parameters
    ----------
    scenario : `Scenario`
        Base scenario
    param : `str`
        One of `SWEEP_PARAMETERS`
    values : `list` of `float`
        Parameter values
    workers : `int`
        Number of worker processes; 1 runs in-process

    Returns
    -------
    `pandas.DataFrame`
        One row per value, in the order given
    """
    if param not in SWEEP_PARAMETERS:
        raise ConfigurationException(
            "Unknown sweep parameter %s; expected one of %s."
            % (param, SWEEP_PARAMETERS)
        )
    jobs = [(scenario.settings, param, float(_)) for _ in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, *zip(*jobs)))
    else:
        rows = [_sweep_one(*_) for _ in jobs]
    return pd.DataFrame(rows)
