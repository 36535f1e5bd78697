# -*- coding: utf-8 -*-

"""
Event-triggering mechanisms with zero-order hold.

Three modes share one rule: at a monitoring instant ``t`` an event fires when

    ``||u_c(t) - u_held|| >= alpha ||u_held|| + beta(t)``

with ``beta(t) = beta0 (T - t)`` before ``T`` and zero afterwards.

``petc``
    The rule is checked every ``h`` seconds (every ``stride`` simulation steps).
``cetc``
    The rule is checked at every simulation step.
``time_triggered``
    Every step is an event; the baseline with 100% transmission.
"""

from collections import namedtuple
from .exceptions import ConfigurationException, UsageException
import logging
import numpy as np

logger = logging.getLogger("petcsim")

TRIGGER_MODES = ("petc", "cetc", "time_triggered")
SNAP_TOLERANCE = 1e-6
SNAP_WARNING = 1e-9


def snap_to_grid(h, dt):
    """
    Snap a monitoring period to an integer multiple of the simulation step.

    Parameters
    ----------
    h : `float`
        Monitoring period, in s
    dt : `float`
        Simulation step, in s

    Returns
    -------
    `tuple`
        ``(h_snapped, stride)`` with ``h_snapped = stride * dt``

    Raises
    ------
    ConfigurationException
        ``h`` is not within relative ``1e-6`` of a positive multiple of ``dt``
    """
    if not (h > 0 and dt > 0):
        raise ConfigurationException("h and dt must be > 0, got %s and %s." % (h, dt))
    stride = int(round(h / dt))
    if stride < 1 or abs(h - stride * dt) > SNAP_TOLERANCE * h:
        raise ConfigurationException(
            "trigger.h_s = %s is not an integer multiple of sim.dt_s = %s." % (h, dt)
        )
    snapped = stride * dt
    if abs(snapped - h) > SNAP_WARNING:
        logger.warning("Monitoring period %s snapped to %s.", h, snapped)
    return snapped, stride


class TriggerConfig(
    namedtuple("TriggerConfig", ["mode", "alpha", "beta0", "h", "T", "stride"])
):
    """
    Configuration of the triggering mechanism.

    Attributes
    ----------
    mode : `str`
        One of ``petc``, ``cetc``, ``time_triggered``
    alpha : `float`
        Relative threshold, in ``(0, 1)``
    beta0 : `float`
        Slope of the decaying absolute threshold, in ``(0, 1)``
    h : `float`
        Monitoring period, in s
    T : `float`
        Prescribed time, in s
    stride : `int`
        Monitoring period in simulation steps
    """

    __slots__ = ()

    def __new__(cls, mode, alpha, beta0, h, T, stride=1):
        if mode not in TRIGGER_MODES:
            raise ConfigurationException(
                "Unknown trigger mode %s; expected one of %s." % (mode, TRIGGER_MODES)
            )
        if not 0 < alpha < 1:
            raise ConfigurationException("alpha must be in (0, 1), got %s." % alpha)
        if not 0 < beta0 < 1:
            raise ConfigurationException("beta0 must be in (0, 1), got %s." % beta0)
        if not (h > 0 and T > 0):
            raise ConfigurationException("h and T must be > 0.")
        if int(stride) < 1:
            raise ConfigurationException("stride must be >= 1, got %s." % stride)
        if mode != "petc":
            stride = 1
        return super().__new__(
            cls, mode, float(alpha), float(beta0), float(h), float(T), int(stride)
        )

    @classmethod
    def on_grid(cls, mode, alpha, beta0, h, T, dt):
        """`TriggerConfig`: configuration with ``h`` snapped onto the ``dt`` grid."""
        if mode == "petc":
            h, stride = snap_to_grid(h, dt)
        else:
            h, stride = dt, 1
        return cls(mode, alpha, beta0, h, T, stride)


class EventRecord(
    namedtuple("EventRecord", ["k", "t", "norm_ue", "norm_u_held", "beta", "reason"])
):
    """
    One logged event.

    Attributes
    ----------
    k : `int`
        Event number, from 0
    t : `float`
        Event instant, in s
    norm_ue : `float`
        ``||u_c(t) - u_held||`` just before latching, in N m
    norm_u_held : `float`
        ``||u_held||`` just before latching, in N m
    beta : `float`
        ``beta(t)``, in N m
    reason : `str`
        ``initial``, ``threshold`` or ``periodic``
    """

    __slots__ = ()


class TriggerState:
    """
    Mutable hold state and event log, owned by one simulation loop.

    Attributes
    ----------
    t_last : `float` or `None`
        Last event instant
    u_held : `numpy.ndarray` or `None`
        Held control
    event_log : `list` of `EventRecord`
        Events, in order
    """

    def __init__(self):
        self.t_last = None
        self.u_held = None
        self.event_log = []
        self._t_prev = None
        self._calls = 0

    def __repr__(self):
        return "TriggerState(t_last=%s, events=%s)" % (self.t_last, len(self.event_log))

    @property
    def event_times(self):
        """`numpy.ndarray`: Event instants, in s."""
        return np.array([_.t for _ in self.event_log])


def beta(t, beta0, T):
    """`float`: ``beta0 (T - t)`` for ``t < T``, else 0. In N m."""
    return beta0 * (T - t) if t < T else 0.0


def violates(u_c_now, u_held, t, alpha, beta0, T):
    """`bool`: True iff ``||u_c - u_held|| >= alpha ||u_held|| + beta(t)``."""
    u_held = np.asarray(u_held, dtype=float)
    err = float(np.linalg.norm(np.asarray(u_c_now, dtype=float) - u_held))
    return err >= alpha * float(np.linalg.norm(u_held)) + beta(t, beta0, T)


def should_fire(u_c_now, state, t, cfg):
    """
    Evaluate the triggering rule at a monitoring instant.

    Parameters
    ----------
    u_c_now : array_like
        Current saturated control
    state : `TriggerState`
        Hold state
    t : `float`
        Time, in s
    cfg : `TriggerConfig`
        Trigger configuration

    Returns
    -------
    `bool`
    """
    if state.u_held is None:
        return True
    return violates(u_c_now, state.u_held, t, cfg.alpha, cfg.beta0, cfg.T)


def _latch(state, u_c_now, t, cfg, reason):
    u_c_now = np.array(u_c_now, dtype=float)
    held = np.zeros_like(u_c_now) if state.u_held is None else state.u_held
    state.event_log.append(
        EventRecord(
            k=len(state.event_log),
            t=t,
            norm_ue=float(np.linalg.norm(u_c_now - held)),
            norm_u_held=float(np.linalg.norm(held)),
            beta=beta(t, cfg.beta0, cfg.T),
            reason=reason,
        )
    )
    state.u_held = u_c_now
    state.t_last = t


def step(state, u_c_now, t, cfg, index=None):
    """
    Advance the trigger by one simulation step.

    The first call always fires. Afterwards, ``time_triggered`` fires every call,
    ``cetc`` checks the rule every call and ``petc`` checks it only when ``index`` is
    a multiple of ``cfg.stride``. An event never refires at its own instant.

    Parameters
    ----------
    state : `TriggerState`
        Hold state, updated in place
    u_c_now : array_like
        Current saturated control
    t : `float`
        Time, in s
    cfg : `TriggerConfig`
        Trigger configuration
    index : `int`, optional
        Simulation step index; defaults to the number of previous calls

    Returns
    -------
    `tuple`
        ``(u_applied, fired)``

    Raises
    ------
    UsageException
        ``t`` decreased since the previous call
    """
    if state._t_prev is not None and t < state._t_prev:
        raise UsageException(
            "Trigger time went backwards: %s after %s." % (t, state._t_prev)
        )
    if index is None:
        index = state._calls
    state._t_prev = t
    state._calls += 1

    if state.u_held is None:
        _latch(state, u_c_now, t, cfg, "initial")
        return state.u_held, True
    if t > state.t_last:
        if cfg.mode == "time_triggered":
            _latch(state, u_c_now, t, cfg, "periodic")
            return state.u_held, True
        if index % cfg.stride == 0 and should_fire(u_c_now, state, t, cfg):
            _latch(state, u_c_now, t, cfg, "threshold")
            return state.u_held, True
    return state.u_held, False


def replay(u_c_stream, times, alpha, beta0, T, stride=1):
    """
    Re-apply the triggering rule to a recorded control stream.

    Unlike :class:`TriggerConfig`, ``alpha`` and ``beta0`` may be zero here so that
    threshold ablations can be studied offline.

    Parameters
    ----------
    u_c_stream : array_like, shape (N, n)
        Saturated control at every simulation step
    times : array_like, shape (N,)
        Step times, in s
    alpha, beta0 : `float`
        Thresholds, in ``[0, 1)``
    T : `float`
        Prescribed time, in s
    stride : `int`
        Monitoring period in steps

    Returns
    -------
    `numpy.ndarray`
        Event instants, in s
    """
    if not (0 <= alpha < 1 and 0 <= beta0 < 1):
        raise ConfigurationException("Replay thresholds must lie in [0, 1).")
    u_c_stream = np.asarray(u_c_stream, dtype=float)
    times = np.asarray(times, dtype=float)
    events = [float(times[0])]
    u_held = u_c_stream[0]
    for i in range(1, len(times)):
        if i % stride:
            continue
        if violates(u_c_stream[i], u_held, times[i], alpha, beta0, T):
            events.append(float(times[i]))
            u_held = u_c_stream[i]
    return np.array(events)
