#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for the event-triggering mechanisms."""

from petcsim.exceptions import ConfigurationException, UsageException
from petcsim.trigger import (
    beta,
    replay,
    should_fire,
    snap_to_grid,
    step,
    TriggerConfig,
    TriggerState,
    violates,
)
import logging
import numpy as np
import pytest


def _config(mode="petc", alpha=0.0029, beta0=0.0241, h=2e-4, T=4.0, dt=1e-4):
    return TriggerConfig.on_grid(mode, alpha, beta0, h, T, dt)


def test_beta():
    """Test the decaying threshold."""
    assert beta(0.0, 0.0241, 4.0) == pytest.approx(0.0964)
    assert beta(2.0, 0.0241, 4.0) == pytest.approx(0.0482)
    assert beta(4.0, 0.0241, 4.0) == 0.0
    assert beta(9.0, 0.0241, 4.0) == 0.0


def test_config_validation():
    """Test parameter ranges and mode names."""
    with pytest.raises(ConfigurationException):
        TriggerConfig("petc", 1.0, 0.1, 1e-3, 1.0)
    with pytest.raises(ConfigurationException):
        TriggerConfig("petc", 0.1, 0.0, 1e-3, 1.0)
    with pytest.raises(ConfigurationException):
        TriggerConfig("sometimes", 0.1, 0.1, 1e-3, 1.0)
    assert _config(mode="cetc", h=5e-3).stride == 1
    assert _config(h=1e-3).stride == 10


def test_snap_to_grid(caplog):
    """Test snapping to multiples of dt and rejection of off-grid periods."""
    assert snap_to_grid(3e-4, 1e-4) == (pytest.approx(3e-4), 3)
    with caplog.at_level(logging.WARNING, logger="petcsim"):
        h, stride = snap_to_grid(1e-3 * (1 + 5e-7), 1e-4)
    assert stride == 10
    with pytest.raises(ConfigurationException, match="trigger.h_s"):
        snap_to_grid(2.5e-4, 1e-4)
    with pytest.raises(ConfigurationException):
        snap_to_grid(5e-5, 1e-4)


def test_violates():
    """Test the rule at the boundary and past T."""
    assert not violates([1.0, 2.0], [1.0, 2.0], 0.0, 0.0029, 0.0241, 4.0)
    # boundary: ||u_e|| = 5 = 0.5 * 10
    assert violates([15.0], [10.0], 5.0, 0.5, 0.1, 4.0)
    assert violates([1e-9], [0.0], 4.0, 0.0, 0.5, 4.0)


def test_should_fire():
    """Test should_fire on a held value."""
    cfg = _config()
    state = TriggerState()
    assert should_fire([1.0], state, 0.0, cfg)
    step(state, [1.0, 0.0], 0.0, cfg, index=0)
    assert not should_fire([1.0, 0.0], state, 0.0002, cfg)
    assert should_fire([2.0, 0.0], state, 0.0002, cfg)


def test_first_call_fires():
    """Test initialization u(t0) = u_c(t0)."""
    state = TriggerState()
    u, fired = step(state, [0.3, -0.1], 0.0, _config(), index=0)
    assert fired
    assert np.array_equal(u, [0.3, -0.1])
    assert state.event_log[0].reason == "initial"


def test_petc_checks_only_on_monitoring_instants():
    """Test that petc ignores large errors between monitoring instants."""
    cfg = _config(h=3e-4)
    state = TriggerState()
    step(state, [0.0], 0.0, cfg, index=0)
    u, fired = step(state, [10.0], 1e-4, cfg, index=1)
    assert not fired and u[0] == 0.0
    u, fired = step(state, [10.0], 2e-4, cfg, index=2)
    assert not fired
    u, fired = step(state, [10.0], 3e-4, cfg, index=3)
    assert fired and u[0] == 10.0
    assert np.allclose(state.event_times, [0.0, 3e-4])


def test_time_triggered_fires_every_step():
    """Test the time-triggered baseline."""
    cfg = _config(mode="time_triggered")
    state = TriggerState()
    fired = [step(state, [1.0], i * 1e-4, cfg, index=i)[1] for i in range(20)]
    assert all(fired)


def test_no_refire_at_same_instant():
    """Test an event cannot refire at its own instant."""
    cfg = _config(mode="cetc")
    state = TriggerState()
    step(state, [0.0], 0.0, cfg)
    u, fired = step(state, [100.0], 0.0, cfg)
    assert not fired


def test_time_must_not_go_backwards():
    """Test non-monotone time raises."""
    state = TriggerState()
    cfg = _config()
    step(state, [0.0], 1.0, cfg)
    with pytest.raises(UsageException):
        step(state, [0.0], 0.5, cfg)


def _ramp(n=4000, dt=1e-3, slope=20.0):
    times = np.arange(n) * dt
    stream = np.column_stack((slope * times, -0.5 * slope * times))
    return times, stream


def test_petc_at_dt_equals_cetc():
    """Test petc with h = dt and cetc produce identical logs."""
    times, stream = _ramp()
    logs = []
    for mode in ("petc", "cetc"):
        cfg = _config(mode=mode, h=1e-3, dt=1e-3)
        state = TriggerState()
        for i, (t, u) in enumerate(zip(times, stream)):
            step(state, u, t, cfg, index=i)
        logs.append(state.event_log)
    assert logs[0] == logs[1]


def test_replay_matches_online_trigger():
    """Test replay reproduces the online event instants."""
    times, stream = _ramp()
    stream = stream * np.sin(times)[:, None]
    cfg = _config(h=2e-3, dt=1e-3, alpha=0.05, beta0=0.1, T=2.0)
    state = TriggerState()
    for i, (t, u) in enumerate(zip(times, stream)):
        step(state, u, t, cfg, index=i)
    replayed = replay(stream, times, 0.05, 0.1, 2.0, stride=2)
    assert np.array_equal(replayed, state.event_times)


def test_event_count_monotone_in_alpha_and_beta0():
    """Test larger thresholds never add events on a ramp stream."""
    times, stream = _ramp()
    alphas = (0.0, 0.01, 0.05, 0.2)
    counts = [len(replay(stream, times, a, 0.0241, 4.0)) for a in alphas]
    assert all(b <= a for a, b in zip(counts, counts[1:]))
    counts = [len(replay(stream, times, 0.0029, b, 4.0)) for b in (0.0, 0.01, 0.05)]
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_events_respect_rule_and_spacing():
    """Test consecutive events are >= h apart and the rule held in between."""
    times, stream = _ramp()
    cfg = _config(h=5e-3, dt=1e-3, alpha=0.01, beta0=0.01, T=1.0)
    state = TriggerState()
    for i, (t, u) in enumerate(zip(times, stream)):
        u_held = state.u_held
        u_applied, fired = step(state, u, t, cfg, index=i)
        if not fired and i % cfg.stride == 0:
            assert not violates(u, u_held, t, cfg.alpha, cfg.beta0, cfg.T)
    assert np.all(np.diff(state.event_times) >= cfg.h - 1e-12)
    for record in state.event_log[1:]:
        assert record.norm_ue >= 0.01 * record.norm_u_held + record.beta
