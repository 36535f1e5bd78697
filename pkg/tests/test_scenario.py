#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""Tests for scenario loading and validation."""

from marshmallow import ValidationError
from petcsim import Scenario
from petcsim.exceptions import ConfigurationException
from petcsim.plant import PointMassPlant, TwoLinkArm
import copy
import math
import numpy as np
import petcsim.scenarios as scenarios
import pytest
import yaml

test_yaml = """
    metadata:
      name: point_mass_test
    plant:
      model: point_mass
      joints: 2
      mass_kg: 1.0
      friction_nm_s_rad: 0.0
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
      prescribed_time_s: 0.5
    sim:
      dt_s: 0.001
      t_end_s: 1.0
      initial_offset_deg: 5.0
"""


def _settings(**changes):
    settings = yaml.safe_load(test_yaml)
    for path, value in changes.items():
        section, key = path.split("__")
        settings[section][key] = value
    return settings


def test_from_yaml():
    """Test loading a minimal scenario and its defaults."""
    scenario = Scenario.from_yaml(test_yaml)
    assert isinstance(scenario.plant, PointMassPlant)
    assert scenario.name == "point_mass_test"
    assert scenario.gains.sigma == 1.0
    assert scenario.trigger.mode == "petc"
    assert scenario.trigger.stride == 2
    assert scenario.sim.dt == 0.001
    assert scenario.sim.record_stride == 1
    assert np.allclose(scenario.sim.q0, np.deg2rad([5.0, 5.0]))
    assert np.allclose(scenario.sim.qd0, [0.2, 0.1])
    assert np.array_equal(scenario.disturbance.at(0.3), [0.0, 0.0])
    assert scenario.bounds.r == 1.0
    assert scenario.bounds.grid_points == 50
    e0, e0_dot = scenario.initial_errors
    assert np.allclose(e0, np.deg2rad(5.0))
    assert np.allclose(e0_dot, 0.0)


def test_from_yaml_file(tmpdir):
    """Test loading from a file."""
    filename = tmpdir.join("scenario.yaml")
    filename.write(test_yaml)
    assert Scenario.from_yaml_file(str(filename)).plant.n == 2


def test_bundled():
    """Test the bundled scenarios load."""
    names = list(scenarios.iter_names())
    assert "two_link_default" in names
    assert "point_mass_sine" in names
    for name in names:
        assert Scenario.bundled(name).name == name
    default = Scenario.bundled("two_link_default")
    assert isinstance(default.plant, TwoLinkArm)
    assert default.trigger.h == pytest.approx(2e-4)
    assert default.trigger.stride == 2
    assert np.allclose(default.sim.q0, np.deg2rad([30.0, 30.0]))
    with pytest.raises(ValueError):
        Scenario.bundled("missing")


def test_h_must_be_multiple_of_dt():
    """Test an off-grid monitoring period names the field."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(trigger__h_s=0.0025))
    assert "trigger.h_s" in str(excinfo.value.messages["trigger"])


def test_petc_requires_h():
    """Test petc mode without h_s fails, cetc does not."""
    settings = _settings()
    del settings["trigger"]["h_s"]
    with pytest.raises(ValidationError):
        Scenario.from_dict(settings)
    settings["trigger"]["mode"] = "cetc"
    assert Scenario.from_dict(settings).trigger.h == 0.001


def test_reference_outside_box():
    """Test an infeasible reference reports the first violating instant."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(reference__amplitude_rad=[1.5, 0.1]))
    message = str(excinfo.value.messages["reference"])
    assert "t = " in message
    # 1.5 sin(t) first reaches 1 at asin(2/3)
    t_bad = float(message.split("t = ")[1].split(" s")[0])
    assert t_bad == pytest.approx(math.asin(2 / 3), abs=1e-3)


def test_gain_invariants():
    """Test gamma2 and the envelope slope are checked at load."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(gains__gamma2=0.8))
    assert "gains" in excinfo.value.messages
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(gains__eta=1.5))
    assert "gains" in excinfo.value.messages


def test_dimension_mismatch():
    """Test sections must agree with the plant's joint count."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(gains__k_diag=[5.0, 5.0, 5.0]))
    assert "gains" in excinfo.value.messages


def test_box_must_straddle_zero_torque():
    """Test u_min < 0 < u_max is required."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(constraints__u_min_nm=[1.0, -10.0]))
    assert "constraints" in excinfo.value.messages


def test_unknown_and_missing_keys():
    """Test schema rejects unknown keys and requires sections."""
    with pytest.raises(ValidationError):
        Scenario.from_dict(_settings(sim__t_end=1.0))
    settings = _settings()
    del settings["gains"]
    with pytest.raises(ValidationError):
        Scenario.from_dict(settings)


def test_initial_state_outside_box():
    """Test the initial state must lie in the box."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(sim__initial_offset_deg=80.0))
    assert "sim" in excinfo.value.messages


def test_with_param():
    """Test rebuilding a scenario with one parameter changed."""
    scenario = Scenario.from_yaml(test_yaml)
    settings = copy.deepcopy(scenario.settings)
    assert scenario.with_param("T", 0.25).trigger.T == 0.25
    assert scenario.with_param("h", 0.003).trigger.stride == 3
    assert scenario.with_param("alpha", 0.1).trigger.alpha == 0.1
    assert scenario.with_param("beta0", 0.2).trigger.beta0 == 0.2
    omega = scenario.with_param("omega", 0.5).gains
    assert omega.omega == omega.sigma == 0.5
    offset = scenario.with_param("offset_deg", 10.0)
    assert np.allclose(offset.sim.q0, np.deg2rad([10.0, 10.0]))
    assert scenario.settings == settings
    with pytest.raises(ConfigurationException):
        scenario.with_param("mass", 2.0)


def test_with_payload():
    """Test the payload sweep parameter reaches the arm."""
    scenario = Scenario.bundled("two_link_default").with_param("payload_kg", 1.0)
    assert scenario.plant.payload == 1.0
    assert scenario.plant.m2 == 2.0


def test_point_mass_rejects_payload():
    """Test a payload is refused by the point-mass model."""
    with pytest.raises(ValidationError) as excinfo:
        Scenario.from_dict(_settings(plant__payload_kg=1.0))
    assert "payload_kg" in excinfo.value.messages["plant"]
    with pytest.raises(ValidationError):
        Scenario.from_yaml(test_yaml).with_param("payload_kg", 1.0)
    assert Scenario.from_dict(_settings(plant__payload_kg=0.0)).plant.n == 2


def test_bound_inputs():
    """Test bound inputs collected from a scenario."""
    scenario = Scenario.from_yaml(test_yaml)
    inputs = scenario.bound_inputs()
    assert inputs.u_bar == 10.0
    assert inputs.nu_bar == 2.0
    assert inputs.K_lo == inputs.K_hi == 5.0
    assert inputs.d_bar == 0.0
    assert inputs.m_hi == pytest.approx(1.1)
    assert inputs.q_r1 == pytest.approx(math.hypot(0.2, 0.1), rel=1e-6)
    assert scenario.bound_inputs(r=0.5).r == 0.5
    bound_set = scenario.bound_set()
    assert bound_set is scenario.bound_set()
    assert 0 < bound_set.a < 1
