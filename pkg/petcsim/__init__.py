# -*- coding: utf-8 -*-

# flake8: noqa

"""
petcsim
~~~~~~~
petcsim simulates Euler-Lagrange systems (robot arms) under an approximation-free
adaptive barrier controller with prescribed-time convergence, transmitting control
updates through periodic event triggering. It also computes the analytic
inter-event and monitoring-period bounds of the closed loop.

:license: MIT, see LICENSE.rst for more details.
"""

__version__ = "0.1.0"

# Scenarios
from .scenario import BoundOptions, Scenario

# Simulation
from .sim import run, SimConfig, SimResult, sweep

# Bounds
from .bounds import bound_chain, BoundInputs, BoundSet, validate_monitoring_period

# Metrics
from .metrics import compute_run_metrics, RunMetrics

# Plants
from .plant import (
    ConstraintBox,
    DisturbanceSpec,
    ElPlant,
    PointMassPlant,
    ReferenceTrajectory,
    TwoLinkArm,
)

# Controller and trigger
from .controller import ControllerGains, ControllerState, EnvelopeSnapshot
from .tbg import TbgParams
from .trigger import TriggerConfig, TriggerState

# Exceptions
from .exceptions import (
    ConfigurationException,
    NumericalException,
    PetcSimException,
    UsageException,
)

__all__ = [
    # scenarios
    "BoundOptions",
    "Scenario",
    # simulation
    "run",
    "SimConfig",
    "SimResult",
    "sweep",
    # bounds
    "bound_chain",
    "BoundInputs",
    "BoundSet",
    "validate_monitoring_period",
    # metrics
    "compute_run_metrics",
    "RunMetrics",
    # plants
    "ConstraintBox",
    "DisturbanceSpec",
    "ElPlant",
    "PointMassPlant",
    "ReferenceTrajectory",
    "TwoLinkArm",
    # controller and trigger
    "ControllerGains",
    "ControllerState",
    "EnvelopeSnapshot",
    "TbgParams",
    "TriggerConfig",
    "TriggerState",
    # exceptions
    "ConfigurationException",
    "NumericalException",
    "PetcSimException",
    "UsageException",
]
