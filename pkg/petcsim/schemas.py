# -*- coding: utf-8 -*-

"""
Marshmallow schemas for scenario files.

Each section schema validates its own keys and builds a value object in
``@post_load``; :class:`ScenarioSchema` checks the invariants that span sections.
Keys carry their units (``dt_s``, ``u_max_nm``, ``q_min_rad``).
"""

from marshmallow import (
    fields,
    post_load,
    Schema,
    validate,
    ValidationError,
    validates_schema,
)

from collections import defaultdict
from .controller import check_envelope_slope, ControllerGains
from .exceptions import ConfigurationException
from .plant import (
    ConstraintBox,
    DisturbanceSpec,
    first_infeasible_instant,
    PLANT_MODELS,
    PointMassPlant,
    ReferenceTrajectory,
    TwoLinkArm,
)
from .sim import SimConfig
from .trigger import TRIGGER_MODES, TriggerConfig
import numpy as np

_positive = validate.Range(min=0, min_inclusive=False)
_non_negative = validate.Range(min=0)
_open_unit = validate.Range(0, 1, min_inclusive=False, max_inclusive=False)


def _build(factory, *args, **kwargs):
    try:
        return factory(*args, **kwargs)
    except ConfigurationException as err:
        raise ValidationError(str(err))


class MetadataSchema(Schema):
    """Schema for scenario metadata."""

    name = fields.Str(required=False)
    description = fields.Str(required=False)
    version = fields.Str(required=False)


class PlantSchema(Schema):
    """Schema for the plant section; loads as an :class:`ElPlant`."""

    model = fields.Str(required=True, validate=validate.OneOf(list(PLANT_MODELS)))
    m1_kg = fields.Float(load_default=1.0, validate=_positive)
    m2_kg = fields.Float(load_default=1.0, validate=_positive)
    l1_m = fields.Float(load_default=1.0, validate=_positive)
    l2_m = fields.Float(load_default=1.0, validate=_positive)
    gravity_m_s2 = fields.Float(load_default=9.81, validate=_non_negative)
    friction_nm_s_rad = fields.Float(load_default=0.1, validate=_non_negative)
    payload_kg = fields.Float(load_default=0.0, validate=_non_negative)
    joints = fields.Int(load_default=2, validate=validate.Range(min=1))
    mass_kg = fields.Float(load_default=1.0, validate=_positive)

    @post_load
    def make_plant(self, data, **kwargs):
        if data["model"] == "point_mass":
            if data["payload_kg"] > 0:
                raise ValidationError(
                    {"payload_kg": ['Not supported for model "point_mass".']}
                )
            return _build(
                PointMassPlant,
                n=data["joints"],
                mass=data["mass_kg"],
                friction=data["friction_nm_s_rad"],
            )
        return _build(
            TwoLinkArm,
            m1=data["m1_kg"],
            m2=data["m2_kg"],
            l1=data["l1_m"],
            l2=data["l2_m"],
            gravity=data["gravity_m_s2"],
            friction=data["friction_nm_s_rad"],
            payload=data["payload_kg"],
        )


class ConstraintsSchema(Schema):
    """Schema for the constraint box; loads as :class:`ConstraintBox`."""

    q_min_rad = fields.List(fields.Float(), required=True)
    q_max_rad = fields.List(fields.Float(), required=True)
    v_min_rad_s = fields.List(fields.Float(), required=True)
    v_max_rad_s = fields.List(fields.Float(), required=True)
    u_min_nm = fields.List(fields.Float(), required=True)
    u_max_nm = fields.List(fields.Float(), required=True)

    @post_load
    def make_box(self, data, **kwargs):
        return _build(
            ConstraintBox,
            data["q_min_rad"],
            data["q_max_rad"],
            data["v_min_rad_s"],
            data["v_max_rad_s"],
            data["u_min_nm"],
            data["u_max_nm"],
        )


class ReferenceSchema(Schema):
    """Schema for the reference trajectory; loads as :class:`ReferenceTrajectory`."""

    kind = fields.Str(
        required=True, validate=validate.OneOf(["min_jerk", "sinusoidal"])
    )
    waypoints_rad = fields.List(fields.List(fields.Float()))
    durations_s = fields.List(fields.Float(validate=_positive))
    amplitude_rad = fields.List(fields.Float())
    frequency_rad_s = fields.List(fields.Float())
    phase_rad = fields.List(fields.Float())
    offset_rad = fields.List(fields.Float())

    @validates_schema
    def validate_kind_fields(self, data, **kwargs):
        errors = defaultdict(list)
        required = {
            "min_jerk": ("waypoints_rad", "durations_s"),
            "sinusoidal": ("amplitude_rad", "frequency_rad_s"),
        }[data["kind"]]
        for key in required:
            if key not in data:
                errors[key].append('Required for kind "{}".'.format(data["kind"]))
        if errors:
            raise ValidationError(dict(errors))

    @post_load
    def make_reference(self, data, **kwargs):
        if data["kind"] == "min_jerk":
            try:
                waypoints = np.array(data["waypoints_rad"], dtype=float)
            except ValueError:
                raise ValidationError("Waypoints must all have the same length.")
            if len(data["durations_s"]) not in (1, len(waypoints) - 1):
                raise ValidationError(
                    "Expected one duration per segment, got {}.".format(
                        len(data["durations_s"])
                    )
                )
            return _build(
                ReferenceTrajectory.min_jerk, waypoints, data["durations_s"]
            )
        return _build(
            ReferenceTrajectory.sinusoidal,
            data["amplitude_rad"],
            data["frequency_rad_s"],
            phase=data.get("phase_rad"),
            offset=data.get("offset_rad"),
        )


class DisturbanceSchema(Schema):
    """Schema for the external disturbance; loads as :class:`DisturbanceSpec`."""

    kind = fields.Str(
        load_default="constant", validate=validate.OneOf(DisturbanceSpec.KINDS)
    )
    amplitude_nm = fields.List(fields.Float(), required=True)
    frequency_rad_s = fields.Float(load_default=0.0)
    phase_rad = fields.Float(load_default=0.0)
    start_s = fields.Float(load_default=0.0, validate=_non_negative)
    duration_s = fields.Float(load_default=0.0, validate=_non_negative)
    bound_nm = fields.Float(load_default=None, allow_none=True)

    @post_load
    def make_disturbance(self, data, **kwargs):
        return _build(
            DisturbanceSpec,
            kind=data["kind"],
            amplitude=data["amplitude_nm"],
            frequency=data["frequency_rad_s"],
            phase=data["phase_rad"],
            start=data["start_s"],
            duration=data["duration_s"],
            bound=data["bound_nm"],
        )


class GainsSchema(Schema):
    """Schema for controller gains; loads as :class:`ControllerGains`."""

    k_diag = fields.List(fields.Float(validate=_positive), required=True)
    rho = fields.Float(required=True, validate=_positive)
    omega = fields.Float(required=True, validate=_positive)
    gamma1 = fields.Float(required=True, validate=_positive)
    gamma2 = fields.Float(required=True, validate=_positive)
    eta = fields.Float(required=True, validate=_positive)
    sigma = fields.Float(load_default=None, allow_none=True)

    @post_load
    def make_gains(self, data, **kwargs):
        return _build(
            ControllerGains,
            data["k_diag"],
            data["rho"],
            data["omega"],
            data["gamma1"],
            data["gamma2"],
            data["eta"],
            data["sigma"],
        )


class TriggerSchema(Schema):
    """Schema for the trigger section. Loads as a `dict`; snapping needs ``dt``."""

    mode = fields.Str(load_default="petc", validate=validate.OneOf(TRIGGER_MODES))
    alpha = fields.Float(required=True, validate=_open_unit)
    beta0 = fields.Float(required=True, validate=_open_unit)
    h_s = fields.Float(load_default=None, allow_none=True, validate=_positive)
    prescribed_time_s = fields.Float(required=True, validate=_positive)

    @validates_schema
    def validate_period(self, data, **kwargs):
        if data["mode"] == "petc" and data.get("h_s") is None:
            raise ValidationError({"h_s": ['Required for mode "petc".']})


class SimSchema(Schema):
    """Schema for the simulation section. Loads as a `dict`."""

    dt_s = fields.Float(load_default=1e-4, validate=_positive)
    t_end_s = fields.Float(required=True, validate=_positive)
    q0_rad = fields.List(fields.Float(), load_default=None, allow_none=True)
    initial_offset_deg = fields.Float(load_default=0.0)
    qd0_rad_s = fields.List(fields.Float(), load_default=None, allow_none=True)
    record_stride = fields.Int(load_default=1, validate=validate.Range(min=1))
    record_envelope = fields.Boolean(load_default=False)


class BoundsSchema(Schema):
    """Schema for bound-calculator options. Loads as a `dict`."""

    r = fields.Float(
        load_default=1.0, validate=validate.Range(0, 1, min_inclusive=False)
    )
    grid_points = fields.Int(load_default=50, validate=validate.Range(min=3))
    velocity_grid_points = fields.Int(load_default=7, validate=validate.Range(min=3))
    tbg_grid_points = fields.Int(load_default=10 ** 4, validate=validate.Range(min=2))
    feasibility_samples = fields.Int(load_default=4001, validate=validate.Range(min=2))
    safety_factor = fields.Float(
        load_default=1.1, validate=validate.Range(1, min_inclusive=True)
    )


class ScenarioSchema(Schema):
    """
    Schema for a complete scenario.

    Checks dimension agreement, the torque box sign, the envelope slope condition,
    reference feasibility and the initial state, then snaps the monitoring period
    onto the simulation grid.
    """

    plant = fields.Nested(PlantSchema, required=True)
    constraints = fields.Nested(ConstraintsSchema, required=True)
    reference = fields.Nested(ReferenceSchema, required=True)
    disturbance = fields.Nested(DisturbanceSchema, load_default=None, allow_none=True)
    gains = fields.Nested(GainsSchema, required=True)
    trigger = fields.Nested(TriggerSchema, required=True)
    sim = fields.Nested(SimSchema, required=True)
    bounds = fields.Nested(BoundsSchema, load_default=None, allow_none=True)
    metadata = fields.Nested(MetadataSchema, required=False)

    @validates_schema
    def validate_dimensions(self, data, **kwargs):
        errors = defaultdict(list)
        n = data["plant"].n
        sizes = {
            "constraints": data["constraints"].n,
            "reference": data["reference"].n,
            "gains": len(data["gains"].K),
        }
        if data.get("disturbance") is not None:
            sizes["disturbance"] = len(data["disturbance"].amplitude)
        for key in ("q0_rad", "qd0_rad_s"):
            if data["sim"].get(key) is not None:
                sizes["sim"] = len(data["sim"][key])
        for section, size in sizes.items():
            if size != n:
                errors[section].append(
                    "Dimension {} does not match the plant's {} joints.".format(size, n)
                )
        if errors:
            raise ValidationError(dict(errors))

    @validates_schema
    def validate_envelope(self, data, **kwargs):
        box = data["constraints"]
        errors = defaultdict(list)
        if not (np.all(box.u_lo < 0) and np.all(box.u_hi > 0)):
            errors["constraints"].append(
                "Torque limits must satisfy u_min < 0 < u_max."
            )
        try:
            check_envelope_slope(data["gains"], box)
        except ConfigurationException as err:
            errors["gains"].append(str(err))
        if errors:
            raise ValidationError(dict(errors))

    @validates_schema
    def validate_reference_feasibility(self, data, **kwargs):
        if data["reference"].n != data["constraints"].n:
            return
        bounds = data.get("bounds") or BoundsSchema().load({})
        t_bad = first_infeasible_instant(
            data["reference"],
            data["constraints"],
            data["sim"]["t_end_s"],
            bounds["feasibility_samples"],
        )
        if t_bad is not None:
            raise ValidationError(
                {
                    "reference": [
                        "Reference leaves the constraint box at t = {} s.".format(t_bad)
                    ]
                }
            )

    @post_load
    def make_settings(self, data, **kwargs):
        sim = data["sim"]
        trigger = data["trigger"]
        n = data["plant"].n
        if data.get("bounds") is None:
            data["bounds"] = BoundsSchema().load({})
        if data.get("disturbance") is None:
            data["disturbance"] = DisturbanceSpec("constant", np.zeros(n))
        try:
            data["trigger"] = TriggerConfig.on_grid(
                trigger["mode"],
                trigger["alpha"],
                trigger["beta0"],
                trigger["h_s"],
                trigger["prescribed_time_s"],
                sim["dt_s"],
            )
        except ConfigurationException as err:
            raise ValidationError({"trigger": [str(err)]})

        q_r, qd_r, _ = data["reference"].evaluate(0.0)
        if sim["q0_rad"] is not None:
            q0 = np.array(sim["q0_rad"], dtype=float)
        else:
            q0 = q_r + np.deg2rad(sim["initial_offset_deg"])
        qd0 = qd_r.copy() if sim["qd0_rad_s"] is None else np.array(sim["qd0_rad_s"])
        if not data["constraints"].contains_state(q0, qd0):
            raise ValidationError(
                {"sim": ["Initial state {}, {} is outside the box.".format(q0, qd0)]}
            )
        data["sim"] = SimConfig(
            dt=sim["dt_s"],
            t_end=sim["t_end_s"],
            q0=q0,
            qd0=qd0,
            record_stride=sim["record_stride"],
            record_envelope=sim["record_envelope"],
        )
        return data
