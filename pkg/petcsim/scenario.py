# -*- coding: utf-8 -*-

"""
Scenario objects: everything one closed-loop run needs, loaded from YAML.
"""

from collections import namedtuple
from .bounds import bound_chain, BoundInputs, tbg_offset_maxima
from .exceptions import ConfigurationException
from .plant import property_bounds
from .schemas import ScenarioSchema
from .tbg import TbgParams
import copy
import yaml


class BoundOptions(
    namedtuple(
        "BoundOptions",
        [
            "r",
            "grid_points",
            "velocity_grid_points",
            "tbg_grid_points",
            "feasibility_samples",
            "safety_factor",
        ],
    )
):
    """Settings of the bound calculator."""

    __slots__ = ()


# Settings path of each sweepable parameter
PARAMETER_PATHS = {
    "h": ("trigger", "h_s"),
    "alpha": ("trigger", "alpha"),
    "beta0": ("trigger", "beta0"),
    "T": ("trigger", "prescribed_time_s"),
    "omega": ("gains", "omega"),
    "offset_deg": ("sim", "initial_offset_deg"),
    "payload_kg": ("plant", "payload_kg"),
}


class Scenario:
    """
    A validated closed-loop scenario.

    Parameters
    ----------
    plant : `ElPlant`
        Plant model
    constraints : `ConstraintBox`
        State and input constraints
    reference : `ReferenceTrajectory`
        Desired trajectory
    disturbance : `DisturbanceSpec`
        External disturbance
    gains : `ControllerGains`
        Controller gains
    trigger : `TriggerConfig`
        Triggering mechanism, with ``h`` on the simulation grid
    sim : `SimConfig`
        Integration settings and initial state
    bounds : `BoundOptions`
        Bound-calculator settings
    metadata : `dict`, optional
        Free-form metadata (``name``, ``description``, ``version``)
    settings : `dict`, optional
        Raw settings the scenario was loaded from

    Note
    ----
    Use :meth:`from_dict`, :meth:`from_yaml`, :meth:`from_yaml_file` or
    :meth:`bundled`; they validate the settings first.
    """

    def __init__(
        self,
        plant,
        constraints,
        reference,
        disturbance,
        gains,
        trigger,
        sim,
        bounds,
        metadata=None,
        settings=None,
    ):
        self.plant = plant
        self.constraints = constraints
        self.reference = reference
        self.disturbance = disturbance
        self.gains = gains
        self.trigger = trigger
        self.sim = sim
        self.bounds = bounds
        self.metadata = metadata or {}
        self.settings = settings
        self._bound_set = None

    def __repr__(self):
        return "Scenario(name=%r, plant=%r, mode=%r)" % (
            self.name,
            self.plant,
            self.trigger.mode,
        )

    @property
    def name(self):
        """`str`: Scenario name from the metadata, or ``"scenario"``."""
        return self.metadata.get("name", "scenario")

    @property
    def tbg_params(self):
        """`TbgParams`: TBG parameters with the trigger's prescribed time."""
        return TbgParams(self.trigger.T)

    @property
    def initial_errors(self):
        """`tuple` of `numpy.ndarray`: ``(e(0), e_dot(0))``."""
        q_r, qd_r, _ = self.reference.evaluate(0.0)
        return self.sim.q0 - q_r, self.sim.qd0 - qd_r

    def property_bounds(self):
        """`PropertyBounds`: Plant constants sampled over the constraint box."""
        return property_bounds(
            self.plant,
            self.constraints,
            resolution=self.bounds.grid_points,
            velocity_resolution=self.bounds.velocity_grid_points,
            safety=self.bounds.safety_factor,
        )

    def bound_inputs(self, r=None):
        """
        Collect the constants of the bound chain.

        Parameters
        ----------
        r : `float`, optional
            Override of the saturation eigenvalue estimate

        Returns
        -------
        BoundInputs
        """
        props = self.property_bounds()
        ref = self.reference.derived_bounds(
            self.sim.t_end, self.bounds.feasibility_samples
        )
        e0, e0_dot = self.initial_errors
        e_r1, e_r2 = tbg_offset_maxima(
            e0, e0_dot, self.tbg_params, self.bounds.tbg_grid_points
        )
        box = self.constraints
        return BoundInputs(
            m_hi=props.m_hi,
            l_hi=props.l_hi,
            c_bar=props.c_bar,
            g_bar=props.g_bar,
            f_bar=props.f_bar,
            d_bar=self.disturbance.bound,
            q_r1=ref.q_r1,
            q_r2=ref.q_r2,
            e_r1=e_r1,
            e_r2=e_r2,
            K_lo=self.gains.K_lo,
            K_hi=self.gains.K_hi,
            rho=self.gains.rho,
            omega=self.gains.omega,
            gamma1=self.gains.gamma1,
            gamma2=self.gains.gamma2,
            u_bar=float(box.u_hi.max()),
            nu_bar=float(box.v_hi.max()),
            T=self.trigger.T,
            alpha=self.trigger.alpha,
            beta0=self.trigger.beta0,
            r=self.bounds.r if r is None else r,
        )

    def bound_set(self):
        """`BoundSet`: Bound chain for this scenario, computed once."""
        if self._bound_set is None:
            self._bound_set = bound_chain(self.bound_inputs())
        return self._bound_set

    def with_param(self, name, value):
        """
        Rebuild the scenario with one parameter changed.

        Parameters
        ----------
        name : `str`
            One of ``h``, ``alpha``, ``beta0``, ``T``, ``omega``, ``offset_deg``,
            ``payload_kg``
        value : `float`
            New value

        Returns
        -------
        Scenario
            Revalidated copy
        """
        if name not in PARAMETER_PATHS:
            raise ConfigurationException("Unknown scenario parameter %s." % name)
        if self.settings is None:
            raise ConfigurationException("Scenario was not loaded from settings.")
        settings = copy.deepcopy(self.settings)
        section, key = PARAMETER_PATHS[name]
        settings.setdefault(section, {})[key] = value
        if name == "offset_deg":
            settings["sim"].pop("q0_rad", None)
        settings.setdefault("metadata", {})
        settings["metadata"]["name"] = "%s[%s=%s]" % (self.name, name, value)
        return Scenario.from_dict(settings)

    # ---------- static methods ----------

    @staticmethod
    def from_dict(dict_settings):
        """
        Construct a Scenario from a `dict` of settings.

        Parameters
        ----------
        dict_settings : `dict`
            Sections ``plant``, ``constraints``, ``reference``, ``gains``,
            ``trigger``, ``sim`` and optionally ``disturbance``, ``bounds`` and
            ``metadata``

        Returns
        -------
        Scenario

        Raises
        ------
        marshmallow.ValidationError
            Invalid settings, keyed by section
        """
        settings = ScenarioSchema().load(dict_settings)
        return Scenario(
            settings["plant"],
            settings["constraints"],
            settings["reference"],
            settings["disturbance"],
            settings["gains"],
            settings["trigger"],
            settings["sim"],
            BoundOptions(**settings["bounds"]),
            metadata=settings.get("metadata"),
            settings=copy.deepcopy(dict_settings),
        )

    @staticmethod
    def from_yaml(yaml_str):
        """
        Construct a Scenario from a YAML string.

        Example
        -------
        .. code-block:: yaml

          plant: {model: point_mass, joints: 1}
          constraints:
            q_min_rad: [-1.0]
            q_max_rad: [1.0]
            v_min_rad_s: [-2.0]
            v_max_rad_s: [2.0]
            u_min_nm: [-10.0]
            u_max_nm: [10.0]
          reference: {kind: sinusoidal, amplitude_rad: [0.2], frequency_rad_s: [1.0]}
          gains: {k_diag: [5.0], rho: 2.0, omega: 1.0, gamma1: 1.0, gamma2: 0.4,
                  eta: 10.0}
          trigger: {alpha: 0.01, beta0: 0.02, h_s: 0.001, prescribed_time_s: 1.0}
          sim: {dt_s: 0.001, t_end_s: 2.0}

        See Also
        --------
        from_dict : Constructor from a dictionary of settings
        from_yaml_file : Constructor from a YAML file
        """
        return Scenario.from_dict(yaml.safe_load(yaml_str))

    @staticmethod
    def from_yaml_file(yaml_filename):
        """
        Construct a Scenario from a YAML file.

        See Also
        --------
        from_yaml : Constructor from a YAML string
        """
        with open(yaml_filename, "r") as f:
            return Scenario.from_yaml(f.read())

    @staticmethod
    def bundled(name):
        """
        Load a bundled scenario by name.

        See Also
        --------
        petcsim.scenarios.iter_names : Names of the bundled scenarios
        """
        from .scenarios import path_of

        return Scenario.from_yaml_file(path_of(name))

