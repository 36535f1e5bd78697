# -*- coding: utf-8 -*-

"""
Euler-Lagrange plant models, constraint boxes, disturbances and reference
trajectories.

Plants implement ``M(q) qdd + C(q, qd) qd + G(q) + F(qd) + d(t) = u``. They are
immutable after construction and only used inside the simulator; the controller
never reads them.
"""

from abc import ABC, abstractmethod
from collections import namedtuple
from .exceptions import ConfigurationException, NumericalException
import itertools
import logging
import math
import numpy as np

logger = logging.getLogger("petcsim")

DEFAULT_SAFETY_FACTOR = 1.1


def _vector(values, name):
    v = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(v)):
        raise ConfigurationException("%s must be finite, got %s." % (name, values))
    return v


# ---------- plants ----------


class ElPlant(ABC):
    """
    Abstract Euler-Lagrange dynamics.

    Subclasses provide the inertia matrix, the Coriolis matrix in a form for which
    ``Mdot - 2C`` is skew-symmetric, the gravity vector and a friction term that
    vanishes at zero velocity.
    """

    @property
    @abstractmethod
    def n(self):
        """`int`: Number of joints."""

    @abstractmethod
    def mass_matrix(self, q):
        """Symmetric positive-definite inertia matrix ``M(q)``, shape (n, n)."""

    @abstractmethod
    def coriolis(self, q, q_dot):
        """Centripetal and Coriolis matrix ``C(q, qd)``, shape (n, n)."""

    @abstractmethod
    def gravity(self, q):
        """Gravity vector ``G(q)``, in N m."""

    @abstractmethod
    def friction(self, q_dot):
        """Friction vector ``F(qd)``, in N m."""

    def kinetic_energy(self, q, q_dot):
        """`float`: ``0.5 qd^T M(q) qd``, in J."""
        q_dot = np.asarray(q_dot, dtype=float)
        return 0.5 * float(q_dot @ self.mass_matrix(q) @ q_dot)


class TwoLinkArm(ElPlant):
    """
    Planar two-link revolute arm moving in a vertical plane.

    Links are uniform rods (centre of mass at mid-link, inertia ``m L^2 / 12``) unless
    overridden. ``q1`` is measured from the horizontal, ``q2`` relative to link 1.
    An optional payload is a point mass at the tip of link 2 and is folded into the
    link-2 mass, centre of mass and inertia.

    Parameters
    ----------
    m1, m2 : `float`
        Link masses, in kg
    l1, l2 : `float`
        Link lengths, in m
    lc1, lc2 : `float`, optional
        Distances to the link centres of mass, in m (default mid-link)
    I1, I2 : `float`, optional
        Link inertias about their centres of mass, in kg m^2 (default rod)
    gravity : `float`
        Gravitational acceleration, in m/s^2
    friction : `float`
        Viscous friction coefficient, in N m s/rad
    payload : `float`
        Tip payload, in kg
    """

    def __init__(
        self,
        m1=1.0,
        m2=1.0,
        l1=1.0,
        l2=1.0,
        lc1=None,
        lc2=None,
        I1=None,
        I2=None,
        gravity=9.81,
        friction=0.1,
        payload=0.0,
    ):
        if min(m1, m2, l1, l2) <= 0:
            raise ConfigurationException("Link masses and lengths must be > 0.")
        if payload < 0 or friction < 0:
            raise ConfigurationException("Payload and friction must be >= 0.")
        lc1 = l1 / 2.0 if lc1 is None else lc1
        lc2 = l2 / 2.0 if lc2 is None else lc2
        I1 = m1 * l1 ** 2 / 12.0 if I1 is None else I1
        I2 = m2 * l2 ** 2 / 12.0 if I2 is None else I2
        if payload:
            m2_total = m2 + payload
            lc2_total = (m2 * lc2 + payload * l2) / m2_total
            I2 = I2 + m2 * (lc2 - lc2_total) ** 2 + payload * (l2 - lc2_total) ** 2
            m2, lc2 = m2_total, lc2_total
        self.m1, self.m2, self.l1, self.l2 = m1, m2, l1, l2
        self.lc1, self.lc2, self.I1, self.I2 = lc1, lc2, I1, I2
        self.g = gravity
        self.b = friction
        self.payload = payload
        # Constant groupings of the closed-form model
        self._a = I1 + I2 + m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2)
        self._b = m2 * l1 * lc2
        self._d = I2 + m2 * lc2 ** 2
        self._g1 = (m1 * lc1 + m2 * l1) * gravity
        self._g2 = m2 * lc2 * gravity

    def __repr__(self):
        return "TwoLinkArm(m1=%s, m2=%s, l1=%s, l2=%s, gravity=%s, friction=%s)" % (
            self.m1,
            self.m2,
            self.l1,
            self.l2,
            self.g,
            self.b,
        )

    @property
    def n(self):
        return 2

    def mass_matrix(self, q):
        c2 = math.cos(q[1])
        m12 = self._d + self._b * c2
        return np.array([[self._a + 2.0 * self._b * c2, m12], [m12, self._d]])

    def coriolis(self, q, q_dot):
        h = -self._b * math.sin(q[1])
        return np.array(
            [[h * q_dot[1], h * (q_dot[0] + q_dot[1])], [-h * q_dot[0], 0.0]]
        )

    def gravity(self, q):
        c12 = math.cos(q[0] + q[1])
        return np.array(
            [self._g1 * math.cos(q[0]) + self._g2 * c12, self._g2 * c12]
        )

    def friction(self, q_dot):
        return self.b * np.asarray(q_dot, dtype=float)


class PointMassPlant(ElPlant):
    """
    Decoupled point masses: ``M = m I``, no Coriolis or gravity terms.

    Parameters
    ----------
    n : `int`
        Number of joints
    mass : `float`
        Mass (or inertia) of each joint
    friction : `float`
        Viscous friction coefficient
    """

    def __init__(self, n=2, mass=1.0, friction=0.0):
        if n < 1 or mass <= 0 or friction < 0:
            raise ConfigurationException("Invalid point-mass plant parameters.")
        self._n = int(n)
        self.mass = mass
        self.b = friction

    def __repr__(self):
        return "PointMassPlant(n=%s, mass=%s, friction=%s)" % (
            self._n,
            self.mass,
            self.b,
        )

    @property
    def n(self):
        return self._n

    def mass_matrix(self, q):
        return self.mass * np.eye(self._n)

    def coriolis(self, q, q_dot):
        return np.zeros((self._n, self._n))

    def gravity(self, q):
        return np.zeros(self._n)

    def friction(self, q_dot):
        return self.b * np.asarray(q_dot, dtype=float)


PLANT_MODELS = {"two_link_arm": TwoLinkArm, "point_mass": PointMassPlant}


def forward_dynamics(plant, q, q_dot, u, d):
    """
    Solve the equations of motion for the joint accelerations.

    ``qdd = M(q)^-1 (u - C(q, qd) qd - G(q) - F(qd) - d)``

    Raises
    ------
    NumericalException
        The inertia matrix could not be inverted at ``q``
    """
    rhs = (
        u
        - plant.coriolis(q, q_dot) @ q_dot
        - plant.gravity(q)
        - plant.friction(q_dot)
        - d
    )
    try:
        return np.linalg.solve(plant.mass_matrix(q), rhs)
    except np.linalg.LinAlgError as err:
        raise NumericalException(
            "Inertia matrix is singular at q=%s: %s" % (q, err), state=np.array(q)
        )


# ---------- constraints ----------


class ConstraintBox(
    namedtuple("ConstraintBox", ["q_lo", "q_hi", "v_lo", "v_hi", "u_lo", "u_hi"])
):
    """
    Componentwise state and input constraints.

    Attributes
    ----------
    q_lo, q_hi : `numpy.ndarray`
        Joint position limits, in rad
    v_lo, v_hi : `numpy.ndarray`
        Joint velocity limits, in rad/s
    u_lo, u_hi : `numpy.ndarray`
        Joint torque limits, in N m
    """

    __slots__ = ()

    def __new__(cls, q_lo, q_hi, v_lo, v_hi, u_lo, u_hi):
        values = [
            _vector(v, name)
            for v, name in zip(
                (q_lo, q_hi, v_lo, v_hi, u_lo, u_hi),
                ("q_lo", "q_hi", "v_lo", "v_hi", "u_lo", "u_hi"),
            )
        ]
        n = len(values[0])
        if any(len(v) != n for v in values):
            raise ConfigurationException("Constraint vectors differ in dimension.")
        for lo, hi, name in zip(values[::2], values[1::2], ("q", "v", "u")):
            if not np.all(lo < hi):
                raise ConfigurationException(
                    "Constraint box for %s is not strictly ordered: %s vs %s."
                    % (name, lo, hi)
                )
        return super().__new__(cls, *values)

    @property
    def n(self):
        """`int`: Number of joints."""
        return len(self.q_lo)

    def contains_state(self, q, q_dot):
        """`bool`: True if ``q`` and ``qd`` lie (non-strictly) inside the box."""
        return bool(
            np.all(self.q_lo <= q)
            and np.all(q <= self.q_hi)
            and np.all(self.v_lo <= q_dot)
            and np.all(q_dot <= self.v_hi)
        )

    def contains_input(self, u):
        """`bool`: True if ``u`` lies (non-strictly) inside the torque box."""
        return bool(np.all(self.u_lo <= u) and np.all(u <= self.u_hi))


# ---------- disturbances ----------


class DisturbanceSpec(
    namedtuple(
        "DisturbanceSpec",
        ["kind", "amplitude", "frequency", "phase", "start", "duration", "bound"],
    )
):
    """
    External disturbance ``d(t)`` with a known norm bound.

    Attributes
    ----------
    kind : `str`
        ``"constant"``, ``"sinusoidal"`` or ``"pulse"``
    amplitude : `numpy.ndarray`
        Per-joint amplitude, in N m
    frequency : `float`
        Angular frequency, in rad/s (sinusoidal only)
    phase : `float`
        Phase, in rad (sinusoidal only)
    start, duration : `float`
        Pulse window, in s (pulse only)
    bound : `float`
        Norm bound ``d_bar``, in N m; defaults to ``||amplitude||``
    """

    __slots__ = ()

    KINDS = ("constant", "sinusoidal", "pulse")

    def __new__(
        cls,
        kind="constant",
        amplitude=(0.0,),
        frequency=0.0,
        phase=0.0,
        start=0.0,
        duration=0.0,
        bound=None,
    ):
        if kind not in cls.KINDS:
            raise ConfigurationException("Unknown disturbance kind %s." % kind)
        amplitude = _vector(amplitude, "amplitude")
        norm = float(np.linalg.norm(amplitude))
        bound = norm if bound is None else float(bound)
        if bound < norm:
            raise ConfigurationException(
                "Disturbance bound %s is below the amplitude norm %s." % (bound, norm)
            )
        return super().__new__(
            cls, kind, amplitude, float(frequency), float(phase), float(start),
            float(duration), bound,
        )

    def at(self, t):
        """`numpy.ndarray`: Disturbance torque at time ``t``, in N m."""
        if self.kind == "constant":
            return self.amplitude
        if self.kind == "sinusoidal":
            return self.amplitude * math.sin(self.frequency * t + self.phase)
        if self.start <= t < self.start + self.duration:
            return self.amplitude
        return np.zeros_like(self.amplitude)


# ---------- reference trajectories ----------


class ReferenceBounds(namedtuple("ReferenceBounds", ["q_r", "q_r1", "q_r2"])):
    """
    Sampled norm bounds of a reference trajectory.

    Attributes
    ----------
    q_r : `float`
        ``max ||q_r(t)||``, in rad
    q_r1 : `float`
        ``max ||qd_r(t)||``, in rad/s
    q_r2 : `float`
        ``max ||qdd_r(t)||``, in rad/s^2
    """

    __slots__ = ()


class ReferenceTrajectory:
    """
    Desired joint trajectory with exact first and second derivatives.

    Use :meth:`min_jerk` or :meth:`sinusoidal` to construct one.

    Parameters
    ----------
    kind : `str`
        ``"min_jerk"`` or ``"sinusoidal"``
    **params
        Kind-specific arrays; see the constructors
    """

    def __init__(self, kind, **params):
        self.kind = kind
        self.params = params
        if kind == "min_jerk":
            self._evaluate = self._evaluate_min_jerk
            self._starts = np.concatenate(([0.0], np.cumsum(params["durations"])))
        elif kind == "sinusoidal":
            self._evaluate = self._evaluate_sinusoidal
        else:
            raise ConfigurationException("Unknown reference kind %s." % kind)

    def __repr__(self):
        return "ReferenceTrajectory(kind=%r, n=%s)" % (self.kind, self.n)

    @property
    def n(self):
        """`int`: Number of joints."""
        if self.kind == "min_jerk":
            return self.params["waypoints"].shape[1]
        return len(self.params["amplitude"])

    @classmethod
    def min_jerk(cls, waypoints, durations):
        """
        Rest-to-rest minimum-jerk segments through ``waypoints``.

        Each segment ``k`` moves from ``waypoints[k]`` to ``waypoints[k+1]`` in
        ``durations[k]`` seconds along the quintic ``10s^3 - 15s^4 + 6s^5``. The
        trajectory starts at ``t = 0`` and holds the last waypoint afterwards.

        Parameters
        ----------
        waypoints : array_like, shape (m, n)
            At least two joint configurations, in rad
        durations : `float` or array_like, shape (m - 1,)
            Segment durations, in s
        """
        waypoints = np.atleast_2d(np.array(waypoints, dtype=float))
        if waypoints.shape[0] < 2:
            raise ConfigurationException("Minimum-jerk reference needs two waypoints.")
        durations = np.broadcast_to(
            np.array(durations, dtype=float), (waypoints.shape[0] - 1,)
        ).copy()
        if not np.all(durations > 0):
            raise ConfigurationException("Segment durations must be > 0.")
        return cls("min_jerk", waypoints=waypoints, durations=durations)

    @classmethod
    def sinusoidal(cls, amplitude, frequency, phase=None, offset=None):
        """
        Per-joint sinusoid ``offset + A sin(w t + phase)``.

        Parameters
        ----------
        amplitude : array_like
            Amplitudes, in rad
        frequency : array_like
            Angular frequencies, in rad/s
        phase, offset : array_like, optional
            Phases (rad) and offsets (rad), default zero
        """
        amplitude = _vector(amplitude, "amplitude")
        n = len(amplitude)
        frequency = np.broadcast_to(_vector(frequency, "frequency"), (n,)).copy()
        phase = np.zeros(n) if phase is None else _vector(phase, "phase")
        offset = np.zeros(n) if offset is None else _vector(offset, "offset")
        if not len(phase) == len(offset) == n:
            raise ConfigurationException("Sinusoid parameters differ in dimension.")
        return cls(
            "sinusoidal", amplitude=amplitude, frequency=frequency, phase=phase,
            offset=offset,
        )

    def _evaluate_min_jerk(self, t):
        waypoints = self.params["waypoints"]
        durations = self.params["durations"]
        k = int(np.searchsorted(self._starts, t, side="right")) - 1
        if k >= len(durations):
            zero = np.zeros(waypoints.shape[1])
            return waypoints[-1].copy(), zero, zero.copy()
        k = max(k, 0)
        D = durations[k]
        s = min(max((t - self._starts[k]) / D, 0.0), 1.0)
        delta = waypoints[k + 1] - waypoints[k]
        s2 = s * s
        pos = s2 * s * (10.0 + s * (-15.0 + 6.0 * s))
        vel = s2 * (30.0 + s * (-60.0 + 30.0 * s)) / D
        acc = s * (60.0 + s * (-180.0 + 120.0 * s)) / D ** 2
        return waypoints[k] + delta * pos, delta * vel, delta * acc

    def _evaluate_sinusoidal(self, t):
        p = self.params
        arg = p["frequency"] * t + p["phase"]
        s = np.sin(arg)
        return (
            p["offset"] + p["amplitude"] * s,
            p["amplitude"] * p["frequency"] * np.cos(arg),
            -p["amplitude"] * p["frequency"] ** 2 * s,
        )

    def evaluate(self, t):
        """`tuple` of `numpy.ndarray`: ``(q_r, qd_r, qdd_r)`` at time ``t``."""
        return self._evaluate(t)

    def sample(self, horizon, n_samples):
        """
        Sample the trajectory densely on ``[0, horizon]``.

        Returns
        -------
        `tuple` of `numpy.ndarray`
            Times, shape (n_samples,), and ``q_r``, ``qd_r``, ``qdd_r`` each of shape
            (n_samples, n)
        """
        times = np.linspace(0.0, horizon, int(n_samples))
        rows = [self._evaluate(t) for t in times]
        return times, *(np.array(_) for _ in zip(*rows))

    def derived_bounds(self, horizon, n_samples=4001):
        """`ReferenceBounds`: Norm maxima over dense samples of ``[0, horizon]``."""
        _, q_r, qd_r, qdd_r = self.sample(horizon, n_samples)
        return ReferenceBounds(
            q_r=float(np.max(np.linalg.norm(q_r, axis=1))),
            q_r1=float(np.max(np.linalg.norm(qd_r, axis=1))),
            q_r2=float(np.max(np.linalg.norm(qdd_r, axis=1))),
        )


def reference(traj, t):
    """`tuple` of `numpy.ndarray`: ``(q_r, qd_r, qdd_r)`` of ``traj`` at ``t``."""
    return traj.evaluate(t)


def first_infeasible_instant(traj, box, horizon, n_samples=4001):
    """
    Find the first sampled instant at which the reference leaves the state box.

    Returns
    -------
    `float` or `None`
        Earliest sampled time with ``q_r`` or ``qd_r`` outside the (open) box, or
        `None` if every sample is strictly inside.
    """
    times, q_r, qd_r, _ = traj.sample(horizon, n_samples)
    inside = (
        np.all(box.q_lo < q_r, axis=1)
        & np.all(q_r < box.q_hi, axis=1)
        & np.all(box.v_lo < qd_r, axis=1)
        & np.all(qd_r < box.v_hi, axis=1)
    )
    bad = np.flatnonzero(~inside)
    return float(times[bad[0]]) if len(bad) else None


# ---------- property bounds ----------


class PropertyBounds(
    namedtuple(
        "PropertyBounds",
        ["m_lo", "m_hi", "l_lo", "l_hi", "c_bar", "g_bar", "f_bar"],
    )
):
    """
    Sampled, inflated constants of the inertia, Coriolis, gravity and friction
    bounds.

    Attributes
    ----------
    m_lo, m_hi : `float`
        Bounds on the eigenvalues of ``M(q)``
    l_lo, l_hi : `float`
        Bounds on the eigenvalues of ``M(q)^-1``
    c_bar : `float`
        ``||C(q, qd)|| <= c_bar ||qd||``
    g_bar : `float`
        ``||G(q)|| <= g_bar``
    f_bar : `float`
        ``||F(qd)|| <= f_bar ||qd||``
    """

    __slots__ = ()


def _grid(lo, hi, points):
    axes = [np.linspace(a, b, points) for a, b in zip(lo, hi)]
    return np.array(list(itertools.product(*axes)))


def property_bounds(
    plant, box, resolution=50, velocity_resolution=7, safety=DEFAULT_SAFETY_FACTOR
):
    """
    Estimate the plant property constants by grid sampling over the constraint box.

    Upper bounds are multiplied by ``safety`` and lower bounds divided by it.

    Parameters
    ----------
    plant : `ElPlant`
        Plant to sample
    box : `ConstraintBox`
        Position grid spans ``[q_lo, q_hi]``, velocity grid ``[v_lo, v_hi]``
    resolution : `int`
        Points per position dimension (for ``n > 2`` reduced so that the grid keeps
        about ``resolution**2`` points)
    velocity_resolution : `int`
        Points per velocity dimension
    safety : `float`
        Inflation factor

    Returns
    -------
    PropertyBounds
    """
    n = plant.n
    if n > 2:
        resolution = max(3, int(round(resolution ** (2.0 / n))))
        velocity_resolution = max(3, min(velocity_resolution, 5))
    q_grid = _grid(box.q_lo, box.q_hi, resolution)
    v_grid = _grid(box.v_lo, box.v_hi, velocity_resolution)
    v_grid = v_grid[np.linalg.norm(v_grid, axis=1) > 1e-6]
    v_norms = np.linalg.norm(v_grid, axis=1)

    masses = np.array([plant.mass_matrix(q) for q in q_grid])
    eigs = np.linalg.eigvalsh(masses)
    m_min, m_max = float(eigs.min()), float(eigs.max())

    g_max = max(float(np.linalg.norm(plant.gravity(q))) for q in q_grid)

    c_max = 0.0
    for q in q_grid:
        coriolis = np.array([plant.coriolis(q, v) for v in v_grid])
        ratios = np.linalg.norm(coriolis, ord=2, axis=(1, 2)) / v_norms
        c_max = max(c_max, float(ratios.max()))

    f_max = max(
        float(np.linalg.norm(plant.friction(v))) / vn for v, vn in zip(v_grid, v_norms)
    )

    return PropertyBounds(
        m_lo=m_min / safety,
        m_hi=m_max * safety,
        l_lo=1.0 / m_max / safety,
        l_hi=1.0 / m_min * safety,
        c_bar=c_max * safety,
        g_bar=g_max * safety,
        f_bar=f_max * safety,
    )
