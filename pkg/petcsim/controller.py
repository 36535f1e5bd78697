# -*- coding: utf-8 -*-

"""
Approximation-free adaptive barrier control law.

The controller regulates the filtered error ``xi = eps_dot + K eps`` built from the
TBG-transformed tracking error. A barrier gain ``Pi = rho ||xi|| / (omega - ||xi||)``
keeps ``||xi||`` below ``omega``; an auxiliary state ``chi`` of dimension ``2n`` is
driven by ``chi_dot = -gamma1 chi + gamma1 gamma2 J xi`` with ``J = [-I; I]``.

Every function here is pure. :class:`ControllerState` is a plain value advanced by
the simulation loop.
"""

from collections import namedtuple
from .exceptions import ConfigurationException
from .tbg import tbg_offset
import logging
import math
import numpy as np

logger = logging.getLogger("petcsim")

J_NORM = math.sqrt(2.0)
UNIT_VECTOR_TOLERANCE = 1e-9
BARRIER_CLAMP = 1e-6


class ControllerGains(
    namedtuple(
        "ControllerGains", ["K", "rho", "omega", "gamma1", "gamma2", "eta", "sigma"]
    )
):
    """
    Gains of the barrier controller.

    Attributes
    ----------
    K : `numpy.ndarray`
        Diagonal of the positive-definite filter gain matrix
    rho : `float`
        Barrier gain scale, > 0
    omega : `float`
        Bound on ``||xi||``, > 0
    gamma1 : `float`
        Decay rate of ``chi``, > 0
    gamma2 : `float`
        Coupling of ``chi`` to ``J xi``, in ``(0, 1/sqrt(2)]``
    eta : `float`
        Slope of the position-to-velocity envelope, > 0
    sigma : `float`
        Envelope safety margin, >= 0; defaults to ``omega``
    """

    __slots__ = ()

    def __new__(cls, K, rho, omega, gamma1, gamma2, eta, sigma=None):
        K = np.array(K, dtype=float).reshape(-1)
        if K.size == 0 or not np.all(K > 0):
            raise ConfigurationException("Gain K must be positive, got %s." % K)
        for name, value in (
            ("rho", rho),
            ("omega", omega),
            ("gamma1", gamma1),
            ("gamma2", gamma2),
            ("eta", eta),
        ):
            if not value > 0:
                raise ConfigurationException(
                    "Gain %s must be > 0, got %s." % (name, value)
                )
        if gamma2 > 1.0 / J_NORM:
            raise ConfigurationException(
                "Gain gamma2 must be <= 1/sqrt(2), got %s." % gamma2
            )
        sigma = float(omega) if sigma is None else float(sigma)
        if sigma < 0:
            raise ConfigurationException("Margin sigma must be >= 0, got %s." % sigma)
        return super().__new__(
            cls, K, float(rho), float(omega), float(gamma1), float(gamma2),
            float(eta), sigma,
        )

    @property
    def K_lo(self):
        """`float`: Smallest eigenvalue of ``K``."""
        return float(self.K.min())

    @property
    def K_hi(self):
        """`float`: Largest eigenvalue of ``K``."""
        return float(self.K.max())


class ControllerState(namedtuple("ControllerState", ["chi", "e0", "e0_dot", "t0"])):
    """
    Auxiliary state of the controller and the errors latched at ``t0``.

    Attributes
    ----------
    chi : `numpy.ndarray`
        Auxiliary vector of length ``2n``
    e0, e0_dot : `numpy.ndarray`
        Tracking error and rate at ``t0``
    t0 : `float`
        Start time, in s
    """

    __slots__ = ()

    @classmethod
    def initial(cls, e0, e0_dot, t0=0.0):
        """`ControllerState`: ``chi = 0`` with the given latched errors."""
        e0 = np.array(e0, dtype=float)
        return cls(np.zeros(2 * len(e0)), e0, np.array(e0_dot, dtype=float), float(t0))


class EnvelopeSnapshot(
    namedtuple(
        "EnvelopeSnapshot",
        [
            "x_lo",
            "x_hi",
            "y_lo",
            "y_hi",
            "e1_lo",
            "e1_hi",
            "psi0_lo",
            "psi0_hi",
            "feasible",
        ],
    )
):
    """
    Time-varying constraint envelope on the filtered error.

    ``x`` are position margins and ``y`` velocity margins relative to the reference,
    ``e1`` the resulting bounds on the error rate, ``psi0`` the bounds on ``xi``.
    ``feasible`` is True when ``psi0_lo + sigma < psi0_hi - sigma`` for every joint.
    """

    __slots__ = ()


class ControlOutput(
    namedtuple("ControlOutput", ["xi", "upsilon", "Pi", "tau_c", "u_c", "clamped"])
):
    """
    One evaluation of the control law.

    Attributes
    ----------
    xi : `numpy.ndarray`
        Filtered error
    upsilon : `float`
        Growth factor ``4 max{1, ||eps||, ||eps_dot||, ||eps|| ||eps_dot||}``
    Pi : `float`
        Barrier gain
    tau_c : `numpy.ndarray`
        Unconstrained torque
    u_c : `numpy.ndarray`
        Saturated torque
    clamped : `bool`
        Whether ``||xi||`` was clamped below ``omega``
    """

    __slots__ = ()


def filtered_error(eps, eps_dot, K):
    """`numpy.ndarray`: ``xi = eps_dot + K eps`` for a diagonal ``K``."""
    K = np.asarray(K, dtype=float)
    if K.ndim == 2:
        return np.asarray(eps_dot) + K @ np.asarray(eps)
    return np.asarray(eps_dot) + K * np.asarray(eps)


def upsilon(eps, eps_dot):
    """`float`: ``4 max{1, ||eps||, ||eps_dot||, ||eps|| ||eps_dot||}``, at least 4."""
    a = float(np.linalg.norm(eps))
    b = float(np.linalg.norm(eps_dot))
    return 4.0 * max(1.0, a, b, a * b)


def _barrier_norm(xi, omega):
    norm = float(np.linalg.norm(xi))
    ceiling = (1.0 - BARRIER_CLAMP) * omega
    if norm > ceiling:
        return ceiling, True
    return norm, False


def adaptive_gain(xi, rho, omega):
    """
    Compute the barrier gain ``Pi = rho ||xi|| / (omega - ||xi||)``.

    If ``||xi||`` exceeds ``(1 - 1e-6) omega`` it is clamped there and a warning is
    logged, so the result is always finite and non-negative.

    Parameters
    ----------
    xi : array_like
        Filtered error
    rho, omega : `float`
        Barrier gains

    Returns
    -------
    `float`
        Barrier gain
    """
    norm, clamped = _barrier_norm(xi, omega)
    if clamped:
        logger.warning(
            "||xi|| = %s reached the barrier %s; clamped.", np.linalg.norm(xi), omega
        )
    return rho * norm / (omega - norm)


def chi_derivative(chi, xi, gamma1, gamma2):
    """`numpy.ndarray`: ``-gamma1 chi + gamma1 gamma2 [-xi; xi]``."""
    xi = np.asarray(xi, dtype=float)
    return -gamma1 * np.asarray(chi) + gamma1 * gamma2 * np.concatenate((-xi, xi))


def _unit(xi):
    norm = float(np.linalg.norm(xi))
    if norm <= UNIT_VECTOR_TOLERANCE:
        return np.zeros_like(np.asarray(xi, dtype=float))
    return np.asarray(xi, dtype=float) / norm


def _control_raw(xi, Pi, Ups, chi):
    return -Pi * (Ups + float(np.linalg.norm(chi)) * J_NORM) * _unit(xi)


def control_raw(xi, eps, eps_dot, chi, gains):
    """
    Compute the unconstrained torque.

    ``tau_c = -Pi (Upsilon + ||chi|| sqrt(2)) xi / ||xi||``, with the unit vector taken
    as zero when ``||xi|| <= 1e-9``.

    Returns
    -------
    `numpy.ndarray`
        Torque, in N m
    """
    Pi = adaptive_gain(xi, gains.rho, gains.omega)
    return _control_raw(xi, Pi, upsilon(eps, eps_dot), chi)


def saturation_gains(tau, box):
    """
    Diagonal of the saturation matrix ``S``.

    ``S_i = u_hi/tau_i`` above the box, ``u_lo/tau_i`` below it, 1 otherwise.

    Raises
    ------
    ConfigurationException
        The torque box does not straddle zero
    """
    tau = np.asarray(tau, dtype=float)
    if not (np.all(box.u_lo < 0) and np.all(box.u_hi > 0)):
        raise ConfigurationException("Torque box must satisfy u_lo < 0 < u_hi.")
    S = np.ones_like(tau)
    above = tau > box.u_hi
    below = tau < box.u_lo
    S[above] = box.u_hi[above] / tau[above]
    S[below] = box.u_lo[below] / tau[below]
    return S


def saturate(tau, box):
    """
    Clip the torque to ``[u_lo, u_hi]`` componentwise.

    Components with ``S_i < 1`` are replaced by the limit itself, which is the value
    of ``S_i tau_i`` without the rounding of the division.

    Parameters
    ----------
    tau : array_like
        Unconstrained torque
    box : `ConstraintBox`
        Constraint box providing ``u_lo`` and ``u_hi``

    Returns
    -------
    `numpy.ndarray`
        Saturated torque
    """
    tau = np.asarray(tau, dtype=float)
    S = saturation_gains(tau, box)
    limit = np.where(tau > 0, box.u_hi, box.u_lo)
    return np.where(S < 1.0, limit, np.clip(tau, box.u_lo, box.u_hi))


def check_envelope_slope(gains, box):
    """
    Require ``eta > max_i (v_hi_i - v_lo_i) / (q_hi_i - q_lo_i)``.

    Raises
    ------
    ConfigurationException
        The slope condition fails
    """
    slope = float(np.max((box.v_hi - box.v_lo) / (box.q_hi - box.q_lo)))
    if not gains.eta > slope:
        raise ConfigurationException(
            "Envelope slope eta = %s must exceed %s." % (gains.eta, slope)
        )
    return slope


def envelope(e, eps, t, box, traj, gains, e0, e0_dot, tbg_params):
    """
    Evaluate the constraint envelope at time ``t``.

    Parameters
    ----------
    e : array_like
        Tracking error ``q - q_r``
    eps : array_like
        TBG-transformed error
    t : `float`
        Time, in s
    box : `ConstraintBox`
        State and input constraints
    traj : `ReferenceTrajectory`
        Reference trajectory
    gains : `ControllerGains`
        Controller gains (``K``, ``eta``, ``sigma``)
    e0, e0_dot : array_like
        Errors latched at ``t0``
    tbg_params : `TbgParams`
        TBG parameters

    Returns
    -------
    EnvelopeSnapshot
    """
    q_r, qd_r, _ = traj.evaluate(t)
    e = np.asarray(e, dtype=float)
    x_lo, x_hi = box.q_lo - q_r, box.q_hi - q_r
    y_lo, y_hi = box.v_lo - qd_r, box.v_hi - qd_r
    e1_lo = np.maximum(y_lo, gains.eta * (x_lo - e))
    e1_hi = np.minimum(y_hi, gains.eta * (x_hi - e))
    _, offset_dot, _ = tbg_offset(e0, e0_dot, t, tbg_params)
    k_eps = filtered_error(eps, np.zeros_like(e), gains.K)
    psi0_lo = e1_lo - offset_dot + k_eps
    psi0_hi = e1_hi - offset_dot + k_eps
    feasible = bool(np.all(psi0_lo + gains.sigma < psi0_hi - gains.sigma))
    return EnvelopeSnapshot(
        x_lo, x_hi, y_lo, y_hi, e1_lo, e1_hi, psi0_lo, psi0_hi, feasible
    )


def control_law(eps, eps_dot, chi, gains, box, warn=True):
    """
    Evaluate the full control law from the transformed error.

    Parameters
    ----------
    eps, eps_dot : `numpy.ndarray`
        Transformed error and rate
    chi : `numpy.ndarray`
        Auxiliary state
    gains : `ControllerGains`
        Controller gains
    box : `ConstraintBox`
        Constraints providing the torque limits
    warn : `bool`
        Log a warning when the barrier clamp engages

    Returns
    -------
    ControlOutput
    """
    xi = filtered_error(eps, eps_dot, gains.K)
    norm, clamped = _barrier_norm(xi, gains.omega)
    if clamped and warn:
        logger.warning(
            "||xi|| = %s reached the barrier %s; clamped.",
            np.linalg.norm(xi),
            gains.omega,
        )
    Pi = gains.rho * norm / (gains.omega - norm)
    Ups = upsilon(eps, eps_dot)
    tau_c = _control_raw(xi, Pi, Ups, chi)
    return ControlOutput(xi, Ups, Pi, tau_c, saturate(tau_c, box), clamped)
