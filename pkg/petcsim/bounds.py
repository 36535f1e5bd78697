# -*- coding: utf-8 -*-

"""
Analytic bounds of the closed loop.

From plant, reference, gain and trigger constants this module computes the lumped
uncertainty bound, the contraction factor ``a``, the chain ``l1 .. l4, l_M``, the
minimum inter-event time ``nu``, the monitoring-period ceiling ``h_star`` and the
prescribed error bound ``eps_bound``.
"""

from collections import namedtuple
from .exceptions import ConfigurationException
from .tbg import tbg_offset
import logging
import math
import numpy as np

logger = logging.getLogger("petcsim")

SQRT2 = math.sqrt(2.0)

_PLANT_TERMS = (
    "m_hi",
    "l_hi",
    "c_bar",
    "g_bar",
    "f_bar",
    "d_bar",
    "q_r1",
    "q_r2",
    "e_r1",
    "e_r2",
)
_POSITIVE_TERMS = (
    "K_lo",
    "K_hi",
    "rho",
    "omega",
    "gamma1",
    "gamma2",
    "u_bar",
    "nu_bar",
    "T",
    "alpha",
    "beta0",
)


class BoundInputs(
    namedtuple("BoundInputs", _PLANT_TERMS + _POSITIVE_TERMS + ("r",), defaults=(1.0,))
):
    """
    Constants entering the bound chain.

    Plant, disturbance and trajectory terms (``m_hi`` through ``e_r2``) must be
    non-negative; gains, ``u_bar``, ``nu_bar``, ``T``, ``alpha`` and ``beta0`` must be
    positive; ``r`` lies in ``(0, 1]`` and defaults to 1.
    """

    __slots__ = ()

    def __new__(cls, *args, **kwargs):
        self = super().__new__(cls, *args, **kwargs)
        self = self._make(float(_) for _ in self)
        for name in _PLANT_TERMS:
            if not getattr(self, name) >= 0:
                raise ConfigurationException(
                    "Bound input %s must be >= 0, got %s." % (name, getattr(self, name))
                )
        for name in _POSITIVE_TERMS:
            if not getattr(self, name) > 0:
                raise ConfigurationException(
                    "Bound input %s must be > 0, got %s." % (name, getattr(self, name))
                )
        if not 0 < self.r <= 1:
            raise ConfigurationException("r must be in (0, 1], got %s." % self.r)
        if self.K_lo > self.K_hi:
            raise ConfigurationException("K_lo must not exceed K_hi.")
        return self


BOUND_FIELDS = (
    "delta_bar",
    "kappa",
    "a",
    "eps_bound",
    "l1",
    "l2",
    "l3",
    "l4",
    "l_M",
    "nu",
    "h_star",
)

BOUND_UNITS = {
    "delta_bar": "N m",
    "kappa": "N m + s",
    "a": "-",
    "eps_bound": "-",
    "l1": "rad/s^3",
    "l2": "1/s^3",
    "l3": "1/s",
    "l4": "1/s^2",
    "l_M": "N m/s",
    "nu": "s",
    "h_star": "s",
}


class BoundSet(namedtuple("BoundSet", BOUND_FIELDS + ("inputs",))):
    """
    Result of :func:`bound_chain`.

    Attributes
    ----------
    delta_bar, kappa, a, eps_bound, l1, l2, l3, l4, l_M, nu, h_star : `float`
        Bound values; units in `BOUND_UNITS`
    inputs : `BoundInputs`
        Inputs the bounds were computed from
    """

    __slots__ = ()

    def as_dict(self):
        """`dict`: Bound values keyed by field name, without the inputs."""
        return {_: getattr(self, _) for _ in BOUND_FIELDS}


def delta_terms(inputs):
    """
    `tuple` of `float`: ``(delta0, delta1, delta2, delta3)``.

    The reference-plus-offset velocity and acceleration maxima enter as
    ``q_r1 + e_r1`` and ``q_r2 + e_r2``.
    """
    i = inputs
    v = i.q_r1 + i.e_r1
    acc = i.q_r2 + i.e_r2
    delta0 = i.c_bar * i.K_hi
    delta1 = i.m_hi * acc + i.c_bar * v ** 2 + i.f_bar * v + i.g_bar + i.d_bar
    delta2 = i.c_bar * v * i.K_hi
    delta3 = i.m_hi * i.K_hi + i.c_bar * v + i.f_bar
    return delta0, delta1, delta2, delta3


def delta_bar(inputs):
    """`float`: Bound on the lumped uncertainty, in N m."""
    return max(delta_terms(inputs))


def tbg_offset_maxima(e0, e0_dot, params, n_grid=10 ** 4):
    """
    Maximum norms of the first two derivatives of the TBG offset over ``[0, T]``.

    Parameters
    ----------
    e0, e0_dot : array_like
        Initial errors
    params : `TbgParams`
        TBG parameters
    n_grid : `int`
        Number of grid points on ``[0, T]``

    Returns
    -------
    `tuple` of `float`
        ``(e_r1, e_r2)``
    """
    t = np.linspace(0.0, params.T, int(n_grid))
    e0 = np.asarray(e0, dtype=float)
    e0_dot = np.asarray(e0_dot, dtype=float)
    _, first, second = tbg_offset(e0[None, :], e0_dot[None, :], t[:, None], params)
    return (
        float(np.max(np.linalg.norm(first, axis=1))),
        float(np.max(np.linalg.norm(second, axis=1))),
    )


def contraction_factor(inputs, d_bar=None, kappa=None):
    """
    Compute ``a`` and the name of the branch attaining it.

    Raises
    ------
    ConfigurationException
        ``a >= 1``
    """
    i = inputs
    d_bar = delta_bar(i) if d_bar is None else d_bar
    kappa = i.u_bar + i.T if kappa is None else kappa
    lumped = d_bar + kappa / 4.0
    branches = {
        "uncertainty": lumped / (i.r * i.rho + lumped),
        "coupling": i.gamma2 / (i.r * i.rho + i.gamma2),
    }
    name = max(branches, key=branches.get)
    a = branches[name]
    if not a < 1:
        raise ConfigurationException(
            "Contraction factor a = %s >= 1 (from the %s branch)." % (a, name)
        )
    return a, name


def bound_chain(inputs):
    """
    Compute every bound from ``inputs``.

    The supremum ``a`` is used where a constant in ``(0, a)`` is required, which
    gives the largest ``l2`` and hence the most conservative ``nu``.

    Parameters
    ----------
    inputs : `BoundInputs`
        Constants

    Returns
    -------
    BoundSet

    Raises
    ------
    ConfigurationException
        ``a >= 1``
    """
    i = inputs
    d_bar = delta_bar(i)
    kappa = i.u_bar + i.T
    a, _ = contraction_factor(i, d_bar, kappa)
    ratio = i.K_hi / i.K_lo
    l1 = i.l_hi * i.u_bar + i.l_hi * i.c_bar * i.nu_bar * i.omega + i.l_hi * d_bar
    l2 = i.rho * l1 / (1.0 - a) ** 2
    l3 = i.gamma1 * i.omega + i.gamma1 * i.gamma2 * SQRT2 * i.omega
    l4 = i.omega * l1 / i.K_lo + i.omega ** 2 * (1.0 + ratio) * (1.0 + 2.0 * ratio)
    l_M = l2 * (4.0 + SQRT2 * i.omega) + (i.rho / (1.0 - a)) * (4.0 * l4 + SQRT2 * l3)
    nu = (i.alpha * i.u_bar + i.beta0 * i.T) / l_M
    h_star = (1.0 - a) * i.omega / l1 if l1 > 0 else math.inf
    eps_bound = math.sqrt((i.omega / i.K_lo) ** 2 + (i.omega * (ratio + 1.0)) ** 2)
    return BoundSet(
        delta_bar=d_bar,
        kappa=kappa,
        a=a,
        eps_bound=eps_bound,
        l1=l1,
        l2=l2,
        l3=l3,
        l4=l4,
        l_M=l_M,
        nu=nu,
        h_star=h_star,
        inputs=i,
    )


def residual_threshold(bound_set):
    """`float`: ``a omega``, the level above which ``V`` must decrease."""
    return bound_set.a * bound_set.inputs.omega


def validate_monitoring_period(h, bound_set):
    """
    Classify a monitoring period against ``(nu, h_star)``.

    Returns
    -------
    `str`
        ``below_miet`` if ``h <= nu``, ``above_ceiling`` if ``h >= h_star``,
        otherwise ``admissible``
    """
    if h <= bound_set.nu:
        return "below_miet"
    if h >= bound_set.h_star:
        logger.warning(
            "Monitoring period %s s is at or above the ceiling h* = %s s.",
            h,
            bound_set.h_star,
        )
        return "above_ceiling"
    return "admissible"
