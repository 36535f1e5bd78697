# -*- coding: utf-8 -*-

"""
Time-based generator (TBG) polynomials and the TBG-shaped error transform.

The polynomials ``p1`` and ``p2`` are quintics in ``s = t/T`` that carry the initial
error and its rate to zero exactly at the prescribed time ``T``. Past ``T`` they are
identically zero, which here falls out of clamping ``s`` to 1: every coefficient sum
at ``s = 1`` is an integer identity, so the clamped values are exact zeros.

All functions accept a scalar ``t`` (returning a `float`) or an array of times
(returning an array).
"""

from collections import namedtuple
from .exceptions import ConfigurationException
import numpy as np


class TbgParams(namedtuple("TbgParams", ["T"])):
    """
    Parameters of the time-based generator.

    Attributes
    ----------
    T : `float`
        Prescribed settling time, in seconds, strictly positive
    """

    __slots__ = ()

    def __new__(cls, T):
        T = float(T)
        if not T > 0:
            raise ConfigurationException("Prescribed time T must be > 0, got %s." % T)
        return super().__new__(cls, T)


def _s_of(t, T):
    if np.ndim(t):
        return np.clip(np.asarray(t, dtype=float) / T, 0.0, 1.0)
    return min(max(t / T, 0.0), 1.0)


def p1(t, params):
    """`float`: ``p1(t) = -6s^5 + 15s^4 - 10s^3 + 1`` with ``s = t/T``, 0 past ``T``."""
    s = _s_of(t, params.T)
    return ((-6.0 * s + 15.0) * s - 10.0) * s ** 3 + 1.0


def p2(t, params):
    """`float`: ``p2(t) = T(-3s^5 + 8s^4 - 6s^3 + s)``, 0 past ``T``. In seconds."""
    s = _s_of(t, params.T)
    return params.T * ((((-3.0 * s + 8.0) * s - 6.0) * s * s) * s + s)


def p1_dot(t, params):
    """`float`: first derivative of :func:`p1`, per second."""
    s = _s_of(t, params.T)
    return ((-30.0 * s + 60.0) * s - 30.0) * s * s / params.T


def p1_ddot(t, params):
    """`float`: second derivative of :func:`p1`, per second squared."""
    s = _s_of(t, params.T)
    return ((-120.0 * s + 180.0) * s - 60.0) * s / params.T ** 2


def p2_dot(t, params):
    """`float`: first derivative of :func:`p2`, dimensionless."""
    s = _s_of(t, params.T)
    return (((-15.0 * s + 32.0) * s - 18.0) * s * s) + 1.0


def p2_ddot(t, params):
    """`float`: second derivative of :func:`p2`, per second."""
    s = _s_of(t, params.T)
    return ((-60.0 * s + 96.0) * s - 36.0) * s / params.T


def _check_dims(*vectors):
    n = len(vectors[0])
    for v in vectors[1:]:
        if len(v) != n:
            raise ConfigurationException(
                "Dimension mismatch: expected vectors of length %s, got %s."
                % (n, len(v))
            )


def tbg_offset(e0, e0_dot, t, params):
    """
    Compute the TBG offset and its first two derivatives at time ``t``.

    Parameters
    ----------
    e0 : array_like
        Joint position error latched at ``t0``
    e0_dot : array_like
        Joint velocity error latched at ``t0``
    t : `float`
        Time, in seconds
    params : `TbgParams`
        TBG parameters

    Returns
    -------
    `tuple` of `numpy.ndarray`
        ``p1 e0 + p2 e0_dot``, ``p1' e0 + p2' e0_dot`` and ``p1'' e0 + p2'' e0_dot``
    """
    e0 = np.asarray(e0, dtype=float)
    e0_dot = np.asarray(e0_dot, dtype=float)
    _check_dims(e0, e0_dot)
    return (
        p1(t, params) * e0 + p2(t, params) * e0_dot,
        p1_dot(t, params) * e0 + p2_dot(t, params) * e0_dot,
        p1_ddot(t, params) * e0 + p2_ddot(t, params) * e0_dot,
    )


def transformed_error(e, e_dot, e0, e0_dot, t, params):
    """
    Subtract the TBG-shaped initial error from the tracking error.

    ``eps = e - (p1 e0 + p2 e0_dot)`` and ``eps_dot = e_dot - (p1' e0 + p2' e0_dot)``.
    At ``t = 0`` with ``e = e0`` and ``e_dot = e0_dot`` both vanish; past ``T`` they
    equal the raw errors.

    Parameters
    ----------
    e, e_dot : array_like
        Tracking error and its rate at ``t``
    e0, e0_dot : array_like
        Errors latched at ``t0``
    t : `float`
        Time, in seconds
    params : `TbgParams`
        TBG parameters

    Returns
    -------
    `tuple` of `numpy.ndarray`
        ``(eps, eps_dot)``

    Raises
    ------
    ConfigurationException
        Vectors of different dimensions
    """
    e = np.asarray(e, dtype=float)
    e_dot = np.asarray(e_dot, dtype=float)
    e0 = np.asarray(e0, dtype=float)
    e0_dot = np.asarray(e0_dot, dtype=float)
    _check_dims(e, e_dot, e0, e0_dot)
    eps = e - (p1(t, params) * e0 + p2(t, params) * e0_dot)
    eps_dot = e_dot - (p1_dot(t, params) * e0 + p2_dot(t, params) * e0_dot)
    return eps, eps_dot
