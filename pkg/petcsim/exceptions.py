# -*- coding: utf-8 -*-

"""
Exceptions used in petcsim.
"""


class PetcSimException(Exception):
    """
    Base exception class. All petcsim-specific exceptions should subclass this
    class.
    """


class ConfigurationException(PetcSimException):
    """
    Raised when parameters are invalid or inconsistent, e.g. mismatched vector
    dimensions, a bound chain with ``a >= 1``, or a run too short for steady-state
    metrics. Details are given in the message.
    """


class NumericalException(PetcSimException):
    """
    Raised when the simulation produces a non-finite state or a linear solve fails.

    Attributes
    ----------
    t : `float` or `None`
        Simulation time of the failure, in seconds
    state : `numpy.ndarray` or `None`
        Offending state (or joint position, for a failed solve)
    """

    def __init__(self, message, t=None, state=None):
        super().__init__(message)
        self.t = t
        self.state = state


class UsageException(PetcSimException):
    """
    Raised when the API is misused, such as stepping a trigger backwards in time.
    """
