# -*- coding: utf-8 -*-
"""

petcsim.scenarios
~~~~~~~~~~~~~~~~~
Bundled scenario files. Each is a YAML file in this directory, loaded with
:meth:`petcsim.Scenario.bundled`.
"""
import os

__all__ = ["iter_names", "path_of"]

DIRECTORY = os.path.dirname(os.path.abspath(__file__))


def iter_names():
    """Iterate through bundled scenario names, sorted."""
    for filename in sorted(os.listdir(DIRECTORY)):
        name, ext = os.path.splitext(filename)
        if ext == ".yaml" and not name.startswith("_"):
            yield name


def path_of(name):
    """Path of the bundled scenario ``name``.

    Raises
    ------
    ValueError
        No bundled scenario of that name
    """
    if name not in iter_names():
        raise ValueError(
            'No bundled scenario named "{}"; try "petcsim list-bundled".'.format(name)
        )
    return os.path.join(DIRECTORY, name + ".yaml")
