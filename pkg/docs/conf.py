#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# petcsim documentation build configuration file.

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

import petcsim  # noqa

# -- General configuration ---------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.viewcode",
    "sphinx.ext.napoleon",
    "sphinx.ext.intersphinx",
]

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable", None),
    "pandas": ("https://pandas.pydata.org/docs", None),
}

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "petcsim"
copyright = "2026, petcsim developers"
author = "petcsim developers"

version = petcsim.__version__
release = petcsim.__version__

exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = "default"
todo_include_todos = False

# -- Options for HTML output -------------------------------------------

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "petcsimdoc"

# -- Options for manual page output ------------------------------------

man_pages = [(master_doc, "petcsim", "petcsim Documentation", [author], 1)]
