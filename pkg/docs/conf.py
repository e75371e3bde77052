# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath(".."))

# -- Project information -----------------------------------------------------

project = "lvec"
copyright = "APACHE LICENSE, VERSION 2.0"
author = "lvec contributors"

with open(os.path.join("..", "lvec", "VERSION")) as file:
    version = file.read().strip()
    release = version

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store"]
pygments_style = None

# -- Options for HTML output -------------------------------------------------

html_theme = "alabaster"
html_static_path = ["_static"]
htmlhelp_basename = "lvecdoc"

# -- Options for manual page output ------------------------------------------

man_pages = [
    (
        "cli",
        "lvec",
        "linear lambda-calculus over vectors",
        [author],
        1,
    )
]
