# Configuration file for the Sphinx documentation builder.

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join("..", "..", "smalc-cli")))

project = "smalc-cli"
copyright = "2025, smalc-cli contributors"
author = "smalc-cli contributors"

extensions = ["sphinx.ext.autodoc", "sphinx.ext.napoleon"]

templates_path = ["_templates"]
exclude_patterns = []

html_theme = "sphinx_rtd_theme"
