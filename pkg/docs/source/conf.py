"""Sphinx configuration of the qpurity documentation."""
import os.path
import sys

sys.path.insert(0, os.path.abspath("../../src"))

# -- Project information -----------------------------------------------------

project = "qpurity"
copyright = "2024, qpurity developers"
author = "qpurity developers"

import qpurity  # noqa: E402

# The short X.Y version
version = qpurity.__version__
# The full version, including alpha/beta/rc tags
release = "develop"


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx_click.ext",
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"
language = "en"
exclude_patterns = []
pygments_style = None


# -- Options for HTML output -------------------------------------------------

html_theme = "alabaster"
html_theme_options = {
    "fixed_sidebar": True,
    "extra_nav_links": {
        "qpurity@PyPi": "https://pypi.python.org/pypi/qpurity/",
    },
}
html_sidebars = {
    "**": ["about.html", "navigation.html", "searchbox.html"],
}
htmlhelp_basename = "qpuritydoc"


# -- Options for manual page output ------------------------------------------

man_pages = [(master_doc, "qpurity", "qpurity Documentation", [author], 1)]
