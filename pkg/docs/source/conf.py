# Sphinx configuration of the HERMRBC documentation.
#
# API pages are generated by sphinx-apidoc from the hermrbc package (see release.sh),
# the landing page includes README.md through myst.
import os
import sys
import tomli
from datetime import datetime

sys.path.insert(0, os.path.abspath("../.."))


with open("../../pyproject.toml", mode="rb") as pyproject:
    meta = tomli.load(pyproject)["tool"]["poetry"]


project = meta["name"]
author = meta["authors"][0].split("<")[0].strip()
copyright = f"{datetime.now().year}, {author}"
version = meta["version"]
release = version

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.mathjax",
    "sphinx.ext.viewcode",
    "myst_parser"
]

templates_path = ["_templates"]
exclude_patterns = []

# curvature tensors and metrics are documented with reST field lists, keep source order
autodoc_member_order = "bysource"
autodoc_typehints = "description"
autodoc_default_options = {
    "members": True,
    "undoc-members": False,
    "show-inheritance": True
}
# optional execution backend, documented without requiring the package
autodoc_mock_imports = ["joblib"]

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_rtd_theme"
html_title = f"HERMRBC {release}: Chern curvature and real bisectional curvature toolkit"
html_static_path = ["_static"]

suppress_warnings = ["myst.header"]
myst_enable_extensions = ["dollarmath", "amsmath"]
