# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys
from datetime import datetime

sys.path.insert(0, os.path.abspath("../src"))
sys.path.insert(0, os.path.abspath("../"))

# -- Project information -----------------------------------------------------

project = 'ybcav'
copyright = str(datetime.now().year)
release = '0.1.0'

html_title = "ybcav"
html_theme = "sphinx_book_theme"
html_theme_options = {
    "path_to_docs": "docs",
    "repository_branch": "main",
    "use_download_button": True,
}

# -- General configuration ---------------------------------------------------

master_doc = 'index'

extensions = [
    # Automatically documents Python modules from docstrings
    "sphinx.ext.autodoc",
    # Adds links to highlighted source code for documented Python objects
    "sphinx.ext.viewcode",
    # Generates summary tables for modules/classes/functions
    "sphinx.ext.autosummary",
    # Renders the Markdown README and CHANGELOG
    "sphinx_mdinclude",
    # Adds a "copy" button to code blocks for easy copy-paste
    "sphinx_copybutton",
]

add_module_names = False

templates_path = ['_templates']

exclude_patterns = [
    '_build',
    'Thumbs.db',
    '.DS_Store',
]

autosummary_generate = True
autosummary_imported_members = True
autodoc_inherit_docstrings = True
autodoc_default_options = {
    'members': True,
    'undoc-members': True,
    'show-inheritance': True,
}
autodoc_member_order = 'bysource'
