# -*- coding: utf-8 -*-
#
# sgfem documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.
import sys
import os

# the package lives two levels up
sys.path.insert(0, os.path.abspath(os.path.join("..", "..")))
import sgfem

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.autosummary',
    'numpydoc',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'sgfem'
copyright = u'2015-2017 Contributing Entities'
author = u'Contributing Entities'

version = '0.1'
release = '0.1.0'

language = 'en'
exclude_patterns = []
pygments_style = 'sphinx'

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_static_path = []
htmlhelp_basename = 'sgfemdoc'

intersphinx_mapping = {'pandas':('https://pandas.pydata.org/pandas-docs/stable/', None),
                       'numpy' :('https://numpy.org/doc/stable/', None),
                       'scipy' :('https://docs.scipy.org/doc/scipy/', None)}

autodoc_default_options = {'members': True, 'undoc-members': True, 'show-inheritance': True}
autodoc_member_order = 'groupwise'
autoclass_content = "class"
autosummary_generate = True
numpydoc_show_class_members = False
