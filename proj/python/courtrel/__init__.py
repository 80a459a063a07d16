"""Courtroom conversation pools, rule-based relation extraction and PMI reports."""

try:
    from ._courtrel import *  # noqa: F401,F403  (installed package layout)
    from ._courtrel import __version__  # noqa: F401
except ImportError:  # build-tree layout: extension on PYTHONPATH
    from _courtrel import *  # noqa: F401,F403
    from _courtrel import __version__  # noqa: F401
