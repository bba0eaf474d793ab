"""Hope speech classification toolkit.

Thin wrapper over the compiled extension. Installed wheels carry _core inside
this package; in-tree builds put it on PYTHONPATH directly, so fall back to a
top-level import for that case.
"""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core as core  # noqa: F401
except ImportError:  # running against a plain cmake build tree
    from _core import *  # noqa: F401,F403
    import _core as core  # noqa: F401

__version__ = "0.1.0"
