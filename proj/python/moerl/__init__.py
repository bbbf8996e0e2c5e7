"""Router-shift policy optimization lab on a tiny mixture-of-experts LM.

Thin re-export of the compiled extension. Installed wheels place the
extension inside this package; when running against a plain CMake build tree,
put the build directory on sys.path and the absolute import picks it up.
"""

try:
    from ._moerl import *  # noqa: F401,F403
    from ._moerl import __doc__ as _ext_doc
except ImportError:
    from _moerl import *  # noqa: F401,F403
    from _moerl import __doc__ as _ext_doc

__version__ = "0.1.0"
