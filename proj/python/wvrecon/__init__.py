"""Beam-splitter weak-measurement simulation and state reconstruction."""

try:
    from ._wvrecon import *  # noqa: F401,F403
    from ._wvrecon import __version__  # noqa: F401
except ImportError:  # module built next to this package rather than inside it
    from _wvrecon import *  # noqa: F401,F403
    from _wvrecon import __version__  # noqa: F401
