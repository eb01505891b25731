"""Terminal-area multi-agent traffic simulator."""

try:
    from ._atcsim import *  # noqa: F401,F403
except ImportError:  # extension built next to this package, not inside it
    from _atcsim import *  # noqa: F401,F403
