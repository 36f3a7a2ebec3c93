"""Backend selection for the hot branch-evolution kernel.

The compiled Cython kernel is preferred when present; the NumPy reference
implementation is selected automatically otherwise.  Set STAFI_NO_EXTENSION=1
to force the fallback (used by the benchmark and the equivalence tests).
"""

import os

from . import reference

try:
    from . import _evolve as _compiled
except ImportError:
    _compiled = None

if _compiled is not None and not os.environ.get("STAFI_NO_EXTENSION"):
    _default = _compiled
else:
    _default = reference

HAVE_COMPILED = _compiled is not None
DEFAULT_BACKEND = "compiled" if _default is not reference else "python"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if HAVE_COMPILED else ("python",)


def get_backend(name: str = "auto"):
    """Return the kernel module for 'auto', 'compiled' or 'python'."""
    if name == "auto":
        return _default
    if name == "python":
        return reference
    if name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernel not available; rebuild the extension")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
