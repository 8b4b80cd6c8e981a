"""Matching-kernel selection.

Prefers the compiled kernel (_match_c) when it was built; falls back to
the pure-Python twin.  TANGLECA_KERNEL=python forces the fallback,
TANGLECA_KERNEL=cython demands the extension (ImportError if missing).
"""
import os

_choice = os.environ.get("TANGLECA_KERNEL", "auto")

if _choice == "python":
    from . import _match_py as _impl
elif _choice == "cython":
    from . import _match_c as _impl  # type: ignore[attr-defined]
else:
    try:
        from . import _match_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _match_py as _impl

Plan = _impl.Plan
PlanIndex = _impl.PlanIndex
enumerate_matches = _impl.enumerate_matches
KERNEL_NAME = _impl.KERNEL_NAME


def load_kernel(name):
    """Explicit kernel module by name, for parity tests and benchmarks."""
    if name == "python":
        from . import _match_py
        return _match_py
    if name == "cython":
        from . import _match_c  # type: ignore[attr-defined]
        return _match_c
    raise ValueError("unknown kernel %r" % name)
