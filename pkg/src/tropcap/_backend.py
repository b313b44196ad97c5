"""Kernel selection: the compiled ``_core`` extension when importable, else ``_pycore``.

Set ``TROPCAP_PURE=1`` in the environment to force the numpy fallback.
"""
import os

if os.environ.get("TROPCAP_PURE", "") not in ("", "0"):
    from . import _pycore as kernels
else:
    try:
        from . import _core as kernels
    except ImportError:
        from . import _pycore as kernels

BACKEND = kernels.BACKEND

__all__ = ["kernels", "BACKEND"]
