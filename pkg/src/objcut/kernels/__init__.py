"""Hot numeric kernels with two interchangeable backends.

The jitted backend is the default. Set OBJCUT_DISABLE_NUMBA=1 (or any of
"1", "true", "yes") before import to force the pure-numpy fallback; the
fallback is also selected automatically when numba cannot be imported.
"""
import os

_DISABLED = os.environ.get("OBJCUT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

if not _DISABLED:
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:
        from . import numpy_impl as _impl
        BACKEND = "numpy"
else:
    from . import numpy_impl as _impl
    BACKEND = "numpy"

bicubic_upscale = _impl.bicubic_upscale
label_components = _impl.label_components
dinic_maxflow = _impl.dinic_maxflow
residual_reachable = _impl.residual_reachable

__all__ = [
    "BACKEND",
    "bicubic_upscale",
    "label_components",
    "dinic_maxflow",
    "residual_reachable",
]
