"""Backend selection for the hot kernels.

The compiled extension is preferred when importable; the NumPy module is the
fallback.  Set QCSKEW_PURE_PYTHON=1 to force the fallback (useful for the
benchmark and for debugging).  Both backends expose the same five functions
with identical semantics.
"""

import os

if os.environ.get("QCSKEW_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND

skew_batch = _impl.skew_batch
circle_minmax = _impl.circle_minmax
ratio_scan = _impl.ratio_scan
polygon_diameter = _impl.polygon_diameter
polygon_area_signed = _impl.polygon_area_signed


def available_backends():
    """Names of importable backends, compiled one first when present."""
    names = []
    try:
        from . import _kernels_cy  # noqa: F401

        names.append("cython")
    except ImportError:
        pass
    names.append("python")
    return names
