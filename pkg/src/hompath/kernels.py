"""Kernel backend selection.

The compiled extension is used when it imports; setting
``HOMPATH_PURE_PYTHON=1`` forces the pure-Python reference implementation.
"""
import os

if os.environ.get("HOMPATH_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
RelationSet = _impl.RelationSet
free_reduce = _impl.free_reduce
cyclic_core = _impl.cyclic_core
dehn_linear = _impl.dehn_linear
dehn_cyclic = _impl.dehn_cyclic
segment_triangle_hits = _impl.segment_triangle_hits
segment_ray_hits = _impl.segment_ray_hits

__all__ = [
    "BACKEND",
    "RelationSet",
    "free_reduce",
    "cyclic_core",
    "dehn_linear",
    "dehn_cyclic",
    "segment_triangle_hits",
    "segment_ray_hits",
]
