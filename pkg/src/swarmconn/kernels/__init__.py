"""Hot numeric kernels with a compiled core and a pure-Python fallback.

The compiled Cython extension is preferred when it was built; otherwise
the pure-Python implementation is used transparently.  `BACKEND` reports
which one is active.  Both implementations are kept numerically
identical (IEEE-754 operation order included) so simulation outputs do
not depend on the backend.
"""
try:
    from . import _speedups as _impl
    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on build environment
    from . import _pyimpl as _impl
    BACKEND = "python"

from . import _pyimpl as pyimpl

lj_force_scalar = _impl.lj_force_scalar
lj_sum = _impl.lj_sum
conn_grad = _impl.conn_grad
lap_row = _impl.lap_row

__all__ = [
    "BACKEND",
    "pyimpl",
    "lj_force_scalar",
    "lj_sum",
    "conn_grad",
    "lap_row",
]
