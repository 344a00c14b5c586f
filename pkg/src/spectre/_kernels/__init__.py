"""Hot kernels for singular-value partial sums.

The compiled Cython core is preferred; the NumPy implementation is the
fallback, selected here at import time.  `IMPL` records which one is
active; both are importable for the benchmark.
"""

from . import _core_py

try:
    from . import _core as _impl
    IMPL = "cython"
except ImportError:            # extension not built
    _impl = _core_py
    IMPL = "python"

partial_sums_at = _impl.partial_sums_at
py_partial_sums_at = _core_py.partial_sums_at
