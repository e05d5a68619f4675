"""Kernel selection: compiled extension when importable, pure Python otherwise.

Set ``DQDCOOL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if os.environ.get("DQDCOOL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py

METHOD_CLOSED = _kernels_py.METHOD_CLOSED
METHOD_ITERATION = _kernels_py.METHOD_ITERATION
METHOD_BISECTION = _kernels_py.METHOD_BISECTION
METHOD_FAILED = _kernels_py.METHOD_FAILED

reduced_root = _impl.reduced_root
persistent_root = _impl.persistent_root
clamped_batch = _impl.clamped_batch
persistent_batch = _impl.persistent_batch
filtered_batch = _impl.filtered_batch
two_emitter_batch = _impl.two_emitter_batch
