"""Backend selection for the numeric hot loops.

The compiled extension (`nomadj._speedups`) is used when it built
successfully; otherwise the numpy fallback (`nomadj._kernels_py`) takes
over. Set ``NOMADJ_PURE_PYTHON=1`` to force the fallback. Both expose the
same two functions with identical semantics; `benchmarks/bench_kernels.py`
compares their throughput.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("NOMADJ_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

viterbi_kernel = _impl.viterbi_kernel
maxent_obj_grad_kernel = _impl.maxent_obj_grad_kernel


def backend_name() -> str:
    """Name of the active backend: "compiled" or "python"."""
    return BACKEND


def available_backends() -> dict:
    """All importable backends, keyed by name."""
    out = {"python": _kernels_py}
    try:
        from . import _speedups
        out["compiled"] = _speedups
    except ImportError:
        pass
    return out
