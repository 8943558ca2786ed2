"""Backend selection for the hot kernels.

The compiled extension (oqwalk._core, Cython) is used when importable; the
NumPy implementation in oqwalk._kernels_py is the fallback.  Setting the
environment variable OQWALK_PURE=1 forces the fallback, which is handy for
benchmarking and for debugging suspected extension issues.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("OQWALK_PURE", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

BACKEND = _impl.BACKEND_NAME

step_sites = _impl.step_sites
evolve_sites = _impl.evolve_sites
evolve_moments = _impl.evolve_moments
propagate_dd = _impl.propagate_dd


def available_backends() -> list[str]:
    names = [_kernels_py.BACKEND_NAME]
    try:
        from . import _core

        names.insert(0, _core.BACKEND_NAME)
    except ImportError:
        pass
    return names
