"""Select the fixed-point kernel: compiled if importable, else pure Python.

Set ``TWOCOVER_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
count_fixed_points = _kernels_py.count_fixed_points

if not os.environ.get("TWOCOVER_PURE_PYTHON"):
    try:
        from ._ext._kernels import count_fixed_points  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        pass
