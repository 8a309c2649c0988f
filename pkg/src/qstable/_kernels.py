"""Select the hot-kernel implementation at import time.

The compiled extension is optional; whenever it fails to import (no
compiler at install time, mismatched numpy ABI) the numpy fallback in
``_kernels_py`` serves the same API.  Setting QSTABLE_NO_EXT to a
nonempty value forces the fallback, which the kernel benchmark uses to
time both paths from one checkout.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("QSTABLE_NO_EXT"):
    _impl = _kernels_py
    HAVE_NATIVE = False
else:
    try:
        from . import _ext as _impl  # type: ignore[no-redef]

        HAVE_NATIVE = True
    except ImportError:
        _impl = _kernels_py
        HAVE_NATIVE = False

ACTIVE = "native" if HAVE_NATIVE else "numpy"

power_bin_counts = _impl.power_bin_counts
cs_prefix_scores = _impl.cs_prefix_scores
