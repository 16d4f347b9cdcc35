"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set ``GINICORR_BACKEND=compiled`` or ``GINICORR_BACKEND=numpy`` to force a
backend (``compiled`` raises ImportError when the extension is missing).
"""

import os

_requested = os.environ.get("GINICORR_BACKEND", "").strip().lower()

if _requested == "numpy":
    from . import _kernels_np as _impl
elif _requested == "compiled":
    from . import _kernels as _impl  # noqa: F401  (ImportError is the contract)
elif _requested == "":
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_np as _impl
else:
    raise RuntimeError(f"GINICORR_BACKEND must be 'compiled' or 'numpy', got {_requested!r}")

BACKEND_NAME = _impl.BACKEND_NAME

symgini_components = _impl.symgini_components
regular_gini_sums = _impl.regular_gini_sums
kendall_stats = _impl.kendall_stats
kendall_g_all = _impl.kendall_g_all
gini_g_all = _impl.gini_g_all
scatter_pair_sums = _impl.scatter_pair_sums
if_sums_at = _impl.if_sums_at
if_sums_all = _impl.if_sums_all
