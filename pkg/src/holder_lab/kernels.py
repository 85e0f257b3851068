"""Backend selection for the hot kernels.

The compiled extension is used when it imports; ``HOLDER_LAB_BACKEND=python``
forces the interpreted fallback.  ``BACKENDS`` exposes every available
implementation for benchmarking and cross-checking.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKENDS = {"python": _pykernels.pair_class_table}
try:
    from . import _ckernels
except ImportError:  # extension not built
    pass
else:
    BACKENDS["cython"] = _ckernels.pair_class_table

_forced = os.environ.get("HOLDER_LAB_BACKEND", "").lower()
if _forced and _forced not in BACKENDS:
    raise ImportError(f"HOLDER_LAB_BACKEND={_forced!r} is not available; have {sorted(BACKENDS)}")
BACKEND = _forced or ("cython" if "cython" in BACKENDS else "python")
pair_class_table = BACKENDS[BACKEND]
