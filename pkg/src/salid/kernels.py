"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
module is used. Setting ``SALID_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import logging
import os
from types import ModuleType

from . import _pykernels

logger = logging.getLogger(__name__)


def _select() -> ModuleType:
    if os.environ.get("SALID_PURE_PYTHON", "").strip() not in ("", "0"):
        return _pykernels
    try:
        from . import _ckernels
    except ImportError:
        logger.debug("compiled kernels unavailable; using pure-Python fallback")
        return _pykernels
    return _ckernels


_impl = _select()

BACKEND: str = _impl.BACKEND
count_grams = _impl.count_grams
encode_counts = _impl.encode_counts
oop_distances = _impl.oop_distances
joint_scores = _impl.joint_scores
class_sums = _impl.class_sums


def available_backends() -> dict[str, ModuleType]:
    """All importable kernel modules, keyed by backend name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
