"""Kernel backend selection.

The compiled extension is used when it was built and GENUSLAB_PURE_PYTHON
is not set to 1; otherwise the pure-Python twin is used.  Both share one
contract and are tested against each other.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("GENUSLAB_PURE_PYTHON", "") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"

apply_word = _impl.apply_word
apply_terms = _impl.apply_terms
zero_defect = _impl.zero_defect

__all__ = ["BACKEND", "apply_word", "apply_terms", "zero_defect"]
