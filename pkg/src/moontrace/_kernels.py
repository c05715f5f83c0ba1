"""Kernel dispatch: the compiled extension when it imports, else pure Python.

Set ``MOONTRACE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
convolve_trunc = _pykernels.convolve_trunc
pentagonal_sum = _pykernels.pentagonal_sum

if not os.environ.get("MOONTRACE_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        convolve_trunc = _ckernels.convolve_trunc
        pentagonal_sum = _ckernels.pentagonal_sum
