"""Backend selection for the integer kernels.

The compiled module is used when it imports; set ``APKT_PURE_PYTHON=1`` to
force the pure-Python path (the benchmark and the parity tests do this).
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if os.environ.get("APKT_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

hermite = _impl.hermite
matmul = _impl.matmul
charpoly_mod = _impl.charpoly_mod
