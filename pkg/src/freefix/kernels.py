"""Backend selection for the search kernel.

The compiled extension is used when it imports; set ``FREEFIX_KERNEL=python``
to force the pure-Python implementation.
"""

from __future__ import annotations

import os

from . import _kernels_py

python_backend = _kernels_py

try:
    from . import _kernels as compiled_backend
except ImportError:
    compiled_backend = None

if os.environ.get("FREEFIX_KERNEL", "").lower() == "python" or compiled_backend is None:
    backend = _kernels_py
else:
    backend = compiled_backend

BACKEND = backend.BACKEND
displacement_tree = backend.displacement_tree
