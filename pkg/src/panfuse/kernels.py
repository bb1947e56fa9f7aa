"""Backend selection for the hot kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
numpy fallback. Set ``PANFUSE_BACKEND=python`` to force the fallback.
"""

import os

from . import _kernels_py

python_backend = _kernels_py
compiled_backend = None

try:
    from . import _kernels as compiled_backend  # type: ignore[no-redef]
except ImportError:
    compiled_backend = None

if os.environ.get("PANFUSE_BACKEND", "").lower() == "python" or compiled_backend is None:
    _active = python_backend
else:
    _active = compiled_backend

BACKEND = _active.NAME

seq_sum = _active.seq_sum
conv_same = _active.conv_same
conv_valid = _active.conv_valid
haar_fwd = _active.haar_fwd
haar_inv = _active.haar_inv
sobel_mag = _active.sobel_mag
ncc_scores = _active.ncc_scores
