"""Backend selection for the adaptive stepper.

The compiled ``_cdopri`` extension is used when it was built; otherwise the
numpy implementation in ``_pydopri`` takes over. Setting
``QHE_SPECTRO_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pydopri

py_dopri5_linear = _pydopri.dopri5_linear

try:
    from ._cdopri import dopri5_linear as c_dopri5_linear
except ImportError:  # extension not built
    c_dopri5_linear = None

if c_dopri5_linear is not None and os.environ.get("QHE_SPECTRO_PURE_PYTHON") != "1":
    dopri5_linear = c_dopri5_linear
    BACKEND = "cython"
else:
    dopri5_linear = py_dopri5_linear
    BACKEND = "python"

STATUS_OK = _pydopri.STATUS_OK
STATUS_UNDERFLOW = _pydopri.STATUS_UNDERFLOW
STATUS_MAX_STEPS = _pydopri.STATUS_MAX_STEPS
