"""Backend selection for the hot loops.

The compiled ``_kernels`` extension is used when it was built; otherwise the
numpy implementation in ``_kernels_py`` is loaded. Setting the environment
variable ``CLF2ST_PURE_PYTHON=1`` forces the numpy backend.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _kernels_py}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled


def get_backend(name=None):
    """Kernel module by name (``"cython"`` or ``"python"``); ``None`` means the active one."""
    if name is None:
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {sorted(_BACKENDS)}") from None


def available_backends():
    return sorted(_BACKENDS)


if _compiled is not None and os.environ.get("CLF2ST_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
else:
    BACKEND = "python"
_active = _BACKENDS[BACKEND]

split_error_counts = _active.split_error_counts
retrain_error_counts = _active.retrain_error_counts
fixed_rule_error_counts = _active.fixed_rule_error_counts
loo_error_counts = _active.loo_error_counts
