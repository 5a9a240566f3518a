"""Backend selector for the arithmetic kernels.

Imports the compiled extension when available, falling back to the pure
Python implementation.  Set RACKRS_PURE=1 to force the fallback (useful
for the parity tests and the benchmark).
"""

import os

if os.environ.get("RACKRS_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND_NAME

pp_add = _impl.pp_add
pp_neg = _impl.pp_neg
pp_sub = _impl.pp_sub
pp_mul = _impl.pp_mul
pp_pow = _impl.pp_pow
build_exp_log = _impl.build_exp_log
horner = _impl.horner
horner_tab = _impl.horner_tab
