"""Kernel dispatch: compiled extension when built, pure Python otherwise.

Set UNIVSET_PURE=1 to force the pure backend (used by the benchmark and by
tests that compare the two implementations).
"""

import os

if os.environ.get("UNIVSET_PURE", "") not in ("", "0"):
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import pure as _impl

        BACKEND = "pure"

sweep_combos = _impl.sweep_combos
sweep_tuples = _impl.sweep_tuples
exp_table = _impl.exp_table
