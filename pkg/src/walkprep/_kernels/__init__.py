"""Kernel backend selection.

The compiled Cython backend is preferred when it imported cleanly; setting
``WALKPREP_PURE=1`` forces the numpy fallback.  Both backends expose the
same functions with identical semantics (see py_backend docstrings).
"""
import os

from . import py_backend

if os.environ.get("WALKPREP_PURE", "") == "1":
    _impl = py_backend
else:
    try:
        from . import cy_backend as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = py_backend

BACKEND = _impl.BACKEND

apply_1q = _impl.apply_1q
apply_ctrl_1q = _impl.apply_ctrl_1q
apply_x = _impl.apply_x
greedy_hitting_mask = _impl.greedy_hitting_mask
exact_small_hitting_mask = _impl.exact_small_hitting_mask
auto_hitting_mask = _impl.auto_hitting_mask
merge_step_decision = _impl.merge_step_decision
conj_apply_labels = _impl.conj_apply_labels
walk_cx_cost = _impl.walk_cx_cost
