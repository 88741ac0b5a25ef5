"""Hot loops: SVM coordinate descent, k-NN distances, tree split search.

The numba build is used when numba imports and ``VERITAS_NO_NUMBA`` is
unset (or ``0``); otherwise the pure numpy versions are used.  Both expose
the same three functions.
"""

import os

from veritas.kernels import _numpy


def _numba_requested():
    return os.environ.get("VERITAS_NO_NUMBA", "0").strip().lower() in ("", "0", "false", "no")


def get_backend(name):
    """Return the kernel module for ``"numba"`` or ``"numpy"``."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from veritas.kernels import _numba

        return _numba
    raise ValueError(f"unknown kernel backend {name!r}")


BACKEND = "numpy"
_impl = _numpy
if _numba_requested():
    try:
        _impl = get_backend("numba")
        BACKEND = "numba"
    except ImportError:
        pass

svm_dual_cd_pass = _impl.svm_dual_cd_pass
knn_sq_distances = _impl.knn_sq_distances
tree_best_split = _impl.tree_best_split

__all__ = ["BACKEND", "get_backend", "knn_sq_distances", "svm_dual_cd_pass", "tree_best_split"]
