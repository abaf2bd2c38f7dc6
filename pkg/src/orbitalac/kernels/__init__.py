"""Hot numeric kernels with two interchangeable lanes.

The numba lane (default when importable) is selected at import time; set
``ORBITAL_AC_BACKEND=numpy`` to force the pure-numpy fallback or
``ORBITAL_AC_BACKEND=numba`` to fail loudly when numba is unavailable.
Verdicts are backend-independent; only float rounding in reported
diagnostics may differ between lanes.
"""
from __future__ import annotations

import os


def _load():
    choice = os.environ.get("ORBITAL_AC_BACKEND", "auto").lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(f"ORBITAL_AC_BACKEND must be auto|numba|numpy, got {choice!r}")
    if choice != "numpy":
        try:
            from . import _numba as impl

            return impl, "numba"
        except ImportError:
            if choice == "numba":
                raise
    from . import _numpy as impl

    return impl, "numpy"


_impl, BACKEND = _load()

haar_from_gauss = _impl.haar_from_gauss
conjugate_coords = _impl.conjugate_coords
best_rank_over_trials = _impl.best_rank_over_trials
product_spectra = _impl.product_spectra


def backend_name() -> str:
    return BACKEND
