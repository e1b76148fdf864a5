"""Kernel backend selection.

Imports the compiled extension when present and falls back to the numpy
implementations otherwise. `BACKEND` reports which one is active.
"""

try:
    from ._kernels import BACKEND, modulo_fold, nlms, quantize_midrise  # noqa: F401
except ImportError:
    from ._kernels_py import (  # noqa: F401
        BACKEND,
        modulo_fold,
        nlms,
        quantize_midrise,
    )

__all__ = ["BACKEND", "modulo_fold", "quantize_midrise", "nlms"]
