"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the
NumPy fallback is used.  ``OAPLIB_BACKEND`` forces the choice:
``compiled`` raises if the extension is missing, ``python`` skips it.
"""

import os

_requested = os.environ.get("OAPLIB_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "compiled", "python"):
    raise ImportError(
        f"OAPLIB_BACKEND={_requested!r} not understood "
        "(expected 'auto', 'compiled' or 'python')"
    )

kernels = None
if _requested in ("auto", "compiled"):
    try:
        from . import _kernels as kernels
    except ImportError:
        if _requested == "compiled":
            raise
        kernels = None
if kernels is None:
    from . import _kernels_py as kernels

BACKEND = "python" if kernels.__name__.endswith("_kernels_py") else "compiled"

csr_matvec = kernels.csr_matvec
csr_matvec_transpose = kernels.csr_matvec_transpose


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND
