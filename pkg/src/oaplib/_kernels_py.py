"""Pure-NumPy fallback for the CSR kernels in ``_kernels.pyx``.

Used when the compiled extension is unavailable or when the
``OAPLIB_BACKEND=python`` override is set.  ``np.bincount`` keeps the
per-row reductions in C; only the row-id expansion costs extra memory.
"""

import numpy as np


def csr_matvec(row_offsets, col_indices, values, x):
    nrows = len(row_offsets) - 1
    counts = np.diff(row_offsets)
    rows = np.repeat(np.arange(nrows, dtype=np.int64), counts)
    return np.bincount(rows, weights=values * x[col_indices], minlength=nrows)


def csr_matvec_transpose(row_offsets, col_indices, values, u, ncols):
    counts = np.diff(row_offsets)
    scaled = values * np.repeat(u, counts)
    return np.bincount(col_indices, weights=scaled, minlength=ncols)
