# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled CSR matrix-vector kernels.

Same call signatures as ``_kernels_py``; the active module is picked at
import time by ``_backend``.
"""

import numpy as np

from libc.stdint cimport int64_t


def csr_matvec(const int64_t[::1] row_offsets,
               const int64_t[::1] col_indices,
               const double[::1] values,
               const double[::1] x):
    """Return A @ x for a CSR matrix given by its three arrays."""
    cdef Py_ssize_t nrows = row_offsets.shape[0] - 1
    out = np.empty(nrows, dtype=np.float64)
    cdef double[::1] y = out
    cdef Py_ssize_t i, j
    cdef double acc
    with nogil:
        for i in range(nrows):
            acc = 0.0
            for j in range(row_offsets[i], row_offsets[i + 1]):
                acc += values[j] * x[col_indices[j]]
            y[i] = acc
    return out


def csr_matvec_transpose(const int64_t[::1] row_offsets,
                         const int64_t[::1] col_indices,
                         const double[::1] values,
                         const double[::1] u,
                         Py_ssize_t ncols):
    """Return A.T @ u without materializing the transpose (row scatter)."""
    cdef Py_ssize_t nrows = row_offsets.shape[0] - 1
    out = np.zeros(ncols, dtype=np.float64)
    cdef double[::1] z = out
    cdef Py_ssize_t i, j
    cdef double ui
    with nogil:
        for i in range(nrows):
            ui = u[i]
            if ui != 0.0:
                for j in range(row_offsets[i], row_offsets[i + 1]):
                    z[col_indices[j]] += values[j] * ui
    return out
