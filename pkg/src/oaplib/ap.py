"""Accumulated-projection baseline solver.

Splits the rows of A into contiguous blocks and repeatedly projects
the unknown solution onto the subspace spanned by the previous
projection and one block of rows, using only inner products that are
computable from the right-hand side.  QR is the projection backbone;
rank-deficient columns are filtered before solving.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeed, EmptySubspace
from .linalg import as_vector, dot, norm2
from .reductions import TAU_BREAK_DEFAULT
from .solvers import SolveReport

RANK_TOL = 1e-12


@dataclass
class BlockPartition:
    """Contiguous row blocks given by offsets [0, b1, ..., nrows]."""

    bounds: np.ndarray

    def __post_init__(self):
        self.bounds = np.asarray(self.bounds, dtype=np.int64)
        if len(self.bounds) < 2 or self.bounds[0] != 0:
            raise ValueError("partition must start at row 0")
        if np.any(np.diff(self.bounds) <= 0):
            raise ValueError("partition bounds must be strictly increasing")

    @classmethod
    def equal_blocks(cls, nrows, k):
        """k equal-size blocks; remainder rows go to the last block."""
        if not 1 <= k <= nrows:
            raise ValueError(f"need 1 <= k <= {nrows}, got {k}")
        size = nrows // k
        bounds = [i * size for i in range(k)] + [nrows]
        return cls(np.array(bounds))

    @property
    def nblocks(self):
        return len(self.bounds) - 1

    def blocks(self):
        for i in range(self.nblocks):
            yield int(self.bounds[i]), int(self.bounds[i + 1])


@dataclass
class ApState:
    """Current projection of the solution and its inner product with it."""

    p: np.ndarray
    c: float


def ap_init(A, b, break_tol=TAU_BREAK_DEFAULT):
    """Initial projection p = alpha A'b with alpha = ||b||^2/||A'b||^2.

    Then c = x'p = alpha b'(Ax) = alpha ||b||^2 without knowing x.
    """
    b = as_vector(b, "b")
    atb = A.apply_transpose(b)
    nrm2_atb = dot(atb, atb)
    if nrm2_atb <= (break_tol * A.frobenius_norm()) ** 2:
        raise DegenerateSeed("A'b is numerically zero")
    alpha = dot(b, b) / nrm2_atb
    return ApState(alpha * atb, alpha * dot(b, b))


def project_onto(w_columns, l, rank_tol=RANK_TOL):
    """Orthogonal projection of the unknown x onto ran(W) from l = W'x.

    Thin QR of W gives p = Q (R^-T l) and c = ||R^-T l||^2.  Columns
    whose R diagonal falls below ``rank_tol`` times the Frobenius norm
    of the original W are dropped together with their l entries.
    """
    W = np.asarray(w_columns, dtype=np.float64)
    if W.ndim == 1:
        W = W[:, None]
    if W.ndim != 2:
        raise ValueError("W must be a 2-D array of column vectors")
    l = np.asarray(l, dtype=np.float64).ravel()
    if W.shape[1] != len(l):
        raise ValueError(f"W has {W.shape[1]} columns but l has {len(l)} entries")
    drop_at = rank_tol * float(np.linalg.norm(W))

    if W.shape[1] > W.shape[0]:
        # more columns than rows: the subspace (generically) fills the
        # whole space and R is trapezoidal; l = W'x keeps the system
        # consistent, so a least-squares solve recovers Q'x
        Q, R = np.linalg.qr(W)
        y = np.linalg.lstsq(R.T, l, rcond=None)[0]
        return Q @ y, float(np.dot(y, y))

    while True:
        if W.shape[1] == 0:
            raise EmptySubspace("rank filtering removed every column")
        Q, R = np.linalg.qr(W)
        diag = np.abs(np.diag(R))
        keep = diag > drop_at
        if keep.all():
            break
        W = W[:, keep]
        l = l[keep]
    y = np.linalg.solve(R.T, l)
    return Q @ y, float(np.dot(y, y))


def ap_sweep(A, b, partition, state):
    """One pass over all blocks, threading the projection through."""
    b = np.asarray(b, dtype=np.float64)
    p, c = state.p, state.c
    for start, stop in partition.blocks():
        W = np.column_stack([p, A.rows_dense(start, stop).T])
        l = np.concatenate(([c], b[start:stop]))
        p, c = project_onto(W, l)
    return ApState(p, c)


def ap_solve(A, b, partition=None, tol=1e-6, max_sweeps=1000):
    """Iterate sweeps until the relative residual meets ``tol``.

    ``partition`` defaults to a single block (direct projection).
    Returns ``(x, SolveReport)`` with one history entry per sweep.
    """
    b = as_vector(b, "b")
    if partition is None:
        partition = BlockPartition.equal_blocks(A.nrows, 1)
    report = SolveReport()
    bnorm = norm2(b)
    if bnorm == 0.0:
        report.termination = "converged"
        report.residual_history = [0.0]
        return np.zeros(A.ncols), report

    state = ap_init(A, b)
    relres = 1.0
    report.residual_history.append(relres)
    while relres > tol and report.restarts < max_sweeps:
        state = ap_sweep(A, b, partition, state)
        relres = norm2(b - A.apply(state.p)) / bnorm
        report.restarts += 1
        report.inner_iterations.append(partition.nblocks)
        report.residual_history.append(relres)
    report.termination = "converged" if relres <= tol else "max-restarts"
    report.final_relres = report.residual_history[-1]
    return state.p, report
