import numpy as np
import pytest
import scipy.linalg

from oaplib import (ProblemSpec, gen_convdiff2d, gen_poisson_lshape,
                    gen_random_dense, gen_tridiag_unsym, norm2,
                    sample_solution)
from oaplib.problems import lshape_m_for, lshape_size


def reachable_from_zero(A):
    """BFS over the sparsity pattern (structural irreducibility check)."""
    n = A.nrows
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        i = stack.pop()
        lo, hi = A.row_offsets[i], A.row_offsets[i + 1]
        for j in A.col_indices[lo:hi]:
            if not seen[j]:
                seen[j] = True
                stack.append(int(j))
    return bool(seen.all())


class TestConvDiff:
    def test_small_pure_laplacian_stencil(self):
        p = gen_convdiff2d(2, 2, p1=0.0, p2=0.0, p3=0.0)
        dense = p.A.to_dense()
        np.testing.assert_allclose(np.diag(dense), 36.0, rtol=1e-15)
        off = dense[dense != 0.0]
        assert set(np.round(off, 10)) == {36.0, -9.0}
        assert np.max(np.abs(dense - dense.T)) == 0.0

    def test_pure_laplacian_symmetric(self):
        p = gen_convdiff2d(9, 10, p1=0.0, p2=0.0, p3=0.0)
        dense = p.A.to_dense()
        assert np.max(np.abs(dense - dense.T)) == 0.0
        # weak diagonal dominance and structural irreducibility
        diag = np.abs(np.diag(dense))
        offsum = np.sum(np.abs(dense), axis=1) - diag
        assert np.all(diag >= offsum - 1e-12)
        assert reachable_from_zero(p.A)

    def test_convection_term_asymmetry(self):
        nx = ny = 4
        p = gen_convdiff2d(nx, ny, p1=1.0, p2=0.0, p3=0.0)
        dense = p.A.to_dense()
        hx = 1.0 / (nx + 1)
        # east coupling minus its mirror equals twice the upwind term
        assert dense[0, 1] - dense[1, 0] == pytest.approx(2.0 * (1.0 / (2 * hx)),
                                                          rel=1e-14)

    def test_rhs_modes(self):
        plain = gen_convdiff2d(3, 3)
        np.testing.assert_array_equal(plain.b, np.ones(9))
        assert plain.x_true is None
        built = gen_convdiff2d(3, 3, constructed=True)
        np.testing.assert_array_equal(built.x_true, np.ones(9))
        assert norm2(built.A.apply(built.x_true) - built.b) == 0.0


class TestPoissonLShape:
    def test_symmetric_uniform_diagonal(self):
        p = gen_poisson_lshape(5)
        dense = p.A.to_dense()
        h = 1.0 / 10.0
        assert np.max(np.abs(dense - dense.T)) == 0.0
        np.testing.assert_allclose(np.diag(dense), 4.0 / h**2, rtol=1e-15)

    def test_minimal_grid_stencil_bounds(self):
        p = gen_poisson_lshape(3)
        assert p.n == lshape_size(3) == 16
        h2 = (1.0 / 6.0) ** 2
        dense = p.A.to_dense()
        for i in range(p.n):
            off = dense[i, np.arange(p.n) != i]
            nz = off[off != 0.0]
            assert 1 <= len(nz) <= 4
            np.testing.assert_allclose(nz, -1.0 / h2, rtol=1e-15)

    def test_positive_definite_at_desk_scale(self):
        m = lshape_m_for(200)
        assert m == 9 and lshape_size(m) == 208
        p = gen_poisson_lshape(m)
        eigs = np.linalg.eigvalsh(p.A.to_dense())
        assert eigs.min() > 0.0

    def test_size_selection_near_targets(self):
        assert lshape_m_for(500) == 14
        assert lshape_size(14) == 533


class TestTridiagUnsym:
    def test_three_by_three_rows(self):
        p = gen_tridiag_unsym(3)
        np.testing.assert_allclose(
            p.A.to_dense(),
            [[2.0, -1.1, 0.0], [-1.0, 2.0, -1.1], [0.0, -1.0, 2.0]],
            rtol=1e-15)

    def test_asymmetry_is_point_one(self):
        p = gen_tridiag_unsym(6)
        skew = p.A.to_dense() - p.A.to_dense().T
        nz = skew[skew != 0.0]
        np.testing.assert_allclose(np.abs(nz), 0.1, rtol=1e-12)

    def test_condition_blows_up(self):
        p = gen_tridiag_unsym(600)
        assert np.linalg.cond(p.A.to_dense()) > 1e12

    def test_constructed_solution(self):
        p = gen_tridiag_unsym(50)
        assert norm2(p.A.apply(p.x_true) - p.b) <= 1e-12 * norm2(p.b)


class TestRandomDense:
    def test_deterministic_bitwise(self):
        a = gen_random_dense(40, seed=7)
        b = gen_random_dense(40, seed=7)
        assert np.array_equal(a.A.values, b.A.values)
        assert np.array_equal(a.b, b.b)

    def test_entries_in_unit_interval(self):
        p = gen_random_dense(300, seed=11)
        assert p.A.values.min() > 0.0
        assert p.A.values.max() < 1.0

    def test_nonsingular_via_lu_oracle(self):
        p = gen_random_dense(300, seed=11)
        lu, piv = scipy.linalg.lu_factor(p.A.values)
        assert np.min(np.abs(np.diag(lu))) > 0.0

    def test_constructed_solution(self):
        p = gen_random_dense(64, seed=2)
        assert norm2(p.A.apply(p.x_true) - p.b) <= 1e-12 * norm2(p.b)


class TestSampleSolution:
    def test_exp1_midpoint_value(self):
        x = sample_solution("exp1", 3)
        assert x[1] == pytest.approx(0.25 * np.exp(0.5), rel=1e-15)
        assert x[1] == pytest.approx(0.41218031767503205, rel=1e-15)

    def test_exp1_grid_points(self):
        x = sample_solution("exp1", 3)
        t = np.array([0.25, 0.5, 0.75])
        np.testing.assert_allclose(x, t * (1 - t) * np.exp(t), rtol=1e-15)

    def test_exp3_endpoint_is_zero(self):
        x = sample_solution("exp3", 10)
        assert x[-1] == 0.0

    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            sample_solution("exp2", 5)


class TestProblemSpec:
    def test_dispatch(self):
        spec = ProblemSpec("tridiag-unsym", n=12)
        assert spec.generate().label == "tridiag-unsym-12"
        spec = ProblemSpec("convdiff2d", nx=3, ny=4)
        assert spec.generate().n == 12
        spec = ProblemSpec("poisson-lshape", m=4)
        assert spec.generate().n == lshape_size(4)
        spec = ProblemSpec("random-dense", n=10, seed=1)
        assert spec.generate().n == 10

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            ProblemSpec("hilbert").generate()

    def test_generators_pure(self):
        a = ProblemSpec("convdiff2d", nx=4, ny=5).generate()
        b = ProblemSpec("convdiff2d", nx=4, ny=5).generate()
        assert np.array_equal(a.A.values, b.A.values)
        assert np.array_equal(a.b, b.b)

    @pytest.mark.parametrize("bad", [
        ProblemSpec("convdiff2d", nx=1, ny=5),
        ProblemSpec("poisson-lshape", m=2),
        ProblemSpec("tridiag-unsym", n=1),
        ProblemSpec("random-dense", n=0),
    ])
    def test_size_preconditions(self, bad):
        with pytest.raises(ValueError):
            bad.generate()
