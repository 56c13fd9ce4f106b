import numpy as np
import pytest

from oaplib import (CsrMatrix, DenseMatrix, MatrixMarketError,
                    read_matrix_market, write_matrix_market)

from conftest import random_sparse


def test_identity_roundtrip(tmp_path):
    path = tmp_path / "eye.mtx"
    write_matrix_market(path, CsrMatrix.identity(2))
    back = read_matrix_market(path)
    assert isinstance(back, CsrMatrix)
    assert back.shape == (2, 2)
    np.testing.assert_array_equal(back.row_offsets, [0, 1, 2])
    np.testing.assert_array_equal(back.col_indices, [0, 1])
    np.testing.assert_array_equal(back.values, [1.0, 1.0])


def test_one_based_coordinate_file(tmp_path):
    path = tmp_path / "coo.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real general\n"
        "% a comment\n"
        "2 3 3\n"
        "1 1 5.0\n"
        "2 3 -1.5\n"
        "1 2 2.0\n")
    m = read_matrix_market(path)
    assert m.shape == (2, 3)
    dense = m.to_dense()
    np.testing.assert_array_equal(dense, [[5.0, 2.0, 0.0], [0.0, 0.0, -1.5]])


def test_sparse_roundtrip_value_exact(tmp_path, rng):
    A = random_sparse(rng, 50, density=0.1)
    path = tmp_path / "r.mtx"
    write_matrix_market(path, A)
    back = read_matrix_market(path)
    assert back.nnz == A.nnz
    np.testing.assert_array_equal(back.row_offsets, A.row_offsets)
    np.testing.assert_array_equal(back.col_indices, A.col_indices)
    assert np.max(np.abs(back.values - A.values)) == 0.0
    # write -> read -> write reproduces the bytes
    path2 = tmp_path / "r2.mtx"
    write_matrix_market(path2, back)
    assert path.read_text() == path2.read_text()


def test_dense_roundtrip(tmp_path, rng):
    D = DenseMatrix(rng.standard_normal((7, 4)))
    path = tmp_path / "d.mtx"
    write_matrix_market(path, D)
    back = read_matrix_market(path)
    assert isinstance(back, DenseMatrix)
    assert np.max(np.abs(back.values - D.values)) == 0.0


def test_vector_roundtrip(tmp_path, rng):
    v = rng.standard_normal(11)
    path = tmp_path / "v.mtx"
    write_matrix_market(path, v)
    back = read_matrix_market(path)
    assert isinstance(back, np.ndarray) and back.ndim == 1
    assert np.max(np.abs(back - v)) == 0.0


def test_array_is_column_major(tmp_path):
    path = tmp_path / "a.mtx"
    path.write_text(
        "%%MatrixMarket matrix array real general\n"
        "2 2\n"
        "1\n2\n3\n4\n")
    m = read_matrix_market(path)
    np.testing.assert_array_equal(m.values, [[1.0, 3.0], [2.0, 4.0]])


@pytest.mark.parametrize("content,lineno", [
    ("%%MatrixMarket tensor coordinate real general\n1 1 0\n", 1),
    ("%%MatrixMarket matrix coordinate complex general\n1 1 0\n", 1),
    ("%%MatrixMarket matrix coordinate real symmetric\n1 1 0\n", 1),
    ("not a header\n", 1),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3),
    ("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 x 1.0\n", 3),
    ("%%MatrixMarket matrix array real general\n2 1\n1.0\nbogus\n", 4),
])
def test_parse_errors_carry_line_numbers(tmp_path, content, lineno):
    path = tmp_path / "bad.mtx"
    path.write_text(content)
    with pytest.raises(MatrixMarketError) as err:
        read_matrix_market(path)
    assert err.value.lineno == lineno


def test_entry_count_mismatch(tmp_path):
    path = tmp_path / "short.mtx"
    path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n")
    with pytest.raises(MatrixMarketError):
        read_matrix_market(path)


def test_seventeen_digit_precision(tmp_path):
    v = np.array([np.pi, 1.0 / 3.0, 6.0659e-12])
    path = tmp_path / "p.mtx"
    write_matrix_market(path, v)
    back = read_matrix_market(path)
    assert np.max(np.abs(back - v)) == 0.0


def test_empty_matrix_roundtrip(tmp_path):
    empty = CsrMatrix(2, 3, [0, 0, 0], [], [])
    path = tmp_path / "empty.mtx"
    write_matrix_market(path, empty)
    back = read_matrix_market(path)
    assert back.shape == (2, 3)
    assert back.nnz == 0
