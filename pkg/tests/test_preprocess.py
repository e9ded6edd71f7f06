import numpy as np
import pytest

from kernel_align.preprocess.service import append_bias, normalize_rows
from kernel_align.preprocess.views import FeatureMatrix


def test_normalize_rows_example():
    out = normalize_rows(FeatureMatrix(rows=[[1.0, 2.0, 3.0]]))
    assert out.normalized
    np.testing.assert_allclose(out.rows[0], [-1 / np.sqrt(2), 0.0, 1 / np.sqrt(2)], atol=1e-15)


def test_constant_row_becomes_zero():
    out = normalize_rows(FeatureMatrix(rows=[[5.0, 5.0, 5.0], [1.0, 0.0, 2.0]]))
    assert out.rows[0].tolist() == [0.0, 0.0, 0.0]
    assert np.linalg.norm(out.rows[1]) == pytest.approx(1.0, abs=1e-12)


def test_normalize_rows_invariants_and_idempotence():
    rng = np.random.default_rng(0)
    once = normalize_rows(FeatureMatrix(rows=rng.standard_normal((50, 9)) * 10 + 3))
    assert np.all(np.abs(once.rows.mean(axis=1)) <= 1e-9)
    assert np.all(np.abs(np.linalg.norm(once.rows, axis=1) - 1) <= 1e-9)
    twice = normalize_rows(once)
    np.testing.assert_allclose(twice.rows, once.rows, atol=1e-12)


def test_append_bias_shape_and_preservation():
    rows = np.array([[0.1, -2.0, 3.5], [4.0, 5.0, 6.0]])
    out = append_bias(FeatureMatrix(rows=rows, normalized=True))
    assert out.rows.shape == (2, 4)
    assert out.rows[:, -1].tolist() == [1.0, 1.0]
    assert out.rows[:, :3].tobytes() == rows.tobytes()
    assert not out.normalized


def test_append_bias_twice_and_empty():
    twice = append_bias(append_bias(FeatureMatrix(rows=np.zeros((2, 3)))))
    assert twice.rows.shape == (2, 5)
    assert twice.rows[:, -2:].tolist() == [[1.0, 1.0], [1.0, 1.0]]
    assert append_bias(FeatureMatrix(rows=np.zeros((0, 3)))).rows.shape == (0, 4)
