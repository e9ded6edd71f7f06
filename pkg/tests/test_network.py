import csv

import numpy as np
import pytest

from kernel_align.exceptions import ArgumentError, ConfigError, DataFormatError, DataIOError
from kernel_align.layer_trainer.service import forward
from kernel_align.layer_trainer.views import LayerParams, TrainConfig
from kernel_align.network.service import (
    decode_stack,
    encode_stack,
    export_filters,
    load_stack,
    save_stack,
    train_stack,
    transform,
)
from kernel_align.network.views import LayerStack
from kernel_align.preprocess.service import normalize_rows
from kernel_align.preprocess.views import FeatureMatrix


def _random_stack(dims, seed=0, sigma=1.0):
    rng = np.random.default_rng(seed)
    layers = [LayerParams(W=rng.standard_normal((a + 1, b)), sigma=sigma) for a, b in zip(dims[:-1], dims[1:])]
    return LayerStack(layers=tuple(layers), input_dim=dims[0])


def test_transform_upto_zero_is_normalized_input(clustered_dataset):
    stack = _random_stack([12, 5, 3])
    out = transform(stack, clustered_dataset, 0)
    assert out.normalized
    np.testing.assert_array_equal(out.rows, normalize_rows(FeatureMatrix(rows=clustered_dataset.samples)).rows)


def test_transform_zero_weights_give_zero_output(clustered_dataset):
    stack = LayerStack(layers=(LayerParams(W=np.zeros((13, 4))),), input_dim=12)
    out = transform(stack, clustered_dataset, 1)
    assert not out.normalized
    assert out.rows.shape == (60, 4)
    assert not out.rows.any()


def test_transform_follows_the_layer_recursion(clustered_dataset):
    stack = _random_stack([12, 6, 4, 2], seed=1)
    for k in range(1, stack.depth + 1):
        previous = normalize_rows(transform(stack, clustered_dataset, k - 1))
        expected = forward(previous, stack.layers[k - 1])
        np.testing.assert_allclose(transform(stack, clustered_dataset, k).rows, expected.rows, atol=1e-12)


def test_transform_bounds_and_width(clustered_dataset):
    stack = _random_stack([12, 5])
    with pytest.raises(ArgumentError):
        transform(stack, clustered_dataset, 2)
    with pytest.raises(ArgumentError):
        transform(stack, clustered_dataset, -1)
    with pytest.raises(ConfigError):
        transform(_random_stack([7, 5]), clustered_dataset, 1)


def test_stack_rejects_mismatched_layers():
    with pytest.raises(ConfigError):
        LayerStack(layers=(LayerParams(W=np.ones((4, 3))), LayerParams(W=np.ones((3, 2)))), input_dim=3)
    with pytest.raises(ConfigError):
        LayerStack(layers=(LayerParams(W=np.ones((4, 3))),), input_dim=5)


def test_save_and_load_are_bitwise(tmp_path):
    stack = _random_stack([12, 5, 3], seed=2, sigma=0.75)
    path = tmp_path / 'weights.kstk'
    save_stack(stack, path)
    loaded = load_stack(path)
    assert loaded.same_as(stack)
    assert loaded.layers[1].sigma == 0.75
    assert path.read_bytes()[:4] == b'KSTK'
    assert len(path.read_bytes()) == 12 + 2 * 16 + 8 * (13 * 5 + 6 * 3)


def test_empty_stack_round_trips():
    loaded = decode_stack(encode_stack(LayerStack()))
    assert loaded.depth == 0
    assert loaded.input_dim == 0


def test_decode_rejects_damaged_files():
    payload = encode_stack(_random_stack([4, 3, 2]))
    with pytest.raises(DataFormatError):
        decode_stack(payload[:-1])
    with pytest.raises(DataFormatError):
        decode_stack(payload[:10])
    with pytest.raises(DataFormatError):
        decode_stack(payload + b'\x00')
    with pytest.raises(DataFormatError):
        decode_stack(b'XSTK' + payload[4:])
    with pytest.raises(DataFormatError):
        decode_stack(payload[:4] + (2).to_bytes(4, 'little') + payload[8:])


def test_load_missing_file(tmp_path):
    with pytest.raises(DataIOError):
        load_stack(tmp_path / 'missing.kstk')


def test_train_stack_shapes_and_determinism(clustered_dataset):
    cfg = TrainConfig(max_iters=5)
    stack, traces = train_stack(clustered_dataset, [5, 3], cfg)
    assert stack.depth == 2
    assert [layer.W.shape for layer in stack.layers] == [(13, 5), (6, 3)]
    assert stack.input_dim == 12 and stack.output_dim == 3
    assert [t.iters_run for t in traces] == [5, 5]

    again, _ = train_stack(clustered_dataset, [5, 3], cfg)
    assert again.same_as(stack)


def test_train_stack_needs_widths(clustered_dataset):
    with pytest.raises(ArgumentError):
        train_stack(clustered_dataset, [], TrainConfig())


def test_export_filters(tmp_path):
    stack = _random_stack([4, 3], seed=6)
    path = tmp_path / 'filters.csv'
    export_filters(stack, 1, path)
    with open(path, newline='') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['unit', 'w0', 'w1', 'w2', 'w3']
    assert len(rows) == 4
    values = np.array([[float(v) for v in row[1:]] for row in rows[1:]])
    np.testing.assert_array_equal(values, stack.layers[0].W[:-1].T)

    with pytest.raises(ArgumentError):
        export_filters(stack, 2, path)
