import numpy as np
import pytest
from conftest import write_cifar_batch, write_idx_images, write_idx_labels

from kernel_align.datasets.service import (
    load_cifar10,
    load_cifar10_dir,
    load_idx,
    load_mnist,
    subsample,
    train_test_split,
)
from kernel_align.datasets.views import LabeledDataset
from kernel_align.exceptions import ArgumentError, DataConsistencyError, DataFormatError, DataIOError


@pytest.fixture
def idx_pair(tmp_path):
    images = np.arange(3 * 2 * 2, dtype=np.uint8).reshape(3, 2, 2)
    images[0, 0, 0] = 255
    write_idx_images(tmp_path / 'images', images)
    write_idx_labels(tmp_path / 'labels', [7, 0, 3])
    return tmp_path / 'images', tmp_path / 'labels'


def test_load_idx_scales_and_keeps_order(idx_pair):
    ds = load_idx(*idx_pair)
    assert (ds.n, ds.d, ds.c) == (3, 4, 10)
    assert ds.samples[0, 0] == 1.0
    assert ds.samples[1, 0] == pytest.approx(4 / 255)
    assert ds.labels.tolist() == [7, 0, 3]
    assert ds.samples.min() >= 0.0 and ds.samples.max() <= 1.0


def test_load_idx_rejects_label_file_as_images(idx_pair):
    _, labels_path = idx_pair
    with pytest.raises(DataFormatError, match='0x00000803'):
        load_idx(labels_path, labels_path)


def test_load_idx_count_mismatch(idx_pair, tmp_path):
    images_path, _ = idx_pair
    write_idx_labels(tmp_path / 'short_labels', [1, 2])
    with pytest.raises(DataConsistencyError):
        load_idx(images_path, tmp_path / 'short_labels')


def test_load_idx_truncated_reports_offset(idx_pair, tmp_path):
    images_path, labels_path = idx_pair
    payload = images_path.read_bytes()[:-5]
    truncated = tmp_path / 'truncated'
    truncated.write_bytes(payload)
    with pytest.raises(DataIOError) as info:
        load_idx(truncated, labels_path)
    assert info.value.offset == len(payload)
    assert 'byte offset' in str(info.value)


def test_load_mnist_resolves_standard_names(tmp_path):
    images = np.zeros((2, 28, 28), dtype=np.uint8)
    write_idx_images(tmp_path / 't10k-images.idx3-ubyte', images)
    write_idx_labels(tmp_path / 't10k-labels-idx1-ubyte', [1, 2])
    ds = load_mnist(tmp_path, 'test')
    assert (ds.n, ds.d) == (2, 784)

    with pytest.raises(DataIOError):
        load_mnist(tmp_path, 'train')
    with pytest.raises(ArgumentError):
        load_mnist(tmp_path, 'validation')


def test_load_cifar10_record_layout(tmp_path):
    pixels = np.zeros((2, 3072), dtype=np.uint8)
    pixels[0, 0] = 255  # first red pixel of record 0
    pixels[1, 2048] = 51  # first blue pixel of record 1
    write_cifar_batch(tmp_path / 'batch.bin', [0, 9], pixels)
    ds = load_cifar10([tmp_path / 'batch.bin'])
    assert (ds.n, ds.d, ds.c) == (2, 3072, 10)
    assert ds.labels.tolist() == [0, 9]
    assert ds.samples[0, 0] == 1.0
    assert ds.samples[1, 2048] == pytest.approx(0.2)


def test_load_cifar10_concatenates_in_path_order(tmp_path):
    write_cifar_batch(tmp_path / 'a.bin', [3], np.zeros(3072))
    write_cifar_batch(tmp_path / 'b.bin', [5, 6], np.zeros((2, 3072)))
    ds = load_cifar10([tmp_path / 'b.bin', tmp_path / 'a.bin'])
    assert ds.labels.tolist() == [5, 6, 3]


def test_load_cifar10_rejects_partial_record(tmp_path):
    (tmp_path / 'partial.bin').write_bytes(bytes(3072))
    with pytest.raises(DataFormatError):
        load_cifar10([tmp_path / 'partial.bin'])


def test_load_cifar10_rejects_bad_label(tmp_path):
    write_cifar_batch(tmp_path / 'bad.bin', [10], np.zeros(3072))
    with pytest.raises(DataFormatError):
        load_cifar10([tmp_path / 'bad.bin'])


def test_load_cifar10_dir_needs_all_batches(tmp_path):
    write_cifar_batch(tmp_path / 'test_batch.bin', [1, 2], np.zeros((2, 3072)))
    assert load_cifar10_dir(tmp_path, 'test').n == 2
    with pytest.raises(DataIOError):
        load_cifar10_dir(tmp_path, 'train')


def test_subsample_full_permutation_preserves_pairs(clustered_dataset):
    ds = clustered_dataset
    sub = subsample(ds, ds.n, seed=3)
    original = sorted(zip(map(tuple, ds.samples), ds.labels.tolist()))
    permuted = sorted(zip(map(tuple, sub.samples), sub.labels.tolist()))
    assert original == permuted


def test_subsample_is_deterministic(clustered_dataset):
    a = subsample(clustered_dataset, 20, seed=5)
    b = subsample(clustered_dataset, 20, seed=5)
    c = subsample(clustered_dataset, 20, seed=6)
    assert a.n == 20
    assert a.samples.tobytes() == b.samples.tobytes()
    assert a.labels.tobytes() == b.labels.tobytes()
    assert a.samples.tobytes() != c.samples.tobytes()


def test_subsample_bounds(clustered_dataset):
    with pytest.raises(ArgumentError):
        subsample(clustered_dataset, clustered_dataset.n + 1, seed=0)
    with pytest.raises(ArgumentError):
        subsample(clustered_dataset, 0, seed=0)


def test_train_test_split_is_disjoint(clustered_dataset):
    train, test = train_test_split(clustered_dataset, 15, seed=1)
    assert (train.n, test.n) == (45, 15)
    rows = {tuple(r) for r in train.samples} | {tuple(r) for r in test.samples}
    assert len(rows) == clustered_dataset.n


def test_labeled_dataset_validates_labels():
    with pytest.raises(DataConsistencyError):
        LabeledDataset(samples=np.zeros((2, 3)), labels=[0, 1, 2])
    with pytest.raises(DataConsistencyError):
        LabeledDataset(samples=np.zeros((2, 3)), labels=[0, 4], c=3)
