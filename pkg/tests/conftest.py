import struct
import sys
from pathlib import Path

import numpy as np
import pytest
from dotenv import load_dotenv

load_dotenv()
sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from kernel_align.datasets.views import LabeledDataset
from kernel_align.preprocess.service import normalize_rows
from kernel_align.preprocess.views import FeatureMatrix


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: needs the real MNIST / CIFAR-10 files and minutes of compute')


def write_idx_images(path, images):
    images = np.asarray(images, dtype=np.uint8)
    count, rows, cols = images.shape
    Path(path).write_bytes(struct.pack('>IIII', 0x00000803, count, rows, cols) + images.tobytes())


def write_idx_labels(path, labels):
    labels = np.asarray(labels, dtype=np.uint8)
    Path(path).write_bytes(struct.pack('>II', 0x00000801, labels.size) + labels.tobytes())


def write_cifar_batch(path, labels, pixels):
    labels = np.asarray(labels, dtype=np.uint8)
    pixels = np.asarray(pixels, dtype=np.uint8).reshape(labels.size, 3072)
    Path(path).write_bytes(np.hstack([labels[:, None], pixels]).tobytes())


def clustered_samples(n, d, c, seed, noise=0.3):
    """Samples drawn around one random prototype per class, values clipped to [0, 1]."""
    rng = np.random.default_rng(seed)
    prototypes = rng.random((c, d))
    labels = np.arange(n) % c
    rng.shuffle(labels)
    samples = np.clip(prototypes[labels] + noise * rng.standard_normal((n, d)), 0.0, 1.0)
    return samples, labels


@pytest.fixture
def clustered_dataset():
    samples, labels = clustered_samples(n=60, d=12, c=3, seed=7)
    return LabeledDataset(samples=samples, labels=labels, c=3)


@pytest.fixture
def normalized_features():
    def make(n, d, seed):
        rng = np.random.default_rng(seed)
        return normalize_rows(FeatureMatrix(rows=rng.standard_normal((n, d))))

    return make


@pytest.fixture
def mnist_like_dir(tmp_path):
    """Tiny IDX files under the standard MNIST names: 4x4 images, 3 classes."""
    rng = np.random.default_rng(11)
    prototypes = rng.integers(0, 256, size=(3, 16))

    def images_for(count):
        labels = np.arange(count) % 3
        noise = rng.integers(-40, 41, size=(count, 16))
        images = np.clip(prototypes[labels] + noise, 0, 255).reshape(count, 4, 4)
        return images, labels

    data_dir = tmp_path / 'mnist'
    data_dir.mkdir()
    train_images, train_labels = images_for(60)
    test_images, test_labels = images_for(30)
    write_idx_images(data_dir / 'train-images-idx3-ubyte', train_images)
    write_idx_labels(data_dir / 'train-labels-idx1-ubyte', train_labels)
    write_idx_images(data_dir / 't10k-images-idx3-ubyte', test_images)
    write_idx_labels(data_dir / 't10k-labels-idx1-ubyte', test_labels)
    return data_dir


def relative_error(analytic, numeric):
    return float(np.max(np.abs(analytic - numeric)) / max(np.max(np.abs(numeric)), 1e-12))
