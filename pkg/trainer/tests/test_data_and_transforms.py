import numpy as np
import pytest

from toytrainer import (
    crop_batch,
    downsample_mean_batch,
    highpass_batch,
    load_cifar_dir,
    lowpass_batch,
    synthesize,
    upsample_to_64,
    write_cifar_batches,
)
from toytrainer.data import RECORD_BYTES, DatasetError
from toytrainer.transforms import apply_transform_batch, restandardize_batch


class TestDataset:
    def test_cifar_format_roundtrip(self, tmp_path):
        write_cifar_batches(tmp_path, n_train=50, n_test=20, seed=3)
        blob = (tmp_path / "data_batch_1.bin").read_bytes()
        assert len(blob) == 50 * RECORD_BYTES
        train_x, train_y, test_x, test_y = load_cifar_dir(tmp_path)
        assert train_x.shape == (50, 3, 32, 32) and train_x.dtype == np.uint8
        assert test_x.shape == (20, 3, 32, 32)
        assert set(train_y) <= set(range(10))

    def test_generation_deterministic(self):
        a, la = synthesize(20, seed=5)
        b, lb = synthesize(20, seed=5)
        np.testing.assert_array_equal(a, b)
        np.testing.assert_array_equal(la, lb)

    def test_missing_directory_raises(self, tmp_path):
        with pytest.raises(DatasetError):
            load_cifar_dir(tmp_path / "nope")

    def test_truncated_batch_raises(self, tmp_path):
        write_cifar_batches(tmp_path, n_train=10, n_test=5, seed=0)
        path = tmp_path / "data_batch_1.bin"
        path.write_bytes(path.read_bytes()[:-100])
        with pytest.raises(DatasetError):
            load_cifar_dir(tmp_path)

    def test_upsample_shape_and_range(self):
        images, _ = synthesize(4, seed=0)
        up = upsample_to_64(images)
        assert up.shape == (4, 3, 64, 64)
        assert up.min() >= 0.0 and up.max() <= 1.0


class TestTransforms:
    def test_crop_resizes_and_preserves_mean(self, rng):
        x = rng.random((3, 2, 64, 64))
        out = crop_batch(x, 32)
        assert out.shape == (3, 2, 32, 32)
        np.testing.assert_allclose(out.mean(axis=(2, 3)), x.mean(axis=(2, 3)), atol=1e-12)

    def test_crop_at_full_size_is_identity(self, rng):
        x = rng.random((1, 1, 32, 32))
        np.testing.assert_array_equal(crop_batch(x, 32), x)

    def test_filters_partition(self, rng):
        x = rng.random((2, 3, 32, 32))
        np.testing.assert_allclose(lowpass_batch(x, 5.0) + highpass_batch(x, 5.0), x, atol=1e-9)

    def test_downsample_mean(self):
        x = np.arange(16, dtype=float).reshape(1, 1, 4, 4)
        out = downsample_mean_batch(x, 2)
        np.testing.assert_allclose(out[0, 0], [[2.5, 4.5], [10.5, 12.5]])

    def test_dispatch_matches_direct_calls(self, rng):
        x = rng.random((2, 3, 64, 64))
        np.testing.assert_array_equal(apply_transform_batch(x, {"kind": "identity"}), x)
        np.testing.assert_array_equal(
            apply_transform_batch(x, {"kind": "crop", "B": 32}), crop_batch(x, 32)
        )
        np.testing.assert_array_equal(
            apply_transform_batch(x, {"kind": "lowpass", "r": 4.0}), lowpass_batch(x, 4.0)
        )

    def test_restandardize_sets_contrast(self, rng):
        x = rng.random((4, 3, 16, 16)) * 0.1
        out = restandardize_batch(x, 0.25)
        centered = out - out.mean(axis=(2, 3), keepdims=True)
        stds = centered.std(axis=(2, 3)).mean(axis=1)
        np.testing.assert_allclose(stds, 0.25, atol=1e-9)
