import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freqtrain import DataError, ImageTensor
from freqtrain import io as fio


class TestTensorFile:
    @pytest.mark.parametrize("dtype", [np.float32, np.float64, np.uint8])
    def test_roundtrip_bit_exact(self, dtype, tmp_path, rng):
        arr = (rng.random((3, 6, 10)) * 200).astype(dtype)
        path = tmp_path / "t.etns"
        fio.write_tensor(path, arr)
        back = fio.read_tensor(path)
        assert back.dtype == arr.dtype
        np.testing.assert_array_equal(back, arr)

    def test_one_dimensional_tensor(self, tmp_path):
        arr = np.arange(7, dtype=np.float64)
        fio.write_tensor(tmp_path / "v.etns", arr)
        np.testing.assert_array_equal(fio.read_tensor(tmp_path / "v.etns"), arr)

    def test_unsupported_dtype_rejected(self, tmp_path):
        with pytest.raises(DataError):
            fio.write_tensor(tmp_path / "t.etns", np.zeros((2, 2), dtype=np.int32))

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "t.etns"
        path.write_bytes(b"NOPE" + b"\x00" * 32)
        with pytest.raises(DataError):
            fio.read_tensor(path)

    def test_truncated_payload_rejected(self, tmp_path, rng):
        path = tmp_path / "t.etns"
        fio.write_tensor(path, rng.random((4, 4)))
        blob = path.read_bytes()
        path.write_bytes(blob[:-8])
        with pytest.raises(DataError):
            fio.read_tensor(path)

    @settings(max_examples=20, deadline=None)
    @given(
        shape=st.lists(st.integers(1, 6), min_size=1, max_size=4),
        seed=st.integers(0, 2 ** 32 - 1),
    )
    def test_property_roundtrip(self, shape, seed):
        import tempfile
        from pathlib import Path

        arr = np.random.default_rng(seed).standard_normal(shape)
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "p.etns"
            fio.write_tensor(path, arr)
            np.testing.assert_array_equal(fio.read_tensor(path), arr)


class TestQuantization:
    def test_u8_roundtrip_lossless(self):
        values = np.arange(256, dtype=np.uint8).reshape(16, 16)
        np.testing.assert_array_equal(fio.unit_to_u8(fio.u8_to_unit(values)), values)

    def test_requantization_rounds_half_up(self):
        assert fio.unit_to_u8(np.array([0.5 / 255]))[0] == 1
        assert fio.unit_to_u8(np.array([0.49 / 255]))[0] == 0

    def test_out_of_range_values_clamp(self):
        out = fio.unit_to_u8(np.array([-0.2, 1.7]))
        assert out.tolist() == [0, 255]


class TestImageFiles:
    def test_png_roundtrip_rgb(self, tmp_path, rng):
        img = ImageTensor(fio.u8_to_unit((rng.random((3, 24, 24)) * 255).astype(np.uint8)))
        path = tmp_path / "x.png"
        fio.save_png(path, img)
        loaded = fio.load_image(path)
        np.testing.assert_array_equal(loaded.data, img.data)

    def test_pgm_roundtrip_gray(self, tmp_path, rng):
        img = ImageTensor(fio.u8_to_unit((rng.random((1, 16, 16)) * 255).astype(np.uint8)))
        path = tmp_path / "x.pgm"
        fio.save_pgm(path, img)
        loaded = fio.load_image(path)
        np.testing.assert_array_equal(loaded.data, img.data)

    def test_tensor_u8_normalized_on_load(self, tmp_path):
        arr = np.full((1, 4, 4), 51, dtype=np.uint8)
        path = tmp_path / "x.etns"
        fio.write_tensor(path, arr)
        loaded = fio.load_image(path)
        np.testing.assert_allclose(loaded.data, 0.2, atol=1e-12)

    def test_corrupt_png_raises_data_error(self, tmp_path):
        path = tmp_path / "broken.png"
        path.write_bytes(b"\x89PNG\r\n\x1a\nnot really a png")
        with pytest.raises(DataError):
            fio.load_image(path)
