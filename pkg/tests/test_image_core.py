import numpy as np
import pytest

from tropedge.errors import InvalidInputError
from tropedge.image_core import (load_image, normalize, pad, resize, resize_to,
                                 save_image, to_grayscale)


def bilinear_oracle(img, out_h, out_w):
    """Independent per-pixel bilinear evaluation (half-pixel centers)."""
    in_h, in_w = img.shape
    out = np.zeros((out_h, out_w))
    for r in range(out_h):
        for c in range(out_w):
            sr = min(max((r + 0.5) * in_h / out_h - 0.5, 0.0), in_h - 1.0)
            sc = min(max((c + 0.5) * in_w / out_w - 0.5, 0.0), in_w - 1.0)
            r0, c0 = int(np.floor(sr)), int(np.floor(sc))
            r1, c1 = min(r0 + 1, in_h - 1), min(c0 + 1, in_w - 1)
            fr, fc = sr - r0, sc - c0
            out[r, c] = (img[r0, c0] * (1 - fr) * (1 - fc)
                         + img[r0, c1] * (1 - fr) * fc
                         + img[r1, c0] * fr * (1 - fc)
                         + img[r1, c1] * fr * fc)
    return out


class TestToGrayscale:
    def test_white_stays_white(self):
        rgb = np.ones((3, 4, 3))
        assert np.allclose(to_grayscale(rgb), 1.0)

    def test_pure_red_weight(self):
        rgb = np.zeros((2, 2, 3))
        rgb[..., 0] = 1.0
        assert np.allclose(to_grayscale(rgb), 0.299)

    def test_matches_per_pixel_dot_product(self, rng):
        rgb = rng.random((4, 4, 3))
        got = to_grayscale(rgb)
        for r in range(4):
            for c in range(4):
                expected = (0.299 * rgb[r, c, 0] + 0.587 * rgb[r, c, 1]
                            + 0.114 * rgb[r, c, 2])
                assert got[r, c] == pytest.approx(expected, abs=1e-12)

    def test_output_in_unit_range(self, rng):
        rgb = rng.random((7, 9, 3))
        gray = to_grayscale(rgb)
        assert gray.min() >= 0.0 and gray.max() <= 1.0

    def test_rejects_wrong_channel_count(self):
        with pytest.raises(InvalidInputError):
            to_grayscale(np.zeros((4, 4, 4)))
        with pytest.raises(InvalidInputError):
            to_grayscale(np.zeros((4, 4)))


class TestPad:
    def test_zero_ring(self):
        out = pad(np.ones((2, 2)), 1, "zero")
        assert out.shape == (4, 4)
        assert out[1:3, 1:3].sum() == 4
        assert out.sum() == 4

    def test_replicate_ones(self):
        out = pad(np.ones((2, 2)), 1, "replicate")
        assert np.array_equal(out, np.ones((4, 4)))

    def test_replicate_ramp_cell_by_cell(self):
        img = np.arange(9, dtype=float).reshape(3, 3)
        out = pad(img, 2, "replicate")
        for r in range(7):
            for c in range(7):
                rr = min(max(r - 2, 0), 2)
                cc = min(max(c - 2, 0), 2)
                assert out[r, c] == img[rr, cc]

    @pytest.mark.parametrize("mode", ["zero", "replicate"])
    def test_pad_then_crop_is_identity(self, rng, mode):
        img = rng.random((5, 7))
        out = pad(img, 3, mode)
        assert np.array_equal(out[3:-3, 3:-3], img)

    def test_negative_margin_rejected(self):
        with pytest.raises(InvalidInputError):
            pad(np.ones((2, 2)), -1)


class TestResize:
    def test_factor_one_is_identity(self, rng):
        img = rng.random((6, 8))
        assert np.array_equal(resize(img, 1.0), img)

    def test_constant_stays_constant(self):
        out = resize(np.full((2, 2), 0.5), 2.0)
        assert out.shape == (4, 4)
        assert np.allclose(out, 0.5)

    def test_ramp_halved_matches_oracle(self):
        img = np.arange(16, dtype=float).reshape(4, 4) / 15.0
        got = resize(img, 0.5)
        assert got.shape == (2, 2)
        assert np.allclose(got, bilinear_oracle(img, 2, 2), atol=1e-12)

    def test_random_matches_oracle(self, rng):
        img = rng.random((5, 7))
        got = resize(img, 1.6)
        assert np.allclose(got, bilinear_oracle(img, 8, 11), atol=1e-12)

    def test_upscale_then_downscale_restores_dims(self, rng):
        img = rng.random((6, 9))
        assert resize(resize(img, 2.0), 0.5).shape == img.shape

    def test_rejects_bad_factors(self):
        with pytest.raises(InvalidInputError):
            resize(np.ones((4, 4)), 0.0)
        with pytest.raises(InvalidInputError):
            resize(np.ones((4, 4)), -2.0)
        with pytest.raises(InvalidInputError):
            resize(np.ones((4, 4)), 0.01)

    def test_resize_to_exact_dims(self, rng):
        img = rng.random((10, 10))
        assert resize_to(img, (3, 17)).shape == (3, 17)


class TestNormalize:
    def test_affine_map(self):
        out = normalize(np.array([[-3.0, 0.0, 1.0]]))
        assert np.allclose(out, [[0.0, 0.75, 1.0]])

    def test_constant_maps_to_zeros(self):
        assert np.array_equal(normalize(np.full((3, 3), 4.2)), np.zeros((3, 3)))

    def test_random_preserves_order(self, rng):
        img = rng.random((5, 5))
        out = normalize(img)
        assert out.min() == 0.0 and out.max() == 1.0
        assert np.array_equal(np.argsort(img.ravel()), np.argsort(out.ravel()))

    def test_idempotent(self, rng):
        img = rng.random((6, 6)) * 7 - 3
        once = normalize(img)
        assert np.allclose(normalize(once), once, atol=1e-12)


class TestFileIO:
    @pytest.mark.parametrize("ext", [".png", ".pgm"])
    def test_gray_roundtrip_exact(self, tmp_path, ext):
        img = np.linspace(0, 1, 48).reshape(6, 8)
        quantized = np.rint(img * 255) / 255.0
        path = tmp_path / f"img{ext}"
        save_image(path, img)
        assert np.allclose(load_image(path), quantized, atol=1e-12)

    def test_rgb_png_roundtrip(self, tmp_path, rng):
        rgb = np.rint(rng.random((5, 6, 3)) * 255) / 255.0
        path = tmp_path / "color.png"
        save_image(path, rgb)
        loaded = load_image(path)
        assert loaded.shape == (5, 6, 3)
        assert np.allclose(loaded, rgb, atol=1e-12)

    def test_edge_map_saves_binary(self, tmp_path):
        edges = np.zeros((4, 4), dtype=bool)
        edges[1, 2] = True
        path = tmp_path / "edges.png"
        save_image(path, edges)
        loaded = load_image(path)
        assert loaded[1, 2] == 1.0
        assert loaded.sum() == 1.0

    def test_missing_file_raises(self, tmp_path):
        with pytest.raises(InvalidInputError):
            load_image(tmp_path / "nope.png")

    def test_pgm_rejects_color(self, tmp_path):
        with pytest.raises(InvalidInputError):
            save_image(tmp_path / "c.pgm", np.zeros((3, 3, 3)))
