import numpy as np
import pytest

from tropedge.enhance import (HessianResponse, ThresholdParams,
                              adaptive_threshold, area_filter, hessian_enhance,
                              hessian_filter, otsu_threshold, thin,
                              wavelet_shrink)
from tropedge.errors import InvalidInputError


def flood_fill_components(bits):
    """Independent BFS 8-connected component sizes."""
    h, w = bits.shape
    seen = np.zeros_like(bits, dtype=bool)
    sizes = []
    for r in range(h):
        for c in range(w):
            if bits[r, c] and not seen[r, c]:
                stack = [(r, c)]
                seen[r, c] = True
                size = 0
                while stack:
                    rr, cc = stack.pop()
                    size += 1
                    for dr in (-1, 0, 1):
                        for dc in (-1, 0, 1):
                            nr, nc = rr + dr, cc + dc
                            if (0 <= nr < h and 0 <= nc < w
                                    and bits[nr, nc] and not seen[nr, nc]):
                                seen[nr, nc] = True
                                stack.append((nr, nc))
                sizes.append(size)
    return sizes


class TestHessianFilter:
    def test_constant_gives_zero_eigenvalues(self):
        h = hessian_filter(np.full((6, 6), 0.5), sigma=1.0)
        assert np.allclose(h.lambda1, 0.0, atol=1e-12)
        assert np.allclose(h.lambda2, 0.0, atol=1e-12)

    def test_quadratic_bowl_analytic(self):
        # I = r^2 + c^2 has constant Hessian diag(2, 2); no smoothing
        rr, cc = np.mgrid[0:9, 0:9].astype(float)
        img = (rr - 4) ** 2 + (cc - 4) ** 2
        h = hessian_filter(img, sigma=0.0)
        assert np.allclose(h.lambda1[1:-1, 1:-1], 2.0, atol=1e-10)
        assert np.allclose(h.lambda2[1:-1, 1:-1], 2.0, atol=1e-10)

    def test_matches_generic_eigensolver(self, rng):
        img = rng.random((8, 8))
        h = hessian_filter(img, sigma=0.0)
        from tropedge.image_core import pad
        p = pad(img, 1, "replicate")
        center = p[1:-1, 1:-1]
        d_rr = p[2:, 1:-1] - 2 * center + p[:-2, 1:-1]
        d_cc = p[1:-1, 2:] - 2 * center + p[1:-1, :-2]
        d_rc = (p[2:, 2:] - p[2:, :-2] - p[:-2, 2:] + p[:-2, :-2]) / 4.0
        for r in range(8):
            for c in range(8):
                vals = np.linalg.eigvalsh([[d_rr[r, c], d_rc[r, c]],
                                           [d_rc[r, c], d_cc[r, c]]])
                vals = sorted(vals, key=abs, reverse=True)
                assert h.lambda1[r, c] == pytest.approx(vals[0], abs=1e-10)
                assert h.lambda2[r, c] == pytest.approx(vals[1], abs=1e-10)

    def test_trace_and_determinant_invariants(self, rng):
        img = rng.random((10, 10))
        h = hessian_filter(img, sigma=1.0)
        from tropedge.image_core import pad
        from tropedge.enhance import gaussian_kernel
        from tropedge.tropical import classical_convolve
        sm = classical_convolve(img, gaussian_kernel(1.0))
        p = pad(sm, 1, "replicate")
        center = p[1:-1, 1:-1]
        d_rr = p[2:, 1:-1] - 2 * center + p[:-2, 1:-1]
        d_cc = p[1:-1, 2:] - 2 * center + p[1:-1, :-2]
        d_rc = (p[2:, 2:] - p[2:, :-2] - p[:-2, 2:] + p[:-2, :-2]) / 4.0
        assert np.allclose(h.lambda1 + h.lambda2, d_rr + d_cc, atol=1e-10)
        assert np.allclose(h.lambda1 * h.lambda2, d_rr * d_cc - d_rc ** 2, atol=1e-10)

    def test_magnitude_ordering_holds_everywhere(self, rng):
        h = hessian_filter(rng.random((9, 9)), sigma=0.5)
        assert (np.abs(h.lambda1) >= np.abs(h.lambda2) - 1e-15).all()


class TestHessianEnhance:
    def test_zero_hessian_zeroes_response(self, rng):
        resp = rng.random((5, 5))
        zeros = np.zeros((5, 5))
        out = hessian_enhance(resp, HessianResponse(zeros, zeros))
        assert np.array_equal(out, np.zeros((5, 5)))

    def test_uniform_curvature_preserves_shape(self, rng):
        resp = rng.random((5, 5))
        ones = np.ones((5, 5))
        out = hessian_enhance(resp, HessianResponse(ones, ones))
        from tropedge.image_core import normalize
        assert np.allclose(out, normalize(resp), atol=1e-12)

    def test_ridge_crest_dominates(self):
        cols = np.arange(30, dtype=float)
        profile = np.exp(-((cols - 15.0) ** 2) / 8.0)
        img = np.tile(profile, (20, 1))
        h = hessian_filter(img, sigma=1.0)
        out = hessian_enhance(img, h)
        crest = out[5:15, 14:17].mean()
        off = out[5:15, :8].mean()
        assert crest > off

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(InvalidInputError):
            hessian_enhance(np.zeros((4, 4)),
                            HessianResponse(np.zeros((5, 5)), np.zeros((5, 5))))


class TestWaveletShrink:
    def test_constant_response_is_zero(self):
        assert np.array_equal(wavelet_shrink(np.full((5, 5), 0.4)), np.zeros((5, 5)))

    def test_saturated_response_is_zero(self):
        assert np.array_equal(wavelet_shrink(np.ones((5, 5))), np.zeros((5, 5)))

    def test_matches_direct_formula(self, rng):
        resp = rng.random((6, 6))
        got = wavelet_shrink(resp)
        h, w = resp.shape
        for r in range(h):
            for c in range(w):
                up = resp[max(r - 1, 0), c]
                down = resp[min(r + 1, h - 1), c]
                left = resp[r, max(c - 1, 0)]
                right = resp[r, min(c + 1, w - 1)]
                grad = np.hypot((down - up) / 2.0, (right - left) / 2.0)
                assert got[r, c] == pytest.approx(grad * (1 - resp[r, c]), abs=1e-12)

    def test_nonnegative_everywhere(self, rng):
        assert (wavelet_shrink(rng.random((8, 8))) >= 0).all()

    def test_rejects_out_of_range(self):
        with pytest.raises(InvalidInputError):
            wavelet_shrink(np.full((4, 4), 1.5))
        with pytest.raises(InvalidInputError):
            wavelet_shrink(np.full((4, 4), -0.1))


class TestAdaptiveThreshold:
    def test_fixed_zero_marks_everything(self, rng):
        resp = rng.random((6, 6))
        out = adaptive_threshold(resp, ThresholdParams(mode="fixed", value=0.0))
        assert out.all()

    def test_fixed_one_keeps_only_exact_ones(self):
        resp = np.array([[0.0, 0.5], [1.0, 0.999]])
        out = adaptive_threshold(resp, ThresholdParams(mode="fixed", value=1.0))
        assert out.sum() == 1 and out[1, 0]

    def test_constant_response_zero_offset_all_edges(self):
        resp = np.full((9, 9), 0.37)
        out = adaptive_threshold(resp, ThresholdParams(mode="adaptive-mean",
                                                       window=5, offset=0.0))
        assert out.all()

    def test_fixed_thresholds_nest(self, rng):
        resp = rng.random((10, 10))
        lo = adaptive_threshold(resp, ThresholdParams(mode="fixed", value=0.2))
        hi = adaptive_threshold(resp, ThresholdParams(mode="fixed", value=0.7))
        assert (hi <= lo).all()

    def test_otsu_splits_bimodal(self):
        resp = np.zeros((10, 10))
        resp[:, 5:] = 0.9
        out = adaptive_threshold(resp, ThresholdParams(mode="otsu"))
        assert out[:, 5:].all() and not out[:, :5].any()
        t = otsu_threshold(resp)
        assert 0.0 < t <= 0.9

    def test_param_validation(self):
        with pytest.raises(InvalidInputError):
            ThresholdParams(window=4)
        with pytest.raises(InvalidInputError):
            ThresholdParams(offset=1.5)
        with pytest.raises(InvalidInputError):
            ThresholdParams(mode="fixed", value=1.2)
        with pytest.raises(InvalidInputError):
            ThresholdParams(mode="nope")


class TestThin:
    def test_empty_stays_empty(self):
        assert thin(np.zeros((6, 6), dtype=bool)).sum() == 0

    def test_single_pixel_unchanged(self):
        bits = np.zeros((5, 5), dtype=bool)
        bits[2, 2] = True
        assert np.array_equal(thin(bits), bits)

    def test_thick_bar_becomes_one_pixel_line(self):
        bits = np.zeros((9, 26), dtype=bool)
        bits[3:6, 3:23] = True  # 3 px thick, 20 px long
        out = thin(bits)
        cols = out.sum(axis=0)
        interior = cols[5:21]
        assert (interior == 1).all()
        length = int(out.sum())
        assert 16 <= length <= 20  # up to 2 end pixels eaten per side

    def test_idempotent_and_subset(self, rng):
        bits = rng.random((20, 20)) > 0.55
        once = thin(bits)
        assert np.array_equal(thin(once), once)
        assert not (once & ~bits).any()


class TestAreaFilter:
    @staticmethod
    def _scatter(blobs):
        bits = np.zeros((20, 20), dtype=bool)
        for cells in blobs:
            for r, c in cells:
                bits[r, c] = True
        return bits

    def test_zero_min_is_identity(self, rng):
        bits = rng.random((10, 10)) > 0.7
        assert np.array_equal(area_filter(bits, 0), bits)

    def test_small_blob_removed(self):
        bits = self._scatter([[(2, 2), (2, 3), (3, 2)]])
        assert area_filter(bits, 4).sum() == 0

    def test_mixed_components_against_flood_fill(self):
        blobs = [
            [(1, 1), (1, 2)],                                  # size 2
            [(5, 5), (5, 6), (6, 5), (6, 6), (7, 7)],          # size 5 (diag link)
            [(12, 8 + i) for i in range(9)],                   # size 9
        ]
        bits = self._scatter(blobs)
        assert sorted(flood_fill_components(bits)) == [2, 5, 9]
        out = area_filter(bits, 5)
        assert sorted(flood_fill_components(out)) == [5, 9]

    def test_monotone_in_min_pixels(self, rng):
        bits = rng.random((25, 25)) > 0.6
        previous = bits.sum()
        for m in (2, 4, 8, 16):
            kept = area_filter(bits, m).sum()
            assert kept <= previous
            previous = kept

    def test_negative_min_rejected(self):
        with pytest.raises(InvalidInputError):
            area_filter(np.zeros((3, 3), dtype=bool), -1)
