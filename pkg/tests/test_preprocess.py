import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panfuse.errors import DegenerateInputError, ParameterError
from panfuse.preprocess import (
    CalibrationParams,
    apply_shift,
    calibration,
    dos_correct,
    estimate_shift,
    nearest_rank_quantile,
    radiometric_calibrate,
    resample,
)
from panfuse.raster import Raster, make_raster


def _ncc_oracle(ref, mov, dx, dy, m):
    """Scalar two-pass NCC over the fixed central window of ``mov``."""
    H, W = mov.shape
    xs, ys = [], []
    for y in range(m, H - m):
        for x in range(m, W - m):
            xs.append(ref[y - dy][x - dx])
            ys.append(mov[y][x])
    n = len(xs)
    ma, mb = sum(xs) / n, sum(ys) / n
    sab = sum((a - ma) * (b - mb) for a, b in zip(xs, ys))
    saa = sum((a - ma) ** 2 for a in xs)
    sbb = sum((b - mb) ** 2 for b in ys)
    return sab / math.sqrt(saa * sbb)


class TestResample:
    def test_nearest_block_upscale(self):
        r = make_raster(2, 2, 1, [1, 2, 3, 4])
        out = resample(r, 4, 4, "nearest").data[0]
        assert out.tolist() == [[1, 1, 2, 2], [1, 1, 2, 2], [3, 3, 4, 4], [3, 3, 4, 4]]

    def test_bilinear_midpoint(self):
        r = make_raster(2, 1, 1, [0, 10])
        assert resample(r, 3, 1).data[0, 0].tolist() == [0.0, 5.0, 10.0]

    def test_bilinear_pixel_center_quarter_points(self):
        # targets sit at source coordinates -0.25, 0.25, 0.75, 1.25 (clamped ends)
        r = make_raster(2, 1, 1, [0, 10])
        assert resample(r, 4, 1).data[0, 0].tolist() == [0.0, 2.5, 7.5, 10.0]

    @pytest.mark.parametrize("method", ["nearest", "bilinear"])
    def test_identity_dims(self, method, rng):
        r = Raster(rng.normal(size=(2, 5, 3)))
        assert resample(r, 3, 5, method).identical(r)

    def test_bilinear_preserves_constants(self):
        r = Raster(np.full((2, 3, 5), 7.25))
        assert np.all(resample(r, 11, 6).data == 7.25)

    def test_unknown_method(self):
        with pytest.raises(ParameterError):
            resample(make_raster(1, 1, 1, [0]), 2, 2, "cubic")


class TestShift:
    def test_apply_shift_edge_replication(self):
        r = make_raster(3, 1, 1, [1, 2, 3])
        assert apply_shift(r, 1, 0).data[0, 0].tolist() == [1, 1, 2]
        assert apply_shift(r, -1, 0).data[0, 0].tolist() == [2, 3, 3]
        assert apply_shift(r, 0, 0).identical(r)

    def test_apply_shift_too_large(self):
        with pytest.raises(ParameterError):
            apply_shift(make_raster(3, 1, 1, [1, 2, 3]), 3, 0)

    def test_identity_scores_one(self, rng):
        ref = Raster(rng.normal(size=(1, 20, 20)))
        est = estimate_shift(ref, ref, 3)
        assert (est.dx, est.dy) == (0, 0)
        assert est.score == pytest.approx(1.0, abs=1e-12)

    def test_known_translation_brute_force(self, rng):
        ref = Raster(rng.normal(size=(1, 24, 24)))
        mov = apply_shift(ref, 1, 2)
        m = 3
        best = max(
            ((dx, dy) for dy in range(-m, m + 1) for dx in range(-m, m + 1)),
            key=lambda s: _ncc_oracle(ref.data[0], mov.data[0], s[0], s[1], m),
        )
        est = estimate_shift(ref, mov, m)
        assert best == (1, 2)
        assert (est.dx, est.dy) == best
        assert est.score == pytest.approx(_ncc_oracle(ref.data[0], mov.data[0], 1, 2, m), abs=1e-12)
        fixed = apply_shift(mov, -est.dx, -est.dy)
        assert np.array_equal(fixed.data[0, 3:-3, 3:-3], ref.data[0, 3:-3, 3:-3])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(3, 5), st.integers(0, 2**32 - 1))
    def test_exact_on_integer_translations(self, dx, dy, m, seed):
        ref = Raster(np.random.default_rng(seed).normal(size=(1, 20, 22)))
        est = estimate_shift(ref, apply_shift(ref, dx, dy), m)
        assert (est.dx, est.dy) == (dx, dy)

    def test_constant_moving_is_degenerate(self, rng):
        ref = Raster(rng.normal(size=(1, 10, 10)))
        with pytest.raises(DegenerateInputError):
            estimate_shift(ref, Raster(np.ones((1, 10, 10))), 2)

    def test_too_small(self, rng):
        ref = Raster(rng.normal(size=(1, 5, 5)))
        with pytest.raises(ParameterError):
            estimate_shift(ref, ref, 2)


class TestRadiometry:
    def test_calibrate(self):
        r = make_raster(1, 1, 1, [10])
        assert radiometric_calibrate(r, calibration([2], [1])).data[0, 0, 0] == 21
        r2 = Raster(np.full((2, 2, 2), 10.0))
        out = radiometric_calibrate(r2, calibration([2, 0.5]))
        assert np.all(out.data[0] == 20) and np.all(out.data[1] == 5)
        assert radiometric_calibrate(r2, calibration([1, 1])).identical(r2)

    def test_params_validation(self):
        with pytest.raises(ParameterError):
            CalibrationParams((1.0, 0.0), (0.0, 0.0))
        with pytest.raises(ParameterError):
            CalibrationParams((1.0,), (0.0, 0.0))
        with pytest.raises(ParameterError):
            radiometric_calibrate(make_raster(1, 1, 2, [1, 2]), calibration([1]))

    def test_dos_examples(self):
        r = make_raster(4, 1, 1, [1, 2, 3, 100])
        assert dos_correct(r, 0.25).data[0, 0].tolist() == [0, 1, 2, 99]
        r = make_raster(3, 1, 1, [7, 9, 12])
        assert dos_correct(r, 0.0).data[0, 0].tolist() == [0, 2, 5]
        assert np.all(dos_correct(Raster(np.full((1, 3, 3), 4.0))).data == 0)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=40), st.floats(0, 1))
    def test_quantile_is_nearest_rank(self, values, q):
        s = sorted(values)
        k = max(math.ceil(q * len(s)), 1)
        assert nearest_rank_quantile(np.array(values), q) == s[k - 1]

    def test_dos_percentile_range(self):
        with pytest.raises(ParameterError):
            dos_correct(make_raster(1, 1, 1, [0]), 0.6)
