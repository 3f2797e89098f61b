import numpy as np
import pandas as pd
import pytest

from readrank.errors import BinningError
from readrank.predictor import BinnerConfig, BinParameters, GaussianBinner


class TestBinParameters:
    def test_centers_and_sigma(self):
        params = BinParameters.from_range(0.0, 10.0, BinnerConfig(k=10, gamma=0.2))
        np.testing.assert_allclose(params.centers, np.arange(10) + 0.5)
        assert params.sigma == pytest.approx(0.2)

    def test_value_at_center_peaks_there(self):
        params = BinParameters.from_range(0.0, 10.0, BinnerConfig(k=10, gamma=0.2))
        response = params.project(np.array([3.5]))[0]
        assert response.argmax() == 3
        assert response[3] > 0.99

    @pytest.mark.parametrize("value, expected_bin", [(-1e6, 0), (1e6, 9)])
    def test_far_out_of_range_values_saturate(self, value, expected_bin):
        params = BinParameters.from_range(0.0, 10.0, BinnerConfig())
        response = params.project(np.array([value]))[0]
        assert np.all(np.isfinite(response))
        assert response[expected_bin] == pytest.approx(1.0)

    def test_single_bin(self):
        params = BinParameters.from_range(-2.0, 2.0, BinnerConfig(k=1))
        np.testing.assert_allclose(params.project(np.array([-5.0, 0.0, 7.0])), 1.0)

    def test_random_draws_stay_on_simplex(self):
        """Non-negative, normalized, peaked at the nearest center and continuous."""
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            f_min = rng.uniform(-100, 100)
            f_max = f_min + rng.uniform(1e-3, 100)
            config = BinnerConfig(k=int(rng.integers(1, 21)), gamma=rng.uniform(0.05, 1.0))
            params = BinParameters.from_range(f_min, f_max, config)
            span = f_max - f_min
            value = rng.uniform(f_min - span, f_max + span)

            response = params.project(np.array([value]))[0]
            assert np.all(response >= 0)
            assert response.sum() == pytest.approx(1.0, abs=1e-9)

            distances = np.abs(params.centers - value)
            nearest = np.flatnonzero(distances == distances.min())
            assert response.argmax() in nearest

            # Small input steps move the output by a bounded amount
            step = 1e-9 * span
            moved = params.project(np.array([value + step]))[0]
            lipschitz = 2 * np.sqrt(config.k) * (span + abs(value - f_min)) / params.sigma**2
            assert np.abs(moved - response).sum() <= lipschitz * step + 1e-12

    @pytest.mark.parametrize(
        "f_min, f_max, value, shift",
        [(0.0, 10.0, 3.3, 5.0), (-4.0, 2.0, -5.5, -7.25), (1.0, 3.0, 2.9, 100.0), (0.0, 1.0, 0.5, -0.5)],
    )
    def test_shifting_value_and_range_keeps_response(self, f_min, f_max, value, shift):
        config = BinnerConfig(k=8, gamma=0.3)
        base = BinParameters.from_range(f_min, f_max, config).project(np.array([value]))
        shifted = BinParameters.from_range(f_min + shift, f_max + shift, config).project(
            np.array([value + shift])
        )
        np.testing.assert_allclose(shifted, base, atol=1e-9)

    @pytest.mark.parametrize("value, nearest", [(3.3, 3), (0.0, 0), (9.9, 9), (6.6, 6)])
    def test_small_gamma_is_one_hot(self, value, nearest):
        params = BinParameters.from_range(0.0, 10.0, BinnerConfig(k=10, gamma=1e-3))
        response = params.project(np.array([value]))[0]
        assert response.argmax() == nearest
        assert response[nearest] == pytest.approx(1.0, abs=1e-12)
        assert np.delete(response, nearest).sum() < 1e-12

    @pytest.mark.parametrize("k, gamma", [(0, 0.2), (10, 0.0), (10, -1.0)])
    def test_invalid_config(self, k, gamma):
        with pytest.raises(ValueError):
            BinnerConfig(k=k, gamma=gamma)


class TestGaussianBinner:
    @pytest.fixture
    def binner(self):
        return GaussianBinner.fit(
            BinnerConfig(k=4, gamma=0.5), {"x": [0.0, 1.0, 2.0], "y": [-1.0, 1.0]}
        )

    def test_output_width(self, binner):
        assert binner.feature_names == ["x", "y"]
        assert binner.output_width == 8

    def test_transform_columns_concatenates_in_fitted_order(self, binner):
        frame = pd.DataFrame({"y": [0.0, 1.0], "x": [1.0, 2.0]})
        matrix = binner.transform_columns(frame)
        assert matrix.shape == (2, 8)
        np.testing.assert_allclose(matrix[:, :4], [binner.transform("x", 1.0), binner.transform("x", 2.0)])
        np.testing.assert_allclose(matrix[:, :4].sum(axis=1), 1.0)
        np.testing.assert_allclose(matrix[:, 4:].sum(axis=1), 1.0)

    def test_serialization_reproduces_projection(self, binner):
        restored = GaussianBinner.from_dict(binner.to_dict())
        for value in (-3.0, 0.3, 1.7, 9.0):
            np.testing.assert_array_equal(restored.transform("x", value), binner.transform("x", value))

    def test_unfitted_feature(self, binner):
        with pytest.raises(BinningError, match="not fitted"):
            binner.transform("z", 1.0)

    @pytest.mark.parametrize(
        "column, reason",
        [([], "no training values"), ([1.0, np.nan], "non-finite"), ([3.0, 3.0], "constant")],
    )
    def test_fit_errors(self, column, reason):
        with pytest.raises(BinningError, match=reason):
            GaussianBinner.fit(BinnerConfig(), {"feature": column})
