import numpy as np
import pytest

from qstable import RngStream, ThresholdScheme, build_table


def dkw_band(n: int, confidence_odds: float = 200.0) -> float:
    """Half-width of a DKW envelope missed with chance 2/confidence_odds."""
    return np.sqrt(np.log(confidence_odds) / (2.0 * n))


def empirical_cdf_on(samples: np.ndarray, grid: np.ndarray) -> np.ndarray:
    samples = np.sort(samples)
    return np.searchsorted(samples, grid, side="right") / samples.size


@pytest.fixture(scope="session")
def cauchy_ladder_scheme() -> ThresholdScheme:
    # eta ladder (4.5, 1.5, 0.5) at Lambda = 1
    return ThresholdScheme(alpha=1.0, thresholds=np.array([1.0 / 4.5, 1.0 / 1.5, 2.0]))


@pytest.fixture(scope="session")
def small_cauchy_table(cauchy_ladder_scheme):
    return build_table(1.0, cauchy_ladder_scheme, 24)


@pytest.fixture()
def stream() -> RngStream:
    return RngStream(seed=20260815, stream_id=0)
