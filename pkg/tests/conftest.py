import numpy as np
import pytest

from skewspec._tridiagonal import warm_up


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # pay the JIT compilation cost once, up front
    warm_up()


def make_skew(n: int, seed: int, scale: float = 1.0) -> np.ndarray:
    """Random dense skew-symmetric matrix with exact entrywise skew-symmetry."""
    rng = np.random.default_rng(seed)
    u = np.triu(rng.standard_normal((n, n)), k=1) * scale
    return u - u.T
