import pytest

from edbounds.entropy import NumericsConfig


@pytest.fixture(scope="session")
def cfg() -> NumericsConfig:
    """Default numerics, shared across tests."""
    return NumericsConfig()


@pytest.fixture(scope="session")
def fast_cfg() -> NumericsConfig:
    """Reduced budgets for tests that only need coarse values."""
    return NumericsConfig(
        z_quadrature_points=2048,
        outer_quadrature_order=32,
        mc_outer_samples=200,
        mc_inner_samples=20_000,
        seed=99,
    )
