import pytest
from hypothesis import HealthCheck, settings

# Deterministic example generation keeps the suite reproducible run to run.
settings.register_profile("repro", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repro")


@pytest.fixture(scope="session")
def universal():
    from hopfforge.axb import universal_axb
    return universal_axb()
