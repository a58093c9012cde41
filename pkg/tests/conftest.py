import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running numerical sweeps")


@pytest.fixture(autouse=True)
def _no_jobs_override(monkeypatch):
    monkeypatch.delenv("GAUSSCAP_JOBS", raising=False)
