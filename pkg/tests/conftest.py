"""Shared pytest configuration."""


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size chain scans and ensembles (deselect with -m 'not slow')")
