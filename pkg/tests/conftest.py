"""Pytest configuration and shared fixtures."""

import logging

import pytest
from dotenv import load_dotenv

# Configure logging for tests
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)

# Load environment variables (override to use .env values)
load_dotenv(override=True)


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers",
        "slow: acceptance-scale run (large N ladders or fine grids)",
    )


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch):
    """Keep WCL_* settings from the developer's shell out of the tests."""
    for name in ("WCL_THREADS", "WCL_CELL_CAP", "WCL_CACHE_DIR"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def cantor_map():
    """M=3 map keeping branches {0, 2} (middle-thirds repeller).

    Returns:
        OpenMapSpec
    """
    from weyl_lab import OpenMapSpec

    return OpenMapSpec(branch_count=3, kept=(0, 2))


@pytest.fixture
def two_strip_damping():
    """M=2 damping with b = (0, 1).

    Returns:
        DampingField
    """
    from weyl_lab import DampingField

    return DampingField(values=(0.0, 1.0))


@pytest.fixture
def lab():
    """Single-threaded laboratory with an in-memory cache.

    Returns:
        Laboratory
    """
    from weyl_lab import Laboratory, MemoryCache

    return Laboratory(threads=1, cache_backend=MemoryCache())
