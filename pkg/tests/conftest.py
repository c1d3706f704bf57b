"""Shared fixtures for the test suite."""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from src.core.regression_graph import Edge, RegressionGraph
from src.parsers.graph_parser import get_graph_parser


DATA_DIR = Path(__file__).resolve().parent.parent / "data"

hypothesis_settings.register_profile(
    "regmark",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
hypothesis_settings.load_profile("regmark")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def figure1() -> RegressionGraph:
    """The nine-node worked example."""
    return get_graph_parser().parse_file(DATA_DIR / "figure1.rg")


@pytest.fixture(scope="session")
def small5() -> RegressionGraph:
    return get_graph_parser().parse_file(DATA_DIR / "small5.rg")


@pytest.fixture
def dag4() -> RegressionGraph:
    """Four nodes joined by arrows only."""
    return RegressionGraph.from_edges([Edge.arrow(2, 1), Edge.arrow(3, 1), Edge.arrow(4, 2)])
