"""
Fixtures partagées des tests.

L'énumération des triplets est faite une seule fois par session; d <= 60
suffit pour toutes les tables (aucun triplet non diédral au-delà).
"""

import pytest
from hypothesis import HealthCheck, settings

from src.classify.schwarz_classifier import enumerate_quadruples, enumerate_triples
from src.utils.logger import get_logger

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

TABLE_DMAX = 60


@pytest.fixture(scope="session")
def triples():
    return enumerate_triples(TABLE_DMAX)


@pytest.fixture(scope="session")
def quads(triples):
    return enumerate_quadruples(triples)


@pytest.fixture
def clean_env(monkeypatch, tmp_path):
    """Environnement sans réglages hérités, rapports écrits dans tmp_path."""
    for name in ("DMAX", "CLOSURE_CAP", "WORKERS", "SEED", "LOG_LEVEL", "LOG_TO_FILE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("REPORTS_DIR", str(tmp_path / "reports"))
    monkeypatch.chdir(tmp_path)
    yield tmp_path
    # la CLI rattache la console au stderr capturé: on la rebranche
    get_logger().configure("INFO")
