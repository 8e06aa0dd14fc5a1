from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"
MICRO10_PATH = DATA_DIR / "micro10.jsonl"


@pytest.fixture(scope="session")
def micro10_path() -> Path:
    return MICRO10_PATH


@pytest.fixture(scope="session")
def micro10(micro10_path):
    from talestream.ingest import load_dataset

    return load_dataset(micro10_path)


@pytest.fixture(scope="session")
def engine(micro10):
    from talestream.suggest import SuggestionEngine

    return SuggestionEngine(micro10)


@pytest.fixture(scope="session")
def oracle(micro10_path):
    import brute_oracle

    return brute_oracle.Oracle(str(micro10_path))


@pytest.fixture(scope="session")
def fixture200():
    """The seeded 200-trope corpus used by campaign-level checks."""
    from talestream.ingest import generate_fixture

    return generate_fixture(200, 30, 50, 42)


@pytest.fixture(scope="session")
def fixture200_engine(fixture200):
    from talestream.suggest import SuggestionEngine

    return SuggestionEngine(fixture200)
