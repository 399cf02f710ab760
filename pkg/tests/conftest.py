import json
from fractions import Fraction
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


def load_appendix():
    """The twelve n = 4 matrices as {(F, G): {(row label, column label): Fraction}}."""
    data = json.loads((FIXTURES / "appendix_n4.json").read_text())
    out = {}
    for m in data:
        labels = m["labels"]
        out[(m["from"], m["to"])] = {
            (labels[i], labels[j]): Fraction(v) for i, row in enumerate(m["rows"]) for j, v in enumerate(row)
        }
    return out


@pytest.fixture(scope="session")
def appendix():
    return load_appendix()


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    path = tmp_path / "cache"
    monkeypatch.setenv("PSYM_CACHE_DIR", str(path))
    return path
