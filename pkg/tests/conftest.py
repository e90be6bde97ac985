import pathlib

import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def smiles_pairs() -> list[tuple[str, str]]:
    pairs = []
    for line in (FIXTURES / "smiles_pairs.txt").read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        first, second = line.split()
        pairs.append((first, second))
    return pairs


@pytest.fixture(scope="session")
def malformed_smiles() -> list[tuple[str, str]]:
    rows = []
    for line in (FIXTURES / "malformed_smiles.txt").read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        smiles, kind = line.split("\t")
        rows.append((smiles, kind))
    return rows
