import numpy as np
import pytest

from src.entropy import CountTable, enumerate_joint
from src.schemes import SchemeSpec


def _table(kind: str, n: int, q: int) -> CountTable:
    return enumerate_joint(SchemeSpec.create(kind, n, q))


@pytest.fixture(scope="session")
def sigma1_table() -> CountTable:
    """Exact joint law of Sigma1 at n=2, q=5."""
    return _table("sigma1", 2, 5)


@pytest.fixture(scope="session")
def sigma1_n3_table() -> CountTable:
    """Exact joint law of Sigma1 at n=3, q=7."""
    return _table("sigma1", 3, 7)


@pytest.fixture(scope="session")
def sigma2_table() -> CountTable:
    """Exact joint law of Sigma2 at n=3, q=7."""
    return _table("sigma2", 3, 7)


@pytest.fixture(scope="session")
def composite_table() -> CountTable:
    """Exact joint law of the composite at n=3, q=7 (823543 outcomes)."""
    return _table("composite", 3, 7)


@pytest.fixture
def leaky_table() -> CountTable:
    """Gamma_2-shaped table over Z_5 where the king's share is the secret."""
    rows = np.array(
        [[s, r, (r + s) % 5, s] for s in range(5) for r in range(5)], dtype=np.int64
    )
    return CountTable.from_rows(("k", "p1", "p2"), (1, 1, 1), 1, 5, rows)


@pytest.fixture
def blind_table() -> CountTable:
    """Gamma_2-shaped table over Z_5 where every share is the same random value."""
    rows = np.array([[r, r, r, s] for s in range(5) for r in range(5)], dtype=np.int64)
    return CountTable.from_rows(("k", "p1", "p2"), (1, 1, 1), 1, 5, rows)
