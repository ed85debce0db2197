import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def as_dict(f):
    """Table as {rank-tuple profile: value}, the oracle representation."""
    return {tuple(w.ranks for w in P.orders): int(x) for P, x in f.items()}


@pytest.fixture
def dia():
    from twovalued import example_dia

    return example_dia()
