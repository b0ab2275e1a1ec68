import random
from pathlib import Path

import pytest

from plsphere.complex import build_from_maximal_cells

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


def random_connected_complex(rng: random.Random, dim: int, max_vertices: int = 30):
    """Pure dim-complex on at most ``max_vertices`` vertices with connected 1-skeleton.

    Each new cell shares between 1 and ``dim`` vertices with an earlier cell,
    so gluings along vertices, edges and higher faces all occur.
    """
    n = rng.randint(dim + 2, max_vertices)
    cells = [tuple(range(dim + 1))]
    used = set(cells[0])
    target = rng.randint(n // 2, 2 * n)
    while len(used) < n or len(cells) < target:
        base = rng.choice(cells)
        keep = rng.sample(base, rng.randint(1, dim))
        fresh = [v for v in range(n) if v not in used]
        pool = [v for v in range(n) if v not in keep]
        # bias toward unused vertices so every vertex is eventually reached
        extra = []
        while len(extra) < dim + 1 - len(keep):
            src = fresh if fresh and rng.random() < 0.6 else pool
            v = rng.choice(src)
            if v not in extra and v not in keep:
                extra.append(v)
                if v in fresh:
                    fresh.remove(v)
        cell = tuple(sorted(keep + extra))
        cells.append(cell)
        used.update(cell)
    return build_from_maximal_cells(set(cells))


def random_corpus(dim: int, count: int, seed: int = 0):
    rng = random.Random(seed)
    return [random_connected_complex(rng, dim) for _ in range(count)]
