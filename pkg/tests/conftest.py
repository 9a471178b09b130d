import pytest

from uniortho.catalog import default_catalog_text
from uniortho.config import parse_config
from uniortho.forms import BilinearForm, is_nondegenerate, mat_det

#: catalog labels of rings small enough for the heavier exhaustive loops
SMALL_LABELS = ["Z3", "Z5", "Z7", "Z9", "F9", "F3[t]/t^2"]


@pytest.fixture(scope="session")
def catalog():
    """(label, spec, ring) entries of the shipped default catalog."""
    return parse_config(default_catalog_text()).rings


@pytest.fixture(scope="session")
def rings(catalog):
    """Default catalog rings keyed by label."""
    return {entry.label: entry.ring for entry in catalog}


@pytest.fixture(scope="session")
def z9(rings):
    return rings["Z9"]


@pytest.fixture(scope="session")
def f9(rings):
    return rings["F9"]


def random_invertible(ring, rng, n=2):
    """Rejection-sample an invertible n x n matrix over the ring."""
    elems = ring.elements()
    while True:
        m = tuple(
            tuple(rng.choice(elems) for _ in range(n)) for _ in range(n)
        )
        if ring.is_unit(mat_det(ring, m)):
            return m


def random_symmetric_nondegenerate(ring, rng, n=2):
    """Rejection-sample a symmetric non-degenerate form."""
    elems = ring.elements()
    while True:
        entries = [[rng.choice(elems) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(i):
                entries[i][j] = entries[j][i]
        form = BilinearForm(ring, tuple(tuple(row) for row in entries))
        if is_nondegenerate(form):
            return form
