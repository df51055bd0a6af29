import random

import pytest

from eops.eops_algebra import EElement, RING_E
from eops.semiring import SemiringElement, generator_sequences
from eops import sequences


@pytest.fixture
def rng():
    return random.Random(20260811)


def e_basis(p, ring, max_length, max_degree):
    """All basis elements of Ehat/E up to the given length and degree."""
    cond = sequences.COND_EHAT if ring == "Ehat" else sequences.COND_E
    out = []
    for n in range(max_length + 1):
        for j in sequences.enumerate_allowable(p, n, max_degree, cond):
            out.append(j)
    return out


def semiring_monomial_pool(p, max_degree, max_weight=None):
    """Homogeneous single-monomial semiring elements of degree <= max_degree."""
    pool = [SemiringElement.bracket(p, n) for n in range(4)]
    gens = generator_sequences(p, max_degree)
    for j in gens:
        g = SemiringElement.generator(p, j)
        pool.append(g)
        pool.append(SemiringElement.bracket(p, 1).dot(g))
    for i, j1 in enumerate(gens):
        for j2 in gens[i:]:
            if sequences.degree(j1, p) + sequences.degree(j2, p) > max_degree:
                continue
            d = SemiringElement.generator(p, j1).dot(SemiringElement.generator(p, j2))
            if not d.is_zero():
                pool.append(d)
    if max_weight is not None:
        pool = [x for x in pool if x.is_zero() or x.weight() <= max_weight]
    return pool


def sample_homogeneous(rng, pool, p):
    """A homogeneous random combination of up to two pool monomials."""
    x = rng.choice(pool)
    if rng.random() < 0.4:
        same = [y for y in pool
                if not y.is_zero() and not x.is_zero()
                and y.degree() == x.degree() and y.weight() == x.weight()]
        if same:
            c = rng.randrange(1, p)
            x = x + c * rng.choice(same)
    return x
