import numpy as np
import pytest

from nuctrace import NuclearRep, conjugate_tag, lp, lp_norm, Vector


def make_rng(*entropy: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def random_rep(rng, p, dim, n_terms, decay=1.2) -> NuclearRep:
    """Seeded rep with unit rank-one terms and power-decaying weights."""
    ambient = lp(p, dim)
    conj = conjugate_tag(ambient)
    terms = []
    for k in range(n_terms):
        f = rng.standard_normal(dim)
        v = rng.standard_normal(dim)
        f = f / lp_norm(Vector(f, conj))
        v = v / lp_norm(Vector(v, ambient))
        terms.append(((k + 1.0) ** -decay, f, v))
    return NuclearRep(ambient, terms)


@pytest.fixture
def rng():
    return make_rng(1234)
