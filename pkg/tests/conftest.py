import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from powerroots.corpus import corpus_group
from powerroots.exactalg import QQ, Matrix
from powerroots.group_ctx import GroupSpec, exp_nilpotent, validate_spec
from powerroots.io import load_spec

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SPECS = Path(__file__).resolve().parent.parent / "specs"


def q_unit(n, i, j):
    return Matrix.unit(QQ, n, i, j)


def heisenberg_q(diag=None):
    x, y, z = q_unit(3, 0, 1), q_unit(3, 1, 2), q_unit(3, 0, 2)
    gens = [exp_nilpotent(x), exp_nilpotent(y), exp_nilpotent(z)]
    if diag:
        gens = [Matrix.diag(QQ, d) for d in diag] + gens
    return validate_spec(GroupSpec(QQ, 3, tuple(gens), lie_algebra=(x, y, z),
                                   unipotent_coords=((0, 1), (1, 2), (0, 2)), label="heis_Q"))


def column_q(diag):
    """Diagonal torus acting on the abelian unipotent part of the last column (n = 3)."""
    a, b = q_unit(3, 0, 2), q_unit(3, 1, 2)
    gens = [Matrix.diag(QQ, d) for d in diag] + [exp_nilpotent(a), exp_nilpotent(b)]
    return validate_spec(GroupSpec(QQ, 3, tuple(gens), lie_algebra=(a, b), label="col_Q"))


@pytest.fixture(scope="session")
def g5():
    return corpus_group("G5")


@pytest.fixture(scope="session")
def heis_q():
    return heisenberg_q()


@pytest.fixture(scope="session")
def heis_q_diag():
    return heisenberg_q(diag=[(2, 1, "1/3"), (-1, 1, 1)])


@pytest.fixture(scope="session")
def specs_dir():
    return SPECS


@pytest.fixture(scope="session")
def g5_file():
    return str(SPECS / "g5.json")


@pytest.fixture(scope="session")
def g5_from_file(g5_file):
    return validate_spec(load_spec(g5_file))
