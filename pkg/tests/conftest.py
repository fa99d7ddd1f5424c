from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

import pbwkit
from pbwkit.algebra import Bimodule, cyclic_group_algebra, ground_field
from pbwkit.cli import build, parse
from pbwkit.exactlin import QQ, Matrix
from pbwkit.quadratic import QuadraticPresentation

settings.register_profile("pbwkit", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pbwkit")

CORPUS = Path(pbwkit.__file__).parent / "corpus"


def corpus_names():
    return sorted(p.stem for p in CORPUS.glob("*.alg"))


_models = {}


def load(name):
    """Built model for a corpus file, cached across tests."""
    if name not in _models:
        _models[name] = build(parse(CORPUS / f"{name}.alg"))
    return _models[name]


def poly(nv, F=QQ):
    """k[x_1..x_nv] over S = k."""
    S = ground_field(F)
    I = Matrix.identity(F, nv)
    M = Bimodule(S, nv, [I], [I])
    rels = []
    for a in range(nv):
        for b in range(a + 1, nv):
            rels.append({a * nv + b: F.one, b * nv + a: -F.one})
    return QuadraticPresentation.from_ambient(S, M, rels)


def skew(F=QQ):
    """k[x,y] # kZ2 with g = -1, generators x(x)1, x(x)g, y(x)1, y(x)g."""
    S = cyclic_group_algebra(F, 2)
    I2 = Matrix.identity(F, 2)
    right = [I2.kron(S.right_mats[k]) for k in range(2)]
    left = [I2.kron(S.left_mats[0]), I2.kron(S.left_mats[1]).scale(-1)]
    M = Bimodule(S, 4, left, right)
    rels = [{0 * 4 + 2 + s: F.one, 2 * 4 + 0 + s: -F.one} for s in range(2)]
    return QuadraticPresentation.from_ambient(S, M, rels)


@pytest.fixture(scope="session")
def poly2():
    return poly(2)


@pytest.fixture(scope="session")
def skew_q():
    return skew()
