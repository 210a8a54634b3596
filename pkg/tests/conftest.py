from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gpq.backends import bs_oracle, dihedral_group, free_abelian_oracle, free_oracle
from gpq.grigorchuk import make_grigorchuk_data
from gpq.presentations import Presentation


@pytest.fixture(scope="session")
def grig():
    return make_grigorchuk_data()


@pytest.fixture(scope="session")
def z2_setup():
    p = Presentation.make("a, b", ["a b a' b'"], "z2")
    return p, free_abelian_oracle(2, p.alphabet)


@pytest.fixture(scope="session")
def f2_setup():
    p = Presentation.make("a, b", [], "f2")
    return p, free_oracle(2, p.alphabet)


@pytest.fixture(scope="session")
def d8_setup():
    p = Presentation.make("a!, d!", ["a a", "d d", "(a d)^4"], "d8")
    return p, dihedral_group(8, ("a", "d"))


@pytest.fixture(scope="session")
def bs2_setup():
    oracle = bs_oracle(1, 2)
    p = Presentation.make("a, b", ["a b a' b' b'"], "bs12")
    return p, oracle
