import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from mixsing.cli import parse_expression  # noqa: E402
from mixsing.coeff import DvrSpec  # noqa: E402
from mixsing.invariants import Config  # noqa: E402

RAMIFIED = DvrSpec(3, (-3, 0))  # pi^2 = 3


def P(src, p=3, D=12, M=8, spec=None, n=None, allow_y=False):
    spec = spec or DvrSpec(p)
    return parse_expression(src, spec, n=n, D=D, M=M, allow_y=allow_y)


def S(src, p=3, D=12, M=8, spec=None, n=None, allow_y=False):
    return P(src, p, D, M, spec, n, allow_y).series(D, M)


@pytest.fixture
def cfg():
    return Config()
