from __future__ import annotations

import random

import pytest

from ncdiff.algebra import AlgebraSpec


@pytest.fixture
def free_spec() -> AlgebraSpec:
    return AlgebraSpec.free(("f", "g", "h", "i", "k"))


@pytest.fixture
def comm_spec() -> AlgebraSpec:
    return AlgebraSpec.free(("f", "g", "h"), commutative=True)


@pytest.fixture
def two_point() -> AlgebraSpec:
    return AlgebraSpec.function(("L", "R"), {"x": (1, 0), "y": (0, 1)})


@pytest.fixture
def three_point() -> AlgebraSpec:
    from fractions import Fraction

    return AlgebraSpec.function(
        ("P", "Q", "S"),
        {
            "f": (Fraction(1, 2), Fraction(-2), Fraction(3)),
            "g": (Fraction(2), Fraction(1, 3), Fraction(-1)),
            "h": (Fraction(-3, 2), Fraction(5), Fraction(0)),
        },
    )


@pytest.fixture
def mat_spec() -> AlgebraSpec:
    return AlgebraSpec.matrix(
        2, {"f": [[3, 1], [2, 7]], "g": [[0, 1], [1, 0]], "h": [[1, 2], [0, 1]]}
    )


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240817)
