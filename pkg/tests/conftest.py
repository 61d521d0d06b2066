"""Shared fixtures and helpers for the test suite."""

from random import Random

import pytest

from iqpsim.gf2 import BinaryMatrix, BitVector

# 6x4 worked example used across the fixture tests
PEX_ROWS = ["1101", "0110", "0000", "0101", "1011", "0101"]


@pytest.fixture
def pex() -> BinaryMatrix:
    return BinaryMatrix.from_strings(PEX_ROWS)


def random_matrix(rng: Random, n: int, l: int) -> BinaryMatrix:
    rows = [BitVector(l, rng.getrandbits(l)) for _ in range(n)]
    return BinaryMatrix.from_rows(l, rows)


def random_bits(rng: Random, l: int) -> BitVector:
    return BitVector(l, rng.getrandbits(l))
