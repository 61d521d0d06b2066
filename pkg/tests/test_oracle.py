"""Sanity checks on the brute-force reference implementations."""

import cmath
import math
from random import Random

import numpy as np
import pytest

from iqpsim import oracle
from iqpsim.codes import Angle
from iqpsim.errors import TooManyQubits
from iqpsim.gf2 import BinaryMatrix, BitVector
from iqpsim.marginals import diagonal_projector
from iqpsim.xprogram import XProgram

from conftest import random_matrix


class TestStatevector:
    def test_empty_program(self):
        state = oracle.statevector(XProgram(BinaryMatrix.zeros(0, 2), Angle.exact(1, 4)))
        assert state.amplitude(BitVector(2)) == 1.0
        assert np.count_nonzero(state.amplitudes) == 1

    def test_single_rotation_by_hand(self):
        theta = 0.7
        prog = XProgram(BinaryMatrix.from_strings(["1"]), Angle.radians(theta))
        state = oracle.statevector(prog)
        assert cmath.isclose(state.amplitudes[0], math.cos(theta))
        assert cmath.isclose(state.amplitudes[1], 1j * math.sin(theta))

    def test_two_qubit_entangler_by_hand(self):
        # exp(i theta X X)|00> = cos|00> + i sin|11>
        theta = 1.1
        prog = XProgram(BinaryMatrix.from_strings(["11"]), Angle.radians(theta))
        amp = oracle.statevector(prog).amplitudes
        assert cmath.isclose(amp[0b00], math.cos(theta))
        assert cmath.isclose(amp[0b11], 1j * math.sin(theta))
        assert amp[0b01] == amp[0b10] == 0

    def test_zero_row_is_global_phase(self):
        theta = 0.9
        prog = XProgram(BinaryMatrix.zeros(3, 2), Angle.radians(theta))
        amp = oracle.statevector(prog).amplitudes
        assert cmath.isclose(amp[0], cmath.exp(3j * theta))

    def test_row_order_irrelevant(self):
        # rows commute, so any ordering gives the same state
        rng = Random(71)
        for _ in range(20):
            m = random_matrix(rng, rng.randint(2, 8), rng.randint(1, 6))
            order = list(range(m.n))
            rng.shuffle(order)
            shuffled = BinaryMatrix.from_rows(m.l, [m.row(i) for i in order])
            theta = Angle.radians(rng.random() * 3)
            a = oracle.statevector(XProgram(m, theta)).amplitudes
            b = oracle.statevector(XProgram(shuffled, theta)).amplitudes
            assert np.allclose(a, b, atol=1e-12)

    def test_norm_preserved(self):
        rng = Random(72)
        for _ in range(30):
            m = random_matrix(rng, rng.randint(1, 10), rng.randint(1, 8))
            state = oracle.statevector(XProgram(m, Angle.radians(rng.random() * 6)))
            assert state.probabilities().sum() == pytest.approx(1.0, abs=1e-12)

    def test_qubit_limit(self):
        prog = XProgram(BinaryMatrix.zeros(1, 21), Angle.exact(1, 4))
        with pytest.raises(TooManyQubits):
            oracle.statevector(prog)


class TestOracleBeta:
    def test_parity_definition(self):
        rng = Random(73)
        for _ in range(20):
            m = random_matrix(rng, rng.randint(1, 8), rng.randint(1, 6))
            prog = XProgram(m, Angle.radians(rng.random() * 3))
            probs = oracle.statevector(prog).probabilities()
            s = rng.getrandbits(m.l)
            agree = sum(
                p for ix, p in enumerate(probs)
                if bin(ix & s).count("1") % 2 == 0
            )
            got = oracle.oracle_beta(prog, BitVector(m.l, s))
            assert got == pytest.approx(2 * agree - 1, abs=1e-12)


class TestOracleMarginal:
    def test_masks_sum_cosets(self):
        rng = Random(74)
        for _ in range(20):
            m = random_matrix(rng, rng.randint(1, 8), rng.randint(2, 6))
            prog = XProgram(m, Angle.radians(rng.random() * 3))
            mask_bits = rng.getrandbits(m.l) or 1
            proj = diagonal_projector(BitVector(m.l, mask_bits))
            dense = oracle.statevector(prog).probabilities()
            got = oracle.oracle_marginal(prog, proj)
            # recompute each marginal entry by direct masking
            for w_ix in range(1 << proj.range_dim):
                coords = BitVector(proj.range_dim, w_ix)
                rep = proj.coords_to_vector(coords)
                want = sum(
                    p for y, p in enumerate(dense)
                    if (y & mask_bits) == rep.bits
                )
                assert got.probability(w_ix) == pytest.approx(want, abs=1e-12)


class TestOracleTutte:
    def test_pex(self, pex):
        got = oracle.oracle_tutte(pex)
        assert got.coefficient(3, 1) == 1
        assert got.coefficient(1, 2) == 2
        assert got.evaluate(1, 1) == 6

    def test_loops_and_coloops(self):
        assert oracle.oracle_tutte(BinaryMatrix.zeros(3, 2)).items() == [((0, 3), 1)]
        assert oracle.oracle_tutte(BinaryMatrix.identity(2)).items() == [((2, 0), 1)]
