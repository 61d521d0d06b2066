"""Exact polynomial-time evaluation at fourth roots of unity.

The weight enumerator of a binary code at z in {1, i, -1, -i} is a sum of
2^r fourth roots, hence a Gaussian integer. Evaluating it by enumeration
costs 2^r; this module instead classifies the quadratic form
q(c) = (|c| / 2) mod 2 on the even-weight subcode, whose polar form is
the plain GF(2) inner product b(c, c') = |c & c'| mod 2, and reads the
sum off the form's hyperbolic decomposition and its value on the
radical. An odd-weight coset, when present, is handled by the same
reduction applied to a linearly shifted form. Total cost is polynomial
in the matrix size.

The same machinery solves the quarter-turn case exactly: the output
distribution is uniform over an affine subspace computed from the kernel
of P^T P, with probabilities that are exact powers of two.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from . import gf2
from .errors import DimensionMismatch
from .gf2 import BinaryMatrix, BitVector

__all__ = [
    "GaussianInteger",
    "AffineSupport",
    "wenum_at_fourth_root",
    "clifford_support",
    "clifford_probability",
    "clifford_sample",
]


@dataclass(frozen=True)
class GaussianInteger:
    """Exact complex integer re + im*i."""

    re: int
    im: int

    def conjugate(self) -> "GaussianInteger":
        return GaussianInteger(self.re, -self.im)

    def times_i_power(self, k: int) -> "GaussianInteger":
        k %= 4
        if k == 0:
            return self
        if k == 1:
            return GaussianInteger(-self.im, self.re)
        if k == 2:
            return GaussianInteger(-self.re, -self.im)
        return GaussianInteger(self.im, -self.re)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"


def _reduced_generators(M: BinaryMatrix) -> list[int]:
    """Independent generators of the column-span code, as packed ints."""
    basis: list[tuple[int, int]] = []
    out: list[int] = []
    for col in gf2.transpose(M).rows:
        v = col.bits
        for p, b in basis:
            if (v >> p) & 1:
                v ^= b
        if v:
            basis.append((v.bit_length() - 1, v))
            basis.sort(key=lambda t: -t[0])
            out.append(v)
    return out


def _gauss_sum(vectors: list[int], shift: int) -> int:
    """Sum of (-1)^Q(v) over the span of the given even-weight vectors.

    Q(v) = (|v| / 2 + |v & shift|) mod 2 is a quadratic refinement of the
    inner-product polar form. The reduction peels hyperbolic planes off
    the Gram matrix, each contributing a factor of +-2, and finishes on
    the radical, where Q is linear: a nonzero character sums to 0 and the
    zero character to a power of two.
    """
    m = len(vectors)
    if m == 0:
        return 1
    gram = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if (vectors[i] & vectors[j]).bit_count() & 1:
                gram[i] |= 1 << j
                gram[j] |= 1 << i
    qbits = 0
    for i, v in enumerate(vectors):
        q = ((v.bit_count() >> 1) & 1) ^ ((v & shift).bit_count() & 1)
        if q:
            qbits |= 1 << i
    active = (1 << m) - 1
    sign = 1
    power = 0
    while active:
        pair = None
        rem = active
        while rem:
            low = rem & -rem
            i = low.bit_length() - 1
            rem ^= low
            row = gram[i] & active
            if row:
                pair = (i, (row & -row).bit_length() - 1)
                break
        if pair is None:
            # the polar form vanishes here, so Q is a linear character
            if qbits & active:
                return 0
            power += active.bit_count()
            break
        i, j = pair
        qi = (qbits >> i) & 1
        qj = (qbits >> j) & 1
        if qi and qj:
            sign = -sign
        power += 1
        active &= ~((1 << i) | (1 << j))
        a = gram[i] & active
        bb = gram[j] & active
        # v_k += a_k v_j + bb_k v_i restores orthogonality to the pair;
        # track Q and the Gram matrix symbolically instead of touching vectors
        upd = (a if qj else 0) ^ (bb if qi else 0) ^ (a & bb)
        qbits ^= upd
        rem = a
        while rem:
            low = rem & -rem
            gram[low.bit_length() - 1] ^= bb
            rem ^= low
        rem = bb
        while rem:
            low = rem & -rem
            gram[low.bit_length() - 1] ^= a
            rem ^= low
    return sign * (1 << power)


def wenum_from_generators(generators: list[int], k: int) -> GaussianInteger:
    """Weight enumerator of the span at z = i^k, from packed generators.

    The generators need not be independent; they are reduced first.
    """
    basis: list[tuple[int, int]] = []
    gens: list[int] = []
    for g in generators:
        v = g
        for p, b in basis:
            if (v >> p) & 1:
                v ^= b
        if v:
            basis.append((v.bit_length() - 1, v))
            basis.sort(key=lambda t: -t[0])
            gens.append(v)
    r = len(gens)
    k %= 4
    if k == 0:
        return GaussianInteger(1 << r, 0)
    odd = [g for g in gens if g.bit_count() & 1]
    if k == 2:
        # parity of the weight is linear, so the sum collapses
        return GaussianInteger(0 if odd else 1 << r, 0)
    even = [g for g in gens if not g.bit_count() & 1]
    if odd:
        pivot = odd[0]
        even_basis = even + [g ^ pivot for g in odd[1:]]
        re = _gauss_sum(even_basis, 0)
        c0 = ((pivot.bit_count() - 1) >> 1) & 1
        im = _gauss_sum(even_basis, pivot)
        if c0:
            im = -im
        value = GaussianInteger(re, im)
    else:
        value = GaussianInteger(_gauss_sum(gens, 0), 0)
    return value if k == 1 else value.conjugate()


def wenum_at_fourth_root(P: BinaryMatrix, k: int) -> GaussianInteger:
    """Exact weight-enumerator value sum_c i^(k |c|) over the code of P."""
    return wenum_from_generators(_reduced_generators(P), k)


@dataclass(frozen=True)
class AffineSupport:
    """Affine subspace carrying the quarter-turn output distribution.

    Attributes:
        case: "one" when every kernel functional is good, the support is
            then the orthogonal complement of V; "two" otherwise, the
            support is then the part of U-perp outside V-perp.
        V_basis: canonical basis of Ker(P^T P).
        U_basis: canonical basis of the good sub-kernel.
        dim: dimension of the support as an affine space.
        offset: one point of the support.
        directions: basis of the direction space (V-perp).
        odd_witness: a kernel element outside U in case two, else None.
    """

    case: str
    V_basis: tuple[BitVector, ...]
    U_basis: tuple[BitVector, ...]
    dim: int
    offset: BitVector
    directions: tuple[BitVector, ...]
    odd_witness: BitVector | None

    def contains(self, x: BitVector) -> bool:
        if x.n != self.offset.n:
            raise DimensionMismatch("vector length does not match the support")
        if any(x.dot(u) for u in self.U_basis):
            return False
        if self.case == "one":
            return True
        return x.dot(self.odd_witness) == 1

    def sample(self, rng: Random) -> BitVector:
        bits = self.offset.bits
        if self.dim:
            combo = rng.getrandbits(self.dim)
            for d in self.directions:
                if combo & 1:
                    bits ^= d.bits
                combo >>= 1
        return BitVector(self.offset.n, bits)


def clifford_support(P: BinaryMatrix) -> AffineSupport:
    """Support of the quarter-turn distribution of an X-program.

    V is the kernel of P^T P. On V the halved row-hit count n_s / 2 is
    linear mod 2, and U is its kernel: the functionals whose hit count is
    divisible by 4. The basis of U is built by folding each bad basis
    vector into the last bad one, which is then dropped.
    """
    l = P.l
    V = gf2.kernel(gf2.mat_mul(gf2.transpose(P), P))
    bad = []
    good = []
    for s in V:
        hits = gf2.mat_vec(P, s).weight()
        (bad if hits % 4 else good).append(s)
    if bad:
        witness = bad[-1]
        u_vectors = good + [s ^ witness for s in bad[:-1]]
        U = gf2.span_rref(u_vectors, l)
        case = "two"
    else:
        witness = None
        U = list(V)
        case = "one"
    if V:
        directions = gf2.kernel(BinaryMatrix.from_rows(l, V))
    else:
        directions = [BitVector.unit(l, i) for i in range(l)]
    dim = l - len(V)
    if case == "one":
        offset = BitVector(l)
    else:
        system = BinaryMatrix.from_rows(l, U + [witness])
        rhs = BitVector(len(U) + 1, 1)
        offset = gf2.solve(system, rhs)
    return AffineSupport(
        case, tuple(V), tuple(U), dim, offset, tuple(directions), witness
    )


def clifford_probability(P: BinaryMatrix, x: BitVector) -> Fraction:
    """Exact dyadic output probability of x at the quarter-turn angle."""
    support = clifford_support(P)
    if not support.contains(x):
        return Fraction(0)
    return Fraction(1, 1 << support.dim)


def clifford_sample(P: BinaryMatrix, rng: Random) -> BitVector:
    """Uniform exact sample from the quarter-turn output distribution."""
    return clifford_support(P).sample(rng)
