"""Bit-packed linear algebra over GF(2).

Vectors are stored as Python integers, one bit per coordinate, so row
operations are word-parallel XOR, AND and popcount at any length.
Coordinate 0 is the leftmost character of a vector's string form and the
most significant packed bit. Comparing two packed values of equal length
as integers is therefore the same as comparing their string forms left
to right, which is the tie-break order used by row projection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch

__all__ = [
    "BitVector",
    "BinaryMatrix",
    "EchelonForm",
    "rank",
    "echelon_reduce",
    "kernel",
    "mat_mul",
    "mat_vec",
    "transpose",
    "span_rref",
    "solve",
    "inverse",
]


@dataclass(frozen=True)
class BitVector:
    """Immutable vector over GF(2).

    Attributes:
        n: number of coordinates.
        bits: packed storage; coordinate i sits at integer bit n - 1 - i.
    """

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vector length must be nonnegative")
        if self.bits < 0 or self.bits.bit_length() > self.n:
            raise ValueError("packed bits exceed the declared length")

    @classmethod
    def from_string(cls, text: str) -> "BitVector":
        """Parses a 0/1 string, leftmost character first."""
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @classmethod
    def from_ints(cls, values: Iterable[int]) -> "BitVector":
        bits = 0
        count = 0
        for v in values:
            bits = (bits << 1) | (1 if v else 0)
            count += 1
        return cls(count, bits)

    @classmethod
    def unit(cls, n: int, i: int) -> "BitVector":
        """Standard basis vector with a single 1 at coordinate i."""
        if not 0 <= i < n:
            raise ValueError("unit coordinate out of range")
        return cls(n, 1 << (n - 1 - i))

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError("coordinate out of range")
        return (self.bits >> (self.n - 1 - i)) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def dot(self, other: "BitVector") -> int:
        if self.n != other.n:
            raise DimensionMismatch("dot product of different lengths")
        return (self.bits & other.bits).bit_count() & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise DimensionMismatch("xor of different lengths")
        return BitVector(self.n, self.bits ^ other.bits)

    def __and__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise DimensionMismatch("and of different lengths")
        return BitVector(self.n, self.bits & other.bits)

    def to_string(self) -> str:
        return format(self.bits, f"0{self.n}b") if self.n else ""

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class BinaryMatrix:
    """Matrix over GF(2) held as a tuple of packed rows.

    Attributes:
        n: row count.
        l: column count.
        rows: the rows, each a BitVector of length l.
    """

    n: int
    l: int
    rows: tuple[BitVector, ...]

    def __post_init__(self) -> None:
        if self.n != len(self.rows):
            raise ValueError("row count does not match the rows given")
        if self.l < 0:
            raise ValueError("column count must be nonnegative")
        for row in self.rows:
            if row.n != self.l:
                raise ValueError("row length does not match the column count")

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "BinaryMatrix":
        rows = tuple(BitVector.from_string(line) for line in lines)
        l = rows[0].n if rows else 0
        return cls(len(rows), l, rows)

    @classmethod
    def from_rows(cls, l: int, rows: Iterable[BitVector]) -> "BinaryMatrix":
        rows = tuple(rows)
        return cls(len(rows), l, rows)

    @classmethod
    def zeros(cls, n: int, l: int) -> "BinaryMatrix":
        return cls(n, l, tuple(BitVector(l) for _ in range(n)))

    @classmethod
    def identity(cls, l: int) -> "BinaryMatrix":
        return cls(l, l, tuple(BitVector.unit(l, i) for i in range(l)))

    def row(self, i: int) -> BitVector:
        return self.rows[i]

    def row_weights(self) -> list[int]:
        return [row.weight() for row in self.rows]

    def column_weights(self) -> list[int]:
        weights = [0] * self.l
        for row in self.rows:
            v = row.bits
            while v:
                low = v & -v
                weights[self.l - low.bit_length()] += 1
                v ^= low
        return weights

    def to_strings(self) -> list[str]:
        return [row.to_string() for row in self.rows]


def _insert_pivot(pivots: list, entry: tuple) -> None:
    # keep pivots sorted by descending pivot bit so one reduction pass settles
    pivots.append(entry)
    pivots.sort(key=lambda t: -t[0])


def rank(M: BinaryMatrix) -> int:
    """Dimension of the row space of M."""
    pivots: list[tuple[int, int]] = []
    for row in M.rows:
        v = row.bits
        for p, b in pivots:
            if (v >> p) & 1:
                v ^= b
        if v:
            _insert_pivot(pivots, (v.bit_length() - 1, v))
    return len(pivots)


def _combo_to_vector(combo: int, r: int) -> BitVector:
    # combo holds basis index j at integer bit j; repack into display order
    bits = 0
    while combo:
        low = combo & -combo
        bits |= 1 << (r - 1 - (low.bit_length() - 1))
        combo ^= low
    return BitVector(r, bits)


@dataclass(frozen=True)
class EchelonForm:
    """Gaussian elimination of a matrix's rows against its own first
    independent rows.

    col_map holds the chosen basis rows in ascending input order, and
    reduced holds each input row's coefficients in that basis, so the
    input equals reduced * col_map exactly and the reduced matrix
    restricted to basis_rows is the identity.
    """

    reduced: BinaryMatrix
    basis_rows: tuple[int, ...]
    col_map: BinaryMatrix
    _pivots: tuple[tuple[int, int, int], ...] = field(repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.basis_rows)

    def primal_map(self, x: BitVector) -> BitVector:
        """Coefficients of x in the chosen basis rows.

        Raises:
            ValueError: if x lies outside the row space.
        """
        if x.n != self.col_map.l:
            raise DimensionMismatch("vector length does not match the matrix")
        v = x.bits
        c = 0
        for pos, vec, combo in self._pivots:
            if (v >> pos) & 1:
                v ^= vec
                c ^= combo
        if v:
            raise ValueError("vector is outside the row space")
        return _combo_to_vector(c, len(self.basis_rows))

    def dual_map(self, s: BitVector) -> BitVector:
        """Image of a functional s under restriction to the basis rows."""
        if s.n != self.col_map.l:
            raise DimensionMismatch("functional length does not match the matrix")
        bits = 0
        for row in self.col_map.rows:
            bits = (bits << 1) | row.dot(s)
        return BitVector(len(self.basis_rows), bits)


def echelon_reduce(M: BinaryMatrix) -> EchelonForm:
    """Reduces M against its first linearly independent rows.

    Basis rows are chosen greedily by ascending row index, which makes the
    result deterministic. Dependent rows come out as their unique
    coefficient vectors over the chosen basis.
    """
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, vector, combo)
    basis_rows: list[int] = []
    combos: list[int] = []
    for idx, row in enumerate(M.rows):
        v = row.bits
        c = 0
        for pos, vec, combo in pivots:
            if (v >> pos) & 1:
                v ^= vec
                c ^= combo
        if v:
            j = len(basis_rows)
            basis_rows.append(idx)
            _insert_pivot(pivots, (v.bit_length() - 1, v, c ^ (1 << j)))
            combos.append(1 << j)
        else:
            combos.append(c)
    r = len(basis_rows)
    reduced = BinaryMatrix.from_rows(r, (_combo_to_vector(c, r) for c in combos))
    col_map = BinaryMatrix.from_rows(M.l, (M.rows[i] for i in basis_rows))
    return EchelonForm(reduced, tuple(basis_rows), col_map, tuple(pivots))


def span_rref(vectors: Iterable[BitVector], length: int) -> list[BitVector]:
    """Canonical reduced basis of the span, ordered by leading coordinate."""
    pivots: list[tuple[int, int]] = []
    for vec in vectors:
        if vec.n != length:
            raise DimensionMismatch("vector length does not match the span")
        v = vec.bits
        for p, b in pivots:
            if (v >> p) & 1:
                v ^= b
        if v:
            _insert_pivot(pivots, (v.bit_length() - 1, v))
    # clear every pivot bit from the other basis vectors
    for i in range(len(pivots)):
        p, b = pivots[i]
        for j in range(len(pivots)):
            if j != i and (pivots[j][1] >> p) & 1:
                pivots[j] = (pivots[j][0], pivots[j][1] ^ b)
    return [BitVector(length, v) for _, v in pivots]


def kernel(M: BinaryMatrix) -> list[BitVector]:
    """Canonical basis of the right null space {v : M v = 0}."""
    pivots: list[tuple[int, int]] = []
    for row in M.rows:
        v = row.bits
        for p, b in pivots:
            if (v >> p) & 1:
                v ^= b
        if v:
            _insert_pivot(pivots, (v.bit_length() - 1, v))
    for i in range(len(pivots)):
        p, b = pivots[i]
        for j in range(len(pivots)):
            if j != i and (pivots[j][1] >> p) & 1:
                pivots[j] = (pivots[j][0], pivots[j][1] ^ b)
    taken = {p for p, _ in pivots}
    basis = []
    for f in range(M.l):
        if f in taken:
            continue
        v = 1 << f
        for p, b in pivots:
            if (b >> f) & 1:
                v |= 1 << p
        basis.append(BitVector(M.l, v))
    return span_rref(basis, M.l)


def mat_mul(A: BinaryMatrix, B: BinaryMatrix) -> BinaryMatrix:
    """GF(2) matrix product A * B."""
    if A.l != B.n:
        raise DimensionMismatch(f"cannot multiply {A.n}x{A.l} by {B.n}x{B.l}")
    out = []
    for row in A.rows:
        acc = 0
        v = row.bits
        while v:
            low = v & -v
            acc ^= B.rows[A.l - low.bit_length()].bits
            v ^= low
        out.append(BitVector(B.l, acc))
    return BinaryMatrix.from_rows(B.l, out)


def mat_vec(A: BinaryMatrix, v: BitVector) -> BitVector:
    """GF(2) matrix-vector product A * v."""
    if v.n != A.l:
        raise DimensionMismatch(f"cannot apply {A.n}x{A.l} to a length-{v.n} vector")
    bits = 0
    for row in A.rows:
        bits = (bits << 1) | ((row.bits & v.bits).bit_count() & 1)
    return BitVector(A.n, bits)


def transpose(M: BinaryMatrix) -> BinaryMatrix:
    """Transpose; the rows of the result are the columns of M."""
    n, l = M.n, M.l
    if l <= 64 and n >= 256:
        # wide-and-short case: extract all columns with vectorized popable shifts
        arr = np.fromiter((row.bits for row in M.rows), dtype=np.uint64, count=n)
        shifts = np.arange(l - 1, -1, -1, dtype=np.uint64)
        bitmat = ((arr[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
        packed = np.packbits(bitmat.T, axis=1, bitorder="big")
        pad = (-n) % 8
        cols = [
            BitVector(n, int.from_bytes(packed[j].tobytes(), "big") >> pad)
            for j in range(l)
        ]
        return BinaryMatrix.from_rows(n, cols)
    cols = [0] * l
    for i, row in enumerate(M.rows):
        v = row.bits
        mark = 1 << (n - 1 - i)
        while v:
            low = v & -v
            cols[l - low.bit_length()] |= mark
            v ^= low
    return BinaryMatrix.from_rows(n, (BitVector(n, c) for c in cols))


def solve(A: BinaryMatrix, b: BitVector) -> BitVector | None:
    """One solution x of A x = b, or None when the system is inconsistent.

    Free coordinates are set to zero, so the result is deterministic.
    """
    if b.n != A.n:
        raise DimensionMismatch("right hand side length does not match the rows")
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, vector, rhs bit)
    for i, row in enumerate(A.rows):
        v = row.bits
        rb = b.get(i) if A.n else 0
        for p, pv, pr in pivots:
            if (v >> p) & 1:
                v ^= pv
                rb ^= pr
        if v:
            _insert_pivot(pivots, (v.bit_length() - 1, v, rb))
        elif rb:
            return None
    x = 0
    for p, v, rb in sorted(pivots):
        # every non-pivot bit of v sits below p and is already decided
        val = rb ^ (((v ^ (1 << p)) & x).bit_count() & 1)
        if val:
            x |= 1 << p
    return BitVector(A.l, x)


def inverse(M: BinaryMatrix) -> BinaryMatrix:
    """Inverse of a square invertible matrix.

    Raises:
        ValueError: if M is not square or not invertible.
    """
    if M.n != M.l:
        raise ValueError("only square matrices can be inverted")
    l = M.l
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, vector, transform row)
    for i, row in enumerate(M.rows):
        v = row.bits
        t = 1 << (l - 1 - i)
        for p, pv, pt in pivots:
            if (v >> p) & 1:
                v ^= pv
                t ^= pt
        if not v:
            raise ValueError("matrix is singular")
        _insert_pivot(pivots, (v.bit_length() - 1, v, t))
    for i in range(len(pivots)):
        p, v, t = pivots[i]
        for j in range(len(pivots)):
            if j != i and (pivots[j][1] >> p) & 1:
                pivots[j] = (pivots[j][0], pivots[j][1] ^ v, pivots[j][2] ^ t)
    rows = [0] * l
    for p, _, t in pivots:
        rows[l - 1 - p] = t
    return BinaryMatrix.from_rows(l, (BitVector(l, t) for t in rows))
