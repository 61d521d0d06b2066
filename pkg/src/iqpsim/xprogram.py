"""Program-level semantics: amplitudes, probabilities, correlations.

An XProgram pairs a gate matrix with a common rotation angle. Row a of
the matrix is the support of a tensor product of Pauli X factors; the
program's unitary is the product of exp(i theta X_S) over all rows, and
the output distribution is the squared transition amplitude from the
all-zeros state. Everything here reduces to alpha evaluations on
projected or affinified matrices, plus a Walsh-Hadamard transform to
assemble full distributions from correlation coefficients.
"""

from __future__ import annotations

import cmath
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb, gcd

import numpy as np

from . import codes
from .codes import Angle
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    DomainTooLarge,
    NumericalInconsistency,
    UnsupportedAngle,
)
from .gf2 import BinaryMatrix, BitVector

__all__ = [
    "XProgram",
    "Distribution",
    "ReducedProgram",
    "walsh_hadamard",
    "amplitude",
    "probability",
    "beta",
    "full_distribution",
    "reduce_rows",
    "DEFAULT_DOMAIN_LIMIT",
]

DEFAULT_DOMAIN_LIMIT = 16
IMAG_TOLERANCE = 1e-9


@dataclass(frozen=True)
class XProgram:
    """A gate matrix together with the shared rotation angle."""

    P: BinaryMatrix
    theta: Angle

    @property
    def n(self) -> int:
        return self.P.n

    @property
    def l(self) -> int:
        return self.P.l


class Distribution:
    """Probability vector over l-bit strings, indexed by packed value.

    Entries in [-negative_tolerance, 0) are clamped to zero and the
    largest clamped magnitude is kept in clamp_drift; anything more
    negative, or a total off 1 by more than sum_tolerance, raises.
    The vector is stored as observed, never renormalized.
    """

    def __init__(
        self,
        domain_bits: int,
        values,
        *,
        negative_tolerance: float = 1e-9,
        sum_tolerance: float = 1e-9,
    ):
        arr = np.array(values, dtype=np.float64)
        if arr.shape != (1 << domain_bits,):
            raise DimensionMismatch(
                f"expected {1 << domain_bits} entries, got {arr.shape}"
            )
        lowest = float(arr.min()) if arr.size else 0.0
        if lowest < -negative_tolerance:
            raise NumericalInconsistency(f"probability {lowest} below tolerance")
        self.clamp_drift = max(0.0, -lowest)
        arr[arr < 0.0] = 0.0
        total = float(arr.sum())
        if abs(total - 1.0) > sum_tolerance:
            raise NumericalInconsistency(f"probabilities sum to {total}")
        self.sum_drift = total - 1.0
        self.domain_bits = domain_bits
        arr.flags.writeable = False
        self._p = arr

    def probability(self, x) -> float:
        ix = x.bits if isinstance(x, BitVector) else int(x)
        return float(self._p[ix])

    def as_array(self) -> np.ndarray:
        return self._p.copy()

    def outcomes(self):
        bits = self.domain_bits
        for ix, p in enumerate(self._p):
            yield BitVector(bits, ix), float(p)

    def total_variation(self, other: "Distribution") -> float:
        if other.domain_bits != self.domain_bits:
            raise DimensionMismatch("distributions on different domains")
        return float(np.abs(self._p - other._p).sum()) / 2.0

    def __len__(self) -> int:
        return len(self._p)


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """In-place unnormalized transform: out[x] = sum_s (-1)^(x.s) in[s]."""
    size = len(values)
    if size & (size - 1):
        raise DimensionMismatch("length must be a power of two")
    h = 1
    while h < size:
        blocks = values.reshape(-1, 2 * h)
        top = blocks[:, :h].copy()
        blocks[:, :h] += blocks[:, h:]
        blocks[:, h:] *= -1
        blocks[:, h:] += top
        h *= 2
    return values


def amplitude(prog: XProgram, x: BitVector, *, rank_limit: int | None = None) -> complex:
    """Transition amplitude from the all-zeros state to x."""
    if x.n != prog.l:
        raise DimensionMismatch(f"x has {x.n} bits, program has {prog.l}")
    kwargs = {} if rank_limit is None else {"rank_limit": rank_limit}
    base = codes.alpha(prog.P, prog.theta, **kwargs)
    if x.is_zero():
        return base
    return codes.alpha(codes.project(prog.P, x), prog.theta, **kwargs) - base


def probability(prog: XProgram, x: BitVector, *, rank_limit: int | None = None) -> float:
    return abs(amplitude(prog, x, rank_limit=rank_limit)) ** 2


def beta(prog: XProgram, s: BitVector, *, rank_limit: int | None = None) -> float:
    """Correlation coefficient of the parity X.s, equal to 2 P[X.s=0] - 1.

    Computed as alpha of the affinified matrix at the doubled angle; the
    result is real because that code contains the all-ones word, pairing
    codewords into conjugate contributions.
    """
    if s.n != prog.l:
        raise DimensionMismatch(f"s has {s.n} bits, program has {prog.l}")
    if s.is_zero():
        return 1.0
    kwargs = {} if rank_limit is None else {"rank_limit": rank_limit}
    value = codes.alpha(codes.affinify(prog.P, s), prog.theta.doubled(), **kwargs)
    if abs(value.imag) > IMAG_TOLERANCE:
        raise NumericalInconsistency(f"correlation has imaginary part {value.imag}")
    return float(value.real)


def _run_indexed(worker, count: int, threads: int | None) -> None:
    if not threads or threads <= 1 or count <= 1:
        worker(0, count)
        return
    # fixed chunking by index keeps output independent of scheduling
    chunk = -(-count // threads)
    spans = [(lo, min(lo + chunk, count)) for lo in range(0, count, chunk)]
    with ThreadPoolExecutor(max_workers=len(spans)) as pool:
        for future in [pool.submit(worker, lo, hi) for lo, hi in spans]:
            future.result()


def full_distribution(
    prog: XProgram,
    *,
    threads: int | None = None,
    domain_limit: int = DEFAULT_DOMAIN_LIMIT,
) -> Distribution:
    """Exact output distribution over all 2^l strings.

    All correlation coefficients are computed, then one transform turns
    them into probabilities: P[x] = 2^-l sum_s (-1)^(x.s) beta_s.
    """
    l = prog.l
    if l > domain_limit:
        raise DomainTooLarge(f"2^{l} outcomes exceed the limit 2^{domain_limit}")
    size = 1 << l
    values = np.empty(size, dtype=np.float64)

    def worker(lo: int, hi: int) -> None:
        for ix in range(lo, hi):
            values[ix] = beta(prog, BitVector(l, ix))

    _run_indexed(worker, size, threads)
    walsh_hadamard(values)
    values /= size
    return Distribution(l, values)


@dataclass(frozen=True)
class ReducedProgram:
    """Multiplicity-encoded program equivalent to a dyadic-angle input.

    Every support has Hamming weight at most degree; multiplicities live
    in [0, period) with period the order of exp(i theta m X) in m. The
    scalar exp(i theta phase_exponent) is the global phase dropped from
    the row list; it never affects the distribution.
    """

    l: int
    theta: Angle
    rows: tuple[tuple[BitVector, int], ...]
    phase_exponent: int
    degree: int
    period: int

    @property
    def monomial_count(self) -> int:
        return len(self.rows)

    @property
    def expanded_row_count(self) -> int:
        return sum(m for _, m in self.rows)

    def global_phase(self) -> complex:
        return cmath.exp(1j * self.theta.value * self.phase_exponent)

    def to_xprogram(self) -> XProgram:
        expanded = []
        for row, mult in self.rows:
            expanded.extend([row] * mult)
        return XProgram(BinaryMatrix.from_rows(self.l, expanded), self.theta)


def reduce_rows(prog: XProgram, *, term_limit: int = 2_000_000) -> ReducedProgram:
    """Rewrite a dyadic-angle program so every row has weight <= d.

    For theta = c pi / 2^d the diagonal phase of each row expands into
    parity terms; coefficients on terms of degree above d are multiples
    of a full turn and vanish, and the rest accumulate with integer
    multiplicities mod the period. The empty term becomes global phase.
    The output program's distribution equals the input's exactly.
    """
    parts = prog.theta.dyadic_parts()
    if parts is None:
        raise UnsupportedAngle(
            f"angle {prog.theta} is not an odd multiple of pi over a power of two"
        )
    c, d = parts
    modulus = (2 << d) // gcd(c, 2 << d) if c else 1
    counts: dict[int, int] = {}
    budget = 0
    for row in prog.P.rows:
        w = row.weight()
        support = [b for b in range(prog.l) if row.get(b)]
        # expansion coefficient on a size-sz sub-support of a weight-w row
        coeffs = {}
        for sz in range(0, min(d, w) + 1):
            f = sum((-1) ** j * comb(w - sz, j) for j in range(d - sz + 1)) % modulus
            if f:
                coeffs[sz] = f
        for sz, f in coeffs.items():
            budget += comb(w, sz)
            if budget > term_limit:
                raise BudgetExceeded(f"row expansion exceeds {term_limit} terms")
            for subset in combinations(support, sz):
                key = 0
                for b in subset:
                    key |= 1 << (prog.l - 1 - b)
                counts[key] = (counts.get(key, 0) + f) % modulus
    phase_exponent = counts.pop(0, 0)
    rows = tuple(
        (BitVector(prog.l, bits), mult)
        for bits, mult in sorted(counts.items())
        if mult
    )
    return ReducedProgram(
        l=prog.l,
        theta=prog.theta,
        rows=rows,
        phase_exponent=phase_exponent,
        degree=d,
        period=modulus,
    )
