"""Marginal distributions of masked outputs, and a weak sampler.

A projector is any idempotent linear map m on the output bits. The
masked output m(X) lives in the range R of m, and its distribution is
an average of correlation coefficients over the dual range Rstar,
assembled by a Walsh-Hadamard transform over coordinates. Three
specialized paths compute the same thing faster under structural
assumptions (angle pi/8, bounded column weight, rows of weight at most
two), and a sampler draws from the marginal by randomizing over the
dual kernel Kstar, one fresh shift per sample.
"""

from __future__ import annotations

import cmath
import math
from bisect import bisect_left
from dataclasses import dataclass, field
from random import Random

import numpy as np

from . import codes, gf2, xprogram
from .codes import Angle
from .errors import (
    ColumnBoundViolated,
    DimensionMismatch,
    NotIdempotent,
    NumericalInconsistency,
    RangeTooLarge,
    RowWeightViolated,
    SupportTooLarge,
)
from .gf2 import BinaryMatrix, BitVector
from .xprogram import Distribution, XProgram, walsh_hadamard

__all__ = [
    "Projector",
    "make_projector",
    "diagonal_projector",
    "marginal_distribution",
    "marginal_pi8",
    "marginal_sparse",
    "marginal_graphic",
    "MarginalSampler",
    "sample_marginal",
    "DEFAULT_RANGE_LIMIT",
    "PI8_RANGE_LIMIT",
]

DEFAULT_RANGE_LIMIT = 20
PI8_RANGE_LIMIT = 24


@dataclass(frozen=True)
class Projector:
    """An idempotent map with its four attached subspaces.

    K and R are the kernel and range of the matrix; Kstar and Rstar are
    the kernel and range of the transpose. Rstar is orthogonal to K and
    Kstar to R. Outcomes of the masked variable are labeled by their
    coordinates in the R basis; the pairing matrix between the R and
    Rstar bases is invertible and precomputed for coordinate lookups.
    """

    matrix: BinaryMatrix
    K_basis: tuple[BitVector, ...]
    R_basis: tuple[BitVector, ...]
    Kstar_basis: tuple[BitVector, ...]
    Rstar_basis: tuple[BitVector, ...]
    range_dim: int
    support_bits: int
    _coord_solver: BinaryMatrix = field(repr=False, compare=False)

    @property
    def l(self) -> int:
        return self.matrix.l

    def vector_to_coords(self, x: BitVector) -> BitVector:
        """Coordinates in the R basis of the R-component of x."""
        if x.n != self.l:
            raise DimensionMismatch(f"vector has {x.n} bits, projector {self.l}")
        q = self.range_dim
        pairing = 0
        for k, dual in enumerate(self.Rstar_basis):
            pairing |= x.dot(dual) << (q - 1 - k)
        return gf2.mat_vec(self._coord_solver, BitVector(q, pairing))

    def coords_to_vector(self, w) -> BitVector:
        bits = w.bits if isinstance(w, BitVector) else int(w)
        out = BitVector(self.l, 0)
        for j, base in enumerate(self.R_basis):
            if (bits >> (self.range_dim - 1 - j)) & 1:
                out = out ^ base
        return out

    def apply(self, x: BitVector) -> BitVector:
        return gf2.mat_vec(self.matrix, x)


def make_projector(M: BinaryMatrix) -> Projector:
    """Validate idempotence and compute the four subspace bases."""
    if M.n != M.l:
        raise DimensionMismatch(f"projector must be square, got {M.n}x{M.l}")
    if gf2.mat_mul(M, M) != M:
        raise NotIdempotent("matrix is not idempotent")
    l = M.l
    transposed = gf2.transpose(M)
    K = gf2.kernel(M)
    R = gf2.span_rref(list(transposed.rows), l)
    Kstar = gf2.kernel(transposed)
    Rstar = gf2.span_rref(list(M.rows), l)
    q = len(R)
    support = sum(1 for j in range(l) if any(row.get(j) for row in M.rows))
    if q:
        pairing = BinaryMatrix.from_rows(
            q,
            [
                BitVector(
                    q,
                    sum(R[j].dot(Rstar[k]) << (q - 1 - k) for k in range(q)),
                )
                for j in range(q)
            ],
        )
        try:
            solver = gf2.inverse(gf2.transpose(pairing))
        except ValueError as exc:
            raise NumericalInconsistency("range pairing is degenerate") from exc
    else:
        solver = BinaryMatrix.from_rows(0, [])
    return Projector(
        matrix=M,
        K_basis=tuple(K),
        R_basis=tuple(R),
        Kstar_basis=tuple(Kstar),
        Rstar_basis=tuple(Rstar),
        range_dim=q,
        support_bits=support,
        _coord_solver=solver,
    )


def diagonal_projector(mask: BitVector) -> Projector:
    """Projector keeping exactly the bits set in mask."""
    rows = [
        BitVector.unit(mask.n, j) if mask.get(j) else BitVector(mask.n, 0)
        for j in range(mask.n)
    ]
    return make_projector(BinaryMatrix.from_rows(mask.n, rows))


def _range_transform(proj: Projector, beta_at, threads: int | None) -> Distribution:
    """Assemble the marginal from one coefficient per dual-range vector.

    beta_at(s) supplies the correlation for s in Rstar; placement in the
    transform array pairs R-basis coordinates against s so the standard
    transform produces P[x] = 2^-q sum_s (-1)^(x.s) beta(s).
    """
    q = proj.range_dim
    size = 1 << q
    values = np.empty(size, dtype=np.float64)
    svec = [BitVector(proj.l, 0)] * size
    for u in range(size):
        s = BitVector(proj.l, 0)
        for k in range(q):
            if (u >> (q - 1 - k)) & 1:
                s = s ^ proj.Rstar_basis[k]
        svec[u] = s
    placement = [0] * size
    for u in range(size):
        v = 0
        for j in range(q):
            v |= proj.R_basis[j].dot(svec[u]) << (q - 1 - j)
        placement[u] = v

    def worker(lo: int, hi: int) -> None:
        for u in range(lo, hi):
            values[placement[u]] = beta_at(svec[u])

    xprogram._run_indexed(worker, size, threads)
    walsh_hadamard(values)
    values /= size
    return Distribution(q, values)


def marginal_distribution(
    prog: XProgram,
    proj: Projector,
    *,
    threads: int | None = None,
    range_limit: int = DEFAULT_RANGE_LIMIT,
) -> Distribution:
    """Exact marginal of m(X) over the range of the projector."""
    if proj.l != prog.l:
        raise DimensionMismatch("projector size differs from program width")
    if proj.range_dim > range_limit:
        raise RangeTooLarge(
            f"range dimension {proj.range_dim} exceeds the limit {range_limit}"
        )
    return _range_transform(proj, lambda s: xprogram.beta(prog, s), threads)


def marginal_pi8(
    P: BinaryMatrix,
    proj: Projector,
    *,
    threads: int | None = None,
    range_limit: int = PI8_RANGE_LIMIT,
) -> Distribution:
    """Marginal at angle pi/8, exact for any matrix size.

    The doubled angle is pi/4, so every coefficient is an exact fourth
    root-of-unity evaluation; no codeword enumeration happens and the
    cost is polynomial in the matrix dimensions times 2^range_dim.
    """
    if proj.l != P.l:
        raise DimensionMismatch("projector size differs from matrix width")
    if proj.range_dim > range_limit:
        raise RangeTooLarge(
            f"range dimension {proj.range_dim} exceeds the limit {range_limit}"
        )
    prog = XProgram(P, Angle.exact(1, 8))
    return _range_transform(proj, lambda s: xprogram.beta(prog, s), threads)


def marginal_sparse(
    prog: XProgram,
    proj: Projector,
    column_bound: int,
    *,
    threads: int | None = None,
    range_limit: int = DEFAULT_RANGE_LIMIT,
) -> Distribution:
    """Marginal for column-sparse matrices, any angle.

    With every column weight at most column_bound and s supported on few
    bits, the affinified matrix for s has at most column_bound * |s|
    rows, so each coefficient is a direct enumeration of a tiny code.
    """
    if proj.l != prog.l:
        raise DimensionMismatch("projector size differs from program width")
    if proj.range_dim > range_limit:
        raise RangeTooLarge(
            f"range dimension {proj.range_dim} exceeds the limit {range_limit}"
        )
    weights = prog.P.column_weights()
    for j, w in enumerate(weights):
        if w > column_bound:
            raise ColumnBoundViolated(
                f"column {j} has weight {w}, bound is {column_bound}"
            )
    doubled = prog.theta.doubled().value

    def beta_at(s: BitVector) -> float:
        if s.is_zero():
            return 1.0
        sub = codes.affinify(prog.P, s)
        if sub.n > column_bound * s.weight():
            raise NumericalInconsistency("affinification exceeds the sparse bound")
        profile = codes.weight_enumerator(sub)
        total = 0j
        for w, count in enumerate(profile.weights):
            if count:
                total += count * cmath.exp(1j * doubled * (sub.n - 2 * w))
        value = total / (1 << profile.rank)
        if abs(value.imag) > xprogram.IMAG_TOLERANCE:
            raise NumericalInconsistency(f"correlation has imaginary part {value.imag}")
        return float(value.real)

    return _range_transform(proj, beta_at, threads)


def _graphic_beta(rows: list[int], l: int, s: BitVector, phi: float) -> float:
    """Closed-form correlation when every row has weight at most two.

    Rows odd against s each contain exactly one hub bit (a set bit of s)
    plus at most one partner bit. Fixing the hub parities, partner bits
    integrate to cosines and bare hubs to a pure phase; the average over
    hub assignments is the coefficient.
    """
    hubs = [b for b in range(l) if s.get(b)]
    hub_mask = s.bits
    bare = [0] * len(hubs)
    partner: dict[int, list[int]] = {}
    for bits in rows:
        if (bin(bits & hub_mask).count("1")) & 1 == 0:
            continue
        hub_index = next(
            i for i, h in enumerate(hubs) if (bits >> (l - 1 - h)) & 1
        )
        rest = bits & ~(1 << (l - 1 - hubs[hub_index]))
        if rest == 0:
            bare[hub_index] += 1
        else:
            partner.setdefault(rest, [0] * len(hubs))[hub_index] += 1
    total = 0j
    for assignment in range(1 << len(hubs)):
        signs = [1 - 2 * ((assignment >> i) & 1) for i in range(len(hubs))]
        w0 = sum(sg * b for sg, b in zip(signs, bare))
        term = cmath.exp(1j * phi * w0)
        for counts in partner.values():
            term *= math.cos(phi * sum(sg * c for sg, c in zip(signs, counts)))
        total += term
    value = total / (1 << len(hubs))
    if abs(value.imag) > xprogram.IMAG_TOLERANCE:
        raise NumericalInconsistency(f"correlation has imaginary part {value.imag}")
    return float(value.real)


def marginal_graphic(
    prog: XProgram,
    proj: Projector,
    *,
    threads: int | None = None,
) -> Distribution:
    """Marginal for weight-<=2 rows and a projector on at most two bits."""
    if proj.l != prog.l:
        raise DimensionMismatch("projector size differs from program width")
    for i, w in enumerate(prog.P.row_weights()):
        if w > 2:
            raise RowWeightViolated(f"row {i} has weight {w}, bound is 2")
    if proj.support_bits > 2:
        raise SupportTooLarge(
            f"projector touches {proj.support_bits} bits, bound is 2"
        )
    phi = prog.theta.doubled().value
    rows = [r.bits for r in prog.P.rows]

    def beta_at(s: BitVector) -> float:
        if s.is_zero():
            return 1.0
        return _graphic_beta(rows, prog.l, s, phi)

    return _range_transform(proj, beta_at, threads)


class MarginalSampler:
    """Draws masked outputs one at a time, a fresh dual shift per draw.

    For a shift k in Kstar the conditional probability of outcome x is
    the squared magnitude of an average of unit phases over the dual
    range, each phase read off one popcount pass over the rows. The
    average over shifts reproduces the marginal exactly, so sampling a
    uniform shift then the conditional outcome samples the marginal.
    Conditional vectors are cached per shift.
    """

    def __init__(
        self,
        prog: XProgram,
        proj: Projector,
        rng: Random | None = None,
        *,
        range_limit: int = DEFAULT_RANGE_LIMIT,
        cache_limit: int = 4096,
    ):
        if proj.l != prog.l:
            raise DimensionMismatch("projector size differs from program width")
        if proj.range_dim > range_limit:
            raise RangeTooLarge(
                f"range dimension {proj.range_dim} exceeds the limit {range_limit}"
            )
        self.prog = prog
        self.proj = proj
        self.rng = rng if rng is not None else Random()
        self._cache_limit = cache_limit
        self._cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._rows = [r.bits for r in prog.P.rows]
        self._theta = prog.theta.value
        q = proj.range_dim
        self._dual_vectors = []
        self._placement = []
        for u in range(1 << q):
            s = 0
            for k in range(q):
                if (u >> (q - 1 - k)) & 1:
                    s ^= proj.Rstar_basis[k].bits
            self._dual_vectors.append(s)
            v = 0
            for j in range(q):
                v |= (bin(proj.R_basis[j].bits & s).count("1") & 1) << (q - 1 - j)
            self._placement.append(v)

    def conditional(self, shift) -> np.ndarray:
        """Conditional probability vector for one dual-kernel shift."""
        bits = shift.bits if isinstance(shift, BitVector) else int(shift)
        cached = self._cache.get(bits)
        if cached is not None:
            return cached[0].copy()
        probs, _ = self._build(bits)
        return probs.copy()

    def _build(self, shift_bits: int) -> tuple[np.ndarray, np.ndarray]:
        q = self.proj.range_dim
        size = 1 << q
        n = self.prog.n
        phases = np.empty(size, dtype=np.complex128)
        for u in range(size):
            t = self._dual_vectors[u] ^ shift_bits
            odd = sum(1 for r in self._rows if (bin(r & t).count("1") & 1))
            phases[self._placement[u]] = cmath.exp(
                1j * self._theta * (n - 2 * odd)
            )
        walsh_hadamard(phases)
        phases /= size
        probs = np.abs(phases) ** 2
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise NumericalInconsistency(f"conditional sums to {total}")
        cdf = np.cumsum(probs)
        entry = (probs, cdf)
        if len(self._cache) < self._cache_limit:
            self._cache[shift_bits] = entry
        return entry

    def sample(self) -> BitVector:
        """One masked output, as a full-width vector in the range of m."""
        dim = len(self.proj.Kstar_basis)
        pick = self.rng.getrandbits(dim) if dim else 0
        shift = 0
        for j in range(dim):
            if (pick >> j) & 1:
                shift ^= self.proj.Kstar_basis[j].bits
        cached = self._cache.get(shift)
        probs, cdf = cached if cached is not None else self._build(shift)
        ix = bisect_left(cdf, self.rng.random())
        if ix >= len(probs):
            ix = len(probs) - 1
        return self.proj.coords_to_vector(ix)


def sample_marginal(prog: XProgram, proj: Projector, rng: Random) -> BitVector:
    """Single draw from the marginal of m(X)."""
    return MarginalSampler(prog, proj, rng).sample()
