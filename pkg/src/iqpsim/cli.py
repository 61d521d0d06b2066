"""Command-line interface: file parsing, subcommands, JSON/TSV reports.

Matrix files: '#' starts a comment line, blank lines are skipped, the
first data line is "n l", then n lines of exactly l characters over
{0,1}. Angles: "a/b" means (a/b) pi exactly, a bare integer "a" means
a pi, and "rad:<x>" is raw radians; bare floats are rejected so exact
fourth-root dispatch never hinges on float coincidence.

Exit codes: 0 ok, 2 input error, 3 budget exceeded, 4 numerical
inconsistency. Errors print one JSON object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from random import Random

from . import clifford, codes, gf2, marginals, oracle, tutte, xprogram
from .codes import Angle
from .errors import (
    BadAngle,
    BadCharacter,
    BadRowLength,
    BudgetError,
    InputError,
    MalformedHeader,
    NumericalInconsistency,
    ParseError,
    SimulationError,
)
from .gf2 import BinaryMatrix, BitVector
from .marginals import Projector
from .xprogram import XProgram

__all__ = ["main", "parse_matrix_file", "parse_angle", "parse_matrix_text"]


def parse_matrix_text(text: str, origin: str = "<input>") -> BinaryMatrix:
    header: tuple[int, int] | None = None
    rows: list[BitVector] = []
    last_line = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        last_line = number
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise MalformedHeader(
                    f"{origin}: expected 'n l' header, got {line!r}", line=number
                )
            try:
                n, l = int(parts[0]), int(parts[1])
            except ValueError:
                raise MalformedHeader(
                    f"{origin}: non-integer header {line!r}", line=number
                ) from None
            if n < 0 or l < 0:
                raise MalformedHeader(
                    f"{origin}: negative dimensions in header", line=number
                )
            header = (n, l)
            continue
        n, l = header
        if len(rows) == n:
            raise ParseError(
                f"{origin}: unexpected data after {n} rows", line=number
            )
        if len(line) != l:
            raise BadRowLength(
                f"{origin}: row has {len(line)} characters, expected {l}",
                line=number,
            )
        if any(ch not in "01" for ch in line):
            bad = next(ch for ch in line if ch not in "01")
            raise BadCharacter(
                f"{origin}: invalid character {bad!r} in row", line=number
            )
        rows.append(BitVector.from_string(line))
    if header is None:
        raise MalformedHeader(f"{origin}: no header line found", line=last_line)
    n, l = header
    if len(rows) != n:
        raise BadRowLength(
            f"{origin}: expected {n} rows, found {len(rows)}", line=last_line
        )
    return BinaryMatrix.from_rows(l, rows)


def parse_matrix_file(path: str) -> BinaryMatrix:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_matrix_text(text, origin=path)


def dump_matrix(M: BinaryMatrix) -> str:
    lines = [f"{M.n} {M.l}"]
    lines.extend(M.to_strings())
    return "\n".join(lines)


def parse_angle(text: str) -> Angle:
    token = text.strip()
    if token.startswith("rad:"):
        try:
            value = float(token[4:])
        except ValueError:
            raise BadAngle(f"bad radians value {token!r}") from None
        if value != value or value in (float("inf"), float("-inf")):
            raise BadAngle(f"non-finite radians value {token!r}")
        return Angle.radians(value)
    if "/" in token:
        num, _, den = token.partition("/")
        try:
            a, b = int(num), int(den)
        except ValueError:
            raise BadAngle(f"bad rational angle {token!r}") from None
        if b <= 0:
            raise BadAngle(f"denominator must be positive in {token!r}")
        return Angle.exact(a, b)
    try:
        a = int(token)
    except ValueError:
        raise BadAngle(
            f"angle {token!r} not understood; use 'a/b' (times pi) or 'rad:<x>'"
        ) from None
    return Angle.exact(a, 1)


def _theta_of(args) -> Angle | None:
    return parse_angle(args.theta) if getattr(args, "theta", None) is not None else None


def parse_bits(text: str, width: int, what: str) -> BitVector:
    token = text.strip()
    if len(token) != width or any(ch not in "01" for ch in token):
        raise ParseError(
            f"{what} must be {width} characters over 0/1, got {token!r}"
        )
    return BitVector.from_string(token)


def fmt(x: float):
    return float(f"{float(x):.12g}")


def _emit_report(args, payload: dict, tsv_rows: list[tuple] | None = None) -> None:
    if args.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        rows = tsv_rows
        if rows is None:
            rows = sorted(
                (k, json.dumps(v, sort_keys=True)) for k, v in payload.items()
            )
        for row in rows:
            print("\t".join(str(cell) for cell in row))


def _base_payload(args, M: BinaryMatrix, theta: Angle | None = None) -> dict:
    payload: dict = {"command": args.command, "n": M.n, "l": M.l}
    if theta is not None:
        payload["theta"] = str(theta)
    if args.dump:
        payload["matrix_file"] = dump_matrix(M)
    return payload


def _load_projector(args, l: int) -> Projector:
    if getattr(args, "projector", None):
        M = parse_matrix_file(args.projector)
        return marginals.make_projector(M)
    if getattr(args, "mask", None) is None:
        raise ParseError("either --mask or --projector is required")
    mask = parse_bits(args.mask, l, "--mask")
    return marginals.diagonal_projector(mask)


def _distribution_payload(dist: xprogram.Distribution, labeler=None) -> list[dict]:
    entries = []
    for outcome, p in dist.outcomes():
        entry = {"outcome": outcome.to_string(), "p": fmt(p)}
        if labeler is not None:
            entry["x"] = labeler(outcome).to_string()
        entries.append(entry)
    return entries


def _cmd_wenum(args) -> int:
    M = parse_matrix_file(args.matrix)
    profile = codes.weight_enumerator(M)
    payload = _base_payload(args, M)
    payload.update(
        {
            "rank": profile.rank,
            "weights": list(profile.weights),
            "exact": True,
        }
    )
    tsv = [(w, c) for w, c in enumerate(profile.weights)]
    _emit_report(args, payload, tsv)
    return 0


def _cmd_tutte(args) -> int:
    M = parse_matrix_file(args.matrix)
    payload = _base_payload(args, M)
    if args.at is not None:
        x, y = args.at
        value = tutte.tutte_eval(M, complex(x), complex(y))
        payload.update(
            {
                "x": fmt(x),
                "y": fmt(y),
                "value": {"re": fmt(value.real), "im": fmt(value.imag)},
            }
        )
        _emit_report(args, payload)
        return 0
    poly = tutte.tutte_subset_sum(M)
    payload.update(
        {
            "coefficients": [[i, j, c] for (i, j), c in poly.items()],
            "text": poly.to_text(),
            "basis_count": poly.basis_count(),
            "exact": True,
        }
    )
    tsv = [(i, j, c) for (i, j), c in poly.items()]
    _emit_report(args, payload, tsv)
    return 0


def _alpha_payload(M: BinaryMatrix, theta: Angle) -> dict:
    value = codes.alpha(M, theta)
    out: dict = {"re": fmt(value.real), "im": fmt(value.imag), "exact": False}
    exact = codes.alpha_exact_fourth_root(M, theta)
    if exact is not None:
        gaussian, log2_den = exact
        out.update(
            {
                "exact": True,
                "gaussian_integer": {"re": gaussian.re, "im": gaussian.im},
                "log2_denominator": log2_den,
            }
        )
        scale = 2.0**log2_den
        re, im = gaussian.re / scale, gaussian.im / scale
        out["re"] = int(re) if re == int(re) else fmt(re)
        out["im"] = int(im) if im == int(im) else fmt(im)
    return out


def _cmd_alpha(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    payload = _base_payload(args, M, theta)
    payload.update(_alpha_payload(M, theta))
    _emit_report(args, payload)
    return 0


def _cmd_amplitude(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    x = parse_bits(args.x, M.l, "--x")
    value = xprogram.amplitude(prog, x)
    payload = _base_payload(args, M, theta)
    payload.update({"x": x.to_string(), "re": fmt(value.real), "im": fmt(value.imag)})
    _emit_report(args, payload)
    return 0


def _cmd_prob(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    x = parse_bits(args.x, M.l, "--x")
    payload = _base_payload(args, M, theta)
    payload.update({"x": x.to_string(), "p": fmt(xprogram.probability(prog, x))})
    _emit_report(args, payload)
    return 0


def _cmd_beta(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    s = parse_bits(args.s, M.l, "--s")
    payload = _base_payload(args, M, theta)
    payload.update({"s": s.to_string(), "beta": fmt(xprogram.beta(prog, s))})
    _emit_report(args, payload)
    return 0


def _cmd_dist(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    dist = xprogram.full_distribution(prog, threads=args.threads)
    payload = _base_payload(args, M, theta)
    payload.update(
        {
            "domain_bits": dist.domain_bits,
            "entries": _distribution_payload(dist),
            "sum_drift": fmt(dist.sum_drift),
        }
    )
    tsv = [(e["outcome"], e["p"]) for e in payload["entries"]]
    _emit_report(args, payload, tsv)
    return 0


def _cmd_clifford(args) -> int:
    M = parse_matrix_file(args.matrix)
    support = clifford.clifford_support(M)
    zero = clifford.clifford_probability(M, BitVector(M.l, 0))
    payload = _base_payload(args, M)
    payload.update(
        {
            "case": support.case,
            "V": [v.to_string() for v in support.V_basis],
            "U": [u.to_string() for u in support.U_basis],
            "support_dim": support.dim,
            "support_size": 1 << support.dim,
            "point_probability": {"numerator": 1, "log2_denominator": support.dim},
            "zero_probability": {
                "numerator": zero.numerator,
                "denominator": zero.denominator,
            },
            "offset": support.offset.to_string(),
            "exact": True,
        }
    )
    _emit_report(args, payload)
    return 0


def _select_marginal_path(args, theta: Angle, M: BinaryMatrix, proj: Projector) -> str:
    if args.path != "auto":
        return args.path
    if theta == Angle.exact(1, 8):
        return "pi8"
    if max(M.row_weights(), default=0) <= 2 and proj.support_bits <= 2:
        return "graphic"
    if max(M.column_weights(), default=0) <= args.sparse_bound:
        return "sparse"
    return "generic"


def _cmd_marginal(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    proj = _load_projector(args, M.l)
    path = _select_marginal_path(args, theta, M, proj)
    if path == "pi8":
        if theta != Angle.exact(1, 8):
            raise BadAngle("the pi8 path requires --theta 1/8")
        dist = marginals.marginal_pi8(M, proj, threads=args.threads)
    elif path == "graphic":
        dist = marginals.marginal_graphic(prog, proj, threads=args.threads)
    elif path == "sparse":
        dist = marginals.marginal_sparse(
            prog, proj, args.sparse_bound, threads=args.threads
        )
    else:
        dist = marginals.marginal_distribution(prog, proj, threads=args.threads)
    payload = _base_payload(args, M, theta)
    payload.update(
        {
            "path": path,
            "range_dim": proj.range_dim,
            "entries": _distribution_payload(dist, labeler=proj.coords_to_vector),
            "sum_drift": fmt(dist.sum_drift),
        }
    )
    tsv = [(e["outcome"], e["x"], e["p"]) for e in payload["entries"]]
    _emit_report(args, payload, tsv)
    return 0


def _cmd_sample(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    proj = _load_projector(args, M.l)
    rng = Random(args.seed)
    sampler = marginals.MarginalSampler(prog, proj, rng)
    draws = [sampler.sample().to_string() for _ in range(args.samples)]
    if args.output == "json":
        payload = _base_payload(args, M, theta)
        payload.update({"seed": args.seed, "samples": draws})
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for draw in draws:
            print(draw)
    return 0


def _cmd_reduce(args) -> int:
    M = parse_matrix_file(args.matrix)
    theta = _theta_of(args)
    prog = XProgram(M, theta)
    reduced = xprogram.reduce_rows(prog)
    payload = _base_payload(args, M, theta)
    payload.update(
        {
            "degree": reduced.degree,
            "period": reduced.period,
            "phase_exponent": reduced.phase_exponent,
            "rows": [[row.to_string(), mult] for row, mult in reduced.rows],
            "monomial_count": reduced.monomial_count,
            "expanded_row_count": reduced.expanded_row_count,
        }
    )
    if args.dump:
        payload["reduced_matrix_file"] = dump_matrix(reduced.to_xprogram().P)
    tsv = [(row.to_string(), mult) for row, mult in reduced.rows]
    _emit_report(args, payload, tsv)
    return 0


def _cmd_verify(args) -> int:
    M = parse_matrix_file(args.matrix)
    if M.l > 10 or M.n > 16:
        raise InputError("verify needs l <= 10 and n <= 16 for the dense oracle")
    parsed = _theta_of(args)
    theta = parsed if parsed is not None else Angle.exact(1, 8)
    prog = XProgram(M, theta)
    sv = oracle.statevector(prog)
    failures: list[str] = []

    def report(name: str, worst: float, bound: float) -> None:
        ok = worst <= bound
        print(f"check {name}: {'ok' if ok else 'FAILED'} (max error {worst:.3g})")
        if not ok:
            failures.append(name)

    worst = 0.0
    for ix in range(1 << M.l):
        x = BitVector(M.l, ix)
        worst = max(worst, abs(xprogram.amplitude(prog, x) - sv.amplitude(x)))
    report("amplitudes vs oracle", worst, 1e-9)

    worst = 0.0
    for ix in range(1 << M.l):
        s = BitVector(M.l, ix)
        worst = max(worst, abs(xprogram.beta(prog, s) - oracle.oracle_beta(prog, s)))
    report("correlations vs oracle", worst, 1e-9)

    dist = xprogram.full_distribution(prog, threads=args.threads)
    dense = oracle.oracle_distribution(prog)
    worst = float(
        max(
            abs(dist.probability(ix) - dense.probability(ix))
            for ix in range(1 << M.l)
        )
    )
    report("distribution vs oracle", worst, 1e-9)

    a_code = codes.alpha(M, theta)
    a_tutte = tutte.greene_alpha(M, theta)
    worst = abs(a_code - a_tutte) / max(1.0, abs(a_code))
    report("alpha via tutte identity", worst, 1e-8)

    profile = codes.weight_enumerator(M)
    direct = [0] * (M.n + 1)
    for v in range(1 << M.l):
        word = gf2.mat_vec(M, BitVector(M.l, v))
        direct[word.weight()] += 1
    scale = (1 << M.l) >> profile.rank
    worst = 0.0 if tuple(c * scale for c in profile.weights) == tuple(direct) else 1.0
    report("weight enumerator vs direct count", worst, 0.0)

    quarter = XProgram(M, Angle.exact(1, 4))
    sv4 = oracle.statevector(quarter)
    worst = 0.0
    for ix in range(1 << M.l):
        x = BitVector(M.l, ix)
        exact_p = clifford.clifford_probability(M, x)
        worst = max(worst, abs(float(exact_p) - abs(sv4.amplitude(x)) ** 2))
    report("clifford distribution vs oracle", worst, 1e-12)

    kept = min(2, M.l)
    mask = BitVector.from_string("1" * kept + "0" * (M.l - kept)) if M.l else BitVector(0, 0)
    proj = marginals.diagonal_projector(mask)
    got = marginals.marginal_distribution(prog, proj, threads=args.threads)
    want = oracle.oracle_marginal(prog, proj)
    worst = float(
        max(
            abs(got.probability(ix) - want.probability(ix))
            for ix in range(1 << proj.range_dim)
        )
    )
    report("marginal vs oracle", worst, 1e-9)

    if failures:
        print(f"{len(failures)} of 7 checks failed")
        raise NumericalInconsistency("verification failed: " + ", ".join(failures))
    print("all 7 checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iqpsim",
        description="Distributions of X-programs via binary codes and matroids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(
        name: str,
        handler,
        *,
        theta: str = "no",
        x: bool = False,
        s: bool = False,
        mask: bool = False,
        samples: bool = False,
        at: bool = False,
        help_text: str = "",
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("matrix", help="path to a matrix file")
        if theta != "no":
            sp.add_argument(
                "--theta",
                "-t",
                required=(theta == "required"),
                default=None,
                help="angle: 'a/b' means (a/b) pi, or 'rad:<x>'",
            )
        if x:
            sp.add_argument("--x", required=True, help="output bitstring")
        if s:
            sp.add_argument("--s", required=True, help="parity direction bitstring")
        if mask:
            sp.add_argument("--mask", help="kept-bits mask, e.g. 1100")
            sp.add_argument("--projector", help="path to an idempotent matrix file")
        if samples:
            sp.add_argument("--samples", type=int, default=1, help="number of draws")
            sp.add_argument("--seed", type=int, default=0, help="RNG seed")
        if at:
            sp.add_argument(
                "--at",
                nargs=2,
                type=float,
                metavar=("X", "Y"),
                default=None,
                help="evaluate at a point instead of expanding",
            )
        sp.add_argument("--output", choices=("json", "tsv"), default="json")
        sp.add_argument("--dump", action="store_true", help="echo the parsed matrix")
        sp.add_argument("--threads", type=int, default=1)
        sp.set_defaults(handler=handler)
        return sp

    add("wenum", _cmd_wenum, help_text="weight histogram of the column-span code")
    add("tutte", _cmd_tutte, at=True, help_text="Tutte polynomial of the row matroid")
    add("alpha", _cmd_alpha, theta="required", help_text="normalized enumerator value")
    add("amplitude", _cmd_amplitude, theta="required", x=True,
        help_text="transition amplitude to x")
    add("prob", _cmd_prob, theta="required", x=True, help_text="output probability")
    add("beta", _cmd_beta, theta="required", s=True,
        help_text="parity correlation coefficient")
    add("dist", _cmd_dist, theta="required", help_text="full output distribution")
    add("clifford", _cmd_clifford, help_text="exact support at angle pi/4")
    mp = add("marginal", _cmd_marginal, theta="required", mask=True,
             help_text="marginal distribution of masked bits")
    mp.add_argument(
        "--path",
        choices=("auto", "generic", "pi8", "sparse", "graphic"),
        default="auto",
        help="family of marginal algorithm",
    )
    mp.add_argument("--sparse-bound", type=int, default=3, dest="sparse_bound")
    add("sample", _cmd_sample, theta="required", mask=True, samples=True,
        help_text="draw masked outputs")
    add("reduce", _cmd_reduce, theta="required",
        help_text="rewrite rows to weight at most d for dyadic angles")
    add("verify", _cmd_verify, theta="optional",
        help_text="cross-check this instance against the dense oracle")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except InputError as exc:
        _print_error(exc, 2)
        return 2
    except BudgetError as exc:
        _print_error(exc, 3)
        return 3
    except NumericalInconsistency as exc:
        _print_error(exc, 4)
        return 4


def _print_error(exc: SimulationError, code: int) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    line = getattr(exc, "line", None)
    if line is not None:
        payload["line"] = line
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
