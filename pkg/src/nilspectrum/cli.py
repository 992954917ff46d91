"""Command-line front end: compute, spectrum, verify, and oracle.

Exit codes: 0 success or pass, 1 verification counterexample, 2 usage or
input error.  Standard output stays machine-parseable; progress and
diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path

from .freelie import NotUnimodularError, induced_layer_matrix, normalize_bracket
from .intmat import (
    Matrix,
    coset_count_oracle,
    determinant,
    is_infinite,
    lattice_index,
)
from .magnus import layer_matrix_via_magnus
from .nilgroup import DegenerateLayerError, count_twisted_classes
from .reidemeister import (
    AutoSpec,
    GuardExceededError,
    UnsupportedPredictionError,
    abelian_witness,
    closed_form_failures,
    degree3_form_failures,
    det_identity_residuals,
    minor_matrix,
    reidemeister_number,
    spectrum_search,
    verify_r_infinity,
    witness_D,
    witness_F,
)

VERIFY_CHECKS = (
    "theorem1",
    "eq19",
    "eq20",
    "eq23",
    "eq24",
    "eq25",
    "eq28",
    "witnesses",
    "closed-forms",
)
ORACLES = ("index", "magnus", "heisenberg")


def _parse_matrix(text: str) -> Matrix:
    return Matrix.from_text(text)


def _progress(seen: int, total: int) -> None:
    print(f"checked {seen}/{total} candidates", file=sys.stderr)


def _random_unimodular(rng: random.Random, n: int, steps: int = 8) -> Matrix:
    grid = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-2, 2)
        for k in range(n):
            grid[i][k] += c * grid[j][k]
    if rng.random() < 0.5:
        grid[0] = [-e for e in grid[0]]
    return Matrix(tuple(tuple(row) for row in grid))


def cmd_compute(args) -> int:
    a = _parse_matrix(args.matrix)
    result = reidemeister_number(AutoSpec(args.rank, args.nil_class, a))
    print(json.dumps(result.to_dict(), indent=2))
    return 0


def cmd_spectrum(args) -> int:
    report = spectrum_search(
        args.rank,
        args.nil_class,
        args.bound,
        det_filter=args.det,
        predict=not args.no_predict,
        progress=_progress,
    )
    if args.format == "json":
        payload = json.dumps(report.to_dict(), indent=2)
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(["value", "witness"])
        for value, witness in report.attained.items():
            writer.writerow([value, witness.to_text()])
        payload = buffer.getvalue().rstrip("\n")
    if args.out:
        out = Path(args.out)
        out.write_text(payload + "\n")
        print(f"wrote {out}", file=sys.stderr)
        if not args.no_plot:
            from .plots import render_spectrum_figure

            figure = out.with_suffix(".png")
            render_spectrum_figure(report, figure)
            print(f"wrote {figure}", file=sys.stderr)
    else:
        print(payload)
    if report.violations:
        print(
            f"prediction violated by values {list(report.violations)}",
            file=sys.stderr,
        )
        return 1
    return 0


def _failures_to_lines(failures, limit: int = 5):
    lines = []
    for item in failures[:limit]:
        lines.append(f"  counterexample: {item}")
    if len(failures) > limit:
        lines.append(f"  ... and {len(failures) - limit} more")
    return lines


def _check_theorem1(args):
    bound = args.bound if args.bound is not None else 3
    report = verify_r_infinity(bound)
    detail = (
        f"{report.det_plus_count} matrices with det +1, "
        f"{report.det_minus_count} with det -1, all infinite"
    )
    return list(report.failures), detail


def _check_eq19(args):
    bound = args.bound if args.bound is not None else 3
    failures = [f for f in degree3_form_failures(bound) if f[1] == "form"]
    return failures, f"degree-3 layer equals det * a up to entry bound {bound}"


def _check_eq20(args):
    bound = args.bound if args.bound is not None else 3
    failures = [f for f in degree3_form_failures(bound) if f[1] == "shift"]
    return (
        failures,
        f"shifted determinant equals the trace on det -1, bound {bound}",
    )


def _check_eq23(args):
    failures = []
    import itertools

    for t in itertools.product(range(-1, 2), repeat=9):
        det = (
            t[0] * (t[4] * t[8] - t[5] * t[7])
            - t[1] * (t[3] * t[8] - t[5] * t[6])
            + t[2] * (t[3] * t[7] - t[4] * t[6])
        )
        if det != 1 and det != -1:
            continue
        a = Matrix((t[0:3], t[3:6], t[6:9]))
        if minor_matrix(a) != induced_layer_matrix(a, 2):
            failures.append((a, "minor matrix is not the degree-2 layer"))
    rng = random.Random(args.seed)
    for _ in range(args.samples):
        a = _random_unimodular(rng, 3)
        if minor_matrix(a) != induced_layer_matrix(a, 2):
            failures.append((a, "minor matrix is not the degree-2 layer"))
    return failures, f"exhaustive bound 1 plus {args.samples} random matrices"


def _residual_check(args, index: int):
    rng = random.Random(args.seed)
    failures = []
    for _ in range(args.samples):
        a = Matrix(
            tuple(tuple(rng.randint(-9, 9) for _ in range(3)) for _ in range(3))
        )
        residuals = det_identity_residuals(a)
        if residuals[index] != 0:
            failures.append((a, f"residual {residuals[index]}"))
    return failures, f"{args.samples} samples, residuals all zero"


def _check_eq24(args):
    return _residual_check(args, 0)


def _check_eq25(args):
    return _residual_check(args, 1)


def _check_eq28(args):
    failures = []
    for g in ("x", "y"):
        for f in ("x", "y"):
            for h1 in ("x", "y"):
                for h2 in ("x", "y"):
                    left = normalize_bracket(f"[[[{g},{f}],{h1}],{h2}]", 2, 4)
                    right = normalize_bracket(f"[[[{g},{f}],{h2}],{h1}]", 2, 4)
                    if left.coords != right.coords:
                        failures.append(((g, f, h1, h2), "bracket swap differs"))
    return failures, "weight-4 bracket arguments commute in the last two slots"


def _check_witnesses(args):
    n_max = args.n_max
    failures = []
    for n in range(1, n_max + 1):
        d_value = reidemeister_number(AutoSpec(3, 2, witness_D(n))).r_value
        if d_value != 2 * n - 1:
            failures.append((f"D[{n}]", d_value))
        f_value = reidemeister_number(AutoSpec(3, 2, witness_F(n))).r_value
        if f_value != 4 * n:
            failures.append((f"F[{n}]", f_value))
    for r in range(2, 7):
        for k in range(1, n_max + 1):
            w = abelian_witness(r, k)
            got = lattice_index(w - Matrix.identity(r))
            if got != k:
                failures.append((f"A({r},{k})", got))
    return failures, f"D: 2n-1, F: 4n, A(r,k): k for n, k up to {n_max}"


def _check_closed_forms(args):
    bound = args.bound if args.bound is not None else 5
    failures = closed_form_failures(bound)
    return failures, f"2|tr| and 2 tr^2 closed forms up to entry bound {bound}"


CHECK_RUNNERS = {
    "theorem1": _check_theorem1,
    "eq19": _check_eq19,
    "eq20": _check_eq20,
    "eq23": _check_eq23,
    "eq24": _check_eq24,
    "eq25": _check_eq25,
    "eq28": _check_eq28,
    "witnesses": _check_witnesses,
    "closed-forms": _check_closed_forms,
}


def cmd_verify(args) -> int:
    failures, detail = CHECK_RUNNERS[args.check](args)
    if failures:
        print(f"{args.check}: FAIL ({detail})")
        for line in _failures_to_lines(failures):
            print(line)
        return 1
    print(f"{args.check}: pass ({detail})")
    return 0


def _oracle_index(args) -> int:
    mismatches = []
    if args.matrix:
        m = _parse_matrix(args.matrix)
        pairs = [m]
    else:
        rng = random.Random(args.seed)
        pairs = []
        while len(pairs) < args.samples:
            n = rng.choice((1, 2, 3))
            m = Matrix(
                tuple(
                    tuple(rng.randint(-6, 6) for _ in range(n)) for _ in range(n)
                )
            )
            det = determinant(m)
            if det == 0 or abs(det) > 64:
                continue
            pairs.append(m)
    for m in pairs:
        counted = coset_count_oracle(m)
        direct = lattice_index(m)
        if counted != direct:
            mismatches.append((m, counted, direct))
        elif args.matrix:
            print(f"index {direct} agrees with the counted value")
    if mismatches:
        for m, counted, direct in mismatches[:5]:
            print(f"mismatch on {m.to_text()}: counted {counted}, direct {direct}")
        return 1
    if not args.matrix:
        print(f"index oracle: {len(pairs)} matrices agree")
    return 0


def _oracle_magnus(args) -> int:
    degree = args.nil_class if args.nil_class else 2
    if args.matrix:
        candidates = [_parse_matrix(args.matrix)]
    else:
        import itertools

        rank = args.rank if args.rank else 2
        bound = args.bound if args.bound else 1
        n = rank * rank
        candidates = []
        for t in itertools.product(range(-bound, bound + 1), repeat=n):
            rows = tuple(t[i * rank : (i + 1) * rank] for i in range(rank))
            m = Matrix(rows)
            if abs(determinant(m)) == 1:
                candidates.append(m)
    mismatches = []
    for i, m in enumerate(candidates):
        if i and i % 500 == 0:
            print(f"compared {i}/{len(candidates)}", file=sys.stderr)
        if layer_matrix_via_magnus(m, degree) != induced_layer_matrix(m, degree):
            mismatches.append(m)
    if mismatches:
        for m in mismatches[:5]:
            print(f"mismatch on {m.to_text()}")
        return 1
    print(f"magnus oracle: {len(candidates)} matrices agree at degree {degree}")
    return 0


def _oracle_heisenberg(args) -> int:
    if args.matrix:
        candidates = [_parse_matrix(args.matrix)]
    else:
        rng = random.Random(args.seed)
        candidates = []
        while len(candidates) < args.samples:
            m = Matrix(
                tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
            )
            if determinant(m) != -1 or m.trace() == 0 or abs(m.trace()) > 6:
                continue
            candidates.append(m)
    mismatches = []
    for m in candidates:
        counted = count_twisted_classes(m)
        product = reidemeister_number(AutoSpec(2, 2, m)).r_value
        if is_infinite(product) or counted != product:
            mismatches.append((m, counted, product))
        elif args.matrix:
            print(f"both sides {counted}, pass")
    if mismatches:
        for m, counted, product in mismatches[:5]:
            print(
                f"mismatch on {m.to_text()}: counted {counted}, product {product}"
            )
        return 1
    if not args.matrix:
        print(f"heisenberg oracle: {len(candidates)} matrices agree")
    return 0


ORACLE_RUNNERS = {
    "index": _oracle_index,
    "magnus": _oracle_magnus,
    "heisenberg": _oracle_heisenberg,
}


def cmd_oracle(args) -> int:
    return ORACLE_RUNNERS[args.oracle](args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilspectrum",
        description="Reidemeister numbers and spectra of free nilpotent groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="Reidemeister number of one matrix")
    compute.add_argument("--rank", type=int, required=True)
    compute.add_argument("--class", dest="nil_class", type=int, required=True)
    compute.add_argument("--matrix", required=True, help="rows ';', entries ','")
    compute.set_defaults(func=cmd_compute)

    spectrum = sub.add_parser("spectrum", help="attained values over bounded entries")
    spectrum.add_argument("--rank", type=int, required=True)
    spectrum.add_argument("--class", dest="nil_class", type=int, required=True)
    spectrum.add_argument("--bound", type=int, required=True)
    spectrum.add_argument("--det", type=int, choices=(1, -1))
    spectrum.add_argument("--format", choices=("csv", "json"), default="csv")
    spectrum.add_argument("--out", help="write the report here, figure alongside")
    spectrum.add_argument("--no-plot", action="store_true")
    spectrum.add_argument(
        "--no-predict", action="store_true", help="skip membership predictions"
    )
    spectrum.set_defaults(func=cmd_spectrum)

    verify = sub.add_parser("verify", help="run one invariant suite")
    verify.add_argument("check", choices=VERIFY_CHECKS)
    verify.add_argument("--bound", type=int, default=None)
    verify.add_argument("--samples", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--n-max", dest="n_max", type=int, default=20)
    verify.set_defaults(func=cmd_verify)

    oracle = sub.add_parser("oracle", help="compare independent computations")
    oracle.add_argument("oracle", choices=ORACLES)
    oracle.add_argument("--matrix")
    oracle.add_argument("--samples", type=int, default=100)
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--rank", type=int)
    oracle.add_argument("--class", dest="nil_class", type=int)
    oracle.add_argument("--bound", type=int)
    oracle.set_defaults(func=cmd_oracle)

    return parser


def _absorb_matrix_values(argv):
    # lets --matrix accept values with a leading minus sign
    merged = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token == "--matrix" and i + 1 < len(argv):
            merged.append(f"--matrix={argv[i + 1]}")
            i += 2
            continue
        merged.append(token)
        i += 1
    return merged


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_absorb_matrix_values(list(argv)))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (
        NotUnimodularError,
        DegenerateLayerError,
        UnsupportedPredictionError,
        GuardExceededError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
