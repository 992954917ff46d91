"""Acceptance suite: one test and one printed pass/fail line per criterion.

Run with -s to see the lines.  Every check is exact integer arithmetic; the
timed criteria assert their stated budgets.
"""

import itertools
import json
import random
import time

from nilspectrum.cli import main
from nilspectrum.freelie import induced_layer_matrix, normalize_bracket
from nilspectrum.intmat import (
    Matrix,
    coset_count_oracle,
    determinant,
    is_infinite,
    lattice_index,
)
from nilspectrum.magnus import layer_matrix_via_magnus
from nilspectrum.nilgroup import count_twisted_classes
from nilspectrum.reidemeister import (
    AutoSpec,
    abelian_witness,
    det_identity_residuals,
    reidemeister_number,
    spectrum_search,
    verify_r_infinity,
    witness_D,
    witness_F,
)


def report(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"{status} criterion {number}: {detail}")
    assert ok, f"criterion {number}: {detail}"


def cli_r_value(capsys, rank, nil_class, matrix_text):
    code = main(
        [
            "compute",
            "--rank",
            str(rank),
            "--class",
            str(nil_class),
            "--matrix",
            matrix_text,
        ]
    )
    out = capsys.readouterr().out
    assert code == 0
    return json.loads(out)["R"]


def test_criterion_01_class2_closed_form(capsys):
    start = time.perf_counter()
    ok = True
    for k in range(1, 21):
        if cli_r_value(capsys, 2, 2, f"{k},1;1,0") != 2 * k:
            ok = False
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    with capsys.disabled():
        report(1, ok, f"companion family gives 2k at class 2 ({elapsed:.2f} s)")


def test_criterion_02_class3_closed_form(capsys):
    start = time.perf_counter()
    ok = True
    for k in range(1, 21):
        if cli_r_value(capsys, 2, 3, f"{k},1;1,0") != 2 * k * k:
            ok = False
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    with capsys.disabled():
        report(2, ok, f"companion family gives 2k^2 at class 3 ({elapsed:.2f} s)")


def test_criterion_03_class4_always_infinite():
    start = time.perf_counter()
    result = verify_r_infinity(3)
    elapsed = time.perf_counter() - start
    ok = result.passed and elapsed < 10.0
    total = result.det_plus_count + result.det_minus_count
    report(
        3,
        ok,
        f"all {total} unimodular matrices with entries in [-3,3] give "
        f"infinite class-4 values ({elapsed:.2f} s)",
    )


def test_criterion_04_abelian_witnesses():
    start = time.perf_counter()
    ok = True
    for r in range(2, 7):
        for k in range(1, 51):
            w = abelian_witness(r, k)
            if lattice_index(w - Matrix.identity(r)) != k:
                ok = False
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 5.0
    report(4, ok, f"index witnesses hit every k up to 50 ({elapsed:.2f} s)")


def test_criterion_05_rank3_witnesses():
    ok = True
    for n in range(1, 21):
        d = reidemeister_number(AutoSpec(3, 2, witness_D(n))).r_value
        f = reidemeister_number(AutoSpec(3, 2, witness_F(n))).r_value
        if d != 2 * n - 1 or f != 4 * n:
            ok = False
    report(5, ok, "witness families realize 2n-1 and 4n for n up to 20")


def test_criterion_06_parity_exclusion():
    start = time.perf_counter()
    found = spectrum_search(3, 2, 2)
    elapsed = time.perf_counter() - start
    ok = found.violations == ()
    for value, witness in found.attained.items():
        if value % 4 == 2:
            ok = False
        if reidemeister_number(AutoSpec(3, 2, witness)).r_value != value:
            ok = False
    report(
        6,
        ok,
        f"search at bound 2 attains {len(found.attained)} values, "
        f"none of form 4l+2, witnesses recompute ({elapsed:.1f} s)",
    )


def test_criterion_07_determinant_identities():
    rng = random.Random(2024)
    ok = True
    for _ in range(10000):
        a = Matrix(
            tuple(tuple(rng.randint(-9, 9) for _ in range(3)) for _ in range(3))
        )
        if det_identity_residuals(a) != (0, 0):
            ok = False
    report(7, ok, "both determinant identities vanish on 10^4 random matrices")


def test_criterion_08_oracle_equivalences():
    start = time.perf_counter()
    ok = True
    # (a) cosets counted by closure vs determinant
    rng = random.Random(99)
    checked = 0
    while checked < 500:
        n = rng.choice((1, 2, 3))
        m = Matrix(
            tuple(tuple(rng.randint(-6, 6) for _ in range(n)) for _ in range(n))
        )
        det = determinant(m)
        if det == 0 or abs(det) > 64:
            continue
        checked += 1
        if coset_count_oracle(m) != lattice_index(m):
            ok = False
    # (b) power-series route vs functor route, exhaustively
    for t in itertools.product(range(-2, 3), repeat=4):
        if abs(t[0] * t[3] - t[1] * t[2]) != 1:
            continue
        a = Matrix((t[0:2], t[2:4]))
        for d in (2, 3, 4):
            if layer_matrix_via_magnus(a, d) != induced_layer_matrix(a, d):
                ok = False
    for t in itertools.product(range(-2, 3), repeat=9):
        det = (
            t[0] * (t[4] * t[8] - t[5] * t[7])
            - t[1] * (t[3] * t[8] - t[5] * t[6])
            + t[2] * (t[3] * t[7] - t[4] * t[6])
        )
        if det != 1 and det != -1:
            continue
        a = Matrix((t[0:3], t[3:6], t[6:9]))
        if layer_matrix_via_magnus(a, 2) != induced_layer_matrix(a, 2):
            ok = False
    # (c) group-theoretic class counting vs the layer product
    companions = [Matrix(((k, 1), (1, 0))) for k in range(1, 7)]
    rng = random.Random(100)
    extras = []
    while len(extras) < 50:
        m = Matrix(
            tuple(tuple(rng.randint(-3, 3) for _ in range(2)) for _ in range(2))
        )
        if determinant(m) != -1 or m.trace() == 0 or abs(m.trace()) > 6:
            continue
        extras.append(m)
    for m in companions + extras:
        counted = count_twisted_classes(m)
        product = reidemeister_number(AutoSpec(2, 2, m)).r_value
        if is_infinite(product) or counted != product:
            ok = False
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 60.0
    report(
        8,
        ok,
        f"independent oracles agree: cosets, power series, group classes "
        f"({elapsed:.1f} s)",
    )


def test_criterion_09_degree3_goldens():
    ok = True
    for t in itertools.product(range(-3, 4), repeat=4):
        det = t[0] * t[3] - t[1] * t[2]
        if det != 1 and det != -1:
            continue
        a = Matrix((t[0:2], t[2:4]))
        layer = induced_layer_matrix(a, 3)
        if layer != det * a:
            ok = False
        if det == -1 and determinant(layer - Matrix.identity(2)) != a.trace():
            ok = False
    report(9, ok, "degree-3 layer equals det * a, shifted determinant is the trace")


def test_criterion_10_bracket_identity():
    left = normalize_bracket("[[[x,y],y],x]", 2, 4)
    right = normalize_bracket("[[[x,y],x],y]", 2, 4)
    ok = left.coords == right.coords and any(left.coords)
    report(10, ok, "the two weight-4 bracket arrangements normalize identically")
