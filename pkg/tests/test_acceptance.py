"""Acceptance criteria 1-11; each prints one PASS/FAIL line with its runtime."""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from multielim.checks import (
    check_basis,
    check_droprank,
    check_duality,
    check_elimination_ideal,
    check_jacobian,
    check_koszul,
    check_multiplication,
)
from multielim.elim import elimination_matrix, hybrid_matrix, macaulay_matrix, shape_only
from multielim.exactfield import PrimeField, QQ
from multielim.exactla import corank, det
from multielim.mpoly import GradedStructure, MultiPoly, PolySystem, random_poly, random_system
from multielim.oracle import IdealComponents
from multielim.regions import admissible_nu, critical_degree, gamma

P = PrimeField(2**31 - 1)
P2 = PrimeField(2**31 - 19)
D11 = (1, 1)


@pytest.fixture
def report(request, capsys):
    """Run the body, check its time budget and print one status line."""

    @contextmanager
    def run(number, name, budget):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            dt = time.perf_counter() - t0
            within = dt < budget
            status = "PASS" if ok and within else "FAIL"
            extra = "" if within else f", over budget {budget}s"
            with capsys.disabled():
                print(f"\n[criterion {number:2d}] {status} {name} ({dt:.2f}s{extra})")
        assert dt < budget, f"{name} took {dt:.2f}s, budget {budget}s"

    return run


def dixon_matrices(m, n, seed):
    s = GradedStructure(D11, ((m, n),) * 3)
    f = random_system(s, P, seed)
    out = [
        (macaulay_matrix(f, (2 * m - 1, 3 * n - 1)), 6 * m * n, 0),
        (macaulay_matrix(f, (3 * m - 1, 2 * n - 1)), 6 * m * n, 0),
        (hybrid_matrix(f, (2 * m - 1, 2 * n - 1)), 4 * m * n, m * n),
    ]
    for i in range(1, m):
        E = hybrid_matrix(f, (2 * m - 1 + i, 2 * n - 1))
        out.append((E, None, (m - i) * n))
    return out


DIXON_CASES = [(1, 1), (2, 1), (2, 2)]


@pytest.mark.parametrize("m,n", DIXON_CASES)
def test_criterion_01_dixon_sizes(report, m, n):
    with report(1, f"Dixon sizes (m,n)=({m},{n})", 1.0):
        for E, order, sylv in dixon_matrices(m, n, seed=m * 10 + n):
            rows, cols = E.shape
            assert rows == cols, f"nu={E.nu}: {E.shape} not square"
            if order is not None:
                assert rows == order
            assert E.n_sylvester == sylv


def test_criterion_02_dixon_nonvanishing(report):
    with report(2, "Dixon determinants nonzero over Z/(2^31-1)", 1.0):
        for m, n in DIXON_CASES:
            for E, _, _ in dixon_matrices(m, n, seed=m * 10 + n):
                assert E.shape[0] <= 24
                assert det(E.matrix) != 0, f"(m,n)=({m},{n}) nu={E.nu}"


def test_criterion_03_p2xp2_shapes(report):
    s = GradedStructure((2, 2), ((3, 3),) * 5)
    with report(3, "P2xP2 shapes", 0.1):
        rows, kos, syl = shape_only(s, (12, 12))
        assert (rows, kos + syl) == (8281, 15126)
        rows, kos, syl = shape_only(s, (10, 10))
        assert (rows, kos + syl) == (4356, 6516)


MULT_STRUCTURES = [((1, 1), ((2, 2),) * 3), ((2, 1), ((2, 2),) * 4)]


def test_criterion_04_multiplication(report):
    with report(4, "multiplication theorem", 30.0):
        for dims, degrees in MULT_STRUCTURES:
            res = check_multiplication(random_system(GradedStructure(dims, degrees), P, 1))
            assert res.passed, res.lines
            assert res.count > 1


def test_criterion_05_basis(report):
    with report(5, "basis theorem", 60.0):
        for dims, degrees in MULT_STRUCTURES:
            s = GradedStructure(dims, degrees)
            res = check_basis(random_system(s, P, 2))
            assert res.passed, res.lines
            hybrid = [nu for nu in _box(critical_degree(s)) if admissible_nu(s, nu).kind == "hybrid"]
            assert res.count == 2 * len(hybrid)


def _box(upper):
    return itertools.product(*(range(u + 1) for u in upper))


def test_criterion_06_duality(report):
    with report(6, "duality dimensions", 60.0):
        res = check_duality(random_system(GradedStructure(D11, ((2, 2),) * 3), P, 3))
        assert res.passed, res.lines
        assert res.count > 0


@pytest.mark.parametrize("degrees", [((1, 1),) * 3, ((2, 1),) * 3])
def test_criterion_07_jacobian(report, degrees):
    with report(7, f"Jacobian proportionality degrees {degrees[0]}", 10.0):
        res = check_jacobian(random_system(GradedStructure(D11, degrees), QQ, 4))
        assert res.passed, res.lines


DROPRANK = [
    ((1, 1), (1, 1), 0), ((1, 1), (1, 1), 1), ((1, 1), (1, 1), 2),
    ((1, 1), (2, 1), 0), ((1, 1), (2, 1), 1), ((1, 1), (2, 1), 2), ((1, 1), (2, 1), 3),
    ((1, 1, 1), (1, 1, 1), 0), ((1, 1, 1), (1, 1, 1), 1),
]


def test_criterion_08_drop_of_rank(report):
    with report(8, "drop-of-rank corank = kappa on two primes", 120.0):
        for dims, deg, kappa in DROPRANK:
            s = GradedStructure(dims, (deg,) * (sum(dims) + 1))
            res = check_droprank(s, kappa, [P, P2], seed=17 + kappa)
            assert res.passed, res.lines
            assert res.count >= 2 * 3


def test_criterion_09_koszul(report):
    s = GradedStructure(D11, ((1, 1),) * 3)
    with report(9, "Koszul syzygies outside Gamma_2", 30.0):
        assert (2, 2) not in gamma(s, 2)
        res = check_koszul(random_system(s, P, 5), upper=(4, 4))
        assert res.passed, res.lines
        assert res.count == sum(1 for mu in _box((4, 4)) if mu not in gamma(s, 2))


def planted_gcd_pair(g, da, db, seed):
    rng = random.Random(seed)
    common = random_poly((1,), (g,), QQ, rng) if g else MultiPoly((1,), QQ, {(0, 0): 1})
    a = random_poly((1,), (da - g,), QQ, rng)
    b = random_poly((1,), (db - g,), QQ, rng)
    s = GradedStructure((1,), ((da,), (db,)))
    return PolySystem(s, (common * a, common * b))


def test_criterion_10_single_block(report):
    with report(10, "r=1 gcd degree = corank", 5.0):
        for g in (0, 1, 2):
            for da, db in ((4, 3), (3, 3), (5, 2)):
                f = planted_gcd_pair(g, da, db, seed=g * 7 + da)
                (delta,) = critical_degree(f.structure)
                assert corank(macaulay_matrix(f, (delta + 1,)).matrix) == g
                for nu in range(delta - min(da, db) + 1, delta + 1):
                    H = hybrid_matrix(f, (nu,))
                    assert H.n_sylvester > 0
                    assert corank(H.matrix) == g, f"g={g} d=({da},{db}) nu={nu}"


def test_criterion_11_elimination_ideal(report):
    with report(11, "saturation equals ideal after dropping a form", 30.0):
        f = random_system(GradedStructure(D11, ((2, 2),) * 3), P, 6)
        res = check_elimination_ideal(f, upper=(6, 6))
        assert res.passed, res.lines
        assert res.count > 0
