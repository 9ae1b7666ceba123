import random

import pytest

from multielim.elim import (
    InadmissibleDegreeError,
    NotZeroDimensionalError,
    count_roots,
    elimination_matrix,
    hybrid_matrix,
    macaulay_matrix,
    shape_only,
)
from multielim.exactfield import PrimeField, QQ
from multielim.exactla import ExactMatrix, det, rank
from multielim.mpoly import GradedStructure, MultiPoly, PolySystem, random_poly, random_system
from multielim.oracle import random_points, system_through_points
from multielim.regions import critical_degree, drop_of_rank_base

P = PrimeField(2**31 - 1)
P2 = PrimeField(2**31 - 19)
DIXON = GradedStructure((1, 1), ((1, 1),) * 3)


def test_dixon_small_shapes():
    M = macaulay_matrix(random_system(DIXON, P, 3), (1, 2))
    assert M.shape == (6, 6) and M.n_sylvester == 0
    H = hybrid_matrix(random_system(DIXON, P, 3), (1, 1))
    assert H.shape == (4, 4) and H.n_sylvester == 1 and H.n_koszul == 3


@pytest.mark.parametrize("field,value", [(P, 1605152989), (P2, 1600658975)])
def test_frozen_dixon_determinants(field, value):
    # values computed with two independent elimination routes and then frozen
    f = random_system(DIXON, field, 3)
    M = macaulay_matrix(f, (1, 2)).matrix
    H = hybrid_matrix(f, (1, 1)).matrix
    for A in (M, H):
        assert det(A) == value
        assert det(A, "numpy") == value


def test_generic_koszul_kernel():
    f = random_system(DIXON, P, 1)
    M = macaulay_matrix(f, (2, 2))
    assert M.shape == (9, 12)
    assert M.rank() == 9
    assert M.shape[1] - M.rank() == 3
    assert macaulay_matrix(f, (1, 2)).corank() == 0


def test_column_tags_and_rows():
    f = random_system(DIXON, P, 2)
    M = macaulay_matrix(f, (1, 2))
    assert [t[0] for t in M.koszul_tags] == [0, 0, 1, 1, 2, 2]
    # each column is the tagged multiple of its form
    for (i, m), col in zip(M.koszul_tags, M.columns):
        g = f[i].mul_monomial(m)
        assert g.coefficient_vector((1, 2)) == col


def classical_sylvester(a, b):
    """Sylvester matrix from coefficient lists (highest power first)."""
    da, db = len(a) - 1, len(b) - 1
    n = da + db
    rows = []
    for k in range(db):
        rows.append([0] * k + a + [0] * (n - da - 1 - k))
    for k in range(da):
        rows.append([0] * k + b + [0] * (n - db - 1 - k))
    return rows


def test_single_block_matches_classical_sylvester():
    rng = random.Random(5)
    for da, db in ((2, 1), (3, 2), (4, 4)):
        a = [rng.randint(-9, 9) or 1 for _ in range(da + 1)]
        b = [rng.randint(-9, 9) or 1 for _ in range(db + 1)]
        F = MultiPoly((1,), QQ, {(da - k, k): c for k, c in enumerate(a)})
        G = MultiPoly((1,), QQ, {(db - k, k): c for k, c in enumerate(b)})
        s = GradedStructure((1,), ((da,), (db,)))
        f = PolySystem(s, (F, G))
        nu = (critical_degree(s)[0] + 1,)
        M = macaulay_matrix(f, nu)
        S = ExactMatrix.from_rows(classical_sylvester(a, b), QQ)
        assert M.shape == S.shape
        assert det(M.matrix) in (det(S), -det(S))


def test_hybrid_degree_errors():
    f = random_system(DIXON, P, 1)
    with pytest.raises(InadmissibleDegreeError, match="hybrid"):
        hybrid_matrix(f, (2, 1))
    with pytest.raises(InadmissibleDegreeError):
        macaulay_matrix(f, (1, 1, 1))
    assert elimination_matrix(f, (1, 1)).n_sylvester == 1
    assert elimination_matrix(f, (2, 1)).n_sylvester == 0


def test_shape_only_matches_built_matrix():
    s = GradedStructure((2, 1), ((1, 2),) * 4)
    f = random_system(s, P, 0)
    for nu in ((1, 5), (2, 3), (1, 4), (3, 4)):
        E = elimination_matrix(f, nu)
        rows, kos, syl = shape_only(s, nu)
        assert (rows, kos + syl) == E.shape and syl == E.n_sylvester


@pytest.mark.parametrize("kappa", [0, 1, 2])
def test_count_roots_planted(kappa):
    s = GradedStructure((1, 1), ((1, 1),) * 3)
    pts = random_points(s, kappa, P, 4)
    f = system_through_points(s, pts, P, 5)
    assert count_roots(f) == kappa
    assert count_roots(f, tuple(b + 1 for b in drop_of_rank_base(s))) == kappa


def test_count_roots_rejects_curve():
    # every form shares the factor x_{1,0}, so the zero set contains a whole line
    s = GradedStructure((1, 1), ((2, 1),) * 3)
    rng = random.Random(0)
    x10 = MultiPoly.variable((1, 1), P, 1, 0)
    polys = tuple(x10 * random_poly((1, 1), (1, 1), P, rng) for _ in range(3))
    with pytest.raises(NotZeroDimensionalError):
        count_roots(PolySystem(s, polys))


def test_count_roots_outside_region():
    f = random_system(DIXON, P, 1)
    with pytest.raises(InadmissibleDegreeError):
        count_roots(f, (0, 0))
