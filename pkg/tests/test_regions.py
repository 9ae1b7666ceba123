from itertools import combinations, product

from hypothesis import given, settings, strategies as st

from multielim.mpoly import GradedStructure
from multielim.regions import (
    DegreeRegion,
    SignedOrthant,
    admissible_nu,
    critical_degree,
    drop_of_rank_region,
    gamma,
    q_alpha,
)


def dixon(m, n):
    return GradedStructure((1, 1), ((m, n),) * 3)


P2P2 = GradedStructure((2, 2), ((3, 3),) * 5)


def orthants(region):
    return {(o.base, o.signs) for o in region.orthants}


def test_critical_degree_examples():
    assert critical_degree(dixon(2, 2)) == (4, 4)
    assert critical_degree(dixon(3, 1)) == (7, 1)
    assert critical_degree(P2P2) == (12, 12)
    assert critical_degree(GradedStructure((1,), ((1,), (1,)))) == (0,)


def test_q_alpha_examples():
    s = dixon(1, 1)
    assert orthants(q_alpha(s, {1, 2})) == {((-2, -2), (-1, -1))}
    assert orthants(q_alpha(s, {1})) == {((-2, 0), (-1, 1))}
    assert q_alpha(s, set()).is_empty()


def test_dixon_gamma1():
    for m, n in ((1, 1), (2, 1), (2, 3)):
        g1 = gamma(dixon(m, n), 1)
        assert orthants(g1) == {((2 * m - 2, 2 * n), (-1, 1)), ((2 * m, 2 * n - 2), (1, -1))}


def test_p2p2_gamma0():
    assert orthants(gamma(P2P2, 0)) == {((3, 6), (-1, 1)), ((6, 3), (1, -1))}


def test_single_factor_has_empty_gammas():
    s = GradedStructure((1,), ((2,), (3,)))
    assert all(gamma(s, i).is_empty() for i in (0, 1, 2))


def test_admissible_examples():
    assert admissible_nu(dixon(1, 1), (1, 2)).kind == "macaulay"
    c = admissible_nu(dixon(1, 1), (1, 1))
    assert c.kind == "hybrid" and c.mu == (0, 0)
    c = admissible_nu(P2P2, (10, 10))
    assert c.kind == "hybrid" and c.mu == (2, 2)
    assert admissible_nu(P2P2, (9, 12)).kind == "inadmissible"
    assert admissible_nu(dixon(1, 1), (0, 2)).kind == "inadmissible"  # in Gamma_1
    assert admissible_nu(dixon(1, 1), (-1, 5)).kind == "inadmissible"


def test_top_cohomology_support():
    # Q of the full set is -(n+1) - N^r
    s = GradedStructure((1, 2), ((1, 1),) * 4)
    region = q_alpha(s, {1, 2})
    for mu in product(range(-6, 3), repeat=2):
        assert (mu in region) == (mu[0] <= -2 and mu[1] <= -3)


structures = st.builds(
    lambda dims, data: GradedStructure(
        dims, tuple(tuple(data.draw(st.integers(1, 3)) for _ in dims) for _ in range(sum(dims) + 1))
    ),
    st.lists(st.integers(1, 2), min_size=1, max_size=3),
    st.data(),
)


def brute_gamma(s, i, mu):
    r = len(s.dims)
    for size in range(1, r):
        for alpha in combinations(range(r), size):
            k = sum(s.dims[j] for j in alpha) + i
            for lam in combinations(range(len(s.degrees)), k):
                shift = [sum(s.degrees[t][j] for t in lam) for j in range(r)]
                inside = True
                for j in range(r):
                    if j in alpha:
                        inside &= mu[j] - shift[j] <= -(s.dims[j] + 1)
                    else:
                        inside &= mu[j] - shift[j] >= 0
                if inside:
                    return True
    return False


@given(structures)
@settings(max_examples=30, deadline=None)
def test_delta_outside_gamma0_gamma1(s):
    delta = critical_degree(s)
    assert delta not in gamma(s, 0)
    assert delta not in gamma(s, 1)


@given(structures)
@settings(max_examples=20, deadline=None)
def test_membership_matches_definition(s):
    delta = critical_degree(s)
    lo = [-3] * s.r
    hi = [d + 3 for d in delta]
    window = list(product(*(range(a, b + 1) for a, b in zip(lo, hi))))
    for i in (0, 1, 2):
        g = gamma(s, i)
        for mu in window[:400]:
            assert (mu in g) == brute_gamma(s, i, mu)


@given(structures)
@settings(max_examples=20, deadline=None)
def test_drop_of_rank_disjoint_from_gammas(s):
    base = drop_of_rank_region(s).orthants[0].base
    bad = gamma(s, 0) | gamma(s, 1)
    for e in product(range(4), repeat=s.r):
        nu = tuple(b + x for b, x in zip(base, e))
        assert nu not in bad
        assert admissible_nu(s, nu).admissible


def test_pruning_keeps_semantics():
    a = SignedOrthant((0, 0), (1, 1))
    b = SignedOrthant((1, 2), (1, 1))
    c = SignedOrthant((5, 5), (-1, 1))
    region = DegreeRegion.union_of([a, b, c, a])
    assert len(region) == 2
    for mu in product(range(-2, 7), repeat=2):
        assert (mu in region) == (mu in a or mu in b or mu in c)
