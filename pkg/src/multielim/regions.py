"""Degree regions in Z^r: the critical degree, cohomology supports and Gamma sets.

A region is a finite union of signed orthants ``base + (s_1 N, ..., s_r N)``
with ``s_j`` in {+1, -1}.  Membership is exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .mpoly import GradedStructure, MultiDegree


@dataclass(frozen=True)
class SignedOrthant:
    base: MultiDegree
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(int(b) for b in self.base))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.base) != len(self.signs) or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad orthant {self.base} / {self.signs}")

    def __contains__(self, mu: Sequence[int]) -> bool:
        return all(s * (m - b) >= 0 for m, b, s in zip(mu, self.base, self.signs))

    def absorbs(self, other: "SignedOrthant") -> bool:
        return self.signs == other.signs and other.base in self

    def translate(self, shift: Sequence[int]) -> "SignedOrthant":
        return SignedOrthant(tuple(b + s for b, s in zip(self.base, shift)), self.signs)

    def __str__(self):
        cone = ",".join("N" if s > 0 else "-N" for s in self.signs)
        return f"{self.base}+({cone})"


@dataclass(frozen=True)
class DegreeRegion:
    orthants: tuple[SignedOrthant, ...] = field(default=())

    @classmethod
    def union_of(cls, orthants: Iterable[SignedOrthant]) -> "DegreeRegion":
        """Union with duplicate and absorbed orthants pruned."""
        kept: list[SignedOrthant] = []
        for o in sorted(set(orthants), key=lambda o: (o.signs, o.base)):
            if any(k.absorbs(o) for k in kept):
                continue
            kept = [k for k in kept if not o.absorbs(k)]
            kept.append(o)
        return cls(tuple(sorted(kept, key=lambda o: (o.signs, o.base))))

    def __contains__(self, mu: Sequence[int]) -> bool:
        return any(mu in o for o in self.orthants)

    def contains(self, mu: Sequence[int]) -> bool:
        return mu in self

    def __or__(self, other: "DegreeRegion") -> "DegreeRegion":
        return DegreeRegion.union_of(self.orthants + other.orthants)

    def is_empty(self) -> bool:
        return not self.orthants

    def __len__(self):
        return len(self.orthants)

    def __str__(self):
        return " U ".join(str(o) for o in self.orthants) if self.orthants else "{}"


def critical_degree(s: GradedStructure) -> MultiDegree:
    """``delta_j = sum_i d_{i,j} - (n_j + 1)``."""
    return tuple(sum(d[j] for d in s.degrees) - (nj + 1) for j, nj in enumerate(s.dims))


def _q_alpha(dims: Sequence[int], alpha: Iterable[int]) -> DegreeRegion:
    alpha = set(alpha)
    if not alpha:
        return DegreeRegion()
    if not alpha <= set(range(1, len(dims) + 1)):
        raise ValueError(f"alpha {sorted(alpha)} is not a subset of 1..{len(dims)}")
    base = tuple(-(nj + 1) if j in alpha else 0 for j, nj in enumerate(dims, start=1))
    signs = tuple(-1 if j in alpha else 1 for j in range(1, len(dims) + 1))
    return DegreeRegion((SignedOrthant(base, signs),))


def q_alpha(s: GradedStructure, alpha: Iterable[int]) -> DegreeRegion:
    """Support of the local cohomology summand indexed by ``alpha`` (1-based blocks)."""
    return _q_alpha(s.dims, alpha)


def gamma_region(dims: Sequence[int], degrees: Sequence[Sequence[int]], i: int) -> DegreeRegion:
    """Gamma_i for an arbitrary list of forms (used for square and undersized systems)."""
    if i not in (0, 1, 2):
        raise ValueError(f"i must be 0, 1 or 2, got {i}")
    r = len(dims)
    orthants = []
    for size in range(1, r):
        for alpha in combinations(range(1, r + 1), size):
            q = _q_alpha(dims, alpha).orthants[0]
            k = sum(dims[j - 1] for j in alpha) + i
            if k > len(degrees):
                continue
            shifts = {
                tuple(sum(degrees[t][j] for t in lam) for j in range(r))
                for lam in combinations(range(len(degrees)), k)
            }
            orthants.extend(q.translate(sh) for sh in shifts)
    return DegreeRegion.union_of(orthants)


def gamma(s: GradedStructure, i: int) -> DegreeRegion:
    return gamma_region(s.dims, s.degrees, i)


def drop_of_rank_base(s: GradedStructure) -> MultiDegree:
    """Smallest degree of the drop-of-rank region ``delta - (min d - 1) + N^r``."""
    delta = critical_degree(s)
    return tuple(dl - (m - 1) for dl, m in zip(delta, s.min_degrees))


def drop_of_rank_region(s: GradedStructure) -> DegreeRegion:
    base = drop_of_rank_base(s)
    return DegreeRegion((SignedOrthant(base, (1,) * s.r),))


@dataclass(frozen=True)
class NuClass:
    """Classification of a degree for building elimination matrices.

    ``kind`` is ``"macaulay"``, ``"hybrid"`` or ``"inadmissible"``; ``mu`` is
    the witness ``delta - nu`` for hybrid degrees.
    """

    nu: MultiDegree
    kind: str
    mu: MultiDegree | None
    drop_of_rank: bool
    reason: str = ""

    @property
    def admissible(self) -> bool:
        return self.kind != "inadmissible"


def admissible_nu(s: GradedStructure, nu: Sequence[int]) -> NuClass:
    nu = tuple(int(v) for v in nu)
    if len(nu) != s.r:
        raise ValueError(f"degree {nu} has {len(nu)} entries, expected {s.r}")
    delta = critical_degree(s)
    drop = nu in drop_of_rank_region(s)
    if any(v < 0 for v in nu):
        return NuClass(nu, "inadmissible", None, drop, "nu has a negative entry")
    mins = s.min_degrees
    below_delta = all(v <= d for v, d in zip(nu, delta))
    if below_delta:
        mu = tuple(d - v for v, d in zip(nu, delta))
        bad = [j + 1 for j in range(s.r) if mu[j] >= mins[j]]
        if not bad:
            return NuClass(nu, "hybrid", mu, drop)
        return NuClass(nu, "inadmissible", None, drop,
                       f"nu <= delta but delta_j - nu_j >= min_i d_ij for j in {bad}")
    for i in (0, 1):
        if nu in gamma(s, i):
            return NuClass(nu, "inadmissible", None, drop, f"nu lies in Gamma_{i}")
    return NuClass(nu, "macaulay", None, drop)
