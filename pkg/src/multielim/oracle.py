"""Independent checks by brute-force linear algebra.

Everything here works on a plain list of forms, so systems with fewer than
``n + 1`` polynomials are allowed.  Graded pieces of the saturation
``I^sat = (I : b^inf)`` are found through a single monomial: ``p`` of degree
``mu`` is taken to be in ``I^sat`` when ``sigma^N p`` lies in ``I`` at degree
``mu + N(1, ..., 1)``, with ``sigma = x_{1,0} x_{2,0} ... x_{r,0}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .elim import NotZeroDimensionalError, count_roots, koszul_columns
from .exactfield import Field
from .exactla import ColumnSpace, ExactMatrix, kernel_basis, rank
from .mpoly import (
    Exponent,
    GradedStructure,
    MultiDegree,
    MultiPoly,
    PolySystem,
    basis_size,
    block_offsets,
    monomial_basis,
    monomial_index,
)


class OracleError(RuntimeError):
    pass


@dataclass(frozen=True)
class SaturationComponent:
    """A basis of ``I^sat_mu`` as coefficient vectors in ``monomial_basis(mu)``."""

    mu: MultiDegree
    basis: tuple[tuple, ...]
    exponent_used: int
    ideal_dim: int
    spot_check: bool

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def quotient_dim(self) -> int:
        """``dim (I^sat / I)_mu``."""
        return self.dim - self.ideal_dim


class IdealComponents:
    """Graded pieces of ``I = (F_0, ..., F_k)`` with cached membership oracles."""

    def __init__(self, dims: Sequence[int], polys: Sequence[MultiPoly], degrees=None, method=None):
        self.dims = tuple(dims)
        self.polys = list(polys)
        if not self.polys:
            raise ValueError("need at least one form")
        self.field: Field = self.polys[0].field
        if degrees is None:
            degrees = [p.multidegree() for p in self.polys]
            if any(d is None for d in degrees):
                raise ValueError("pass degrees explicitly for zero or mixed polynomials")
        self.degrees = [tuple(d) for d in degrees]
        self.method = method
        self._spaces: dict[MultiDegree, ColumnSpace] = {}

    @classmethod
    def of(cls, f: PolySystem | Sequence[MultiPoly], method=None) -> "IdealComponents":
        if isinstance(f, PolySystem):
            return cls(f.dims, f.polys, f.degrees, method)
        return cls(f[0].dims, f, None, method)

    @property
    def r(self) -> int:
        return len(self.dims)

    def matrix(self, nu: Sequence[int]) -> ExactMatrix:
        nu = tuple(nu)
        _, cols = koszul_columns(self.dims, self.polys, self.degrees, nu)
        return ExactMatrix._trusted(basis_size(self.dims, nu), len(cols), self.field, cols)

    def space(self, nu: Sequence[int]) -> ColumnSpace:
        """Membership oracle for ``I_nu`` (cached per degree)."""
        nu = tuple(nu)
        if nu not in self._spaces:
            self._spaces[nu] = ColumnSpace(self.matrix(nu), self.method)
        return self._spaces[nu]

    def dim(self, nu: Sequence[int]) -> int:
        """``dim I_nu``."""
        if any(v < 0 for v in nu):
            return 0
        return self.space(nu).rank

    def default_exponent(self) -> int:
        """``1 + max_j delta_j`` computed from the forms at hand."""
        deltas = [sum(d[j] for d in self.degrees) - (nj + 1) for j, nj in enumerate(self.dims)]
        return 1 + max(0, *deltas)

    def _saturation_basis(self, mu: MultiDegree, N: int, corner: int) -> list[list]:
        """Kernel of ``p -> [sigma^N p mod I]``; ``corner`` 0 uses x_{j,0}, -1 uses x_{j,n_j}."""
        target = tuple(m + N for m in mu)
        offs = block_offsets(self.dims)
        shift = [0] * (sum(self.dims) + self.r)
        for o, nj in zip(offs, self.dims):
            shift[o + (0 if corner == 0 else nj)] = N
        index = monomial_index(self.dims, target)
        rows = [index[tuple(a + b for a, b in zip(m, shift))] for m in monomial_basis(self.dims, mu)]
        return self.space(target).restricted_kernel(rows)

    def saturation_component(self, mu: Sequence[int], N: int | None = None,
                             max_exponent: int = 64) -> SaturationComponent:
        """``I^sat_mu`` with the exponent raised until the answer is stable.

        Starts at ``N`` (default ``1 + max delta_j``) and compares with
        ``N + 1``; on disagreement ``N`` doubles.  The result is then compared
        with the one obtained from ``sigma' = prod_j x_{j,n_j}``.
        """
        mu = tuple(int(v) for v in mu)
        if any(v < 0 for v in mu):
            return SaturationComponent(mu, (), 0, 0, True)
        N = N or self.default_exponent()
        if N < 1:
            raise ValueError("the saturation exponent must be >= 1")
        while True:
            basis = self._saturation_basis(mu, N, 0)
            if len(self._saturation_basis(mu, N + 1, 0)) == len(basis):
                break
            N *= 2
            if N > max_exponent:
                raise OracleError(f"saturation at {mu} did not stabilise up to exponent {max_exponent}")
        other = self._saturation_basis(mu, N, -1)
        agree = len(other) == len(basis) and self._same_span(mu, basis, other)
        return SaturationComponent(mu, tuple(tuple(v) for v in basis), N, self.dim(mu), agree)

    def _same_span(self, mu, a: list[list], b: list[list]) -> bool:
        if not a:
            return not b
        n = basis_size(self.dims, mu)
        A = ExactMatrix.from_columns(a, n, self.field)
        return rank(A.with_columns(b), self.method) == rank(A, self.method)

    def hilbert_function(self, mu: Sequence[int], saturated: bool = False) -> int:
        """``dim R_mu - dim I_mu`` or, with ``saturated``, ``dim R_mu - dim I^sat_mu``."""
        if any(v < 0 for v in mu):
            return 0
        total = basis_size(self.dims, mu)
        if saturated:
            return total - self.saturation_component(mu).dim
        return total - self.dim(mu)


def saturation_component(f, mu: Sequence[int], N: int | None = None) -> SaturationComponent:
    """Basis of ``I(f)^sat_mu``; ``f`` is a PolySystem or a list of forms."""
    return IdealComponents.of(f).saturation_component(mu, N)


def hilbert_function(f, mu: Sequence[int], saturated: bool = False) -> int:
    return IdealComponents.of(f).hilbert_function(mu, saturated)


# ---- systems with prescribed roots ----------------------------------------------------


Point = tuple[tuple[int, ...], ...]


def evaluate_monomial(exp: Exponent, point_flat: Sequence, field: Field):
    acc = field.one
    for e, x in zip(exp, point_flat):
        if e:
            acc = field.mul(acc, field.convert(x**e))
    return acc


def random_points(s: GradedStructure | Sequence[int], k: int, field: Field, seed: int) -> list[Point]:
    dims = s.dims if isinstance(s, GradedStructure) else tuple(s)
    rng = random.Random(seed)
    pts = []
    for _ in range(k):
        blocks = []
        for nj in dims:
            while True:
                b = tuple(field.random(rng) for _ in range(nj + 1))
                if any(not field.is_zero(x) for x in b):
                    break
            blocks.append(b)
        pts.append(tuple(blocks))
    return pts


def forms_through_points(dims: Sequence[int], degree: MultiDegree, points: Sequence[Point],
                         field: Field) -> list[MultiPoly]:
    """Basis of the forms of degree ``degree`` vanishing at every point."""
    basis = monomial_basis(dims, degree)
    rows = []
    for pt in points:
        flat = [field.convert(x) for b in pt for x in b]
        rows.append([evaluate_monomial(m, flat, field) for m in basis])
    if not rows:
        kern = [[field.one if i == k else field.zero for i in range(len(basis))] for k in range(len(basis))]
    else:
        kern = kernel_basis(ExactMatrix.from_rows(rows, field))
    return [MultiPoly(dims, field, dict(zip(basis, v))) for v in kern]


def system_through_points(s: GradedStructure, points: Sequence[Point], field: Field,
                          seed: int, validate: bool = True) -> PolySystem:
    """Each ``f_i`` is a random element of the forms of degree ``d_i`` vanishing at ``points``.

    With ``validate`` the result must have a stable corank across two
    drop-of-rank degrees; otherwise ``OracleError`` is raised.  Whether that
    corank equals ``len(points)`` is left to the caller.
    """
    rng = random.Random(seed)
    polys = []
    for i, d in enumerate(s.degrees):
        space = forms_through_points(s.dims, d, points, field)
        if not space:
            raise OracleError(f"no nonzero form of degree {d} vanishes at all {len(points)} points")
        p = MultiPoly.zero(s.dims, field)
        for g in space:
            p = p + g.scale(field.random(rng))
        if p.is_zero():
            p = space[0]
        polys.append(p)
    f = PolySystem(s, tuple(polys))
    if validate:
        try:
            count_roots(f)
        except NotZeroDimensionalError as exc:
            raise OracleError(f"interpolation system is not zero-dimensional: {exc}") from None
    return f


# ---- Koszul syzygies ----------------------------------------------------------------------


@dataclass(frozen=True)
class KoszulReport:
    mu: MultiDegree
    kernel_dim: int
    koszul_dim: int
    contained: bool

    @property
    def equal(self) -> bool:
        return self.contained and self.kernel_dim == self.koszul_dim


def koszul_compare(f, mu: Sequence[int], method=None) -> KoszulReport:
    """Compare the syzygies of degree ``mu`` with the span of ``F_j e_i - F_i e_j``."""
    ic = IdealComponents.of(f, method)
    mu = tuple(int(v) for v in mu)
    dims, F = ic.dims, ic.field
    tags, cols = koszul_columns(dims, ic.polys, ic.degrees, mu)
    M = ExactMatrix._trusted(basis_size(dims, mu), len(cols), F, cols)
    kernel_dim = len(cols) - (rank(M, method) if cols and M.nrows else 0)
    # source coordinates: position of (i, m) among the Koszul columns
    pos = {t: k for k, t in enumerate(tags)}
    gens = []
    k = len(ic.polys)
    for i in range(k):
        for j in range(i + 1, k):
            shift = tuple(v - a - b for v, a, b in zip(mu, ic.degrees[i], ic.degrees[j]))
            for m in monomial_basis(dims, shift):
                vec: dict = {}
                # m F_j in slot i, -m F_i in slot j
                for e, c in ic.polys[j].terms.items():
                    key = pos[(i, tuple(a + b for a, b in zip(e, m)))]
                    vec[key] = F.add(vec.get(key, F.zero), c)
                for e, c in ic.polys[i].terms.items():
                    key = pos[(j, tuple(a + b for a, b in zip(e, m)))]
                    vec[key] = F.sub(vec.get(key, F.zero), c)
                gens.append(vec)
    if gens:
        G = ExactMatrix.from_columns(gens, len(cols), F)
        koszul_dim = rank(G, method)
        contained = all(all(F.is_zero(x) for x in M.matvec(_dense(g, len(cols), F))) for g in gens)
    else:
        koszul_dim, contained = 0, True
    return KoszulReport(mu, kernel_dim, koszul_dim, contained)


def _dense(v: dict, n: int, F: Field) -> list:
    out = [F.zero] * n
    for i, x in v.items():
        out[i] = x
    return out


def quotient_dim(f, nu: Sequence[int]) -> int:
    """``dim (C/I)_nu = |monomials of degree nu| - rank M_nu``."""
    ic = IdealComponents.of(f)
    return ic.hilbert_function(nu)


__all__ = [
    "IdealComponents", "KoszulReport", "OracleError", "SaturationComponent",
    "forms_through_points", "hilbert_function", "koszul_compare", "quotient_dim",
    "random_points", "saturation_component", "system_through_points",
]
