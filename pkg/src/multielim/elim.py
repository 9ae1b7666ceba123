"""Multigraded elimination matrices: Macaulay-type M_nu and hybrid H_nu.

Rows are the monomials of degree ``nu`` in the fixed monomial order.  Koszul
columns come first, grouped by polynomial and then by multiplier monomial;
Sylvester columns, when present, come last in the order of their indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exactfield import Field
from .exactla import ExactMatrix, corank, rank
from .forms import SylvesterIndex, sylvester_form, sylvester_indices
from .mpoly import (
    Exponent,
    GradedStructure,
    MultiDegree,
    MultiPoly,
    PolySystem,
    basis_size,
    monomial_basis,
    monomial_index,
)
from .regions import admissible_nu, drop_of_rank_base


class InadmissibleDegreeError(ValueError):
    """The requested degree does not support the requested matrix."""


class NotZeroDimensionalError(RuntimeError):
    """Coranks at two drop-of-rank degrees disagree, so no root count is reported."""


@dataclass
class ElimMatrix:
    nu: MultiDegree
    dims: tuple[int, ...]
    field: Field
    rows: list[Exponent]
    koszul_tags: list[tuple[int, Exponent]]
    sylvester_tags: list[SylvesterIndex]
    columns: list[dict] = field(repr=False)
    _matrix: ExactMatrix | None = field(default=None, repr=False)

    @property
    def matrix(self) -> ExactMatrix:
        if self._matrix is None:
            self._matrix = ExactMatrix._trusted(len(self.rows), len(self.columns), self.field, self.columns)
        return self._matrix

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.columns))

    @property
    def n_koszul(self) -> int:
        return len(self.koszul_tags)

    @property
    def n_sylvester(self) -> int:
        return len(self.sylvester_tags)

    def koszul_block(self) -> ExactMatrix:
        return self.matrix.select_columns(range(self.n_koszul))

    def rank(self, method: str | None = None) -> int:
        return rank(self.matrix, method)

    def corank(self, method: str | None = None) -> int:
        return corank(self.matrix, method)


def koszul_columns(
    dims: Sequence[int], polys: Sequence[MultiPoly], degrees: Sequence[MultiDegree], nu: MultiDegree
) -> tuple[list[tuple[int, Exponent]], list[dict]]:
    """Columns ``m * F_i`` for every ``i`` and every monomial ``m`` of degree ``nu - d_i``."""
    dims = tuple(dims)
    index = monomial_index(dims, tuple(nu))
    tags, cols = [], []
    for i, (p, d) in enumerate(zip(polys, degrees)):
        shift = tuple(v - dv for v, dv in zip(nu, d))
        terms = list(p.terms.items())
        for m in monomial_basis(dims, shift):
            col = {}
            for e, c in terms:
                col[index[tuple(a + b for a, b in zip(e, m))]] = c
            tags.append((i, m))
            cols.append(col)
    return tags, cols


def macaulay_matrix(f: PolySystem, nu: Sequence[int]) -> ElimMatrix:
    """Matrix of ``(G_0..G_n) -> sum G_i F_i`` in degree ``nu``."""
    nu = tuple(int(v) for v in nu)
    if len(nu) != f.structure.r:
        raise InadmissibleDegreeError(f"degree {nu} has {len(nu)} entries, expected {f.structure.r}")
    tags, cols = koszul_columns(f.dims, f.polys, f.degrees, nu)
    return ElimMatrix(nu, f.dims, f.field, monomial_basis(f.dims, nu), tags, [], cols)


def hybrid_matrix(f: PolySystem, nu: Sequence[int]) -> ElimMatrix:
    """Macaulay block plus one Sylvester-form column per index of norm ``delta - nu``."""
    nu = tuple(int(v) for v in nu)
    cls = admissible_nu(f.structure, nu)
    if cls.kind != "hybrid":
        reason = cls.reason or "nu is not of the form delta - mu with nu <= delta"
        raise InadmissibleDegreeError(f"no hybrid matrix at nu={nu}: {reason}")
    E = macaulay_matrix(f, nu)
    for idx in sylvester_indices(f.structure, cls.mu):
        E.sylvester_tags.append(idx)
        E.columns.append(sylvester_form(f, idx).coefficient_vector(nu))
    E._matrix = None
    return E


def elimination_matrix(f: PolySystem, nu: Sequence[int]) -> ElimMatrix:
    """``H_nu`` at hybrid degrees, ``M_nu`` otherwise."""
    if admissible_nu(f.structure, nu).kind == "hybrid":
        return hybrid_matrix(f, nu)
    return macaulay_matrix(f, nu)


def shape_only(s: GradedStructure, nu: Sequence[int]) -> tuple[int, int, int]:
    """``(rows, koszul columns, sylvester columns)`` from binomial counts alone."""
    nu = tuple(int(v) for v in nu)
    rows = basis_size(s, nu)
    koszul = sum(basis_size(s, tuple(v - dv for v, dv in zip(nu, d))) for d in s.degrees)
    cls = admissible_nu(s, nu)
    sylv = basis_size(s, cls.mu) if cls.kind == "hybrid" else 0
    return rows, koszul, sylv


def _matrix_corank(f: PolySystem, nu, method) -> int:
    cls = admissible_nu(f.structure, nu)
    if not cls.admissible:
        raise InadmissibleDegreeError(f"nu={tuple(nu)} is not admissible: {cls.reason}")
    return elimination_matrix(f, nu).corank(method)


def count_roots(f: PolySystem, nu: Sequence[int] | None = None, method: str | None = None) -> int:
    """Corank of the elimination matrix at a drop-of-rank degree.

    The default degree is the smallest one in the drop-of-rank region.  The
    corank is recomputed at ``nu + (1, ..., 1)``; if the two disagree the
    system is not verified zero-dimensional and an error is raised.
    """
    s = f.structure
    nu = tuple(nu) if nu is not None else drop_of_rank_base(s)
    if not admissible_nu(s, nu).drop_of_rank:
        raise InadmissibleDegreeError(f"nu={nu} is outside the drop-of-rank region")
    k0 = _matrix_corank(f, nu, method)
    nu1 = tuple(v + 1 for v in nu)
    k1 = _matrix_corank(f, nu1, method)
    if k0 != k1:
        raise NotZeroDimensionalError(
            f"not verified zero-dimensional: corank {k0} at {nu} but {k1} at {nu1}"
        )
    return k0


__all__ = [
    "ElimMatrix", "InadmissibleDegreeError", "NotZeroDimensionalError", "count_roots",
    "elimination_matrix", "hybrid_matrix", "koszul_columns",
    "macaulay_matrix", "shape_only",
]
