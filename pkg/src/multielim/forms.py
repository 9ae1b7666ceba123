"""Nested decompositions, Sylvester forms and twisted Jacobians.

For a Sylvester index ``alpha = (alpha_1, ..., alpha_r)`` with
``|alpha_j| < min_i d_{i,j}`` every ``F_i`` splits as

    F_i = sum_{l=1..r} (prod_{l'<l} x_{l',n_l'}^(a_{l',n_l'}+1))
                       * sum_j x_{l,j}^(a_{l,j}+1) * F^(l)_{i,j}

with ``j`` running over ``0..n_l-1`` for ``l < r`` and over ``0..n_r`` for
``l = r``.  The cofactors ``F^(l)_{i,j}`` form an ``(n+1) x (n+1)`` matrix
whose determinant, times a monomial twist, is the Sylvester form.

Routing is deterministic: a monomial goes to the smallest block-1 index
``j < n_1`` whose exponent exceeds ``alpha^(1)_j``; failing that the factor
``x_{1,n_1}^(alpha^(1)_{n_1}+1)`` is split off and the rest is routed through
block 2, and so on.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from .exactfield import RationalField
from .mpoly import (
    Exponent,
    GradedStructure,
    MultiDegree,
    MultiPoly,
    PolySystem,
    block_offsets,
    monomial_basis,
    split_blocks,
)
from .regions import critical_degree


class InadmissibleIndexError(ValueError):
    """A Sylvester index with ``|alpha_j| >= min_i d_{i,j}`` for some block."""


@dataclass(frozen=True)
class SylvesterIndex:
    """One multi-index per block: ``alphas[j]`` has ``n_j + 1`` entries."""

    alphas: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        alphas = tuple(tuple(int(a) for a in blk) for blk in self.alphas)
        if any(a < 0 for blk in alphas for a in blk):
            raise InadmissibleIndexError(f"negative entry in {alphas}")
        object.__setattr__(self, "alphas", alphas)

    @classmethod
    def zero(cls, dims: Sequence[int]) -> "SylvesterIndex":
        return cls(tuple((0,) * (nj + 1) for nj in dims))

    @classmethod
    def from_exponent(cls, exp: Exponent, dims: Sequence[int]) -> "SylvesterIndex":
        return cls(tuple(split_blocks(tuple(exp), dims)))

    @classmethod
    def parse(cls, text: str) -> "SylvesterIndex":
        """``"1,0;0,0"`` -> ``((1, 0), (0, 0))``."""
        try:
            return cls(tuple(tuple(int(x) for x in blk.split(",")) for blk in text.split(";")))
        except ValueError:
            raise InadmissibleIndexError(f"cannot parse Sylvester index {text!r}") from None

    @property
    def norms(self) -> MultiDegree:
        return tuple(sum(blk) for blk in self.alphas)

    @property
    def exponent(self) -> Exponent:
        return tuple(a for blk in self.alphas for a in blk)

    def check(self, s: GradedStructure) -> None:
        """Raise unless the index fits ``s`` and ``|alpha_j| < min_i d_{i,j}``."""
        if len(self.alphas) != s.r or any(len(b) != nj + 1 for b, nj in zip(self.alphas, s.dims)):
            raise InadmissibleIndexError(f"index {self} does not match dims {s.dims}")
        for j, (norm, m) in enumerate(zip(self.norms, s.min_degrees), start=1):
            if norm >= m:
                raise InadmissibleIndexError(
                    f"block {j}: |alpha_{j}| = {norm} is not < min_i d_i,{j} = {m}"
                )

    def __str__(self):
        return ";".join(",".join(str(a) for a in blk) for blk in self.alphas)


def sylvester_indices(s: GradedStructure, mu: Sequence[int]) -> list[SylvesterIndex]:
    """All indices with block norms ``mu``, in the monomial order of degree ``mu``."""
    return [SylvesterIndex.from_exponent(e, s.dims) for e in monomial_basis(s, mu)]


def bucket_layout(dims: Sequence[int]) -> list[tuple[int, int]]:
    """Column labels ``(block, j)``: ``j < n_l`` for ``l < r`` and ``j <= n_r`` for ``l = r``."""
    r = len(dims)
    cols = []
    for l, nl in enumerate(dims, start=1):
        top = nl + 1 if l == r else nl
        cols.extend((l, j) for j in range(top))
    return cols


def twist_factors(dims: Sequence[int]) -> tuple[int, ...]:
    """``v_i = sum_{j>i} n_j`` for ``i = 1..r-1``."""
    return tuple(sum(dims[i + 1 :]) for i in range(len(dims) - 1))


def _route(exp: Exponent, dims: Sequence[int], alphas) -> tuple[tuple[int, int], Exponent]:
    """Bucket and cofactor exponent of one monomial."""
    offs = block_offsets(dims)
    r = len(dims)
    rest = list(exp)
    for l in range(r):
        o, nl, a = offs[l], dims[l], alphas[l]
        top = nl + 1 if l == r - 1 else nl
        for j in range(top):
            if rest[o + j] >= a[j] + 1:
                rest[o + j] -= a[j] + 1
                return (l + 1, j), tuple(rest)
        # pigeonhole: the last variable of the block must carry the excess
        if rest[o + nl] < a[nl] + 1:
            raise InadmissibleIndexError(
                f"monomial {exp} cannot be routed: block {l + 1} degree is too small for alpha"
            )
        rest[o + nl] -= a[nl] + 1
    raise AssertionError("unreachable: last block always routes")


@dataclass(frozen=True)
class DecompositionTable:
    """Cofactors ``entries[i][c]`` for polynomial ``i`` and bucket ``layout[c]``."""

    system: PolySystem
    index: SylvesterIndex
    layout: tuple[tuple[int, int], ...]
    entries: tuple[tuple[MultiPoly, ...], ...]

    def bucket_monomial(self, col: int) -> Exponent:
        """The monomial multiplying the cofactor of column ``col`` in the nested sum."""
        dims = self.system.dims
        offs = block_offsets(dims)
        l, j = self.layout[col]
        exp = [0] * (sum(dims) + len(dims))
        for lp in range(l - 1):
            exp[offs[lp] + dims[lp]] = self.index.alphas[lp][dims[lp]] + 1
        exp[offs[l - 1] + j] += self.index.alphas[l - 1][j] + 1
        return tuple(exp)

    def reconstruct(self, i: int) -> MultiPoly:
        f = self.system
        out = MultiPoly.zero(f.dims, f.field)
        for c, entry in enumerate(self.entries[i]):
            out = out + entry.mul_monomial(self.bucket_monomial(c))
        return out


def canonical_decompose(f: PolySystem, idx: SylvesterIndex | None = None) -> DecompositionTable:
    """Route every monomial of every ``F_i`` to its bucket (see module docstring)."""
    s = f.structure
    idx = idx or SylvesterIndex.zero(s.dims)
    idx.check(s)
    layout = tuple(bucket_layout(s.dims))
    pos = {b: c for c, b in enumerate(layout)}
    F = f.field
    rows = []
    for p in f.polys:
        buckets: list[dict] = [dict() for _ in layout]
        for e, c in p.terms.items():
            b, q = _route(e, s.dims, idx.alphas)
            buckets[pos[b]][q] = c
        rows.append(tuple(MultiPoly._raw(s.dims, F, t) for t in buckets))
    return DecompositionTable(f, idx, layout, tuple(rows))


def poly_det(matrix: Sequence[Sequence[MultiPoly]]) -> MultiPoly:
    """Determinant by Laplace expansion along rows, memoizing minors by column set."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in matrix):
        raise ValueError("polynomial matrix is not square")
    dims, field = matrix[0][0].dims, matrix[0][0].field
    memo: dict[int, MultiPoly] = {}

    def minor(row: int, cols: int) -> MultiPoly:
        # cols is a bitmask of the columns still available for rows row..n-1
        if row == n:
            return MultiPoly._raw(dims, field, {(0,) * (sum(dims) + len(dims)): field.one})
        if cols in memo:
            return memo[cols]
        acc = MultiPoly.zero(dims, field)
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            a = matrix[row][c]
            if not a.is_zero():
                term = a * minor(row + 1, cols & ~(1 << c))
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[cols] = acc
        return acc

    return minor(0, (1 << n) - 1)


def _twist_monomial(dims: Sequence[int], alphas) -> Exponent:
    offs = block_offsets(dims)
    exp = [0] * (sum(dims) + len(dims))
    for i, v in enumerate(twist_factors(dims)):
        exp[offs[i] + dims[i]] = (alphas[i][dims[i]] + 1) * v
    return tuple(exp)


def determinant_D(f: PolySystem, idx: SylvesterIndex | None = None) -> MultiPoly:
    """The untwisted determinant of the decomposition matrix."""
    table = canonical_decompose(f, idx)
    return poly_det(table.entries)


def sylvester_form(f: PolySystem, idx: SylvesterIndex | None = None) -> MultiPoly:
    """``Sylv_alpha``: twist monomial times the decomposition determinant.

    Its multidegree is ``delta - (|alpha_1|, ..., |alpha_r|)``.
    """
    idx = idx or SylvesterIndex.zero(f.dims)
    D = determinant_D(f, idx)
    return D.mul_monomial(_twist_monomial(f.dims, idx.alphas))


def twisted_jacobian(f: PolySystem) -> MultiPoly:
    """``Lambda = (prod_i x_{i,n_i}^{v_i}) * D``, of multidegree ``delta``."""
    return sylvester_form(f, SylvesterIndex.zero(f.dims))


def sylvester_degree(s: GradedStructure, idx: SylvesterIndex) -> MultiDegree:
    return tuple(d - a for d, a in zip(critical_degree(s), idx.norms))


def jacobian_matrix(f: PolySystem, euler_scaled: bool = True) -> list[list[MultiPoly]]:
    """Derivative analogue of the decomposition matrix.

    Entry ``(i, (l, j))`` is ``d_{1,n_1} ... d_{l-1,n_{l-1}} d_{l,j} F_i``.
    With ``euler_scaled`` it is further multiplied by ``prod_{l'>l} d_{i,l'}``,
    so that each row is a nested decomposition of ``(prod_l d_{i,l}) F_i``
    obtained by chaining the Euler formula block by block.
    """
    dims = f.dims
    r = len(dims)
    layout = bucket_layout(dims)
    rows = []
    for p, deg in zip(f.polys, f.degrees):
        # prefix[l] = p differentiated by x_{1,n_1}, ..., x_{l,n_l}
        prefix = [p]
        for l in range(1, r):
            prefix.append(prefix[-1].derivative(l, dims[l - 1]))
        row = []
        for l, j in layout:
            entry = prefix[l - 1].derivative(l, j)
            if euler_scaled:
                entry = entry.scale(prod(deg[l:]))
            row.append(entry)
        rows.append(row)
    return rows


def jacobian_determinant(f: PolySystem, euler_scaled: bool = True) -> MultiPoly:
    """The derivative Jacobian ``J = (prod_{i<r} x_{i,n_i}^{v_i}) * det(jacobian_matrix)``.

    Only defined over Q: in positive characteristic the derivatives can
    vanish for reasons unrelated to the system.  With the default Euler
    scaling ``J - (prod d_{i,j}) Lambda_0`` lies in the ideal.
    """
    if not isinstance(f.field, RationalField):
        raise ValueError("jacobian_determinant needs a system over Q")
    D = poly_det(jacobian_matrix(f, euler_scaled))
    return D.mul_monomial(_twist_monomial(f.dims, SylvesterIndex.zero(f.dims).alphas))


def degree_product(s: GradedStructure) -> int:
    return prod(d for deg in s.degrees for d in deg)


def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for k, p in enumerate(perm):
        inv[p] = k
    return inv


def order_variant_jacobian(
    f: PolySystem,
    perm_vars: Sequence[Sequence[int]] | None = None,
    perm_polys: Sequence[int] | None = None,
) -> MultiPoly:
    """Twisted Jacobian computed after reordering variables and polynomials.

    ``perm_vars[j][k]`` is the original index of the variable placed at
    position ``k`` of block ``j``; ``perm_polys[i]`` is the original index of
    the polynomial placed in row ``i``.  The result is expressed back in the
    original variables.
    """
    dims = f.dims
    perm_vars = [list(p) for p in perm_vars] if perm_vars else [list(range(nj + 1)) for nj in dims]
    if len(perm_vars) != len(dims):
        raise ValueError(f"need one permutation per block, got {len(perm_vars)}")
    g = f.permuted(list(perm_polys)) if perm_polys is not None else f
    for j, (p, nj) in enumerate(zip(perm_vars, dims), start=1):
        if sorted(p) != list(range(nj + 1)):
            raise ValueError(f"block {j}: {p} is not a permutation of 0..{nj}")
    to_new = [_inverse(p) for p in perm_vars]
    g = PolySystem(g.structure, tuple(p.permute_variables(to_new) for p in g.polys))
    lam = twisted_jacobian(g)
    return lam.permute_variables(perm_vars)


def multiply_index_monomial(p: MultiPoly, idx: SylvesterIndex) -> MultiPoly:
    """``x^alpha * p`` for the monomial encoded by ``idx``."""
    return p.mul_monomial(idx.exponent)


__all__ = [
    "DecompositionTable", "InadmissibleIndexError", "SylvesterIndex", "bucket_layout",
    "canonical_decompose", "degree_product", "determinant_D", "jacobian_determinant",
    "jacobian_matrix", "multiply_index_monomial", "order_variant_jacobian", "poly_det",
    "sylvester_degree", "sylvester_form", "sylvester_indices", "twist_factors",
    "twisted_jacobian",
]
