"""Exact linear algebra over Q and Z/p: rank, kernels, determinants, membership.

Matrices are stored column-sparse (one ``{row: value}`` dict per column) but
behave as dense matrices: every entry is addressable and absent entries are
zero.  Elimination runs through one of these backends:

* ``"flint"``: python-flint's ``nmod_mat`` (Z/p only, the default there);
* ``"numpy"``: our own row reduction on ``int64`` arrays modulo p;
* ``"bareiss"``: fraction-free elimination on an integer lift (Q only);
* ``"fraction"``: Gauss-Jordan with ``Fraction`` entries (Q only).
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, TextIO

import numpy as np

from .exactfield import Field, FieldElement, PrimeField, QQ, parse_field

try:  # optional fast path for prime fields
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

DEFAULT_MAX_DENSE = 5000


class MatrixSizeError(ValueError):
    """The matrix is larger than the dense elimination cap."""


def max_dense() -> int:
    """Largest side length accepted by rank/kernel/det (env ``MULTIELIM_MAX_DENSE``)."""
    raw = os.environ.get("MULTIELIM_MAX_DENSE")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"MULTIELIM_MAX_DENSE must be an integer, got {raw!r}") from None
    return DEFAULT_MAX_DENSE


def _raw(field: Field, v):
    if isinstance(v, FieldElement):
        if v.field != field:
            raise ValueError(f"entry from {v.field} in a matrix over {field}")
        return v.value
    return field.convert(v)


class ExactMatrix:
    """An ``nrows x ncols`` matrix over an exact field."""

    __slots__ = ("nrows", "ncols", "field", "_cols")

    def __init__(self, nrows: int, ncols: int, field: Field, columns=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows, self.ncols, self.field = nrows, ncols, field
        if columns is None:
            self._cols = [dict() for _ in range(ncols)]
        else:
            if len(columns) != ncols:
                raise ValueError(f"got {len(columns)} columns, expected {ncols}")
            self._cols = [self._clean(c) for c in columns]

    def _clean(self, col) -> dict:
        F = self.field
        if isinstance(col, dict):
            items = col.items()
        else:
            if len(col) != self.nrows:
                raise ValueError(f"column of length {len(col)}, expected {self.nrows}")
            items = enumerate(col)
        out = {}
        for i, v in items:
            if not 0 <= i < self.nrows:
                raise IndexError(f"row {i} out of range for {self.nrows} rows")
            v = _raw(F, v)
            if not F.is_zero(v):
                out[i] = v
        return out

    @classmethod
    def _trusted(cls, nrows, ncols, field, cols: list[dict]) -> "ExactMatrix":
        m = cls.__new__(cls)
        m.nrows, m.ncols, m.field, m._cols = nrows, ncols, field, cols
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ) -> "ExactMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("rows have different lengths")
        cols = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
        return cls(nrows, ncols, field, cols)

    @classmethod
    def from_columns(cls, columns: Sequence, nrows: int, field: Field = QQ) -> "ExactMatrix":
        return cls(nrows, len(columns), field, list(columns))

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "ExactMatrix":
        return cls._trusted(n, n, field, [{j: field.one} for j in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: Field = QQ) -> "ExactMatrix":
        return cls(nrows, ncols, field)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"entry {ij} out of range for shape {self.shape}")
        return self._cols[j].get(i, self.field.zero)

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self[i, j], self.field)

    def column(self, j: int) -> dict:
        return dict(self._cols[j])

    def columns(self) -> list[dict]:
        return [dict(c) for c in self._cols]

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def to_rows(self) -> list[list]:
        z = self.field.zero
        rows = [[z] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                rows[i][j] = v
        return rows

    def transpose(self) -> "ExactMatrix":
        cols: list[dict] = [dict() for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                cols[i][j] = v
        return ExactMatrix._trusted(self.ncols, self.nrows, self.field, cols)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if other.nrows != self.nrows or other.field != self.field:
            raise ValueError("hstack needs equal row counts and fields")
        return ExactMatrix._trusted(
            self.nrows, self.ncols + other.ncols, self.field,
            [dict(c) for c in self._cols] + [dict(c) for c in other._cols],
        )

    def with_columns(self, columns: Iterable) -> "ExactMatrix":
        extra = [self._clean(c) for c in columns]
        return ExactMatrix._trusted(
            self.nrows, self.ncols + len(extra), self.field, [dict(c) for c in self._cols] + extra
        )

    def select_columns(self, idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix._trusted(self.nrows, len(idx), self.field, [dict(self._cols[j]) for j in idx])

    def select_rows(self, idx: Sequence[int]) -> "ExactMatrix":
        pos = {i: k for k, i in enumerate(idx)}
        cols = [{pos[i]: v for i, v in c.items() if i in pos} for c in self._cols]
        return ExactMatrix._trusted(len(idx), self.ncols, self.field, cols)

    def matvec(self, v: Sequence) -> list:
        F = self.field
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for {self.ncols} columns")
        out = [F.zero] * self.nrows
        for j, c in enumerate(self._cols):
            x = _raw(F, v[j])
            if F.is_zero(x):
                continue
            for i, a in c.items():
                out[i] = F.add(out[i], F.mul(a, x))
        return out

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self._cols == other._cols

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.field.spec}, nnz={self.nnz()})"


# ---- backend selection ------------------------------------------------------


def _check_size(M: ExactMatrix):
    cap = max_dense()
    if max(M.nrows, M.ncols) > cap:
        raise MatrixSizeError(
            f"matrix {M.nrows}x{M.ncols} exceeds the dense cap {cap} "
            "(set MULTIELIM_MAX_DENSE to raise it)"
        )


def _method(M: ExactMatrix, method: str | None) -> str:
    if isinstance(M.field, PrimeField):
        method = method or ("flint" if flint is not None else "numpy")
        if method not in ("flint", "numpy"):
            raise ValueError(f"method {method!r} is not available over Z/p")
        if method == "flint" and flint is None:
            raise ValueError("python-flint is not installed")
        if method == "numpy" and M.field.p >= 2**31:
            raise ValueError("the numpy backend needs p < 2^31")
        return method
    method = method or "bareiss"
    if method not in ("bareiss", "fraction"):
        raise ValueError(f"method {method!r} is not available over Q")
    return method


# ---- Z/p: flint -------------------------------------------------------------


def _to_flint(M: ExactMatrix, transpose: bool = False):
    if transpose:
        A = flint.nmod_mat(M.ncols, M.nrows, M.field.p)
        for j, c in enumerate(M._cols):
            for i, v in c.items():
                A[j, i] = v
    else:
        A = flint.nmod_mat(M.nrows, M.ncols, M.field.p)
        for j, c in enumerate(M._cols):
            for i, v in c.items():
                A[i, j] = v
    return A


def _flint_null_rows(A, nullity_cols: int) -> list[list[int]]:
    """Kernel vectors of a flint matrix as Python lists."""
    X, k = A.nullspace()
    return [[int(X[i, c]) for i in range(nullity_cols)] for c in range(k)]


def _flint_kernel(M: ExactMatrix) -> list[list[int]]:
    if M.ncols == 0:
        return []
    if M.nrows == 0:
        return [[int(i == k) for i in range(M.ncols)] for k in range(M.ncols)]
    return _flint_null_rows(_to_flint(M), M.ncols)


# ---- Z/p: numpy row reduction ---------------------------------------------------


def _dense_mod(M: ExactMatrix) -> np.ndarray:
    A = np.zeros((M.nrows, M.ncols), dtype=np.int64)
    for j, c in enumerate(M._cols):
        for i, v in c.items():
            A[i, j] = v
    return A


def rref_mod_p(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int], int]:
    """Reduced row echelon form mod ``p < 2^31``.

    Returns ``(R, pivots, swaps)`` where ``R`` holds the nonzero rows and
    ``swaps`` counts row exchanges (for determinant signs).
    """
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    pivots: list[int] = []
    swaps = 0
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
            swaps += 1
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            # entries < 2^31 so every product fits in int64
            A[hit] = (A[hit] - col[hit, None] * A[r]) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots, swaps


def _numpy_det(M: ExactMatrix) -> int:
    p = M.field.p
    A = _dense_mod(M)
    n = A.shape[0]
    det = 1
    for c in range(n):
        nz = np.flatnonzero(A[c:, c])
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            A[[c, k]] = A[[k, c]]
            det = -det
        piv = int(A[c, c])
        det = det * piv % p
        inv = pow(piv, -1, p)
        below = A[c + 1 :, c] * inv % p
        hit = np.flatnonzero(below)
        if hit.size:
            rows = c + 1 + hit
            A[rows] = (A[rows] - below[hit, None] * A[c]) % p
    return det % p


def _kernel_from_rref(R_rows, pivots, ncols, F) -> list[list]:
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for row, pc in zip(R_rows, pivots):
            a = row[f]
            if not F.is_zero(a):
                v[pc] = F.neg(a)
        basis.append(v)
    return basis


# ---- Q: Bareiss and Gauss-Jordan ------------------------------------------------


def _integer_rows(M: ExactMatrix) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; returns the rows and the product of the scales."""
    rows = M.to_rows()
    out, scale = [], Fraction(1)
    for r in rows:
        den = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        out.append([int(Fraction(x) * den) for x in r])
        scale *= den
    return out, scale


def bareiss(rows: list[list[int]]) -> tuple[int, int, int]:
    """Fraction-free elimination of an integer matrix.

    Returns ``(rank, last_pivot, sign)``; for a square nonsingular input the
    determinant is ``sign * last_pivot``.  Pivots are the first nonzero entry
    in column order.
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        k = next((i for i in range(r, m) if A[i][c] != 0), None)
        if k is None:
            continue
        if k != r:
            A[r], A[k] = A[k], A[r]
            sign = -sign
        piv = A[r][c]
        Ar = A[r]
        for i in range(r + 1, m):
            Ai = A[i]
            a = Ai[c]
            for j in range(c + 1, n):
                # exact division is the Bareiss invariant
                Ai[j] = (piv * Ai[j] - a * Ar[j]) // prev
            Ai[c] = 0
        prev = piv
        r += 1
    return r, prev, sign


def _fraction_rref(M: ExactMatrix) -> tuple[list[list[Fraction]], list[int]]:
    A = [[Fraction(x) for x in r] for r in M.to_rows()]
    m, n = M.nrows, M.ncols
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        k = next((i for i in range(r, m) if A[i][c] != 0), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(m):
            if i != r and A[i][c] != 0:
                a = A[i][c]
                Ar = A[r]
                A[i] = [x - a * y for x, y in zip(A[i], Ar)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


# ---- public operations ------------------------------------------------------------


def rank(M: ExactMatrix, method: str | None = None) -> int:
    """Exact rank."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    _check_size(M)
    meth = _method(M, method)
    if meth == "flint":
        return _to_flint(M).rank()
    if meth == "numpy":
        return len(rref_mod_p(_dense_mod(M), M.field.p)[1])
    if meth == "bareiss":
        rows, _ = _integer_rows(M)
        # eliminate along the shorter side
        if M.ncols < M.nrows:
            rows = [list(c) for c in zip(*rows)]
        return bareiss(rows)[0]
    return len(_fraction_rref(M)[1])


def corank(M: ExactMatrix, method: str | None = None) -> int:
    """``rows - rank``: the dimension of the cokernel."""
    return M.nrows - rank(M, method)


def det(M: ExactMatrix, method: str | None = None) -> FieldElement:
    if M.nrows != M.ncols:
        raise ValueError(f"determinant of a non-square {M.nrows}x{M.ncols} matrix")
    F = M.field
    if M.nrows == 0:
        return FieldElement(F.one, F)
    _check_size(M)
    meth = _method(M, method)
    if meth == "flint":
        return FieldElement(int(_to_flint(M).det()), F)
    if meth == "numpy":
        return FieldElement(_numpy_det(M), F)
    rows, scale = _integer_rows(M)
    if meth == "bareiss":
        r, last, sign = bareiss(rows)
        value = Fraction(sign * last) if r == M.nrows else Fraction(0)
        return FieldElement(value / scale, F)
    # fraction route: product of pivots from plain elimination
    A = [[Fraction(x) for x in r] for r in M.to_rows()]
    n = M.nrows
    d = Fraction(1)
    for c in range(n):
        k = next((i for i in range(c, n) if A[i][c] != 0), None)
        if k is None:
            return FieldElement(0, F)
        if k != c:
            A[c], A[k] = A[k], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                t = A[i][c] / A[c][c]
                A[i] = [x - t * y for x, y in zip(A[i], A[c])]
    return FieldElement(d, F)


def kernel_basis(M: ExactMatrix, method: str | None = None) -> list[list]:
    """Basis of ``{v : M v = 0}`` as lists of raw field values."""
    F = M.field
    if M.ncols == 0:
        return []
    if M.nrows == 0:
        return [[F.one if i == k else F.zero for i in range(M.ncols)] for k in range(M.ncols)]
    _check_size(M)
    meth = _method(M, method)
    if meth == "flint":
        return _flint_kernel(M)
    if meth == "numpy":
        R, piv, _ = rref_mod_p(_dense_mod(M), F.p)
        return _kernel_from_rref([[int(x) for x in row] for row in R], piv, M.ncols, F)
    R, piv = _fraction_rref(M)
    return _kernel_from_rref(R, piv, M.ncols, F)


def left_kernel_basis(M: ExactMatrix, method: str | None = None) -> list[list]:
    """Basis of ``{w : w^T M = 0}``."""
    return kernel_basis(M.transpose(), method)


def _as_dense(v, n: int, F: Field) -> list:
    if isinstance(v, dict):
        out = [F.zero] * n
        for i, x in v.items():
            if not 0 <= i < n:
                raise ValueError(f"vector index {i} out of range for length {n}")
            out[i] = _raw(F, x)
        return out
    if len(v) != n:
        raise ValueError(f"vector of length {len(v)}, expected {n}")
    return [_raw(F, x) for x in v]


class ColumnSpace:
    """Membership oracle for the column span of ``M``.

    Stores a basis ``W`` of the left kernel; ``v`` is in the span iff
    ``W v = 0``.  Building it costs one elimination; each test afterwards is
    a matrix-vector product.
    """

    def __init__(self, M: ExactMatrix, method: str | None = None):
        self.nrows = M.nrows
        self.field = F = M.field
        self._fast = None
        if M.ncols == 0 or M.nrows == 0:
            basis = [[F.one if i == k else F.zero for i in range(M.nrows)] for k in range(M.nrows)]
        else:
            _check_size(M)
            if _method(M, method) == "flint":
                basis = _flint_null_rows(_to_flint(M, transpose=True), M.nrows)
            else:
                basis = left_kernel_basis(M, method)
        self.rank = M.nrows - len(basis)
        self.annihilator = (
            ExactMatrix.from_rows(basis, F) if basis else ExactMatrix.zeros(0, M.nrows, F)
        )
        if isinstance(F, PrimeField) and flint is not None and basis:
            self._fast = _to_flint(self.annihilator)

    @property
    def codim(self) -> int:
        return self.annihilator.nrows

    def contains(self, v) -> bool:
        return self.contains_all([v])

    __contains__ = contains

    def contains_all(self, vectors: Sequence) -> bool:
        F = self.field
        if not vectors or self.codim == 0:
            for v in vectors:
                _as_dense(v, self.nrows, F)
            return True
        if self._fast is not None:
            t = len(vectors)
            B = flint.nmod_mat(self.nrows, t, F.p)
            for k, v in enumerate(vectors):
                items = v.items() if isinstance(v, dict) else enumerate(_as_dense(v, self.nrows, F))
                for i, x in items:
                    if not 0 <= i < self.nrows:
                        raise ValueError(f"vector index {i} out of range for length {self.nrows}")
                    x = _raw(F, x)
                    if x:
                        B[i, k] = x
            prod = self._fast * B
            return all(int(x) == 0 for x in prod.entries())
        Wt = self.annihilator.transpose()  # columns of Wt are rows of W
        for v in vectors:
            v = _as_dense(v, self.nrows, F)
            for row in Wt._cols:
                acc = F.zero
                for i, a in row.items():
                    acc = F.add(acc, F.mul(a, v[i]))
                if not F.is_zero(acc):
                    return False
        return True

    def restricted_kernel(self, rows: Sequence[int]) -> list[list]:
        """Basis of ``{c : sum_k c_k e_{rows[k]} in span(M)}``.

        Used to find which combinations of selected unit vectors (for
        instance the shifts of a monomial basis) fall in the column span.
        """
        F = self.field
        t = len(rows)
        if self.codim == 0:
            return [[F.one if i == k else F.zero for i in range(t)] for k in range(t)]
        W = self.annihilator.select_columns(list(rows))
        if self._fast is not None:
            if t == 0:
                return []
            return _flint_null_rows(_to_flint(W), t)
        return kernel_basis(W)


def in_column_space(M: ExactMatrix, v, method: str | None = None) -> bool:
    """True iff ``v`` (dense list or ``{row: value}``) is a combination of M's columns."""
    if isinstance(v, dict):
        _as_dense(v, M.nrows, M.field)
    elif len(v) != M.nrows:
        raise ValueError(f"vector of length {len(v)} for a matrix with {M.nrows} rows")
    return ColumnSpace(M, method).contains(v)


# ---- MatrixMarket ---------------------------------------------------------------


def write_mtx(M: ExactMatrix, out: TextIO) -> None:
    """MatrixMarket coordinate format; the field goes in a ``% field:`` comment."""
    F = M.field
    out.write("%%MatrixMarket matrix coordinate integer general\n")
    out.write(f"% field: {F.spec}\n")
    entries = sorted((i, j, v) for j, c in enumerate(M._cols) for i, v in c.items())
    out.write(f"{M.nrows} {M.ncols} {len(entries)}\n")
    for i, j, v in entries:
        out.write(f"{i + 1} {j + 1} {F.format(v)}\n")


def read_mtx(src: TextIO, field: Field | None = None) -> ExactMatrix:
    lines = iter(src.read().splitlines())
    header = next(lines, "")
    if not header.startswith("%%MatrixMarket matrix coordinate"):
        raise ValueError("not a MatrixMarket coordinate file")
    size = None
    for line in lines:
        s = line.strip()
        if s.startswith("%"):
            if s.startswith("% field:") and field is None:
                field = parse_field(s.split(":", 1)[1])
            continue
        if s:
            size = s
            break
    if size is None:
        raise ValueError("missing size line")
    field = field or QQ
    nrows, ncols, nnz = (int(x) for x in size.split())
    cols: list[dict] = [dict() for _ in range(ncols)]
    count = 0
    for line in lines:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        i, j, v = s.split()
        cols[int(j) - 1][int(i) - 1] = field.parse(v)
        count += 1
    if count != nnz:
        raise ValueError(f"expected {nnz} entries, read {count}")
    return ExactMatrix(nrows, ncols, field, cols)


__all__ = [
    "ColumnSpace", "ExactMatrix", "MatrixSizeError", "bareiss", "corank", "det",
    "in_column_space", "kernel_basis", "left_kernel_basis", "max_dense", "rank",
    "read_mtx", "rref_mod_p", "write_mtx",
]
