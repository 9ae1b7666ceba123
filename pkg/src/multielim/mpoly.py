"""Sparse multihomogeneous polynomials over an exact field.

Variables come in ``r`` blocks ``x_j = (x_{j,0}, ..., x_{j,n_j})``.  An
exponent vector is stored flat: block 1 first, then block 2, and so on, so
its length is ``n + r``.  Multidegrees are plain integer tuples.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, prod
from pathlib import Path
from typing import Iterable, Sequence

from .exactfield import Field, FieldElement, parse_field

MultiDegree = tuple[int, ...]
Exponent = tuple[int, ...]


class StructureError(ValueError):
    """Polynomials or degrees that do not fit the multiprojective setting."""


@dataclass(frozen=True)
class GradedStructure:
    """Dimensions ``(n_1..n_r)`` and the ``n + 1`` multidegrees of a square system."""

    dims: tuple[int, ...]
    degrees: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        degrees = tuple(tuple(int(x) for x in d) for d in self.degrees)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "degrees", degrees)
        if not dims:
            raise StructureError("need at least one projective factor")
        if any(nj < 1 for nj in dims):
            raise StructureError(f"every n_j must be >= 1, got {dims}")
        if len(degrees) != sum(dims) + 1:
            raise StructureError(
                f"expected n+1 = {sum(dims) + 1} multidegrees, got {len(degrees)}"
            )
        for i, d in enumerate(degrees):
            if len(d) != len(dims):
                raise StructureError(f"degree {i} has {len(d)} entries, expected {len(dims)}")
            if any(x < 1 for x in d):
                raise StructureError(f"degree {i} = {d} has an entry < 1")

    @property
    def r(self) -> int:
        return len(self.dims)

    @property
    def n(self) -> int:
        return sum(self.dims)

    @property
    def nvars(self) -> int:
        return self.n + self.r

    @property
    def min_degrees(self) -> MultiDegree:
        return tuple(min(d[j] for d in self.degrees) for j in range(self.r))


def block_offsets(dims: Sequence[int]) -> tuple[int, ...]:
    out, acc = [], 0
    for nj in dims:
        out.append(acc)
        acc += nj + 1
    return tuple(out)


def split_blocks(exp: Exponent, dims: Sequence[int]) -> list[tuple[int, ...]]:
    offs = block_offsets(dims)
    return [tuple(exp[o : o + nj + 1]) for o, nj in zip(offs, dims)]


def exponent_degree(exp: Exponent, dims: Sequence[int]) -> MultiDegree:
    return tuple(sum(b) for b in split_blocks(exp, dims))


def _dims_of(s) -> tuple[int, ...]:
    if isinstance(s, GradedStructure):
        return s.dims
    return tuple(s)


@lru_cache(maxsize=None)
def _homogeneous_exponents(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponents of total degree ``degree`` in descending grevlex order."""
    if degree < 0:
        return ()
    out = []

    def rec(i, left, acc):
        if i == nvars - 1:
            out.append(tuple(acc + [left]))
            return
        for e in range(left, -1, -1):
            rec(i + 1, left - e, acc + [e])

    rec(0, degree, [])
    # grevlex: a > b iff the last nonzero entry of a - b is negative
    out.sort(key=lambda e: e[::-1])
    return tuple(out)


@lru_cache(maxsize=None)
def _basis(dims: tuple[int, ...], nu: MultiDegree) -> tuple[Exponent, ...]:
    if len(nu) != len(dims) or any(v < 0 for v in nu):
        return ()
    blocks = [_homogeneous_exponents(nj + 1, v) for nj, v in zip(dims, nu)]
    return tuple(sum(parts, ()) for parts in product(*blocks))


def monomial_basis(s, nu: Sequence[int]) -> list[Exponent]:
    """Monomials of multidegree ``nu``: grevlex per block, blocks in order 1..r."""
    return list(_basis(_dims_of(s), tuple(int(v) for v in nu)))


@lru_cache(maxsize=None)
def monomial_index(dims: tuple[int, ...], nu: MultiDegree) -> dict[Exponent, int]:
    return {m: i for i, m in enumerate(_basis(dims, nu))}


def basis_size(s, nu: Sequence[int]) -> int:
    """``prod_j C(nu_j + n_j, n_j)``, zero when some ``nu_j < 0``."""
    dims = _dims_of(s)
    if any(v < 0 for v in nu):
        return 0
    return prod(comb(v + nj, nj) for v, nj in zip(nu, dims))


def _add_exp(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


class MultiPoly:
    """Sparse polynomial: a map from flat exponent vectors to nonzero scalars."""

    __slots__ = ("dims", "field", "terms")

    def __init__(self, dims: Sequence[int], field: Field, terms=None):
        self.dims = tuple(dims)
        self.field = field
        clean = {}
        if terms:
            nv = sum(self.dims) + len(self.dims)
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nv:
                    raise StructureError(f"exponent {e} has length {len(e)}, expected {nv}")
                c = field.convert(c.value if isinstance(c, FieldElement) else c)
                if not field.is_zero(c):
                    clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, dims, field, terms) -> "MultiPoly":
        p = cls.__new__(cls)
        p.dims, p.field, p.terms = dims, field, terms
        return p

    @classmethod
    def zero(cls, dims, field) -> "MultiPoly":
        return cls._raw(tuple(dims), field, {})

    @classmethod
    def monomial(cls, dims, field, blocks: Sequence[Sequence[int]], coeff=1) -> "MultiPoly":
        exp = tuple(e for b in blocks for e in b)
        return cls(dims, field, {exp: coeff})

    @classmethod
    def variable(cls, dims, field, block: int, k: int) -> "MultiPoly":
        """The variable ``x_{block,k}`` (``block`` is 1-based as in the notation)."""
        exp = [0] * (sum(dims) + len(dims))
        exp[block_offsets(dims)[block - 1] + k] = 1
        return cls(dims, field, {tuple(exp): 1})

    @classmethod
    def from_block_terms(cls, dims, field, terms: Iterable) -> "MultiPoly":
        """Build from ``(blocks, coeff)`` pairs, summing repeated monomials."""
        acc: dict = {}
        for blocks, c in terms:
            exp = tuple(e for b in blocks for e in b)
            c = field.convert(c.value if isinstance(c, FieldElement) else c)
            acc[exp] = field.add(acc.get(exp, field.zero), c)
        return cls(dims, field, acc)

    # ---- structure -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return sum(self.dims) + len(self.dims)

    def _compatible(self, other: "MultiPoly"):
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {type(other).__name__}")
        if other.dims != self.dims:
            raise StructureError(f"block structures differ: {self.dims} vs {other.dims}")
        if other.field != self.field:
            raise StructureError(f"fields differ: {self.field} vs {other.field}")

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def multidegrees(self) -> set[MultiDegree]:
        return {exponent_degree(e, self.dims) for e in self.terms}

    def is_multihomogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    def multidegree(self) -> MultiDegree | None:
        """The common multidegree of all terms; None for zero or mixed polynomials."""
        degs = self.multidegrees()
        return degs.pop() if len(degs) == 1 else None

    def coeff(self, blocks_or_exp) -> FieldElement:
        exp = tuple(blocks_or_exp)
        if exp and isinstance(exp[0], (tuple, list)):
            exp = tuple(e for b in exp for e in b)
        return FieldElement(self.terms.get(exp, self.field.zero), self.field)

    # ---- arithmetic ------------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._compatible(other)
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, F.zero), c)
            if F.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return MultiPoly._raw(self.dims, F, out)

    def __neg__(self) -> "MultiPoly":
        F = self.field
        return MultiPoly._raw(self.dims, F, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        F = self.field
        c = F.convert(c.value if isinstance(c, FieldElement) else c)
        if F.is_zero(c):
            return MultiPoly.zero(self.dims, F)
        return MultiPoly._raw(self.dims, F, {e: F.mul(v, c) for e, v in self.terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._compatible(other)
        F = self.field
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = F.add(get(e, F.zero), F.mul(c1, c2))
        return MultiPoly._raw(self.dims, F, {e: c for e, c in out.items() if not F.is_zero(c)})

    def __rmul__(self, other):
        return self.scale(other)

    def mul_monomial(self, exp: Exponent, coeff=None) -> "MultiPoly":
        F = self.field
        if coeff is None:
            return MultiPoly._raw(self.dims, F, {_add_exp(e, exp): c for e, c in self.terms.items()})
        return MultiPoly._raw(self.dims, F, {_add_exp(e, exp): F.mul(c, coeff) for e, c in self.terms.items()}).prune()

    def prune(self) -> "MultiPoly":
        F = self.field
        return MultiPoly._raw(self.dims, F, {e: c for e, c in self.terms.items() if not F.is_zero(c)})

    def derivative(self, block: int, k: int) -> "MultiPoly":
        """Partial derivative with respect to ``x_{block,k}`` (``block`` 1-based)."""
        F = self.field
        idx = block_offsets(self.dims)[block - 1] + k
        out = {}
        for e, c in self.terms.items():
            a = e[idx]
            if a == 0:
                continue
            v = F.mul(c, F.convert(a))
            if F.is_zero(v):
                continue
            ne = list(e)
            ne[idx] = a - 1
            out[tuple(ne)] = v
        return MultiPoly._raw(self.dims, F, out)

    def permute_variables(self, perms: Sequence[Sequence[int]]) -> "MultiPoly":
        """Substitute ``x_{j,k} -> x_{j,perms[j][k]}`` in every block."""
        offs = block_offsets(self.dims)
        target = [0] * self.nvars
        for j, (o, nj) in enumerate(zip(offs, self.dims)):
            pj = perms[j]
            if sorted(pj) != list(range(nj + 1)):
                raise ValueError(f"block {j + 1}: {list(pj)} is not a permutation of 0..{nj}")
            for k in range(nj + 1):
                target[o + k] = o + pj[k]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * self.nvars
            for i, a in enumerate(e):
                ne[target[i]] = a
            out[tuple(ne)] = c
        return MultiPoly._raw(self.dims, self.field, out)

    def coefficient_vector(self, nu: MultiDegree) -> dict[int, object]:
        """Sparse coefficient vector in ``monomial_basis(dims, nu)``."""
        index = monomial_index(self.dims, tuple(nu))
        try:
            return {index[e]: c for e, c in self.terms.items()}
        except KeyError as exc:
            raise StructureError(f"term {exc.args[0]} is not of multidegree {tuple(nu)}") from None

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.dims == other.dims and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.dims, self.field, frozenset(self.terms.items())))

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        """Terms grouped by multidegree, then in the canonical monomial order."""
        def key(item):
            e = item[0]
            return tuple(b[::-1] for b in split_blocks(e, self.dims))
        return sorted(self.terms.items(), key=lambda it: (exponent_degree(it[0], self.dims), key(it)))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = []
            for j, b in enumerate(split_blocks(e, self.dims), start=1):
                for k, a in enumerate(b):
                    if a == 1:
                        mono.append(f"x{j}_{k}")
                    elif a > 1:
                        mono.append(f"x{j}_{k}^{a}")
            cs = self.field.format(c)
            parts.append("*".join([cs] + mono) if mono else cs)
        return " + ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class PolySystem:
    """``n + 1`` polynomials conforming to a :class:`GradedStructure`."""

    structure: GradedStructure
    polys: tuple[MultiPoly, ...]

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        s = self.structure
        if len(polys) != len(s.degrees):
            raise StructureError(f"expected {len(s.degrees)} polynomials, got {len(polys)}")
        fields = {p.field for p in polys}
        if len(fields) != 1:
            raise StructureError("all polynomials must share one field")
        for i, (p, d) in enumerate(zip(polys, s.degrees)):
            if p.dims != s.dims:
                raise StructureError(f"polynomial {i} has block dims {p.dims}, expected {s.dims}")
            degs = p.multidegrees()
            if degs and degs != {d}:
                raise StructureError(f"polynomial {i} is not multihomogeneous of degree {d}")

    @property
    def field(self) -> Field:
        return self.polys[0].field

    @property
    def dims(self) -> tuple[int, ...]:
        return self.structure.dims

    @property
    def degrees(self):
        return self.structure.degrees

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def permuted(self, perm_polys: Sequence[int]) -> "PolySystem":
        if sorted(perm_polys) != list(range(len(self.polys))):
            raise ValueError(f"{list(perm_polys)} is not a permutation of the polynomials")
        s = GradedStructure(self.dims, tuple(self.degrees[i] for i in perm_polys))
        return PolySystem(s, tuple(self.polys[i] for i in perm_polys))

    def scaled(self, k: int, c) -> "PolySystem":
        polys = list(self.polys)
        polys[k] = polys[k].scale(c)
        return PolySystem(self.structure, tuple(polys))


def random_poly(dims, degree: MultiDegree, field: Field, rng: random.Random) -> MultiPoly:
    terms = {e: field.random(rng) for e in monomial_basis(dims, degree)}
    return MultiPoly(dims, field, terms)


def random_system(s: GradedStructure, field: Field, seed: int) -> PolySystem:
    """Independent random coefficients for every monomial; deterministic in ``seed``."""
    rng = random.Random(seed)
    return PolySystem(s, tuple(random_poly(s.dims, d, field, rng) for d in s.degrees))


# ---- JSON -----------------------------------------------------------------


def system_to_json(f: PolySystem) -> dict:
    F = f.field
    polys = []
    for p, d in zip(f.polys, f.degrees):
        terms = [
            {"exps": [list(b) for b in split_blocks(e, f.dims)], "coeff": F.format(c)}
            for e, c in p.sorted_terms()
        ]
        polys.append({"degree": list(d), "terms": terms})
    return {"dims": list(f.dims), "field": F.spec, "polys": polys}


def system_from_json(obj: dict) -> PolySystem:
    try:
        dims = tuple(int(x) for x in obj["dims"])
        field = parse_field(obj.get("field", "Q"))
        polys, degrees = [], []
        for entry in obj["polys"]:
            degrees.append(tuple(int(x) for x in entry["degree"]))
            terms = []
            for t in entry["terms"]:
                blocks = [[int(a) for a in b] for b in t["exps"]]
                if len(blocks) != len(dims) or any(len(b) != nj + 1 for b, nj in zip(blocks, dims)):
                    raise StructureError(f"term exponents {t['exps']} do not match dims {list(dims)}")
                terms.append((blocks, field.parse(str(t["coeff"]))))
            polys.append(MultiPoly.from_block_terms(dims, field, terms))
    except (KeyError, TypeError) as exc:
        raise StructureError(f"malformed system JSON: {exc}") from None
    return PolySystem(GradedStructure(dims, tuple(degrees)), tuple(polys))


def load_system(path: str | Path) -> PolySystem:
    with open(path) as fh:
        return system_from_json(json.load(fh))


def dump_system(f: PolySystem, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(system_to_json(f), fh, indent=1)
