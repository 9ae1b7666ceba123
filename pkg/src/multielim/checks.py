"""Named verification properties, each returning a PASS/FAIL report.

These back the ``verify`` command and the acceptance tests.  All of them
assume generic coefficients (random systems) unless stated otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .elim import elimination_matrix, hybrid_matrix, macaulay_matrix
from .exactfield import Field, PrimeField, QQ
from .exactla import ColumnSpace, rank
from .forms import (
    degree_product,
    jacobian_determinant,
    sylvester_form,
    sylvester_indices,
    twisted_jacobian,
)
from .mpoly import GradedStructure, PolySystem, random_system
from .oracle import IdealComponents, koszul_compare, random_points, system_through_points
from .regions import critical_degree, drop_of_rank_base, gamma, gamma_region


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    lines: list[str] = field(default_factory=list)
    count: int = 0

    def record(self, ok: bool, line: str) -> None:
        self.count += 1
        if not ok:
            self.passed = False
            self.lines.append("FAIL " + line)

    def note(self, line: str) -> None:
        self.lines.append(line)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.count} checks"


def _window(upper: Sequence[int]):
    return itertools.product(*(range(u + 1) for u in upper))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def check_duality(f: PolySystem, ic: IdealComponents | None = None) -> CheckResult:
    """dim (I^sat/I)_mu = dim (C/I)_{delta - mu} for mu in [0, delta] outside Gamma_0 and Gamma_1."""
    s = f.structure
    ic = ic or IdealComponents.of(f)
    delta = critical_degree(s)
    bad_region = gamma(s, 0) | gamma(s, 1)
    res = CheckResult("duality")
    for mu in _window(delta):
        if mu in bad_region:
            continue
        sat = ic.saturation_component(mu)
        lhs = sat.quotient_dim
        rhs = ic.hilbert_function(_sub(delta, mu))
        res.record(lhs == rhs and sat.spot_check, f"mu={mu}: dim(Isat/I)={lhs}, dim(C/I)_(delta-mu)={rhs}")
        res.note(f"mu={mu} sat/I={lhs} dual={rhs}")
    return res


def check_multiplication(f: PolySystem) -> CheckResult:
    """x^beta Sylv_alpha is in I for beta != alpha and x^alpha Sylv_alpha - Sylv_0 is in I."""
    s = f.structure
    delta = critical_degree(s)
    space = ColumnSpace(macaulay_matrix(f, delta).matrix)
    lam = twisted_jacobian(f)
    res = CheckResult("multiplication")
    res.record(not space.contains(lam.coefficient_vector(delta)), "twisted Jacobian lies in I_delta")
    for mu in itertools.product(*(range(m) for m in s.min_degrees)):
        idxs = sylvester_indices(s, mu)
        forms = {a: sylvester_form(f, a) for a in idxs}
        for a in idxs:
            for b in idxs:
                v = forms[a].mul_monomial(b.exponent)
                if a == b:
                    v = v - lam
                ok = space.contains(v.coefficient_vector(delta))
                what = "x^a Sylv_a - Sylv_0" if a == b else "x^b Sylv_a"
                res.record(ok, f"alpha={a} beta={b}: {what} not in I_delta")
    res.note(f"delta={delta}, codim I_delta={space.codim}")
    return res


def check_basis(f: PolySystem, ic: IdealComponents | None = None) -> CheckResult:
    """At each hybrid degree the Sylvester columns are independent modulo I and span (I^sat/I)_nu."""
    s = f.structure
    ic = ic or IdealComponents.of(f)
    delta = critical_degree(s)
    res = CheckResult("basis")
    for mu in itertools.product(*(range(m) for m in s.min_degrees)):
        nu = _sub(delta, mu)
        H = hybrid_matrix(f, nu)
        r_h = H.rank()
        r_k = rank(H.koszul_block())
        sat = ic.saturation_component(nu)
        res.record(r_h == r_k + H.n_sylvester,
                   f"nu={nu}: rank H={r_h}, rank M={r_k}, sylvester columns={H.n_sylvester}")
        res.record(sat.quotient_dim == H.n_sylvester and sat.spot_check,
                   f"nu={nu}: oracle dim(Isat/I)={sat.quotient_dim}, sylvester columns={H.n_sylvester}")
        res.note(f"nu={nu} rankH={r_h} rankM={r_k} sylv={H.n_sylvester} sat/I={sat.quotient_dim}")
    return res


def check_koszul(f: PolySystem, upper: Sequence[int] | None = None) -> CheckResult:
    """Syzygies of degree mu outside Gamma_2 are spanned by Koszul syzygies."""
    s = f.structure
    upper = tuple(upper) if upper is not None else tuple(
        d + max(deg[j] for deg in s.degrees) for j, d in enumerate(critical_degree(s))
    )
    g2 = gamma(s, 2)
    res = CheckResult("koszul")
    for mu in _window(upper):
        if mu in g2:
            continue
        rep = koszul_compare(f, mu)
        res.record(rep.equal, f"mu={mu}: kernel {rep.kernel_dim}, koszul {rep.koszul_dim}, "
                              f"contained={rep.contained}")
    return res


def check_jacobian(f: PolySystem) -> CheckResult:
    """J - (prod d_ij) Lambda_0 lies in I_delta (over Q)."""
    s = f.structure
    delta = critical_degree(s)
    space = ColumnSpace(macaulay_matrix(f, delta).matrix)
    J = jacobian_determinant(f)
    lam = twisted_jacobian(f)
    k = degree_product(s)
    res = CheckResult("jacobian")
    res.record(space.contains((J - lam.scale(k)).coefficient_vector(delta)),
               f"J - {k} * Lambda_0 is not in I_delta")
    res.record(not space.contains(lam.coefficient_vector(delta)), "Lambda_0 lies in I_delta")
    res.note(f"delta={delta}, factor={k}")
    return res


def drop_of_rank_degrees(s: GradedStructure) -> list[tuple[int, ...]]:
    """The base of the drop-of-rank region and its shifts by 0/1 vectors."""
    base = drop_of_rank_base(s)
    return [tuple(b + e for b, e in zip(base, E)) for E in itertools.product((0, 1), repeat=s.r)]


def droprank_coranks(s: GradedStructure, kappa: int, field: Field, seed: int,
                     degrees: Sequence[Sequence[int]] | None = None) -> dict:
    pts = random_points(s, kappa, field, seed)
    f = system_through_points(s, pts, field, seed + 1)
    return {nu: elimination_matrix(f, nu).corank() for nu in (degrees or drop_of_rank_degrees(s))}


def check_droprank(s: GradedStructure, kappa: int, fields: Sequence[Field], seed: int) -> CheckResult:
    """Systems through kappa random points have corank kappa at every tested degree."""
    res = CheckResult("droprank")
    for F in fields:
        cor = droprank_coranks(s, kappa, F, seed)
        for nu, c in cor.items():
            res.record(c == kappa, f"{F.spec} nu={nu}: corank {c} != kappa {kappa}")
        res.note(f"{F.spec}: " + ", ".join(f"{nu}->{c}" for nu, c in cor.items()))
    return res


def check_elimination_ideal(f: PolySystem, upper: Sequence[int] | None = None) -> CheckResult:
    """Without the last form, I^sat_mu = I_mu for mu outside Gamma_1 of the smaller system."""
    polys = list(f.polys[:-1])
    degrees = list(f.degrees[:-1])
    ic = IdealComponents(f.dims, polys, degrees)
    g1 = gamma_region(f.dims, degrees, 1)
    upper = tuple(upper) if upper is not None else critical_degree(f.structure)
    res = CheckResult("elimination")
    for mu in _window(upper):
        if mu in g1:
            continue
        sat = ic.saturation_component(mu)
        res.record(sat.quotient_dim == 0, f"mu={mu}: dim(Isat/I)={sat.quotient_dim}")
    return res


PROPERTIES: dict[str, Callable] = {
    "duality": check_duality,
    "multiplication": check_multiplication,
    "basis": check_basis,
    "koszul": check_koszul,
    "jacobian": check_jacobian,
    "droprank": check_droprank,
    "elimination": check_elimination_ideal,
}


def default_system(s: GradedStructure, prop: str, field: Field | None, seed: int) -> PolySystem:
    if field is None:
        field = QQ if prop == "jacobian" else PrimeField()
    return random_system(s, field, seed)


__all__ = [
    "CheckResult", "PROPERTIES", "check_basis", "check_droprank", "check_duality",
    "check_elimination_ideal", "check_jacobian", "check_koszul", "check_multiplication",
    "default_system", "drop_of_rank_degrees", "droprank_coranks",
]
