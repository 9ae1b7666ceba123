"""Command-line front end: ``multielim <command> ...``.

Exit status is 0 on success (or PASS), 1 when a check fails or a root count
cannot be certified, and 2 on usage errors and bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .checks import PROPERTIES, check_droprank, default_system
from .elim import (
    InadmissibleDegreeError,
    NotZeroDimensionalError,
    count_roots,
    elimination_matrix,
    hybrid_matrix,
    macaulay_matrix,
    shape_only,
)
from .exactfield import DEFAULT_PRIME, PrimeField, QQ, parse_field
from .exactla import MatrixSizeError, corank, write_mtx
from .forms import (
    InadmissibleIndexError,
    SylvesterIndex,
    jacobian_determinant,
    order_variant_jacobian,
    sylvester_form,
    twisted_jacobian,
)
from .mpoly import GradedStructure, StructureError, load_system, random_system, system_to_json
from .regions import admissible_nu, critical_degree, drop_of_rank_base, gamma


class UsageError(Exception):
    pass


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def parse_degrees(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(parse_ints(part) for part in text.split(";") if part.strip())


def _structure(args) -> GradedStructure:
    if not args.dims or not args.degrees:
        raise UsageError("give --dims and --degrees (or --system FILE)")
    return GradedStructure(parse_ints(args.dims), parse_degrees(args.degrees))


def _system(args, default_field=None):
    if getattr(args, "system", None):
        if args.dims or args.degrees:
            raise UsageError("--system cannot be combined with --dims/--degrees")
        return load_system(args.system)
    s = _structure(args)
    field = parse_field(args.field) if args.field else (default_field or PrimeField(DEFAULT_PRIME))
    return random_system(s, field, args.seed)


def _nu(args, s: GradedStructure, default=None) -> tuple[int, ...]:
    if args.nu:
        nu = parse_ints(args.nu)
        if len(nu) != s.r:
            raise UsageError(f"--nu needs {s.r} entries, got {len(nu)}")
        return nu
    if default is None:
        raise UsageError("--nu is required")
    return tuple(default)


def _fmt_region(region) -> list[str]:
    return [f"  base={o.base} signs={o.signs}" for o in region.orthants] or ["  (empty)"]


def cmd_regions(args, out) -> int:
    s = _structure(args)
    delta = critical_degree(s)
    print(f"delta = {delta}", file=out)
    for i in (0, 1, 2):
        print(f"Gamma_{i}:", file=out)
        for line in _fmt_region(gamma(s, i)):
            print(line, file=out)
    print(f"drop-of-rank base = {drop_of_rank_base(s)}", file=out)
    if args.nu:
        c = admissible_nu(s, _nu(args, s))
        extra = f" mu={c.mu}" if c.mu is not None else ""
        why = f" ({c.reason})" if c.reason else ""
        print(f"nu = {c.nu}: {c.kind}{extra} drop_of_rank={c.drop_of_rank}{why}", file=out)
    return 0


def cmd_matrix(args, out) -> int:
    f = _system(args)
    s = f.structure
    nu = _nu(args, s)
    if args.shape_only:
        rows, kos, syl = shape_only(s, nu)
        print(f"rows={rows} koszul={kos} sylvester={syl}", file=out)
        return 0
    E = hybrid_matrix(f, nu) if args.hybrid else macaulay_matrix(f, nu)
    dest = open(args.output, "w") if args.output else out
    try:
        if args.format == "mtx":
            write_mtx(E.matrix, dest)
        else:
            F = E.field
            payload = {
                "nu": list(E.nu),
                "field": F.spec,
                "shape": list(E.shape),
                "rows": [list(m) for m in E.rows],
                "koszul": [[i, list(m)] for i, m in E.koszul_tags],
                "sylvester": [str(idx) for idx in E.sylvester_tags],
                "columns": [{str(i): F.format(v) for i, v in sorted(c.items())} for c in E.columns],
            }
            json.dump(payload, dest)
            dest.write("\n")
    finally:
        if dest is not out:
            dest.close()
    if args.output:
        print(f"wrote {E.shape[0]}x{E.shape[1]} matrix to {args.output}", file=out)
    return 0


def cmd_sylvester(args, out) -> int:
    f = _system(args)
    idx = SylvesterIndex.parse(args.index) if args.index else SylvesterIndex.zero(f.dims)
    form = sylvester_form(f, idx)
    print(f"index = {idx}  degree = {form.multidegree()}  terms = {len(form)}", file=out)
    print(form, file=out)
    return 0


def cmd_jacobian(args, out) -> int:
    f = _system(args, default_field=QQ)
    if args.variant == "derivative":
        if f.field != QQ:
            raise UsageError("the derivative Jacobian is only defined over Q (use --field Q)")
        form = jacobian_determinant(f)
    elif args.perm_vars or args.perm_polys:
        pv = parse_degrees(args.perm_vars) if args.perm_vars else None
        pp = parse_ints(args.perm_polys) if args.perm_polys else None
        form = order_variant_jacobian(f, pv, pp)
    else:
        form = twisted_jacobian(f)
    print(f"degree = {form.multidegree()}  terms = {len(form)}", file=out)
    print(form, file=out)
    return 0


def cmd_corank(args, out) -> int:
    f = _system(args)
    nu = _nu(args, f.structure, default=drop_of_rank_base(f.structure))
    c = admissible_nu(f.structure, nu)
    if not c.admissible:
        raise UsageError(f"nu={nu} is not admissible: {c.reason}")
    E = elimination_matrix(f, nu)
    k = corank(E.matrix)
    kind = "H" if E.n_sylvester else "M"
    print(f"{kind}_{nu}: {E.shape[0]}x{E.shape[1]} corank={k}", file=out)
    return 0


def cmd_roots(args, out) -> int:
    f = _system(args)
    nu = _nu(args, f.structure, default=drop_of_rank_base(f.structure))
    try:
        k = count_roots(f, nu)
    except NotZeroDimensionalError as exc:
        print(str(exc), file=out)
        return 1
    print(f"roots = {k} (nu = {nu})", file=out)
    return 0


def cmd_verify(args, out) -> int:
    prop = args.property
    if prop == "droprank":
        s = _structure(args)
        fields = [parse_field(args.field)] if args.field else [PrimeField(DEFAULT_PRIME), PrimeField(2**31 - 19)]
        res = check_droprank(s, args.kappa, fields, args.seed)
    else:
        if args.system:
            f = _system(args)
        else:
            s = _structure(args)
            f = default_system(s, prop, parse_field(args.field) if args.field else None, args.seed)
        res = PROPERTIES[prop](f)
    print(res.summary(), file=out)
    if args.verbose or not res.passed:
        for line in res.lines:
            print("  " + line, file=out)
    return 0 if res.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="multielim",
        description="Multigraded elimination matrices, Sylvester forms and saturation checks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def system_args(sp, needs_system=True):
        sp.add_argument("--dims", help="projective dimensions, e.g. 1,1")
        sp.add_argument("--degrees", help="multidegrees separated by ';', e.g. '1,1;1,1;1,1'")
        if needs_system:
            sp.add_argument("--system", help="JSON file with explicit polynomials")
            sp.add_argument("--field", help="Q or Fp:<p> for generated systems (default Fp:2147483647)")
            sp.add_argument("--seed", type=int, default=0, help="seed for generated systems")

    sp = sub.add_parser("regions", help="print delta, Gamma_0..2 and classify a degree")
    system_args(sp, needs_system=False)
    sp.add_argument("--nu", help="degree to classify")
    sp.set_defaults(func=cmd_regions)

    sp = sub.add_parser("matrix", help="build M_nu or H_nu and export it")
    system_args(sp)
    sp.add_argument("--nu", required=True)
    sp.add_argument("--hybrid", action="store_true", help="append the Sylvester-form columns")
    sp.add_argument("--format", choices=("mtx", "json"), default="mtx")
    sp.add_argument("--output", "-o", help="write to this file instead of stdout")
    sp.add_argument("--shape-only", action="store_true", help="print dimensions without building")
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("sylvester", help="print a Sylvester form")
    system_args(sp)
    sp.add_argument("--index", help="e.g. '1,0;0,0' (default all zero)")
    sp.set_defaults(func=cmd_sylvester)

    sp = sub.add_parser("jacobian", help="twisted or derivative Jacobian")
    system_args(sp)
    sp.add_argument("--variant", choices=("twisted", "derivative"), default="twisted")
    sp.add_argument("--perm-vars", help="per-block variable orders, e.g. '1,0;0,1'")
    sp.add_argument("--perm-polys", help="polynomial order, e.g. 1,0,2")
    sp.set_defaults(func=cmd_jacobian)

    sp = sub.add_parser("corank", help="corank of the elimination matrix at nu")
    system_args(sp)
    sp.add_argument("--nu", help="default: smallest drop-of-rank degree")
    sp.set_defaults(func=cmd_corank)

    sp = sub.add_parser("roots", help="count roots of a zero-dimensional system")
    system_args(sp)
    sp.add_argument("--nu", help="default: smallest drop-of-rank degree")
    sp.set_defaults(func=cmd_roots)

    sp = sub.add_parser("verify", help="check a structural property on a generated instance")
    sp.add_argument("property", choices=sorted(PROPERTIES))
    system_args(sp)
    sp.add_argument("--kappa", type=int, default=1, help="number of planted roots (droprank)")
    sp.add_argument("--verbose", "-v", action="store_true")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, StructureError, InadmissibleDegreeError, InadmissibleIndexError,
            MatrixSizeError, ValueError, OSError) as exc:
        print(f"multielim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
