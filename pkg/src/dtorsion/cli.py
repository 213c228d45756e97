"""Command line front end.

Every subcommand prints a deterministic byte stream: tab-separated text by
default, or one line of stable JSON under ``--json``.  Phases always appear
as reduced fractions ``k/N`` of a full turn, never as floating point, and
cohomology classes are addressed by their index in the deterministic
``enumerate_class_representatives`` order.

Exit codes: 0 on success, 1 on domain errors (bad group spec, out-of-range
class index, failed verification, unreadable file), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .cech import (
    BundleEquivariantStructure,
    GerbeEquivariantStructure,
    bundle_difference_character,
    extract_discrete_torsion,
    format_site,
    gerbe_difference_data,
    parse_cech_document,
)
from .cochains import Cochain, format_cochain
from .cohomology import cohomology_u1, enumerate_class_representatives
from .complexes import (
    cell_counts,
    euler_char,
    inertia_components,
    orbifold_euler_conjugacy,
    orbifold_euler_sum,
    parse_complex,
)
from .errors import DTorsionError, ShapeError, SiteError
from .groups import (
    FiniteGroup,
    abelianization,
    commuting_pairs,
    conjugacy_classes,
    exponent,
    parse_group_spec,
)
from .phases import CyclotomicSum
from .projrep import twisted_regular_rep, twisted_rep_report
from .torsion import assemble_partition, epsilon_table, membrane_phase, sector_orbit

FORMAT_VERSION = "dtorsion/1"


def _emit_lines(lines: Sequence[str]) -> None:
    sys.stdout.write("\n".join(lines) + "\n")


def _emit_json(command: str, payload: dict) -> None:
    doc = {"format": FORMAT_VERSION, "command": command}
    doc.update(payload)
    sys.stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")


def _intlist(values) -> str:
    return "[" + ",".join(str(v) for v in values) + "]"


def _render_sum(z: CyclotomicSum) -> str:
    """Exact text for a cyclotomic sum: a rational, or coefficient terms
    on e(i/n) = exp(2*pi*i*i/n)."""
    if z.is_rational():
        return str(z.rational_value())
    parts = []
    for i, c in enumerate(z.coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        elif c == 1:
            parts.append(f"e({i}/{z.order})")
        else:
            parts.append(f"{c}*e({i}/{z.order})")
    return " + ".join(parts) if parts else "0"


def _group(args) -> FiniteGroup:
    return parse_group_spec(args.group)


def _class_rep(group: FiniteGroup, degree: int, index: int) -> Cochain:
    reps = enumerate_class_representatives(group, degree)
    if not 0 <= index < len(reps):
        raise ShapeError(
            f"class index {index} is out of range; degree {degree} has "
            f"{len(reps)} classes"
        )
    return reps[index]


def _cmd_info(args) -> int:
    group = _group(args)
    classes = conjugacy_classes(group).classes
    factors = abelianization(group).invariant_factors
    if args.json:
        _emit_json(
            "info",
            {
                "group": group.name,
                "order": len(group),
                "conjugacy_classes": len(classes),
                "exponent": exponent(group),
                "abelianization": list(factors),
            },
        )
        return 0
    _emit_lines(
        [
            f"group\t{group.name}",
            f"order\t{len(group)}",
            f"conjugacy_classes\t{len(classes)}",
            f"exponent\t{exponent(group)}",
            f"abelianization\t{_intlist(factors)}",
        ]
    )
    return 0


def _cmd_cohomology(args) -> int:
    group = _group(args)
    h = cohomology_u1(group, args.degree, args.modulus)
    factors = h.invariant_factors
    if args.json:
        _emit_json(
            "cohomology",
            {
                "group": group.name,
                "degree": args.degree,
                "modulus": h.space.modulus,
                "invariant_factors": list(factors),
                "order": h.order,
            },
        )
        return 0
    name = " x ".join(f"Z/{f}" for f in factors) if factors else "trivial"
    _emit_lines([f"H^{args.degree}(G,U(1)) = {name}"])
    return 0


def _cmd_cocycles(args) -> int:
    group = _group(args)
    h = cohomology_u1(group, args.degree, args.modulus)
    reps = h.representatives()
    if args.class_index is not None:
        if not 0 <= args.class_index < len(reps):
            raise ShapeError(
                f"class index {args.class_index} is out of range; "
                f"{len(reps)} classes exist"
            )
        rep = reps[args.class_index]
        coords = h.classify(rep)
        if args.json:
            entries = [
                [*rep.space.args_of(i), int(v)]
                for i, v in enumerate(rep.table)
                if v
            ]
            _emit_json(
                "cocycles",
                {
                    "group": group.name,
                    "degree": args.degree,
                    "modulus": h.space.modulus,
                    "class": args.class_index,
                    "coordinates": list(coords),
                    "entries": entries,
                },
            )
            return 0
        _emit_lines(
            [
                f"group\t{group.name}",
                f"class\t{args.class_index}",
                f"coordinates\t{_intlist(coords)}",
            ]
        )
        sys.stdout.write(format_cochain(rep))
        return 0
    rows = []
    for i, rep in enumerate(reps):
        coords = h.classify(rep)
        rows.append((i, coords, int((rep.table != 0).sum())))
    if args.json:
        _emit_json(
            "cocycles",
            {
                "group": group.name,
                "degree": args.degree,
                "modulus": h.space.modulus,
                "invariant_factors": list(h.invariant_factors),
                "classes": [
                    {"index": i, "coordinates": list(c), "nonzero": nz}
                    for i, c, nz in rows
                ],
            },
        )
        return 0
    lines = [
        f"group\t{group.name}",
        f"degree\t{args.degree}",
        f"modulus\t{h.space.modulus}",
        f"invariant_factors\t{_intlist(h.invariant_factors)}",
        f"classes\t{len(reps)}",
    ]
    for i, coords, nz in rows:
        lines.append(f"class\t{i}\tcoordinates\t{_intlist(coords)}\tnonzero\t{nz}")
    _emit_lines(lines)
    return 0


def _cmd_phases(args) -> int:
    group = _group(args)
    omega = _class_rep(group, 2, args.class_index)
    table = epsilon_table(omega)
    if args.quotient_conjugation:
        orbits: dict = {}
        for (g, h), ph in table.items():
            rep = sector_orbit(group, g, h)
            if rep not in orbits:
                orbits[rep] = [ph, 0]
            orbits[rep][1] += 1
        rows = [(g, h, str(ph), size) for (g, h), (ph, size) in orbits.items()]
        header = "g\th\tphase\torbit_size"
    else:
        rows = [(g, h, str(ph)) for (g, h), ph in table.items()]
        header = "g\th\tphase"
    if args.json:
        _emit_json(
            "phases",
            {
                "group": group.name,
                "class": args.class_index,
                "quotient_conjugation": bool(args.quotient_conjugation),
                "rows": [list(r) for r in rows],
            },
        )
        return 0
    lines = [f"group\t{group.name}", f"class\t{args.class_index}", header]
    lines.extend("\t".join(str(x) for x in r) for r in rows)
    _emit_lines(lines)
    return 0


def _cmd_partition(args) -> int:
    group = _group(args)
    omega = _class_rep(group, 2, args.class_index)
    table = assemble_partition(group, omega)
    terms = table.symbolic_terms()
    unit = assemble_partition(group, omega, lambda sector: Fraction(1)).value()
    if args.json:
        _emit_json(
            "partition",
            {
                "group": group.name,
                "class": args.class_index,
                "prefactor": str(table.normalization),
                "terms": [[token, _render_sum(z)] for token, z in terms],
                "unit_value": _render_sum(unit),
            },
        )
        return 0
    lines = [
        f"group\t{group.name}",
        f"class\t{args.class_index}",
        f"prefactor\t{table.normalization}",
    ]
    for token, z in terms:
        lines.append(f"term\t{token}\t{_render_sum(z)}")
    lines.append(f"unit_value\t{_render_sum(unit)}")
    _emit_lines(lines)
    return 0


def _cmd_membrane(args) -> int:
    group = _group(args)
    omega = _class_rep(group, 3, args.class_index)
    n = len(group)
    rows = []
    for g1 in range(n):
        for g2 in range(n):
            if not group.commutes(g1, g2):
                continue
            for g3 in range(n):
                if group.commutes(g1, g3) and group.commutes(g2, g3):
                    rows.append(
                        (g1, g2, g3, str(membrane_phase(omega, g1, g2, g3)))
                    )
    if args.json:
        _emit_json(
            "membrane",
            {
                "group": group.name,
                "class": args.class_index,
                "rows": [list(r) for r in rows],
            },
        )
        return 0
    lines = [f"group\t{group.name}", f"class\t{args.class_index}", "g1\tg2\tg3\tphase"]
    lines.extend("\t".join(str(x) for x in r) for r in rows)
    _emit_lines(lines)
    return 0


def _read_file(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _cmd_euler(args) -> int:
    group = _group(args)
    complex_ = parse_complex(_read_file(args.complex), group)
    counts = cell_counts(complex_)
    plain = euler_char(complex_)
    stringy = orbifold_euler_sum(complex_)
    conjugacy_form = orbifold_euler_conjugacy(complex_)
    if args.json:
        _emit_json(
            "euler",
            {
                "group": group.name,
                "cells": list(counts),
                "euler": plain,
                "orbifold_euler": int(stringy),
                "orbifold_euler_conjugacy": conjugacy_form,
            },
        )
        return 0
    _emit_lines(
        [
            f"group\t{group.name}",
            f"cells\t{','.join(str(c) for c in counts)}",
            f"euler\t{plain}",
            f"orbifold_euler\t{int(stringy)}",
            f"orbifold_euler_conjugacy\t{conjugacy_form}",
        ]
    )
    return 0


def _cmd_inertia(args) -> int:
    group = _group(args)
    complex_ = parse_complex(_read_file(args.complex), group)
    report = inertia_components(complex_)
    if args.json:
        _emit_json(
            "inertia",
            {
                "group": group.name,
                "total": report.total,
                "components": [
                    {
                        "representative": c.representative,
                        "class_size": c.class_size,
                        "centralizer_order": c.centralizer_order,
                        "cells": list(c.cell_counts),
                        "euler_fixed": c.euler_fixed,
                        "euler_quotient": c.euler_quotient,
                    }
                    for c in report.components
                ],
            },
        )
        return 0
    lines = [
        f"group\t{group.name}",
        f"total\t{report.total}",
        "representative\tclass_size\tcentralizer_order\tcells\teuler_fixed\teuler_quotient",
    ]
    for c in report.components:
        cells = ",".join(str(x) for x in c.cell_counts)
        lines.append(
            f"{c.representative}\t{c.class_size}\t{c.centralizer_order}\t"
            f"{cells}\t{c.euler_fixed}\t{c.euler_quotient}"
        )
    _emit_lines(lines)
    return 0


def _cmd_projrep(args) -> int:
    group = _group(args)
    omega = _class_rep(group, 2, args.class_index)
    report = twisted_rep_report(group, omega, class_id=str(args.class_index))
    payload = {
        "group": group.name,
        "class": args.class_index,
        "regular_class_count": report.regular_class_count,
        "dimensions": list(report.dimensions),
        "relation_passed": report.relation_passed,
        "squares_sum_to_order": report.squares_sum_to_order,
        "count_matches_classes": report.count_matches_classes,
    }
    matrix_rows: List[tuple] = []
    if args.emit_matrices:
        rep = twisted_regular_rep(group, omega)
        for g in range(len(group)):
            for row, col, ph in rep[g].triples():
                matrix_rows.append((g, row, col, str(ph)))
    if args.json:
        if args.emit_matrices:
            payload["matrices"] = [list(r) for r in matrix_rows]
        _emit_json("projrep", payload)
        return 0
    lines = [
        f"group\t{group.name}",
        f"class\t{args.class_index}",
        f"regular_class_count\t{report.regular_class_count}",
        f"dimensions\t{_intlist(report.dimensions)}",
        f"relation_passed\t{'true' if report.relation_passed else 'false'}",
        f"squares_sum_to_order\t{'true' if report.squares_sum_to_order else 'false'}",
        f"count_matches_classes\t{'true' if report.count_matches_classes else 'false'}",
    ]
    if args.emit_matrices:
        lines.append("matrix\tg\trow\tcol\tphase")
        lines.extend(
            f"matrix\t{g}\t{row}\t{col}\t{ph}" for g, row, col, ph in matrix_rows
        )
    _emit_lines(lines)
    return 0


def _cmd_cech_verify(args) -> int:
    doc = parse_cech_document(_read_file(args.file))
    report = doc.verify()
    if args.json:
        _emit_json(
            "cech.verify",
            {
                "kind": doc.kind,
                "passed": report.passed,
                "violations": [
                    {
                        "relation": v.relation,
                        "component": v.component,
                        "elements": list(v.elements),
                    }
                    for v in report.violations
                ],
            },
        )
    else:
        _emit_lines([str(report)])
    return 0 if report.passed else 1


def _cmd_cech_diff(args) -> int:
    doc1 = parse_cech_document(_read_file(args.file1))
    doc2 = parse_cech_document(_read_file(args.file2))
    if doc1.kind != doc2.kind:
        raise SiteError(f"cannot diff a {doc1.kind} file against a {doc2.kind} file")
    if format_site(doc1.site) != format_site(doc2.site):
        raise SiteError("the two files describe different sites")
    site = doc1.site
    if doc1.kind == "bundle":
        if doc1.bundle.values != doc2.bundle.values:
            raise SiteError("the two files carry different transition cocycles")
        s2 = BundleEquivariantStructure(site, doc2.bundle_structure.phases)
        diff = bundle_difference_character(doc1.bundle_structure, s2)
        if isinstance(diff, dict):
            rows = [
                (piece, g, str(char(g)))
                for piece, char in diff.items()
                for g in range(len(site.group))
            ]
            header = "piece\tg\tphase"
        else:
            rows = [(g, str(diff(g))) for g in range(len(site.group))]
            header = "g\tphase"
        if args.json:
            _emit_json(
                "cech.diff",
                {"kind": "bundle", "rows": [list(r) for r in rows]},
            )
            return 0
        lines = ["kind\tbundle", header]
        lines.extend("\t".join(str(x) for x in r) for r in rows)
        _emit_lines(lines)
        return 0
    if doc1.gerbe.values != doc2.gerbe.values:
        raise SiteError("the two files carry different gerbe cocycles")
    s2g = GerbeEquivariantStructure(
        site, doc2.gerbe_structure.nu, doc2.gerbe_structure.connecting
    )
    d = gerbe_difference_data(doc1.gerbe_structure, s2g)
    t_rows = [
        (g, comp, str(ph))
        for (g, comp), ph in d.transitions.items()
        if not ph.is_one
    ]
    w_rows = [
        (g1, g2, comp, str(ph))
        for (g1, g2, comp), ph in d.connecting.items()
        if not ph.is_one
    ]
    trivial_t = not t_rows
    extracted = extract_discrete_torsion(d) if trivial_t else None
    if args.json:
        payload = {
            "kind": "gerbe",
            "transitions": [list(r) for r in t_rows],
            "connecting": [list(r) for r in w_rows],
        }
        if extracted is not None:
            payload["coordinates"] = list(extracted.coordinates)
            payload["invariant_factors"] = list(
                extracted.cohomology.invariant_factors
            )
        _emit_json("cech.diff", payload)
        return 0
    lines = ["kind\tgerbe"]
    lines.extend(f"T\t{g}\t{comp}\t{ph}" for g, comp, ph in t_rows)
    lines.extend(f"omega\t{g1}\t{g2}\t{comp}\t{ph}" for g1, g2, comp, ph in w_rows)
    if extracted is not None:
        lines.append(f"extracted\t{extracted}")
        lines.append(f"coordinates\t{_intlist(extracted.coordinates)}")
        lines.append(
            f"invariant_factors\t{_intlist(extracted.cohomology.invariant_factors)}"
        )
    else:
        lines.append("extracted\tnone (transitions are nontrivial)")
    _emit_lines(lines)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json", action="store_true", help="emit one line of stable JSON"
    )
    parser = argparse.ArgumentParser(
        prog="dtorsion",
        description="exact discrete-torsion computations for finite groups",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("info", parents=[common], help="group summary")
    p.add_argument("group")
    p.set_defaults(func=_cmd_info)

    p = sub.add_parser(
        "cohomology", parents=[common], help="invariant factors of H^p(G,U(1))"
    )
    p.add_argument("group")
    p.add_argument("-p", "--degree", type=int, default=2)
    p.add_argument("--modulus", type=int, default=None)
    p.set_defaults(func=_cmd_cohomology)

    p = sub.add_parser(
        "cocycles", parents=[common], help="canonical class representatives"
    )
    p.add_argument("group")
    p.add_argument("-p", "--degree", type=int, default=2)
    p.add_argument("--modulus", type=int, default=None)
    p.add_argument("--class", dest="class_index", type=int, default=None)
    p.set_defaults(func=_cmd_cocycles)

    p = sub.add_parser(
        "phases", parents=[common], help="commuting-pair phase table for a class"
    )
    p.add_argument("group")
    p.add_argument("--class", dest="class_index", type=int, default=0)
    p.add_argument(
        "--quotient-conjugation",
        action="store_true",
        help="one row per conjugation orbit of sectors",
    )
    p.set_defaults(func=_cmd_phases)

    p = sub.add_parser(
        "partition", parents=[common], help="sector sum shape for a class"
    )
    p.add_argument("group")
    p.add_argument("--class", dest="class_index", type=int, default=0)
    p.set_defaults(func=_cmd_partition)

    p = sub.add_parser(
        "membrane", parents=[common], help="three-element phases for a degree-3 class"
    )
    p.add_argument("group")
    p.add_argument("--class", dest="class_index", type=int, default=0)
    p.set_defaults(func=_cmd_membrane)

    p = sub.add_parser(
        "euler", parents=[common], help="orbifold Euler characteristics of a complex"
    )
    p.add_argument("group")
    p.add_argument("complex", help="complex file")
    p.set_defaults(func=_cmd_euler)

    p = sub.add_parser(
        "inertia", parents=[common], help="per-class fixed loci and quotients"
    )
    p.add_argument("group")
    p.add_argument("complex", help="complex file")
    p.set_defaults(func=_cmd_inertia)

    p = sub.add_parser(
        "projrep", parents=[common], help="twisted regular representation report"
    )
    p.add_argument("group")
    p.add_argument("--class", dest="class_index", type=int, default=0)
    p.add_argument(
        "--emit-matrices",
        action="store_true",
        help="dump the matrices as (g, row, col, phase) rows",
    )
    p.set_defaults(func=_cmd_projrep)

    p = sub.add_parser("cech", parents=[], help="verify or diff site documents")
    cech_sub = p.add_subparsers(dest="cech_mode", required=True)
    pv = cech_sub.add_parser("verify", parents=[common])
    pv.add_argument("file")
    pv.set_defaults(func=_cmd_cech_verify)
    pd = cech_sub.add_parser("diff", parents=[common])
    pd.add_argument("file1")
    pd.add_argument("file2")
    pd.set_defaults(func=_cmd_cech_diff)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except DTorsionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
