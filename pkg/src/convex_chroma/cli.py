"""Command-line front end: generate families, color/partition them, verify
every inequality the bounds promise, and export DIMACS/SVG/CSV.

Exit codes: 0 all checks pass, 2 a bound or properness check failed, 3 a
solver cap was exceeded (partial report), 4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .constructions import (
    ConstructionError,
    grid_family,
    pentagon_disjoint_family,
    pentagon_family,
    random_family,
)
from .covering import (
    CoveringCertificate,
    cover_by_translates,
    difference_cover_ceiling,
    known_certificate,
)
from .families import Family, dumps_family, family_digest, load_family, save_family
from .geometry import ConvexBody, GeometryError, minkowski_sum, reflect
from .graph_core import (
    IntersectionGraph,
    SolverCaps,
    build_graph,
    chromatic_number,
    clique_cover_number,
    max_clique,
    max_independent_set,
    to_dimacs,
    verify_clique_partition,
    verify_coloring,
)
from .homothet_coloring import (
    clique_partition_homothets,
    color_homothets,
    color_translates_symmetrized,
    symmetrized_certificate,
)
from .reports import InequalityCheck, RunReport, canonical_json
from .translate_coloring import clique_partition_translates, color_translates

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_CAPPED = 3
EXIT_INPUT = 4

CAPS_ENV = "CONVEX_CHROMA_CAPS"


def _parse_caps(text: str | None) -> SolverCaps:
    caps = SolverCaps()
    if not text:
        return caps
    values = {"omega": caps.omega, "chi": caps.chi}
    for part in text.split(","):
        if not part.strip():
            continue
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in values:
            raise ValueError(f"unknown cap {key!r} (expected omega/chi)")
        values[key] = int(val)
    return SolverCaps(omega=values["omega"], chi=values["chi"])


def _resolve_caps(arg: str | None) -> SolverCaps:
    return _parse_caps(os.environ.get(CAPS_ENV) or arg)


def _named_body(name: str, sides: str | None = None) -> ConvexBody:
    if name == "square":
        return ConvexBody.unit_square()
    if name == "disk":
        return ConvexBody.disk()
    if name == "triangle":
        return ConvexBody.polygon([(0, 0), (1, 0), (0, 1)])
    if name == "box":
        if not sides:
            raise ValueError("--sides is required for --body box")
        return ConvexBody.box([float(s) for s in sides.split(",")])
    raise ValueError(f"unknown body {name!r} (square, disk, triangle, box)")


def _difference_certificate(body: ConvexBody, samples: int) -> CoveringCertificate:
    """kappa(C-C, C) certificate: known for boxes/disk, constructed otherwise."""
    cert = known_certificate(body, samples=samples)
    if cert is not None:
        return cert
    target = minkowski_sum(body, reflect(body))
    return cover_by_translates(target, body, samples=samples)


def _write_report(report: RunReport, out_path: str | None) -> None:
    text = canonical_json(report.to_json())
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(checks: list[InequalityCheck], capped: bool) -> int:
    if any(not c.passed for c in checks):
        return EXIT_VIOLATION
    if capped:
        return EXIT_CAPPED
    return EXIT_OK


def _check(name: str, lhs: float, rhs: float) -> InequalityCheck:
    return InequalityCheck(name=name, lhs=float(lhs), rhs=float(rhs), passed=bool(lhs <= rhs))


def _flag(name: str, ok: bool) -> InequalityCheck:
    return InequalityCheck(name=name, lhs=0.0 if ok else 1.0, rhs=0.0, passed=bool(ok))


def cmd_generate(args) -> int:
    seed = args.seed
    if args.construction == "pentagon":
        family = pentagon_family(args.k)
    elif args.construction == "pentagon-disjoint":
        family = pentagon_disjoint_family(args.k)
    elif args.construction == "grid":
        family = grid_family(_named_body(args.body, args.sides), args.m)
    elif args.construction == "random":
        lo, hi = (float(v) for v in args.window.split(","))
        slo, shi = (float(v) for v in args.scales.split(","))
        family = random_family(
            _named_body(args.body, args.sides), args.count, (lo, hi),
            scale_range=(slo, shi), seed=seed,
        )
    else:
        raise ValueError(f"unknown construction {args.construction!r}")
    if args.out:
        save_family(family, args.out)
    else:
        sys.stdout.write(dumps_family(family))
    print(f"generated {len(family)} members ({args.construction})", file=sys.stderr)
    return EXIT_OK


def _color_once(family: Family, g: IntersectionGraph, method: str, seed: int,
                caps: SolverCaps, samples: int):
    """Run one coloring method; returns (report, checks, capped, oracles)."""
    omega_res = max_clique(g, cap=caps.omega)
    capped = omega_res.capped
    omega = None if capped else omega_res.value
    checks: list[InequalityCheck] = []
    if method == "translates":
        if not family.is_translate_family:
            raise GeometryError("the translates method needs a uniform-scale family")
        rep = color_translates(family, seed=seed)
        bound = None if omega is None else rep.params["t_bound"] * omega
    elif method == "symmetrized":
        if not family.is_translate_family:
            raise GeometryError("the symmetrized method needs a uniform-scale family")
        cert = symmetrized_certificate(family.body)
        rep = color_translates_symmetrized(family, seed=seed, cert=cert, omega=omega)
        bound = rep.bound_value if omega is not None else None
    elif method == "homothets":
        cert = _difference_certificate(family.body, samples)
        rep = color_homothets(family, cert, omega=omega, graph=g)
        bound = rep.bound_value if omega is not None else None
    else:
        raise ValueError(f"unknown method {method!r}")
    checks.append(_flag(f"coloring[{method}]_proper", verify_coloring(g, list(rep.colors))))
    if bound is not None and len(family) > 0:
        checks.append(_check(f"colors[{method}]<=bound", rep.colors_used, bound))
        checks.append(_check(f"omega<=colors[{method}]", omega, rep.colors_used))
    oracles = {"omega": omega, "omega_capped": capped}
    if rep.kappa_ub is not None:
        oracles["kappa_ub"] = rep.kappa_ub
        oracles["kappa_ceiling_ref"] = difference_cover_ceiling(family.body.dimension)
    return rep, checks, capped, oracles


def cmd_color(args) -> int:
    caps = _resolve_caps(args.caps)
    family = load_family(args.input)
    g = build_graph(family, family_ref=family_digest(family))
    t0 = time.perf_counter()
    rep, checks, capped, oracles = _color_once(
        family, g, args.method, args.seed, caps, args.samples
    )
    wall = (time.perf_counter() - t0) * 1000
    report = RunReport(
        command=f"color --method {args.method}",
        input_digest=family_digest(family),
        seed=args.seed,
        outputs={"coloring": rep.to_json()},
        oracles=oracles,
        checks=tuple(checks),
        capped=capped,
        wall_time_ms=wall,
    )
    _write_report(report, args.out)
    print(f"colors used: {rep.colors_used} (wall {wall:.1f} ms)", file=sys.stderr)
    return _exit_code(checks, capped)


def _partition_once(family: Family, g: IntersectionGraph, method: str, seed: int,
                    caps: SolverCaps, samples: int):
    nu_res = max_independent_set(g, cap=caps.omega)
    capped = nu_res.capped
    nu = None if capped else nu_res.value
    checks: list[InequalityCheck] = []
    if method == "translates":
        if not family.is_translate_family:
            raise GeometryError("the translates method needs a uniform-scale family")
        rep = clique_partition_translates(family, seed=seed)
        bound = None if nu is None else rep.params["t_bound"] * nu
    elif method == "symmetrized":
        if not family.is_translate_family:
            raise GeometryError("the symmetrized method needs a uniform-scale family")
        cert = symmetrized_certificate(family.body)
        k_family = Family(body=cert.unit, placements=family.placements, meta=dict(family.meta))
        rep = clique_partition_homothets(k_family, cert, nu=nu, graph=g)
        bound = rep.bound_value if nu is not None else None
    elif method == "homothets":
        cert = _difference_certificate(family.body, samples)
        rep = clique_partition_homothets(family, cert, nu=nu, graph=g)
        bound = rep.bound_value if nu is not None else None
    else:
        raise ValueError(f"unknown method {method!r}")
    checks.append(_flag(
        f"partition[{method}]_cliques", verify_clique_partition(g, list(rep.classes_assign))
    ))
    if bound is not None and len(family) > 0:
        checks.append(_check(f"classes[{method}]<=bound", rep.classes_used, bound))
        checks.append(_check(f"nu<=classes[{method}]", nu, rep.classes_used))
    oracles = {"nu": nu, "nu_capped": capped}
    if rep.kappa_ub is not None:
        oracles["kappa_ub"] = rep.kappa_ub
        oracles["kappa_ceiling_ref"] = difference_cover_ceiling(family.body.dimension)
    return rep, checks, capped, oracles


def cmd_partition(args) -> int:
    caps = _resolve_caps(args.caps)
    family = load_family(args.input)
    g = build_graph(family, family_ref=family_digest(family))
    t0 = time.perf_counter()
    rep, checks, capped, oracles = _partition_once(
        family, g, args.method, args.seed, caps, args.samples
    )
    wall = (time.perf_counter() - t0) * 1000
    report = RunReport(
        command=f"partition --method {args.method}",
        input_digest=family_digest(family),
        seed=args.seed,
        outputs={"partition": rep.to_json()},
        oracles=oracles,
        checks=tuple(checks),
        capped=capped,
        wall_time_ms=wall,
    )
    _write_report(report, args.out)
    print(f"classes used: {rep.classes_used} (wall {wall:.1f} ms)", file=sys.stderr)
    return _exit_code(checks, capped)


def cmd_verify(args) -> int:
    caps = _resolve_caps(args.caps)
    family = load_family(args.input)
    g = build_graph(family, family_ref=family_digest(family))
    t0 = time.perf_counter()
    checks: list[InequalityCheck] = []
    oracles: dict = {"members": len(family), "edges": len(g.edges())}

    omega_res = max_clique(g, cap=caps.omega)
    nu_res = max_independent_set(g, cap=caps.omega)
    chi_res = chromatic_number(g, cap=caps.chi)
    theta_res = clique_cover_number(g, cap=caps.chi)
    capped = any(r.capped for r in (omega_res, nu_res, chi_res, theta_res))
    omega = None if omega_res.capped else omega_res.value
    nu = None if nu_res.capped else nu_res.value
    chi = None if chi_res.capped else chi_res.value
    theta = None if theta_res.capped else theta_res.value
    oracles.update({"omega": omega, "nu": nu, "chi": chi, "theta": theta})

    if len(family) > 0:
        if omega is not None and chi is not None:
            checks.append(_check("omega<=chi", omega, chi))
        if nu is not None and theta is not None:
            checks.append(_check("nu<=theta", nu, theta))

    outputs: dict = {}
    methods = (
        ["translates", "symmetrized"] if family.is_translate_family and len(family) else
        (["homothets"] if len(family) else [])
    )
    for method in methods:
        crep, cchecks, _, _ = _color_once(family, g, method, args.seed, caps, args.samples)
        outputs[f"coloring_{method}"] = crep.to_json()
        checks.extend(cchecks)
        if chi is not None and len(family) > 0:
            checks.append(_check(f"chi<=colors[{method}]", chi, crep.colors_used))
        prep, pchecks, _, _ = _partition_once(family, g, method, args.seed, caps, args.samples)
        outputs[f"partition_{method}"] = prep.to_json()
        checks.extend(pchecks)
        if theta is not None and len(family) > 0:
            checks.append(_check(f"theta<=classes[{method}]", theta, prep.classes_used))
            if prep.piercing_points_used is not None:
                checks.append(
                    _check(f"theta<=piercing[{method}]", theta, prep.piercing_points_used)
                )

    if args.expect:
        with open(args.expect) as fh:
            expected = json.load(fh)
        for key in ("omega", "nu", "chi", "theta"):
            if key in expected:
                actual = oracles.get(key)
                ok = actual is not None and int(expected[key]) == actual
                checks.append(_flag(f"claim[{key}={expected[key]}]", ok))
                if not ok:
                    print(
                        f"claim mismatch: {key} claimed {expected[key]}, computed {actual}",
                        file=sys.stderr,
                    )

    wall = (time.perf_counter() - t0) * 1000
    report = RunReport(
        command="verify",
        input_digest=family_digest(family),
        seed=args.seed,
        outputs=outputs,
        oracles=oracles,
        checks=tuple(checks),
        capped=capped,
        wall_time_ms=wall,
    )
    _write_report(report, args.out)
    failed = [c.name for c in checks if not c.passed]
    status = "FAIL " + ",".join(failed) if failed else ("CAPPED" if capped else "PASS")
    print(f"verify: {status} ({len(checks)} checks, wall {wall:.1f} ms)", file=sys.stderr)
    return _exit_code(checks, capped)


_SVG_PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
]


def _extract_colors(obj) -> list[int]:
    if isinstance(obj, list):
        return [int(c) for c in obj]
    if isinstance(obj, dict):
        if "colors" in obj:
            return [int(c) for c in obj["colors"]]
        outputs = obj.get("outputs", {})
        for value in outputs.values():
            if isinstance(value, dict) and "colors" in value:
                return [int(c) for c in value["colors"]]
    raise ValueError("coloring file carries no per-member colors")


def family_svg(family: Family, colors: list[int] | None = None) -> str:
    """Write-only SVG rendering of a 2D family, fill per color class."""
    if family.body.dimension != 2:
        raise GeometryError("SVG export supports 2D families only")
    centers = family.centers()
    scales = family.scales()
    body = family.body
    shapes = []
    lo = np.full(2, np.inf)
    hi = np.full(2, -np.inf)
    for i, (c, lam) in enumerate(zip(centers, scales)):
        fill = _SVG_PALETTE[colors[i] % len(_SVG_PALETTE)] if colors is not None else "none"
        if body.kind == "disk":
            shapes.append(
                f'<circle cx="{c[0]:.6f}" cy="{c[1]:.6f}" r="{lam:.6f}" fill="{fill}" '
                f'fill-opacity="0.55" stroke="black" stroke-width="0.02"/>'
            )
            lo = np.minimum(lo, c - lam)
            hi = np.maximum(hi, c + lam)
        elif body.kind == "box":
            half = lam * np.asarray(body.sides) / 2.0
            shapes.append(
                f'<rect x="{c[0] - half[0]:.6f}" y="{c[1] - half[1]:.6f}" '
                f'width="{2 * half[0]:.6f}" height="{2 * half[1]:.6f}" fill="{fill}" '
                f'fill-opacity="0.55" stroke="black" stroke-width="0.02"/>'
            )
            lo = np.minimum(lo, c - half)
            hi = np.maximum(hi, c + half)
        else:
            verts = lam * np.array(body.vertices) + c
            pts = " ".join(f"{x:.6f},{y:.6f}" for x, y in verts)
            shapes.append(
                f'<polygon points="{pts}" fill="{fill}" fill-opacity="0.55" '
                f'stroke="black" stroke-width="0.02"/>'
            )
            lo = np.minimum(lo, verts.min(axis=0))
            hi = np.maximum(hi, verts.max(axis=0))
    if not len(shapes):
        lo, hi = np.zeros(2), np.ones(2)
    pad = 0.05 * float((hi - lo).max() or 1.0)
    lo -= pad
    hi += pad
    w, h = hi - lo
    body_svg = "\n".join(shapes)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{lo[0]:.6f} {-hi[1]:.6f} '
        f'{w:.6f} {h:.6f}" width="640" height="{640 * h / w:.0f}">\n'
        f'<g transform="scale(1,-1)">\n{body_svg}\n</g>\n</svg>\n'
    )


def family_csv(family: Family, caps: SolverCaps) -> str:
    g = build_graph(family)
    rows = ["invariant,value,capped,lower,upper"]
    for name, res in (
        ("omega", max_clique(g, cap=caps.omega)),
        ("alpha", max_independent_set(g, cap=caps.omega)),
        ("chi", chromatic_number(g, cap=caps.chi)),
        ("theta", clique_cover_number(g, cap=caps.chi)),
    ):
        rows.append(
            f"{name},{'' if res.value is None else res.value},{res.capped},"
            f"{'' if res.lower is None else res.lower},{'' if res.upper is None else res.upper}"
        )
    rows.append(f"members,{len(family)},False,,")
    rows.append(f"edges,{len(g.edges())},False,,")
    return "\n".join(rows) + "\n"


def cmd_export(args) -> int:
    family = load_family(args.input)
    if args.format == "dimacs":
        text = to_dimacs(build_graph(family))
    elif args.format == "csv":
        text = family_csv(family, _resolve_caps(args.caps))
    elif args.format == "svg":
        colors = None
        if args.coloring:
            with open(args.coloring) as fh:
                colors = _extract_colors(json.load(fh))
            if len(colors) != len(family):
                raise ValueError("coloring length does not match the family")
        text = family_svg(family, colors)
    else:
        raise ValueError(f"unknown format {args.format!r}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convex-chroma",
        description="coloring and clique partitions of translate/homothet intersection graphs",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    gen = sub.add_parser("generate", help="generate a family file")
    gen.add_argument("construction", choices=["pentagon", "pentagon-disjoint", "grid", "random"])
    gen.add_argument("--body", default="square")
    gen.add_argument("--sides", default=None, help="comma-separated box sides")
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--m", type=int, default=1)
    gen.add_argument("--count", type=int, default=10)
    gen.add_argument("--window", default="0,5", help="lo,hi window per axis")
    gen.add_argument("--scales", default="1,1", help="lo,hi scale range")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_generate)

    for name, func in (("color", cmd_color), ("partition", cmd_partition)):
        cp = sub.add_parser(name, help=f"{name} a family and check the bound")
        cp.add_argument("--in", dest="input", required=True)
        cp.add_argument("--method", choices=["translates", "homothets", "symmetrized"],
                        default="translates")
        cp.add_argument("--seed", type=int, default=0)
        cp.add_argument("--caps", default=None)
        cp.add_argument("--samples", type=int, default=100_000)
        cp.add_argument("--out", default=None)
        cp.set_defaults(func=func)

    ver = sub.add_parser("verify", help="run all applicable algorithms and oracles")
    ver.add_argument("--in", dest="input", required=True)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--caps", default=None)
    ver.add_argument("--samples", type=int, default=100_000)
    ver.add_argument("--expect", default=None, help="JSON of claimed invariants to check")
    ver.add_argument("--out", default=None)
    ver.set_defaults(func=cmd_verify)

    exp = sub.add_parser("export", help="export DIMACS/SVG/CSV")
    exp.add_argument("--in", dest="input", required=True)
    exp.add_argument("--format", choices=["dimacs", "svg", "csv"], required=True)
    exp.add_argument("--coloring", default=None, help="report or color-list JSON for SVG fills")
    exp.add_argument("--caps", default=None)
    exp.add_argument("--out", default=None)
    exp.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GeometryError, ConstructionError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
