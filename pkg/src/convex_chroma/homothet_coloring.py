"""Coloring and clique partition of homothet families via covering numbers.

A smallest-first removal order makes every member see at most
kappa(C-C, C) * (omega - 1) same-or-larger neighbors, so first-fit in the
reverse (decreasing size) order is a proper coloring within
kappa*(omega-1)+1 colors.  Clique partitions run greedy rounds: take the
smallest remaining homothet, pierce everything intersecting it with candidate
points scaled from a covering certificate, and remove the round.

The candidate points p1 + lam1*v_i are verified at runtime (every member must
contain its assigned point); a greedy point-stabbing fallback keeps the
partition valid if verification ever fails, and the report says so.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covering import CoveringCertificate, cover_by_translates, known_certificate
from .families import Family
from .geometry import ConvexBody, GeometryError, _edge_normals, _poly_array, scale_body, symmetrize
from .graph_core import IntersectionGraph, build_graph
from .reports import ColoringReport, PartitionReport

PIERCE_TOL = 1e-9


@dataclass(frozen=True)
class SizeOrder:
    """Member indices sorted by scale ascending, ties by index."""

    order: tuple[int, ...]


def size_order(family: Family) -> SizeOrder:
    scales = family.scales()
    return SizeOrder(order=tuple(sorted(range(len(family)), key=lambda i: (scales[i], i))))


@dataclass(frozen=True)
class PiercingAssignment:
    """Piercing points for one subfamily; members sharing a point form a clique."""

    members: tuple[int, ...]
    points: tuple[tuple[float, ...], ...]
    assignment: tuple[int, ...]  # index into points, aligned with members
    fallback_used: bool

    def classes(self) -> list[list[int]]:
        used = sorted(set(self.assignment))
        groups = {p: [] for p in used}
        for member, p in zip(self.members, self.assignment):
            groups[p].append(member)
        return [groups[p] for p in used]


def _member_margins(body: ConvexBody, center: np.ndarray, scale: float, pts: np.ndarray) -> np.ndarray:
    """Signed containment margins of the points in scale*C + center."""
    if body.kind == "disk":
        return scale - np.linalg.norm(pts - center, axis=1)
    if body.kind == "box":
        half = scale * np.asarray(body.sides) / 2.0
        return (half - np.abs(pts - center)).min(axis=1)
    normals, offsets = _edge_normals(_poly_array(body))
    return (scale * offsets + normals @ center)[None, :] - (pts @ normals.T)


def _member_contains(body: ConvexBody, center: np.ndarray, scale: float, pts: np.ndarray) -> np.ndarray:
    margins = _member_margins(body, center, scale, pts)
    if margins.ndim == 2:
        margins = margins.min(axis=1)
    return margins >= -PIERCE_TOL


def _interior_point(body: ConvexBody) -> np.ndarray:
    if body.kind == "polygon2d":
        return _poly_array(body).mean(axis=0)
    return np.zeros(body.dimension)


def _box_corners(body: ConvexBody, center: np.ndarray, scale: float) -> list[np.ndarray]:
    half = scale * np.asarray(body.sides) / 2.0
    corners = []
    n = body.dimension
    for mask in range(1 << n):
        signs = np.array([1.0 if (mask >> d) & 1 else -1.0 for d in range(n)])
        corners.append(center + signs * half)
    return corners


def pierce_intersecting_smallest(
    family: Family, members: list[int], cert: CoveringCertificate
) -> PiercingAssignment:
    """Pierce the subfamily of everything intersecting its smallest member.

    Candidate points are p1 + lam1*v_i from the certificate translations (box
    bodies try the 2^n corners of the smallest member first, which provably
    pierce same-or-larger intersecting boxes).  Containment is verified for
    every assignment; members containing no candidate trigger the greedy
    point-stabbing fallback.
    """
    if not members:
        raise ValueError("pierce_intersecting_smallest needs a non-empty subfamily")
    body = family.body
    scales = family.scales()
    centers = family.centers()
    smallest = min(members, key=lambda i: (scales[i], i))
    p1 = centers[smallest]
    lam1 = scales[smallest]

    candidates: list[np.ndarray] = []
    if body.kind == "box":
        candidates.extend(_box_corners(body, p1, lam1))
    candidates.extend(p1 + lam1 * np.asarray(v) for v in cert.translations)

    cand = np.array(candidates)
    assignment: dict[int, int] = {}
    for i in sorted(members):
        inside = _member_contains(body, centers[i], scales[i], cand)
        hit = int(np.argmax(inside)) if inside.any() else -1
        if hit >= 0:
            assignment[i] = hit
    fallback_used = len(assignment) < len(members)
    points = [tuple(float(x) for x in c) for c in candidates]
    if fallback_used:
        seed_point = _interior_point(body)
        unassigned = [i for i in sorted(members) if i not in assignment]
        while unassigned:
            m = min(unassigned, key=lambda i: (scales[i], i))
            q = centers[m] + scales[m] * seed_point
            points.append(tuple(float(x) for x in q))
            idx = len(points) - 1
            for i in list(unassigned):
                if _member_contains(body, centers[i], scales[i], q[None, :])[0]:
                    assignment[i] = idx
                    unassigned.remove(i)

    member_tuple = tuple(sorted(members))
    return PiercingAssignment(
        members=member_tuple,
        points=tuple(points),
        assignment=tuple(assignment[i] for i in member_tuple),
        fallback_used=fallback_used,
    )


def color_homothets(
    family: Family, cert: CoveringCertificate, omega: int | None = None,
    graph: IntersectionGraph | None = None,
) -> ColoringReport:
    """First-fit coloring in decreasing size order.

    Each member is colored after its same-or-larger neighbors only, of which
    there are at most kappa_ub * (omega - 1); the measured maximum of that
    back degree is reported alongside the colors.
    """
    g = graph if graph is not None else build_graph(family)
    order = list(reversed(size_order(family).order))
    colors = [-1] * len(family)
    back_degree_max = 0
    for v in order:
        colored = [u for u in range(len(family)) if g.adjacent(v, u) and colors[u] != -1]
        back_degree_max = max(back_degree_max, len(colored))
        used = {colors[u] for u in colored}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    colors_used = max(colors) + 1 if colors else 0
    if omega is not None:
        bound = cert.kappa_ub * (omega - 1) + 1 if len(family) else 0
        basis = "kappa*(omega-1)+1"
    else:
        bound = back_degree_max + 1 if len(family) else 0
        basis = "degeneracy+1"
    return ColoringReport(
        method="theorem2",
        colors=tuple(colors),
        colors_used=colors_used,
        bound_value=bound,
        bound_basis=basis,
        omega_used=omega,
        kappa_ub=cert.kappa_ub,
        back_degree_max=back_degree_max,
    )


def _merge_clique_classes(g: IntersectionGraph, classes: list[list[int]]) -> list[list[int]]:
    """Greedily merge piercing classes whenever the union stays a clique.

    Guarantees a pairwise-intersecting subfamily collapses to a single class,
    which the last greedy round needs for the kappa*(nu-1)+1 accounting.
    """
    merged: list[list[int]] = []
    for cls in sorted(classes, key=lambda c: min(c)):
        for target in merged:
            if all(g.adjacent(a, b) for a in cls for b in target):
                target.extend(cls)
                break
        else:
            merged.append(sorted(cls))
    return merged


def clique_partition_homothets(
    family: Family, cert: CoveringCertificate, nu: int | None = None,
    graph: IntersectionGraph | None = None,
) -> PartitionReport:
    """Greedy smallest-first clique partition via piercing rounds.

    Round representatives are pairwise disjoint (asserted), so the round count
    is a certified lower bound on nu.
    """
    g = graph if graph is not None else build_graph(family)
    n = len(family)
    scales = family.scales()
    remaining = set(range(n))
    assign = [0] * n
    piercing_points: list[tuple[float, ...]] = []
    representatives: list[int] = []
    fallback_any = False
    rounds = 0
    last_round_classes = 0
    next_class = 0
    while remaining:
        rep = min(remaining, key=lambda i: (scales[i], i))
        sub = [i for i in remaining if i == rep or g.adjacent(rep, i)]
        piercing = pierce_intersecting_smallest(family, sub, cert)
        fallback_any = fallback_any or piercing.fallback_used
        used_points = sorted(set(piercing.assignment))
        piercing_points.extend(piercing.points[p] for p in used_points)
        classes = _merge_clique_classes(g, piercing.classes())
        for cls in classes:
            for member in cls:
                assign[member] = next_class
            next_class += 1
        last_round_classes = len(classes)
        representatives.append(rep)
        remaining -= set(sub)
        rounds += 1

    for a in range(len(representatives)):
        for b in range(a + 1, len(representatives)):
            assert not g.adjacent(representatives[a], representatives[b]), \
                "greedy round representatives must be pairwise disjoint"

    if nu is not None:
        bound = cert.kappa_ub * (nu - 1) + 1 if n else 0
        basis = "kappa*(nu-1)+1"
    else:
        bound = cert.kappa_ub * max(rounds - 1, 0) + last_round_classes
        basis = "kappa*(rounds-1)+last"
    return PartitionReport(
        method="theorem2",
        classes_assign=tuple(assign),
        classes_used=next_class,
        bound_value=bound,
        bound_basis=basis,
        nu_used=rounds,
        kappa_ub=cert.kappa_ub,
        rounds=rounds,
        last_round_classes=last_round_classes,
        piercing_points=tuple(piercing_points),
        piercing_points_used=len(piercing_points),
        fallback_used=fallback_any,
    )


def symmetrized_certificate(body: ConvexBody) -> CoveringCertificate:
    """Certificate for kappa(2K, K) with K the central symmetrization of C."""
    k_body = symmetrize(body)
    cert = known_certificate(k_body)
    if cert is None:
        cert = cover_by_translates(scale_body(k_body, 2.0), k_body)
    return cert


def color_translates_symmetrized(
    family: Family, seed: int = 0, cert: CoveringCertificate | None = None,
    omega: int | None = None,
) -> ColoringReport:
    """Corollary-1 path: replace C by K = (C-C)/2 (which preserves the
    intersection graph), fetch a kappa(2K, K) certificate, and run the
    homothet first-fit coloring on the K-translates."""
    if not family.is_translate_family:
        raise GeometryError("symmetrized coloring expects a translate family")
    if cert is None:
        cert = symmetrized_certificate(family.body)
    k_family = Family(body=cert.unit, placements=family.placements, meta=dict(family.meta))
    report = color_homothets(k_family, cert, omega=omega)
    return ColoringReport(
        method="corollary1",
        colors=report.colors,
        colors_used=report.colors_used,
        bound_value=report.bound_value,
        bound_basis=report.bound_basis,
        omega_used=report.omega_used,
        kappa_ub=report.kappa_ub,
        back_degree_max=report.back_degree_max,
        seed=seed,
    )
