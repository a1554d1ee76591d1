"""Generators for the lower-bound families, packing densities, and seeded
random families.

The pentagon families realize the C5 blow-up intersection pattern with unit
squares on a circumradius-0.8 pentagon: consecutive centers sit within
L-infinity distance 0.95 and skip pairs beyond 1.05, so adjacency is exactly
C5[K_k]; the pattern is re-verified at build time, making the coordinate
choice self-certifying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import Family, translates
from .geometry import ConvexBody, Placement, pair_margin, pairwise_adjacency
from .graph_core import SolverCaps, build_graph, clique_cover_number, max_clique

GRID_MEMBER_CAP = 4096
RANDOM_MARGIN = 0.05
RANDOM_RESAMPLE_BUDGET = 1000


class ConstructionError(RuntimeError):
    """A generated family failed its build-time structure check."""


@dataclass(frozen=True)
class GridSpec:
    body: ConvexBody
    m: int

    def build(self) -> Family:
        return grid_family(self.body, self.m)


@dataclass(frozen=True)
class PentagonSpec:
    k: int
    jitter: float = 1e-4
    circumradius: float = 0.8

    def build(self) -> Family:
        return pentagon_family(self.k, jitter=self.jitter, circumradius=self.circumradius)


def grid_family(body: ConvexBody, m: int, member_cap: int = GRID_MEMBER_CAP) -> Family:
    """m^(2n) translates at the lattice points (t_1/m, ..., t_n/m), t_i in 1..m^2."""
    if m < 1:
        raise ValueError("grid parameter m must be >= 1")
    n = body.dimension
    total = m ** (2 * n)
    if total > member_cap:
        raise ValueError(f"grid family would have {total} members (cap {member_cap})")
    coords = np.arange(1, m * m + 1) / m
    mesh = np.meshgrid(*([coords] * n), indexing="ij")
    centers = np.stack([g.ravel() for g in mesh], axis=1)
    return translates(body, centers, meta={"construction": "grid", "m": m})


def _pentagon_centers(circumradius: float) -> np.ndarray:
    angles = np.deg2rad(90 + 72 * np.arange(5))
    return circumradius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _check_blowup_adjacency(family: Family, group_count: int, group_size: int,
                            cycle: bool) -> None:
    """Verify group-block adjacency: internal cliques, full adjacency between
    consecutive groups (when cycle), nothing elsewhere."""
    adj = pairwise_adjacency(family.body, family.centers(), family.scales())
    for ga in range(group_count):
        sa = slice(ga * group_size, (ga + 1) * group_size)
        block = adj[sa, sa]
        if not (block | np.eye(group_size, dtype=bool)).all():
            raise ConstructionError(f"group {ga} is not internally complete")
        for gb in range(ga + 1, group_count):
            sb = slice(gb * group_size, (gb + 1) * group_size)
            expected = cycle and (gb - ga == 1 or (ga == 0 and gb == group_count - 1))
            if expected and not adj[sa, sb].all():
                raise ConstructionError(f"groups {ga},{gb} must be fully adjacent")
            if not expected and adj[sa, sb].any():
                raise ConstructionError(f"groups {ga},{gb} must be fully non-adjacent")


def pentagon_family(k: int, jitter: float = 1e-4, circumradius: float = 0.8) -> Family:
    """5 groups of k near-duplicate unit squares on a 5-cycle; the intersection
    graph is verified to equal the blow-up C5[K_k]."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base = _pentagon_centers(circumradius)
    centers = []
    for g in range(5):
        for j in range(k):
            frac = j / max(k - 1, 1)
            centers.append(base[g] + jitter * frac)
    family = translates(ConvexBody.unit_square(), np.array(centers),
                        meta={"construction": "pentagon", "k": k})
    _check_blowup_adjacency(family, 5, k, cycle=True)
    return family


def pentagon_disjoint_family(k: int, circumradius: float = 0.8, spacing: float = 12.0) -> Family:
    """k far-apart copies of the five-square pentagon pattern: nu = 2k, theta = 3k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    base = _pentagon_centers(circumradius)
    centers = []
    for copy in range(k):
        shift = np.array([spacing * copy, 0.0])
        for g in range(5):
            centers.append(base[g] + shift)
    family = translates(ConvexBody.unit_square(), np.array(centers),
                        meta={"construction": "pentagon_disjoint", "k": k})
    adj = pairwise_adjacency(family.body, family.centers(), family.scales())
    for a in range(k):
        for b in range(a + 1, k):
            if adj[5 * a:5 * a + 5, 5 * b:5 * b + 5].any():
                raise ConstructionError("pentagon copies must be pairwise disjoint")
    return family


def explicit_pentagon_coloring(k: int) -> tuple[int, ...]:
    """The ceil(5k/2)-color scheme for pentagon_family(k).

    Three k-color classes Q1, Q2, Q3 split into halves of sizes ceil(k/2) and
    floor(k/2); groups take A: Q1, B: Q2, C: Q12+Q31, D: first k of Q11+Q21,
    E: Q22+Q31, so Q3's second half is never used.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    h = math.ceil(k / 2)
    q1 = list(range(0, k))
    q2 = list(range(k, 2 * k))
    q3 = list(range(2 * k, 3 * k))
    q11, q12 = q1[:h], q1[h:]
    q21, q22 = q2[:h], q2[h:]
    q31 = q3[:h]
    group_colors = [
        q1,                 # A
        q2,                 # B
        q12 + q31,          # C
        (q11 + q21)[:k],    # D
        q22 + q31,          # E
    ]
    colors = []
    for g in range(5):
        colors.extend(group_colors[g][:k])
    return tuple(colors)


@dataclass(frozen=True)
class DensityReport:
    rho: float
    member_measures: tuple[float, ...]
    domain_lo: tuple[float, ...]
    domain_hi: tuple[float, ...]
    domain_measure: float


def _clip_polygon_area(verts: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> float:
    """Sutherland-Hodgman clip of a convex polygon to a box, then shoelace."""
    poly = [tuple(v) for v in verts]
    planes = [
        (np.array([1.0, 0.0]), hi[0]),
        (np.array([-1.0, 0.0]), -lo[0]),
        (np.array([0.0, 1.0]), hi[1]),
        (np.array([0.0, -1.0]), -lo[1]),
    ]
    for normal, offset in planes:
        if not poly:
            return 0.0
        out = []
        for idx in range(len(poly)):
            cur = np.asarray(poly[idx])
            nxt = np.asarray(poly[(idx + 1) % len(poly)])
            cur_in = normal @ cur <= offset
            nxt_in = normal @ nxt <= offset
            if cur_in:
                out.append(tuple(cur))
            if cur_in != nxt_in:
                t = (offset - normal @ cur) / (normal @ (nxt - cur))
                out.append(tuple(cur + t * (nxt - cur)))
        poly = out
    if len(poly) < 3:
        return 0.0
    arr = np.array(poly)
    x, y = arr[:, 0], arr[:, 1]
    return float(abs(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def _disk_box_area(center: np.ndarray, radius: float, lo: np.ndarray, hi: np.ndarray) -> float:
    """Area of disk-box intersection by adaptive quadrature (1e-6 relative)."""
    from scipy.integrate import quad

    a = max(lo[0], center[0] - radius)
    b = min(hi[0], center[0] + radius)
    if a >= b:
        return 0.0

    def height(x: float) -> float:
        dy = math.sqrt(max(radius * radius - (x - center[0]) ** 2, 0.0))
        return max(0.0, min(hi[1], center[1] + dy) - max(lo[1], center[1] - dy))

    value, _ = quad(height, a, b, epsabs=1e-10, epsrel=1e-8, limit=200)
    return float(value)


def _member_clipped_measure(body: ConvexBody, placement: Placement,
                            lo: np.ndarray, hi: np.ndarray) -> float:
    center = np.asarray(placement.center)
    lam = placement.scale
    if body.kind == "box":
        half = lam * np.asarray(body.sides) / 2.0
        overlap = np.minimum(hi, center + half) - np.maximum(lo, center - half)
        return float(np.prod(np.maximum(overlap, 0.0)))
    if body.kind == "disk":
        return _disk_box_area(center, lam, lo, hi)
    verts = lam * np.array(body.vertices) + center
    return _clip_polygon_area(verts, lo, hi)


def density(family: Family, domain_lo, domain_hi) -> DensityReport:
    """Packing density of the family relative to the box [lo, hi]:
    sum of clipped member measures over the domain measure."""
    lo = np.asarray(domain_lo, dtype=float)
    hi = np.asarray(domain_hi, dtype=float)
    if lo.shape != hi.shape or (hi <= lo).any():
        raise ValueError("domain box must have positive extent on every axis")
    measures = tuple(
        _member_clipped_measure(family.body, p, lo, hi) for p in family.placements
    )
    domain_measure = float(np.prod(hi - lo))
    return DensityReport(
        rho=float(sum(measures) / domain_measure),
        member_measures=measures,
        domain_lo=tuple(float(v) for v in lo),
        domain_hi=tuple(float(v) for v in hi),
        domain_measure=domain_measure,
    )


@dataclass(frozen=True)
class VolumeRatioReport:
    member_count: int
    omega: int
    bound: float
    theta: int | None

    @property
    def consistent(self) -> bool:
        return self.theta is None or self.theta >= self.bound - 1e-12


def volume_ratio_bounds(family: Family, caps: SolverCaps = SolverCaps()) -> VolumeRatioReport:
    """Discrete volume bound theta >= |T_m| / |S_m|, with |S_m| = omega via the
    clique <-> Minkowski-diameter-2 correspondence; checked against exact
    theta when the instance is within caps."""
    g = build_graph(family)
    omega = max_clique(g, cap=caps.omega).require()
    bound = len(family) / omega if omega else 0.0
    theta_res = clique_cover_number(g, cap=caps.chi)
    theta = None if theta_res.capped else theta_res.value
    return VolumeRatioReport(member_count=len(family), omega=omega, bound=bound, theta=theta)


def random_family(
    body: ConvexBody,
    count: int,
    window: tuple[float, float],
    scale_range: tuple[float, float] = (1.0, 1.0),
    seed: int = 0,
    margin: float = RANDOM_MARGIN,
) -> Family:
    """Seeded family with every pair at least `margin` away from tangency.

    Centers are uniform in the window (per axis), scales uniform in the range;
    placements too close to flipping intersect/disjoint against any earlier
    member are resampled, up to 1000 draws each.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    lo, hi = window
    rng = np.random.default_rng(seed)
    dim = body.dimension
    placements: list[Placement] = []
    for _ in range(count):
        for attempt in range(RANDOM_RESAMPLE_BUDGET):
            center = tuple(float(v) for v in rng.uniform(lo, hi, size=dim))
            scale = float(rng.uniform(scale_range[0], scale_range[1]))
            cand = Placement(center=center, scale=scale)
            if all(abs(pair_margin(body, prev, cand)) >= margin for prev in placements):
                placements.append(cand)
                break
        else:
            raise ConstructionError(
                f"could not place member {len(placements)} with margin {margin} "
                f"after {RANDOM_RESAMPLE_BUDGET} draws"
            )
    return Family(body=body, placements=tuple(placements),
                  meta={"construction": "random", "seed": seed})
