"""Constructive coloring and clique partition of translate families.

Pipeline: an inscribed parallelogram normalizes the family so the fitted P is
the axis-parallel unit cube; a generic offset picks lattice lines parallel to
the last axis (first n-1 coordinates) and unit cells along the last axis;
within each (line, cell-residue) class, disjointness + lower-last-coordinate
is a strict partial order whose comparability graph is the class's
co-intersection graph.  Dilworth chain covers then color each class optimally
and Mirsky antichain layers partition it into cliques, with palette
accounting multiplying by M^(n-1) * c classes overall.

The moduli are parameterized by the measured containment ratio r: M = ceil(r)
+ 1 per cross axis and c = ceil(M / 2) along the last axis, which keeps the
disjointness arithmetic (M - 1 >= r and 2c - 1 >= r) valid and recovers the
classical (n+1)^(n-1) * ceil((n+1)/2) factor when r = n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .families import Family
from .geometry import (
    GeometryError,
    ParallelogramFit,
    homothets_intersect,
    inscribed_parallelogram,
)
from .reports import ClassSummary, ColoringReport, PartitionReport

OFFSET_CLEARANCE = 1e-6
MAX_OFFSET_DRAWS = 100


class OffsetSearchError(RuntimeError):
    """No generic offset with the required tangency clearance was found."""


class PosetError(RuntimeError):
    """The class relation is not a strict partial order (bad fit)."""


@dataclass(frozen=True)
class BoundParams:
    """Moduli derived from the measured containment ratio r."""

    n: int
    r: float
    M: int
    c: int
    t_bound: int

    @staticmethod
    def from_ratio(n: int, r: float) -> "BoundParams":
        if r < 1.0 - 1e-9:
            raise ValueError(f"containment ratio must be >= 1, got {r}")
        r = max(r, 1.0)
        m = math.ceil(r - 1e-9) + 1
        c = math.ceil(m / 2)
        params = BoundParams(n=n, r=r, M=m, c=c, t_bound=m ** (n - 1) * c)
        assert params.M - 1 >= r - 1e-9, "line modulus must dominate the ratio"
        assert 2 * params.c - 1 >= r - 1e-9, "cell modulus must dominate the ratio"
        return params

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "M": self.M, "c": self.c, "t_bound": self.t_bound}


@dataclass
class NormalizedFamily:
    """Original family plus the affine map sending the fitted P to the unit cube."""

    family: Family
    matrix: np.ndarray          # linear part S of the map x -> S(x - fit_center)
    fit_center: np.ndarray
    refs: np.ndarray            # normalized reference points, one row per member
    fit: ParallelogramFit | None
    params: BoundParams


@dataclass(frozen=True)
class Offsets:
    """Generic lattice offset: b for the n-1 line axes, one cell offset, and
    the certified clearance to every tangency condition."""

    b: tuple[float, ...]
    cell_offset: float
    clearance: float
    seed: int
    attempts: int


@dataclass
class Decomposition:
    line_keys: np.ndarray       # (N, n-1) integer line indices
    cells: np.ndarray           # (N,) integer cell indices along the last axis
    line_residues: np.ndarray   # line_keys mod M
    cell_residues: np.ndarray   # cells mod c
    offsets: Offsets
    params: BoundParams

    def classes(self) -> dict[tuple[tuple[int, ...], int], list[int]]:
        """Members grouped by (full line key, cell residue), sorted keys."""
        out: dict[tuple[tuple[int, ...], int], list[int]] = {}
        for i in range(len(self.cells)):
            key = (tuple(int(v) for v in self.line_keys[i]), int(self.cell_residues[i]))
            out.setdefault(key, []).append(i)
        return dict(sorted(out.items()))

    def block_of(self, class_key: tuple[tuple[int, ...], int]) -> tuple[tuple[int, ...], int]:
        line_key, c_res = class_key
        return (tuple(k % self.params.M for k in line_key), c_res)


@dataclass
class PosetClass:
    """One (line, cell-residue) class with its strict partial order.

    relation[i, j] is True iff member i precedes member j: they are disjoint
    and i's reference point has the strictly smaller last coordinate.
    """

    members: tuple[int, ...]
    relation: np.ndarray
    last_coords: np.ndarray

    def __post_init__(self):
        rel = self.relation
        if (rel & rel.T).any():
            raise PosetError("precedence relation is not asymmetric")
        composed = (rel.astype(int) @ rel.astype(int)) > 0
        if (composed & ~rel).any():
            raise PosetError(
                "precedence relation is not transitive; the parallelogram fit "
                "does not dominate the body"
            )


def normalize(family: Family) -> NormalizedFamily:
    """Affine-normalize a translate family so the fitted parallelogram is the
    unit cube; boxes of any dimension <= 6 fit themselves (r = 1)."""
    if not family.is_translate_family:
        raise GeometryError("normalize expects a translate family (uniform scale)")
    body = family.body
    scale = float(family.scales()[0]) if len(family) else 1.0
    if body.kind == "box":
        n = body.dimension
        if n > 6:
            raise GeometryError("box translate coloring supports dimension <= 6")
        matrix = np.diag(1.0 / (scale * np.asarray(body.sides)))
        fit = None
        ratio = 1.0
        fit_center = np.zeros(n)
    else:
        n = 2
        fit = inscribed_parallelogram(body)
        basis = scale * np.array([fit.u, fit.v]).T
        matrix = 0.5 * np.linalg.inv(basis)
        ratio = fit.ratio
        fit_center = scale * np.asarray(fit.center)
    params = BoundParams.from_ratio(n, ratio)
    centers = family.centers()
    refs = centers @ matrix.T if len(family) else np.zeros((0, n))
    return NormalizedFamily(
        family=family, matrix=matrix, fit_center=fit_center, refs=refs,
        fit=fit, params=params,
    )


def choose_offsets(nf: NormalizedFamily, seed: int = 0) -> Offsets:
    """Seeded generic offsets: every reference coordinate stays at least
    OFFSET_CLEARANCE away from a line tangency or a cell boundary."""
    n = nf.params.n
    rng = np.random.default_rng(seed)
    refs = nf.refs
    for attempt in range(1, MAX_OFFSET_DRAWS + 1):
        draw = rng.random(n)
        b, cell = draw[: n - 1], float(draw[n - 1])
        if len(refs) == 0:
            return Offsets(b=tuple(b), cell_offset=cell, clearance=0.5,
                           seed=seed, attempts=attempt)
        shifted = refs - np.concatenate([b, [cell]])
        dist = np.abs(np.mod(shifted, 1.0) - 0.5)
        clearance = float(dist.min())
        if clearance >= OFFSET_CLEARANCE:
            return Offsets(b=tuple(float(x) for x in b), cell_offset=cell,
                           clearance=clearance, seed=seed, attempts=attempt)
    raise OffsetSearchError(
        f"no offset with clearance >= {OFFSET_CLEARANCE:g} in {MAX_OFFSET_DRAWS} draws"
    )


def decompose(nf: NormalizedFamily, offsets: Offsets) -> Decomposition:
    """Assign each member its unique lattice line and half-open unit cell."""
    params = nf.params
    n = params.n
    refs = nf.refs
    if len(refs) == 0:
        empty = np.zeros((0, max(n - 1, 0)), dtype=int)
        return Decomposition(line_keys=empty, cells=np.zeros(0, dtype=int),
                             line_residues=empty, cell_residues=np.zeros(0, dtype=int),
                             offsets=offsets, params=params)
    b = np.asarray(offsets.b)
    cross = refs[:, : n - 1] - b
    line_keys = np.floor(cross + 0.5).astype(int)
    if not (np.abs(cross - line_keys) < 0.5).all():
        raise OffsetSearchError("a reference point is tangent to a lattice line")
    cells = np.floor(refs[:, n - 1] - offsets.cell_offset + 0.5).astype(int)
    return Decomposition(
        line_keys=line_keys,
        cells=cells,
        line_residues=np.mod(line_keys, params.M),
        cell_residues=np.mod(cells, params.c),
        offsets=offsets,
        params=params,
    )


def build_poset(members: list[int], nf: NormalizedFamily) -> PosetClass:
    """Strict partial order on one class: disjoint and strictly lower last
    coordinate.  Transitivity failures raise (they would falsify the fit)."""
    family = nf.family
    n = nf.params.n
    last = nf.refs[members, n - 1] if members else np.zeros(0)
    m = len(members)
    relation = np.zeros((m, m), dtype=bool)
    for a in range(m):
        for bb in range(a + 1, m):
            i, j = members[a], members[bb]
            if homothets_intersect(family.body, family.placements[i], family.placements[j]):
                continue
            if last[a] == last[bb]:
                raise PosetError("disjoint class members share a last coordinate")
            if last[a] < last[bb]:
                relation[a, bb] = True
            else:
                relation[bb, a] = True
    return PosetClass(members=tuple(members), relation=relation, last_coords=last)


def chain_partition(poset: PosetClass) -> list[list[int]]:
    """Minimum chain cover via Dilworth reduction to bipartite matching.

    The relation is transitively closed, so the path cover count m - |matching|
    equals the maximum antichain, i.e. the clique number of the class's
    intersection graph.  Chains are reported in member-index terms.
    """
    m = len(poset.members)
    rel = poset.relation
    match_left = [-1] * m   # successor chosen for each node
    match_right = [-1] * m  # predecessor that claimed each node

    def augment(u: int, visited: list[bool]) -> bool:
        for v in range(m):
            if rel[u, v] and not visited[v]:
                visited[v] = True
                if match_right[v] == -1 or augment(match_right[v], visited):
                    match_right[v] = u
                    match_left[u] = v
                    return True
        return False

    for u in range(m):
        augment(u, [False] * m)

    chains = []
    for v in range(m):
        if match_right[v] == -1:
            chain = [v]
            while match_left[chain[-1]] != -1:
                chain.append(match_left[chain[-1]])
            chains.append([poset.members[i] for i in chain])
    chains.sort(key=lambda ch: min(ch))
    return chains


def antichain_partition(poset: PosetClass) -> list[list[int]]:
    """Mirsky height layering: as many antichains as the longest chain, and
    each antichain is a clique in the intersection graph."""
    m = len(poset.members)
    order = sorted(range(m), key=lambda i: (poset.last_coords[i], i))
    level = [0] * m
    for i in order:
        preds = [level[j] for j in range(m) if poset.relation[j, i]]
        level[i] = 1 + max(preds) if preds else 0
    height = max(level) + 1 if m else 0
    layers: list[list[int]] = [[] for _ in range(height)]
    for i in range(m):
        layers[level[i]].append(poset.members[i])
    return layers


def _pipeline(family: Family, seed: int):
    nf = normalize(family)
    offsets = choose_offsets(nf, seed)
    dec = decompose(nf, offsets)
    posets = {key: build_poset(members, nf) for key, members in dec.classes().items()}
    return nf, dec, posets


def color_translates(family: Family, seed: int = 0) -> ColoringReport:
    """Proper coloring with at most t_bound * omega colors.

    Chain indices are reused across lines inside one residue block (the max
    accounting) and palettes are disjoint across blocks (the sum accounting).
    """
    nf, dec, posets = _pipeline(family, seed)
    chains = {key: chain_partition(p) for key, p in posets.items()}

    blocks: dict[tuple, list] = {}
    for key in posets:
        blocks.setdefault(dec.block_of(key), []).append(key)

    colors = [0] * len(family)
    labels: list[tuple] = [()] * len(family)
    base = 0
    for block_key in sorted(blocks):
        width_ = max(len(chains[k]) for k in blocks[block_key])
        for class_key in blocks[block_key]:
            for idx, chain in enumerate(chains[class_key]):
                for member in chain:
                    colors[member] = base + idx
                    labels[member] = block_key
        base += width_

    summaries = tuple(
        ClassSummary(
            line_key=key[0], cell_residue=key[1], members=posets[key].members,
            chain_count=len(chains[key]),
            antichain_count=len(antichain_partition(posets[key])),
        )
        for key in sorted(posets)
    )
    omega_used = max((len(ch) for ch in chains.values()), default=0)
    return ColoringReport(
        method="theorem1",
        colors=tuple(colors),
        colors_used=base,
        bound_value=nf.params.t_bound * omega_used,
        bound_basis="t_bound*omega",
        omega_used=omega_used,
        seed=seed,
        params=nf.params.to_json(),
        block_labels=tuple(labels),
        classes=summaries,
    )


def clique_partition_translates(family: Family, seed: int = 0) -> PartitionReport:
    """Clique partition with at most t_bound * nu classes (sum accounting
    across lines and across residue blocks)."""
    nf, dec, posets = _pipeline(family, seed)
    layers = {key: antichain_partition(p) for key, p in posets.items()}

    assign = [0] * len(family)
    base = 0
    for class_key in sorted(posets):
        for idx, layer in enumerate(layers[class_key]):
            for member in layer:
                assign[member] = base + idx
        base += len(layers[class_key])

    block_totals: dict[tuple, int] = {}
    for key in posets:
        block = dec.block_of(key)
        block_totals[block] = block_totals.get(block, 0) + len(layers[key])
    nu_used = max(block_totals.values(), default=0)

    summaries = tuple(
        ClassSummary(
            line_key=key[0], cell_residue=key[1], members=posets[key].members,
            chain_count=len(chain_partition(posets[key])),
            antichain_count=len(layers[key]),
        )
        for key in sorted(posets)
    )
    return PartitionReport(
        method="theorem1",
        classes_assign=tuple(assign),
        classes_used=base,
        bound_value=nf.params.t_bound * nu_used,
        bound_basis="t_bound*nu",
        nu_used=nu_used,
        seed=seed,
        params=nf.params.to_json(),
        classes=summaries,
    )
