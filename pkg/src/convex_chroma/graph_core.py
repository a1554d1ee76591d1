"""Intersection graphs and exact invariants: max clique, max independent set,
chromatic number, and clique-cover number, all with verifiable witnesses.

Solvers are exact and deterministic (lowest-index tie-breaking).  Instances
above the caps return explicit "capped" results carrying bounds instead of
silently degrading to heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .families import Family
from .geometry import pairwise_adjacency

DEFAULT_OMEGA_CAP = 100
DEFAULT_CHI_CAP = 45


class CapExceeded(RuntimeError):
    """Raised only when a caller insists on an exact value above the cap."""


@dataclass(frozen=True)
class SolverCaps:
    omega: int = DEFAULT_OMEGA_CAP
    chi: int = DEFAULT_CHI_CAP


@dataclass(frozen=True)
class IntersectionGraph:
    """Undirected graph over family members; rows are adjacency bitmasks."""

    member_count: int
    rows: tuple[int, ...]
    family_ref: str = ""

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if row >> self.member_count:
                raise ValueError("adjacency row exceeds member count")
            if (row >> i) & 1:
                raise ValueError("adjacency must be irreflexive")
        for i in range(self.member_count):
            for j in range(i + 1, self.member_count):
                if ((self.rows[i] >> j) & 1) != ((self.rows[j] >> i) & 1):
                    raise ValueError("adjacency must be symmetric")

    @staticmethod
    def from_matrix(adj: np.ndarray, family_ref: str = "") -> "IntersectionGraph":
        n = len(adj)
        rows = tuple(int(sum(1 << j for j in range(n) if adj[i, j] and j != i)) for i in range(n))
        return IntersectionGraph(member_count=n, rows=rows, family_ref=family_ref)

    def adjacent(self, i: int, j: int) -> bool:
        return bool((self.rows[i] >> j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.member_count)
            for j in range(i + 1, self.member_count)
            if (self.rows[i] >> j) & 1
        ]

    def degree(self, i: int) -> int:
        return bin(self.rows[i]).count("1")

    def complement(self) -> "IntersectionGraph":
        n = self.member_count
        full = (1 << n) - 1
        rows = tuple((full ^ self.rows[i]) & ~(1 << i) for i in range(n))
        return IntersectionGraph(member_count=n, rows=rows, family_ref=self.family_ref)

    def subgraph(self, members: list[int]) -> "IntersectionGraph":
        idx = {m: k for k, m in enumerate(members)}
        rows = []
        for m in members:
            row = 0
            for o in members:
                if o != m and (self.rows[m] >> o) & 1:
                    row |= 1 << idx[o]
            rows.append(row)
        return IntersectionGraph(member_count=len(members), rows=tuple(rows))


def build_graph(family: Family, family_ref: str = "") -> IntersectionGraph:
    """Intersection graph of the family; adjacency = closed geometric intersection."""
    adj = pairwise_adjacency(family.body, family.centers(), family.scales())
    return IntersectionGraph.from_matrix(adj, family_ref=family_ref)


@dataclass(frozen=True)
class SolveResult:
    """Exact value with witness, or a capped result carrying bounds only."""

    value: int | None
    witness: tuple = ()
    capped: bool = False
    lower: int | None = None
    upper: int | None = None

    def require(self) -> int:
        if self.capped or self.value is None:
            raise CapExceeded("instance exceeded the solver cap")
        return self.value


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def max_clique(g: IntersectionGraph, cap: int = DEFAULT_OMEGA_CAP) -> SolveResult:
    """Exact maximum clique by Bron-Kerbosch with greedy pivoting."""
    n = g.member_count
    if n > cap:
        greedy = _greedy_clique(g)
        return SolveResult(value=None, witness=tuple(greedy), capped=True,
                           lower=len(greedy), upper=n)
    if n == 0:
        return SolveResult(value=0, witness=())
    rows = g.rows
    best: list[int] = []

    def expand(r: list[int], p: int, x: int):
        nonlocal best
        if p == 0 and x == 0:
            if len(r) > len(best):
                best = r[:]
            return
        if len(r) + bin(p).count("1") <= len(best):
            return
        pivot, pivot_deg = -1, -1
        for u in _bits(p | x):
            d = bin(p & rows[u]).count("1")
            if d > pivot_deg:
                pivot, pivot_deg = u, d
        for v in _bits(p & ~rows[pivot]):
            expand(r + [v], p & rows[v], x & rows[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand([], (1 << n) - 1, 0)
    return SolveResult(value=len(best), witness=tuple(sorted(best)))


def _greedy_clique(g: IntersectionGraph) -> list[int]:
    order = sorted(range(g.member_count), key=lambda i: (-g.degree(i), i))
    clique: list[int] = []
    mask = (1 << g.member_count) - 1
    for v in order:
        if all((g.rows[v] >> u) & 1 for u in clique):
            clique.append(v)
            mask &= g.rows[v]
    return sorted(clique)


def max_independent_set(g: IntersectionGraph, cap: int = DEFAULT_OMEGA_CAP) -> SolveResult:
    """Exact maximum independent set = max clique of the complement."""
    return max_clique(g.complement(), cap=cap)


def greedy_coloring(g: IntersectionGraph) -> list[int]:
    """DSATUR greedy proper coloring (upper bound for the exact search)."""
    n = g.member_count
    colors = [-1] * n
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]
    for _ in range(n):
        v = max(
            (i for i in range(n) if colors[i] == -1),
            key=lambda i: (len(neighbor_colors[i]), g.degree(i), -i),
        )
        c = 0
        while c in neighbor_colors[v]:
            c += 1
        colors[v] = c
        for u in _bits(g.rows[v]):
            neighbor_colors[u].add(c)
    return colors


def _k_coloring(g: IntersectionGraph, k: int, seed_clique: tuple[int, ...]) -> list[int] | None:
    """DSATUR-ordered backtracking decision procedure for k-colorability.

    The seed clique is pre-colored with distinct colors, which both prunes and
    breaks color symmetry; new colors are introduced at most one at a time.
    """
    n = g.member_count
    if len(seed_clique) > k:
        return None
    colors = [-1] * n
    neighbor_colors: list[set[int]] = [set() for _ in range(n)]
    for c, v in enumerate(seed_clique):
        colors[v] = c
        for u in _bits(g.rows[v]):
            neighbor_colors[u].add(c)

    uncolored = [i for i in range(n) if colors[i] == -1]

    def pick() -> int | None:
        cand = [i for i in uncolored if colors[i] == -1]
        if not cand:
            return None
        return max(cand, key=lambda i: (len(neighbor_colors[i]), g.degree(i), -i))

    def backtrack(used: int) -> bool:
        v = pick()
        if v is None:
            return True
        limit = min(k, used + 1)
        for c in range(limit):
            if c in neighbor_colors[v]:
                continue
            colors[v] = c
            touched = []
            for u in _bits(g.rows[v]):
                if colors[u] == -1 and c not in neighbor_colors[u]:
                    neighbor_colors[u].add(c)
                    touched.append(u)
            if backtrack(max(used, c + 1)):
                return True
            colors[v] = -1
            for u in touched:
                neighbor_colors[u].discard(c)
        return False

    if backtrack(len(seed_clique)):
        return colors
    return None


def chromatic_number(g: IntersectionGraph, cap: int = DEFAULT_CHI_CAP) -> SolveResult:
    """Exact chromatic number via iterative deepening seeded with a clique
    lower bound and a DSATUR greedy upper bound."""
    n = g.member_count
    if n == 0:
        return SolveResult(value=0, witness=())
    if n > cap:
        greedy = greedy_coloring(g)
        clique = max_clique(g, cap=n)
        return SolveResult(
            value=None, witness=tuple(greedy), capped=True,
            lower=clique.value if not clique.capped else clique.lower,
            upper=max(greedy) + 1,
        )
    clique = max_clique(g, cap=n)
    lb = clique.require()
    greedy = greedy_coloring(g)
    ub = max(greedy) + 1
    if lb == ub:
        return SolveResult(value=ub, witness=tuple(greedy))
    for k in range(lb, ub):
        witness = _k_coloring(g, k, clique.witness)
        if witness is not None:
            return SolveResult(value=k, witness=tuple(witness))
    return SolveResult(value=ub, witness=tuple(greedy))


def clique_cover_number(g: IntersectionGraph, cap: int = DEFAULT_CHI_CAP) -> SolveResult:
    """Exact clique-cover number: chromatic number of the complement graph."""
    return chromatic_number(g.complement(), cap=cap)


def verify_coloring(g: IntersectionGraph, assignment) -> bool:
    """True iff the assignment covers all members and no edge is monochromatic."""
    if len(assignment) != g.member_count:
        raise IndexError("assignment must cover all members")
    for i, j in g.edges():
        if assignment[i] == assignment[j]:
            return False
    return True


def verify_clique_partition(g: IntersectionGraph, assignment) -> bool:
    """True iff every class of the assignment is pairwise adjacent."""
    if len(assignment) != g.member_count:
        raise IndexError("assignment must cover all members")
    classes: dict[int, list[int]] = {}
    for i, c in enumerate(assignment):
        classes.setdefault(c, []).append(i)
    for members in classes.values():
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                if not g.adjacent(members[a], members[b]):
                    return False
    return True


@dataclass(frozen=True)
class GraphInvariants:
    """Exact omega/alpha/chi/theta with witnesses; asserts the obvious chains."""

    omega: SolveResult
    alpha: SolveResult
    chi: SolveResult
    theta: SolveResult

    def __post_init__(self):
        if not self.omega.capped and not self.chi.capped:
            assert self.omega.value <= self.chi.value, "omega <= chi must hold"
        if not self.alpha.capped and not self.theta.capped:
            assert self.alpha.value <= self.theta.value, "alpha <= theta must hold"


def compute_invariants(g: IntersectionGraph, caps: SolverCaps = SolverCaps()) -> GraphInvariants:
    inv = GraphInvariants(
        omega=max_clique(g, cap=caps.omega),
        alpha=max_independent_set(g, cap=caps.omega),
        chi=chromatic_number(g, cap=caps.chi),
        theta=clique_cover_number(g, cap=caps.chi),
    )
    if not inv.omega.capped:
        witness = inv.omega.witness
        for a in range(len(witness)):
            for b in range(a + 1, len(witness)):
                assert g.adjacent(witness[a], witness[b]), "clique witness failed"
    if not inv.chi.capped:
        assert verify_coloring(g, list(inv.chi.witness)), "coloring witness failed"
    if not inv.theta.capped:
        assert verify_clique_partition(g, list(inv.theta.witness)), "cover witness failed"
    return inv


def to_dimacs(g: IntersectionGraph) -> str:
    """DIMACS undirected edge format (1-based vertex ids)."""
    edges = g.edges()
    lines = [f"p edge {g.member_count} {len(edges)}"]
    lines += [f"e {i + 1} {j + 1}" for i, j in edges]
    return "\n".join(lines) + "\n"


def from_dimacs(text: str) -> IntersectionGraph:
    n = None
    edges: list[tuple[int, int]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) < 4 or parts[1].lower() != "edge":
                raise ValueError(f"unsupported DIMACS problem line: {line!r}")
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise ValueError(f"unrecognized DIMACS line: {line!r}")
    if n is None:
        raise ValueError("DIMACS input is missing the problem line")
    adj = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i + 1},{j + 1}) out of range")
        if i != j:
            adj[i, j] = adj[j, i] = True
    return IntersectionGraph.from_matrix(adj)
