import numpy as np
import pytest

from convex_chroma.constructions import (
    explicit_pentagon_coloring,
    grid_family,
    pentagon_disjoint_family,
    pentagon_family,
)
from convex_chroma.families import translates
from convex_chroma.graph_core import (
    GraphInvariants,
    IntersectionGraph,
    build_graph,
    chromatic_number,
    clique_cover_number,
    compute_invariants,
    from_dimacs,
    max_clique,
    max_independent_set,
    to_dimacs,
    verify_clique_partition,
    verify_coloring,
)
from conftest import (
    brute_chromatic,
    brute_max_clique,
    brute_max_independent_set,
    graph_matrix,
    random_graph,
)


def c5_graph() -> IntersectionGraph:
    adj = np.zeros((5, 5), dtype=bool)
    for i in range(5):
        adj[i, (i + 1) % 5] = adj[(i + 1) % 5, i] = True
    return IntersectionGraph.from_matrix(adj)


class TestBuildGraph:
    def test_pentagon_family_is_c5(self):
        g = build_graph(pentagon_family(1))
        for i in range(5):
            for j in range(i + 1, 5):
                expected = (j - i) in (1, 4)
                assert g.adjacent(i, j) == expected

    def test_two_touching_squares_single_edge(self, unit_square):
        g = build_graph(translates(unit_square, [(0, 0), (1, 0)]))
        assert g.edges() == [(0, 1)]

    def test_grid_corner_degree(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        adj = graph_matrix(g)
        # corners of the 4x4 lattice: first and last coordinates on both axes
        corner_indices = [0, 3, 12, 15]
        for idx in corner_indices:
            # oracle: direct pairwise recount
            assert adj[idx].sum() == 8

    def test_validation(self):
        with pytest.raises(ValueError):
            IntersectionGraph(member_count=2, rows=(1, 0))  # asymmetric


class TestMaxClique:
    def test_c5(self):
        assert max_clique(c5_graph()).value == 2

    def test_grid_against_brute_force(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        assert max_clique(g).value == 9
        assert brute_max_clique(graph_matrix(g)) == 9

    def test_pentagon_blowup(self):
        g = build_graph(pentagon_family(2))
        assert max_clique(g).value == 4

    def test_witness_is_clique(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        res = max_clique(g)
        for a in range(len(res.witness)):
            for b in range(a + 1, len(res.witness)):
                assert g.adjacent(res.witness[a], res.witness[b])

    def test_cap(self):
        adj = random_graph(0, 30)
        g = IntersectionGraph.from_matrix(adj)
        res = max_clique(g, cap=10)
        assert res.capped and res.value is None
        assert res.lower >= 1 and res.upper == 30


class TestMaxIndependentSet:
    def test_c5(self):
        assert max_independent_set(c5_graph()).value == 2

    def test_grid_against_brute_force(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        assert max_independent_set(g).value == 4
        assert brute_max_independent_set(graph_matrix(g)) == 4

    def test_pentagon_disjoint(self):
        g = build_graph(pentagon_disjoint_family(2))
        assert max_independent_set(g).value == 4


class TestChromaticNumber:
    def test_odd_cycle(self):
        assert chromatic_number(c5_graph()).value == 3

    def test_pentagon_five_coloring(self):
        assert chromatic_number(build_graph(pentagon_family(2))).value == 5

    def test_pentagon_k3(self):
        assert chromatic_number(build_graph(pentagon_family(3))).value == 8

    def test_witness_proper(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        res = chromatic_number(g)
        assert res.value == 9
        assert verify_coloring(g, list(res.witness))
        assert max(res.witness) + 1 == res.value

    def test_capped_reports_bounds(self):
        g = IntersectionGraph.from_matrix(random_graph(1, 25))
        res = chromatic_number(g, cap=10)
        assert res.capped and res.lower <= res.upper
        assert verify_coloring(g, list(res.witness))  # greedy witness still proper


class TestCliqueCover:
    def test_c5(self):
        assert clique_cover_number(c5_graph()).value == 3

    def test_pentagon_disjoint(self):
        assert clique_cover_number(build_graph(pentagon_disjoint_family(2))).value == 6

    def test_grid(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        res = clique_cover_number(g)
        assert res.value == 4
        assert verify_clique_partition(g, list(res.witness))


class TestVerifiers:
    def test_c5_colorings(self):
        g = c5_graph()
        assert verify_coloring(g, [0, 1, 0, 1, 2])
        assert not verify_coloring(g, [0, 1, 0, 1, 0])

    def test_explicit_pentagon_coloring(self):
        g = build_graph(pentagon_family(2))
        assert verify_coloring(g, list(explicit_pentagon_coloring(2)))

    def test_partition_checks(self):
        g = c5_graph()
        assert verify_clique_partition(g, [0, 0, 1, 1, 2])
        assert not verify_clique_partition(g, [0, 0, 0, 1, 1])

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            verify_coloring(c5_graph(), [0, 1])


class TestComplementDuality:
    def test_random_graphs(self):
        for seed in range(100):
            n = 6 + seed % 15
            adj = random_graph(seed, n)
            g = IntersectionGraph.from_matrix(adj)
            comp = g.complement()
            chi = chromatic_number(g).value
            theta_comp = clique_cover_number(comp).value
            assert chi == theta_comp
            assert max_clique(g).value == max_independent_set(comp).value
            assert max_clique(g).value <= chi

    def test_brute_force_spot_checks(self):
        for seed in range(10):
            adj = random_graph(seed + 500, 9)
            g = IntersectionGraph.from_matrix(adj)
            assert max_clique(g).value == brute_max_clique(adj)
            assert chromatic_number(g).value == brute_chromatic(adj)


class TestDeterminism:
    def test_identical_witnesses(self, unit_square):
        g1 = build_graph(grid_family(unit_square, 2))
        g2 = build_graph(grid_family(unit_square, 2))
        assert max_clique(g1) == max_clique(g2)
        assert chromatic_number(g1) == chromatic_number(g2)
        assert clique_cover_number(g1) == clique_cover_number(g2)


class TestInvariantsBundle:
    def test_chains_assert(self, unit_square):
        inv = compute_invariants(build_graph(grid_family(unit_square, 2)))
        assert (inv.omega.value, inv.alpha.value, inv.chi.value, inv.theta.value) == (9, 4, 9, 4)

    def test_bad_bundle_rejected(self):
        from convex_chroma.graph_core import SolveResult

        with pytest.raises(AssertionError):
            GraphInvariants(
                omega=SolveResult(value=5, witness=()),
                alpha=SolveResult(value=1, witness=()),
                chi=SolveResult(value=3, witness=()),
                theta=SolveResult(value=1, witness=()),
            )


class TestDimacs:
    def test_format(self):
        text = to_dimacs(build_graph(pentagon_family(1)))
        lines = text.strip().splitlines()
        assert lines[0] == "p edge 5 5"
        assert len(lines) == 6
        assert all(line.startswith("e ") for line in lines[1:])

    def test_grid_node_count(self, unit_square):
        text = to_dimacs(build_graph(grid_family(unit_square, 2)))
        assert text.startswith("p edge 16 ")

    def test_round_trip(self, unit_square):
        g = build_graph(grid_family(unit_square, 2))
        again = from_dimacs(to_dimacs(g))
        assert again.rows == g.rows

    def test_comments_and_errors(self):
        g = from_dimacs("c comment\np edge 3 1\ne 1 2\n")
        assert g.adjacent(0, 1) and not g.adjacent(0, 2)
        with pytest.raises(ValueError):
            from_dimacs("e 1 2\n")
        with pytest.raises(ValueError):
            from_dimacs("p edge 2 1\ne 1 5\n")
