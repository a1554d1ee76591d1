import json
import re

import pytest

from convex_chroma.cli import EXIT_CAPPED, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, main
from convex_chroma.families import load_family, save_family
from convex_chroma.graph_core import build_graph, from_dimacs


def run(args: list[str]) -> int:
    return main(args)


@pytest.fixture
def pentagon2(tmp_path):
    path = tmp_path / "p2.json"
    assert run(["generate", "pentagon", "--k", "2", "--out", str(path)]) == EXIT_OK
    return path


@pytest.fixture
def grid2(tmp_path):
    path = tmp_path / "g2.json"
    assert run(["generate", "grid", "--body", "square", "--m", "2", "--out", str(path)]) == EXIT_OK
    return path


class TestGenerate:
    def test_pentagon_member_count(self, pentagon2):
        assert len(load_family(pentagon2)) == 10

    def test_grid_member_count(self, grid2):
        assert len(load_family(grid2)) == 16

    def test_random_deterministic_bytes(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        args = ["generate", "random", "--body", "disk", "--count", "20", "--seed", "42"]
        assert run(args + ["--out", str(a)]) == EXIT_OK
        assert run(args + ["--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_bad_body(self, tmp_path):
        assert run(["generate", "grid", "--body", "pentagonzoid",
                    "--out", str(tmp_path / "x.json")]) == EXIT_INPUT

    def test_box_body_needs_sides(self, tmp_path):
        assert run(["generate", "grid", "--body", "box",
                    "--out", str(tmp_path / "x.json")]) == EXIT_INPUT
        assert run(["generate", "grid", "--body", "box", "--sides", "1,1,1", "--m", "1",
                    "--out", str(tmp_path / "b.json")]) == EXIT_OK


class TestColor:
    def test_grid_translates(self, grid2, tmp_path):
        out = tmp_path / "rep.json"
        assert run(["color", "--in", str(grid2), "--method", "translates",
                    "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        colors = rep["outputs"]["coloring"]["colors_used"]
        assert 9 <= colors <= 18
        assert rep["all_passed"]
        assert "wall_time_ms" not in rep  # canonical bytes exclude volatile fields

    def test_homothets_on_random(self, tmp_path):
        fam = tmp_path / "h.json"
        out = tmp_path / "rep.json"
        assert run(["generate", "random", "--body", "square", "--count", "30",
                    "--scales", "1,3", "--seed", "7", "--out", str(fam)]) == EXIT_OK
        assert run(["color", "--in", str(fam), "--method", "homothets",
                    "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        assert rep["outputs"]["coloring"]["kappa_ub"] == 4

    def test_translates_flag_on_mixed_scale_errors(self, tmp_path):
        fam = tmp_path / "h.json"
        assert run(["generate", "random", "--body", "square", "--count", "5",
                    "--scales", "1,3", "--seed", "1", "--out", str(fam)]) == EXIT_OK
        assert run(["color", "--in", str(fam), "--method", "translates",
                    "--out", str(tmp_path / "r.json")]) == EXIT_INPUT

    def test_symmetrized(self, pentagon2, tmp_path):
        out = tmp_path / "rep.json"
        assert run(["color", "--in", str(pentagon2), "--method", "symmetrized",
                    "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        assert rep["outputs"]["coloring"]["method"] == "corollary1"


class TestPartition:
    def test_grid_translates(self, grid2, tmp_path):
        out = tmp_path / "rep.json"
        assert run(["partition", "--in", str(grid2), "--method", "translates",
                    "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        assert rep["outputs"]["partition"]["classes_used"] <= 8  # 2 * nu with nu = 4

    def test_homothets_on_pentagon_disjoint(self, tmp_path):
        fam = tmp_path / "pd2.json"
        out = tmp_path / "rep.json"
        assert run(["generate", "pentagon-disjoint", "--k", "2", "--out", str(fam)]) == EXIT_OK
        assert run(["partition", "--in", str(fam), "--method", "homothets",
                    "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        classes = rep["outputs"]["partition"]["classes_used"]
        assert 4 <= classes <= 4 * (4 - 1) + 1  # nu = 4, kappa = 4

    def test_empty_family(self, tmp_path):
        fam = tmp_path / "empty.json"
        fam.write_text('{"body": {"kind": "box", "sides": [1,1]}, "placements": [], "meta": {}}\n')
        out = tmp_path / "rep.json"
        assert run(["partition", "--in", str(fam), "--method", "translates",
                    "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["outputs"]["partition"]["classes_used"] == 0


class TestVerify:
    def test_pentagon_all_pass(self, pentagon2, tmp_path):
        out = tmp_path / "rep.json"
        assert run(["verify", "--in", str(pentagon2), "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        assert rep["oracles"]["chi"] == 5
        assert rep["all_passed"]

    def test_grid_pass_with_theta_equal_nu(self, grid2, tmp_path):
        out = tmp_path / "rep.json"
        assert run(["verify", "--in", str(grid2), "--out", str(out)]) == EXIT_OK
        rep = json.loads(out.read_text())
        assert rep["oracles"]["theta"] == 4 and rep["oracles"]["nu"] == 4

    def test_corrupted_claim_fails(self, pentagon2, tmp_path, capsys):
        claim = tmp_path / "claim.json"
        claim.write_text('{"omega": 7}')
        out = tmp_path / "rep.json"
        assert run(["verify", "--in", str(pentagon2), "--expect", str(claim),
                    "--out", str(out)]) == EXIT_VIOLATION
        err = capsys.readouterr().err
        assert "claim mismatch" in err

    def test_correct_claims_pass(self, pentagon2, tmp_path):
        claim = tmp_path / "claim.json"
        claim.write_text('{"omega": 4, "chi": 5, "nu": 2, "theta": 3}')
        assert run(["verify", "--in", str(pentagon2), "--expect", str(claim),
                    "--out", str(tmp_path / "r.json")]) == EXIT_OK

    def test_capped_exit(self, grid2, tmp_path):
        assert run(["verify", "--in", str(grid2), "--caps", "omega=100,chi=10",
                    "--out", str(tmp_path / "r.json")]) == EXIT_CAPPED

    def test_caps_env_override(self, grid2, tmp_path, monkeypatch):
        monkeypatch.setenv("CONVEX_CHROMA_CAPS", "omega=100,chi=10")
        assert run(["verify", "--in", str(grid2),
                    "--out", str(tmp_path / "r.json")]) == EXIT_CAPPED

    def test_byte_identical_reports(self, pentagon2, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(["verify", "--in", str(pentagon2), "--seed", "1", "--out", str(a)]) == EXIT_OK
        assert run(["verify", "--in", str(pentagon2), "--seed", "1", "--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()

    def test_missing_file(self, tmp_path):
        assert run(["verify", "--in", str(tmp_path / "nope.json"),
                    "--out", str(tmp_path / "r.json")]) == EXIT_INPUT


class TestExport:
    def test_dimacs_c5(self, tmp_path):
        fam = tmp_path / "p1.json"
        out = tmp_path / "g.dimacs"
        assert run(["generate", "pentagon", "--k", "1", "--out", str(fam)]) == EXIT_OK
        assert run(["export", "--in", str(fam), "--format", "dimacs",
                    "--out", str(out)]) == EXIT_OK
        assert out.read_text().startswith("p edge 5 5\n")

    def test_dimacs_grid_and_reimport(self, grid2, tmp_path):
        out = tmp_path / "g.dimacs"
        assert run(["export", "--in", str(grid2), "--format", "dimacs",
                    "--out", str(out)]) == EXIT_OK
        text = out.read_text()
        assert text.startswith("p edge 16 ")
        again = from_dimacs(text)
        assert again.rows == build_graph(load_family(grid2)).rows

    def test_svg_with_five_fill_classes(self, pentagon2, tmp_path):
        rep = tmp_path / "rep.json"
        out = tmp_path / "fam.svg"
        assert run(["color", "--in", str(pentagon2), "--method", "translates",
                    "--out", str(rep)]) == EXIT_OK
        assert run(["export", "--in", str(pentagon2), "--format", "svg",
                    "--coloring", str(rep), "--out", str(out)]) == EXIT_OK
        fills = set(re.findall(r'fill="(#\w+)"', out.read_text()))
        used = json.loads(rep.read_text())["outputs"]["coloring"]["colors_used"]
        assert len(fills) == min(used, 12)

    def test_svg_via_explicit_color_list(self, pentagon2, tmp_path):
        colors = tmp_path / "colors.json"
        from convex_chroma.constructions import explicit_pentagon_coloring

        colors.write_text(json.dumps(list(explicit_pentagon_coloring(2))))
        out = tmp_path / "fam.svg"
        assert run(["export", "--in", str(pentagon2), "--format", "svg",
                    "--coloring", str(colors), "--out", str(out)]) == EXIT_OK
        fills = set(re.findall(r'fill="(#\w+)"', out.read_text()))
        assert len(fills) == 5

    def test_svg_rejects_3d(self, tmp_path):
        fam = tmp_path / "b3.json"
        assert run(["generate", "grid", "--body", "box", "--sides", "1,1,1", "--m", "1",
                    "--out", str(fam)]) == EXIT_OK
        assert run(["export", "--in", str(fam), "--format", "svg",
                    "--out", str(tmp_path / "x.svg")]) == EXIT_INPUT

    def test_csv(self, grid2, tmp_path):
        out = tmp_path / "inv.csv"
        assert run(["export", "--in", str(grid2), "--format", "csv",
                    "--out", str(out)]) == EXIT_OK
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "invariant,value,capped,lower,upper"
        values = {row.split(",")[0]: row.split(",")[1] for row in lines[1:]}
        assert values["omega"] == "9" and values["theta"] == "4"


class TestFamilyRoundTrip:
    def test_load_save_byte_stable(self, pentagon2, tmp_path):
        fam = load_family(pentagon2)
        path = tmp_path / "resaved.json"
        save_family(fam, path)
        assert path.read_bytes() == pentagon2.read_bytes()
