import csv
import os
import subprocess
import sys
from pathlib import Path

import pytest

from antnav.cli import main

REPO = Path(__file__).resolve().parent.parent
SCENARIOS = REPO / "scenarios"

MAP = """\
cellsize 1.0
start 2 4 0
goal 8 4
###########
#.........#
#.........#
#....##...#
#....##...#
#.........#
#.........#
#.........#
###########
"""

SCN = """\
format 1
map small.map
seed 4
ants 8
iterations 6
"""


@pytest.fixture
def small_scenario(tmp_path):
    (tmp_path / "small.map").write_text(MAP)
    (tmp_path / "small.scn").write_text(SCN)
    return tmp_path / "small.scn"


class TestCmdRun:
    def test_run_writes_outputs_and_exits_zero(self, small_scenario, tmp_path):
        out = tmp_path / "out"
        code = main(["run", "--scenario", str(small_scenario), "--out", str(out)])
        assert code == 0
        assert (out / "trajectory.csv").exists()
        assert (out / "summary.txt").exists()
        assert (out / "plot.svg").exists()
        rows = list(csv.reader((out / "trajectory.csv").open()))
        assert rows[0] == ["cycle", "x", "y", "psi", "dist_to_goal"]
        assert len(rows) > 2
        summary = (out / "summary.txt").read_text()
        assert "status: goal_reached" in summary

    def test_no_plot_flag(self, small_scenario, tmp_path):
        out = tmp_path / "out"
        code = main(["run", "--scenario", str(small_scenario), "--out", str(out), "--no-plot"])
        assert code == 0
        assert not (out / "plot.svg").exists()

    def test_malformed_scenario_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.scn"
        bad.write_text("format 1\nmap small.map\nseed nope\n")
        code = main(["run", "--scenario", str(bad), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "line 3" in capsys.readouterr().err

    def test_malformed_map_exits_one(self, tmp_path, capsys):
        (tmp_path / "bad.map").write_text("cellsize 1.0\nstart 0 0 0\ngoal 1 1\n..\n.x#\n")
        (tmp_path / "bad.scn").write_text("format 1\nmap bad.map\n")
        code = main(["run", "--scenario", str(tmp_path / "bad.scn"), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "line 5" in capsys.readouterr().err

    def test_sealed_room_exits_two(self, tmp_path):
        code = main(["run", "--scenario", str(SCENARIOS / "sealed.scn"),
                     "--out", str(tmp_path / "o"), "--no-plot"])
        assert code == 2

    def test_svg_has_exactly_one_polyline(self, small_scenario, tmp_path):
        out = tmp_path / "out"
        main(["run", "--scenario", str(small_scenario), "--out", str(out)])
        svg = (out / "plot.svg").read_text()
        assert svg.count("<polyline") == 1


class TestCmdCompare:
    def test_outputs_and_row_counts(self, small_scenario, tmp_path):
        out = tmp_path / "cmp"
        code = main(["compare", "--scenario", str(small_scenario), "--out", str(out),
                     "--repeats", "3"])
        assert code == 0
        rows = list(csv.reader((out / "compare_runs.csv").open()))
        assert len(rows) == 1 + 3 * 3  # header + repeats per planner
        comparison = list(csv.reader((out / "comparison.csv").open()))
        assert comparison[0] == ["planner", "optimal_path_length",
                                 "average_path_length", "failures"]
        assert [r[0] for r in comparison[1:]] == ["proposed", "conventional-aco", "apf"]
        assert (out / "timings.csv").exists()
        assert (out / "distance_proposed.csv").exists()
        assert (out / "aco_series_proposed.csv").exists()
        assert (out / "aco_series_conventional-aco.csv").exists()
        assert not (out / "aco_series_apf.csv").exists()

    def test_unknown_planner_exits_one(self, small_scenario, tmp_path, capsys):
        code = main(["compare", "--scenario", str(small_scenario),
                     "--out", str(tmp_path / "o"), "--planner", "proposed,dijkstra"])
        assert code == 1
        assert "unknown planner" in capsys.readouterr().err

    def test_planner_subset(self, small_scenario, tmp_path):
        out = tmp_path / "cmp"
        code = main(["compare", "--scenario", str(small_scenario), "--out", str(out),
                     "--planner", "proposed", "--repeats", "2"])
        assert code == 0
        rows = list(csv.reader((out / "compare_runs.csv").open()))
        assert len(rows) == 3


class TestCmdSweep:
    def test_sweep_rows(self, small_scenario, tmp_path):
        groups = tmp_path / "w.groups"
        groups.write_text("g1 4 1.8 1 1 0\ng2 4 1.8 1 0.7 0.3\n")
        out = tmp_path / "swp"
        code = main(["sweep", "--scenario", str(small_scenario), "--out", str(out),
                     "--groups", str(groups), "--repeats", "2"])
        assert code == 0
        agg = list(csv.reader((out / "sweep.csv").open()))
        assert agg[0] == ["group", "metric", "best", "worst", "average"]
        assert len(agg) == 1 + 2 * 2  # two metrics per group
        raw = list(csv.reader((out / "sweep_runs.csv").open()))
        assert len(raw) == 1 + 2 * 2

    def test_empty_groups_exits_one(self, small_scenario, tmp_path, capsys):
        groups = tmp_path / "e.groups"
        groups.write_text("\n")
        code = main(["sweep", "--scenario", str(small_scenario),
                     "--out", str(tmp_path / "o"), "--groups", str(groups)])
        assert code == 1


class TestDeterminism:
    def run_cli(self, args, threads):
        env = dict(os.environ, REPLAN_THREADS=str(threads))
        return subprocess.run([sys.executable, "-m", "antnav", *args],
                              capture_output=True, text=True, env=env, cwd=REPO)

    def test_byte_identical_csvs_across_threads(self, small_scenario, tmp_path):
        outs = []
        for threads, name in ((0, "a"), (0, "b"), (2, "c")):
            out = tmp_path / name
            res = self.run_cli(["run", "--scenario", str(small_scenario),
                                "--out", str(out), "--no-plot"], threads)
            assert res.returncode == 0, res.stderr
            outs.append(out)
        ref = (outs[0] / "trajectory.csv").read_bytes()
        for out in outs[1:]:
            assert (out / "trajectory.csv").read_bytes() == ref

    def test_seed_override_changes_output(self, small_scenario, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        main(["run", "--scenario", str(small_scenario), "--out", str(a), "--no-plot"])
        main(["run", "--scenario", str(small_scenario), "--out", str(b), "--no-plot",
              "--seed", "123"])
        sa = (a / "summary.txt").read_text()
        sb = (b / "summary.txt").read_text()
        assert "seed: 4" in sa and "seed: 123" in sb
