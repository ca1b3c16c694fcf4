import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from hompath import io, scenes
from hompath.cli import EXIT_INVALID, EXIT_OK, EXIT_PARTIAL, run_cli
from hompath.knot import build_surfaces

SCENES = Path(__file__).resolve().parent.parent / "scenes"


def test_scene_files_match_builtin_scenes():
    scene, start, goal, extras = io.scene_from_dict("plan2d", json.loads((SCENES / "two_obstacles.json").read_text()))
    ref, rs, rg = scenes.two_obstacles()
    assert (scene, start, goal) == (ref, rs, rg) and extras["connectivity"] == "4"
    link, s, g, _ = io.scene_from_dict("plan3d", json.loads((SCENES / "trefoil.json").read_text()))
    assert link == scenes.trefoil() and s == scenes.TREFOIL_START and g == scenes.TREFOIL_GOAL
    robots, s, g, _ = io.scene_from_dict("coord", json.loads((SCENES / "three_robots.json").read_text()))
    assert robots == scenes.three_robots()


@pytest.mark.parametrize("name,kind", [
    ("six_obstacles", "plan2d"), ("two_obstacles", "plan2d"), ("one_disk", "plan2d"), ("empty_2d", "plan2d"),
    ("trefoil", "plan3d"), ("hopf", "plan3d"), ("unknot", "plan3d"),
    ("three_robots", "coord"), ("three_robots_small", "coord"),
])
def test_scene_round_trip(name, kind):
    d = json.loads((SCENES / f"{name}.json").read_text())
    scene, start, goal, extras = io.scene_from_dict(kind, d)
    again = io.scene_to_dict(kind, scene, start, goal, **extras)
    assert io.scene_from_dict(kind, again) == (scene, start, goal, extras)


def test_malformed_json_reports_position(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n "bounds": [0, 0, 1, 1],\n "obstacles": [,]\n}\n')
    with pytest.raises(io.InputError, match="line 3"):
        io.load_request("plan2d", bad)


@pytest.mark.parametrize("doc,match", [
    ({"obstacles": []}, "bounds"),
    ({"bounds": [0, 0, 1, 1], "start": [0, 0]}, "goal"),
    ({"bounds": [0, 0, 1, 1], "start": [0, 0], "goal": [1, "x"]}, "goal"),
    ({"format": 2, "bounds": [0, 0, 1, 1], "start": [0, 0], "goal": [1, 1]}, "format"),
    ({"bounds": [0, 0, 1, 1], "obstacles": [[[0, 0], [1, 1]]], "start": [0, 0], "goal": [1, 1]}, "obstacle 0"),
])
def test_field_errors(doc, match):
    with pytest.raises(io.InputError, match=match):
        io.scene_from_dict("plan2d", doc)


def test_coord_and_link_field_errors():
    with pytest.raises(io.InputError, match="grid"):
        io.scene_from_dict("coord", {"N": 3, "start": [], "goal": []})
    with pytest.raises(io.InputError, match="robot"):
        io.scene_from_dict("coord", {"N": 2, "grid": [3, 3], "start": [[0, 0], [5, 0]], "goal": [[0, 1], [1, 1]]})
    with pytest.raises(io.InputError, match="tube_radius"):
        io.scene_from_dict("plan3d", {"components": [], "start": [0, 0, 0], "goal": [1, 1, 1]})


def test_result_record_round_trip():
    rec = io.ResultRecord(
        "plan2d", 2, False,
        [io.ClassRecord(3.5, "r1 r2^-1", "r1 r2^-1", [[0.0, 0.0], [1.0, 2.0]], [[0.0, 0.0], [1.0, 2.0]], 2.23)],
        {"alphabet": ["r1", "r2"], "relations": []}, 17,
    )
    text = rec.to_json()
    assert io.ResultRecord.from_json(text) == rec
    assert io.ResultRecord.from_json(text).to_json() == text
    assert json.loads(text)["format"] == 1


def test_cli_exit_codes_and_determinism(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["plan2d", "--scene", str(SCENES / "two_obstacles.json"), "--k", "4", "--res", "20"]
    assert run_cli(args + ["--out", str(out1)]) == EXIT_OK
    assert run_cli(args + ["--out", str(out2)]) == EXIT_OK
    assert out1.read_bytes() == out2.read_bytes()
    rec = io.ResultRecord.from_json(out1.read_text())
    assert [c.cost for c in rec.classes] == [23, 25, 27, 31]
    assert all(c.shortened_length <= c.cost for c in rec.classes)

    partial = tmp_path / "p.json"
    assert run_cli(["plan2d", "--scene", str(SCENES / "empty_2d.json"), "--k", "2", "--res", "10",
                    "--out", str(partial)]) == EXIT_PARTIAL
    assert io.ResultRecord.from_json(partial.read_text()).complete is False

    assert run_cli(["plan2d", "--scene", str(tmp_path / "missing.json"), "--out", str(partial)]) == EXIT_INVALID
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run_cli(["coord", "--scene", str(bad), "--out", str(partial)]) == EXIT_INVALID


def test_cli_coord_and_console_entry(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "hompath.cli", "coord", "--scene", str(SCENES / "three_robots_small.json"),
         "--k", "4", "--max-word", "6", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == EXIT_OK, proc.stderr
    rec = io.ResultRecord.from_json(out.read_text())
    assert [c.cost for c in rec.classes] == [8, 8, 10, 10]
    assert all(c.shortened is None for c in rec.classes)
    assert rec.presentation["alphabet"] == ["u:1,2", "u:1,3/+", "u:1,3/-", "u:2,3"]


def test_obj_export_counts(tmp_path):
    ss = build_surfaces(scenes.trefoil())
    paths = [[(0, 0, 0), (1, 0, 0), (1, 1, 0)], [(0, 0), (2, 2)]]
    f = tmp_path / "x.obj"
    io.export_obj(ss.surfaces, paths, f)
    lines = f.read_text().splitlines()
    ntri = sum(len(s.triangles) for s in ss.surfaces)
    assert sum(l.startswith("o ") for l in lines) == len(ss.surfaces) + 2
    assert sum(l.startswith("f ") for l in lines) == ntri
    assert sum(l.startswith("v ") for l in lines) == 3 * ntri + 5
    assert sum(l.startswith("l ") for l in lines) == 2
    verts = np.array([[float(x) for x in l.split()[1:]] for l in lines if l.startswith("v ")])
    assert np.array_equal(verts[: 3 * ntri], np.concatenate([s.triangles for s in ss.surfaces]).reshape(-1, 3))
    # face indices are 1-based and in range
    idx = [int(x) for l in lines if l.startswith(("f ", "l ")) for x in l.split()[1:]]
    assert min(idx) == 1 and max(idx) == len(verts)


def test_cli_plan3d_writes_obj(tmp_path):
    out, obj = tmp_path / "r.json", tmp_path / "s.obj"
    code = run_cli(["plan3d", "--scene", str(SCENES / "unknot.json"), "--k", "2", "--res", "12",
                    "--out", str(out), "--obj", str(obj)])
    assert code == EXIT_OK
    rec = io.ResultRecord.from_json(out.read_text())
    assert len(rec.classes) == 2
    text = obj.read_text()
    assert text.count("\no u1\n") == 1 and text.count("\no path") == 2
