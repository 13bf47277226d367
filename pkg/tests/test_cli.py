import json
import subprocess
import sys
from pathlib import Path

SCENES = Path(__file__).resolve().parent.parent / "scenes"


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "berkline.cli", *args],
        capture_output=True,
        text=True,
    )


def write_scene(tmp_path, body, name="scene.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body), encoding="utf-8")
    return str(path)


def test_flow_scene_endpoint():
    res = run_cli("--scene", str(SCENES / "flow_plane.json"))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["endpoint"] == ["1", "1"]
    assert payload["total"] == "2"


def test_skeleton_scene_dot_star():
    res = run_cli("--scene", str(SCENES / "skeleton_three_points.json"))
    assert res.returncode == 0
    assert res.stdout.startswith("graph skeleton {")
    assert 'label="gauss"' in res.stdout
    assert res.stdout.count(" -- ") == 3


def test_skeleton_scene_json_depth_two():
    res = run_cli("--scene", str(SCENES / "skeleton_depth_two.json"))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    finite = [e for e in payload["edges"] if e["length"] != "inf"]
    assert [e["length"] for e in finite] == ["2"]
    assert len(payload["vertices"]) == 5


def test_family_scene_four_classes():
    res = run_cli("--scene", str(SCENES / "family_four_types.json"))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    members = sorted(tuple(v) for v in payload["classes"].values())
    assert members == [("1/5",), ("2",), ("5",), ("6", "26")]


def test_newton_scene_matches_worked_example():
    res = run_cli("--scene", str(SCENES / "newton_branching_quadratic.json"))
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["events"] == ["1"]
    first, second = payload["pieces"]
    assert first["roots"] == [{"intercept": "0", "mult": 2, "slope": "1"}]
    assert second["roots"] == [{"intercept": "1/2", "mult": 2, "slope": "1/2"}]


def test_format_override_and_out_file(tmp_path):
    out = tmp_path / "profile.csv"
    res = run_cli(
        "--scene",
        str(SCENES / "newton_branching_quadratic.json"),
        "--format",
        "csv",
        "--out",
        str(out),
    )
    assert res.returncode == 0
    assert res.stdout == ""
    text = out.read_text()
    assert text.splitlines()[0] == "lo,hi,slope,intercept,mult"


def test_svg_scene_smoke():
    res = run_cli("--scene", str(SCENES / "newton_profile_plot.json"))
    assert res.returncode == 0
    assert res.stdout.startswith("<svg ")
    assert res.stdout.rstrip().endswith("</svg>")


def test_determinism_all_bundled_scenes(tmp_path):
    for scene in sorted(SCENES.glob("*.json")):
        a = tmp_path / (scene.stem + ".a")
        b = tmp_path / (scene.stem + ".b")
        r1 = run_cli("--scene", str(scene), "--out", str(a))
        r2 = run_cli("--scene", str(scene), "--out", str(b))
        assert r1.returncode == 0 and r2.returncode == 0, scene.name
        assert a.read_bytes() == b.read_bytes(), scene.name


def test_json_artifacts_reparse_canonically():
    for scene in sorted(SCENES.glob("*.json")):
        body = json.loads(scene.read_text())
        if body.get("format") != "json":
            continue
        res = run_cli("--scene", str(scene))
        assert res.returncode == 0
        parsed = json.loads(res.stdout)
        assert json.dumps(parsed, sort_keys=True, indent=2) + "\n" == res.stdout


def test_check_flag_passes_on_bundled_scenes():
    for name in (
        "retract_deep_point.json",
        "flow_three_coordinates.json",
        "family_four_types.json",
        "trop_quadratic_embedding.json",
    ):
        res = run_cli("--scene", str(SCENES / name), "--check", "--seed", "3")
        assert res.returncode == 0, (name, res.stderr)


def test_nonprime_field_exits_one(tmp_path):
    path = write_scene(
        tmp_path,
        {"field": {"kind": "padic", "p": 4}, "skeleton": {"divisor": ["0", "inf"]}},
    )
    res = run_cli("--scene", path)
    assert res.returncode == 1
    assert "p not prime" in res.stderr


def test_two_task_blocks_exit_one(tmp_path):
    path = write_scene(
        tmp_path,
        {
            "field": {"kind": "padic", "p": 5},
            "skeleton": {"divisor": ["0", "inf"]},
            "retract": {"divisor": ["0", "inf"], "point": "1"},
        },
    )
    res = run_cli("--scene", path)
    assert res.returncode == 1
    assert "exactly one task block" in res.stderr


def test_missing_scene_file_exits_one(tmp_path):
    res = run_cli("--scene", str(tmp_path / "absent.json"))
    assert res.returncode == 1


def test_unsupported_format_exits_one(tmp_path):
    path = write_scene(
        tmp_path,
        {
            "field": {"kind": "padic", "p": 5},
            "retract": {"divisor": ["0", "inf"], "point": "1"},
            "format": "svg",
        },
    )
    res = run_cli("--scene", path)
    assert res.returncode == 1
    assert "render" in res.stderr


def test_precondition_exits_two(tmp_path):
    path = write_scene(
        tmp_path,
        {
            "field": {"kind": "padic", "p": 5},
            "newton": {"coeffs": [["1", "1"]], "center": "0"},
        },
    )
    res = run_cli("--scene", path)
    assert res.returncode == 2


def test_flow_inconsistency_exits_three(tmp_path):
    path = write_scene(
        tmp_path,
        {
            "field": {"kind": "padic", "p": 5},
            "flow": {
                "w": ["a", "b", "h"],
                "h": "h",
                "functionals": [
                    {"alpha": {"a": 1, "b": 1}, "c": 0},
                    {"alpha": {"a": 1}, "c": 0},
                    {"alpha": {"h": 1}, "c": 0},
                ],
                "start": ["4", "-4", "0"],
                "t": "inf",
            },
        },
    )
    res = run_cli("--scene", path)
    assert res.returncode == 3
    assert "inconsistency" in res.stderr
