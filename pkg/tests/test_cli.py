"""Command line behavior: exit codes, reports, artifacts."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest

import roundsets as rs
from roundsets.cli import main


@pytest.fixture()
def files(tmp_path):
    """Set files used by most commands."""
    outer = rs.Ccg([0, 0], [[2, 0], [0, 1.5]], rs.single_group(2, 2.0, 1.0))
    inner = rs.Ccg([0, 0], [[2, 0], [0, 1.5]], rs.single_group(2, 2.0, 0.5))
    paths = {
        "outer": outer,
        "ring": rs.from_difference(outer, inner),
        "hs": rs.Halfspace([1, 0], 0),
        "hs_far": rs.Halfspace([1, 0], -5),
    }
    out = {}
    for name, value in paths.items():
        p = tmp_path / f"{name}.json"
        p.write_bytes(rs.emit_set_json(value))
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report


# --------------------------------------------------------------------------
# validate / member


def test_validate_reports_digest(files, capsys):
    code, report = run_cli(capsys, "validate", files["ring"])
    assert code == 0
    assert report["result"]["kind"] == "rcg"
    assert len(report["inputs"]["set"]["sha256"]) == 64


def test_validate_rejects_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "ccg"}')
    code, _ = run_cli(capsys, "validate", str(bad))
    assert code == 2


def test_missing_file_is_io_failure(capsys):
    code, _ = run_cli(capsys, "validate", "no-such-file.json")
    assert code == 3


def test_member_exit_codes(files, capsys):
    code, report = run_cli(capsys, "member", files["ring"], "--point", "1.5,0")
    assert code == 0
    assert report["result"]["verdict"] == "Feasible"
    code, report = run_cli(capsys, "member", files["ring"], "--point", "0.5,0")
    assert code == 1
    assert report["result"]["verdict"] == "Infeasible"


def test_member_indeterminate_exit(tmp_path, capsys):
    s = rs.Ccg(
        [0.0],
        [[1.0, 0.1]],
        (rs.NormGroup((1,), math.inf), rs.NormGroup((2,), math.inf)),
    )
    p = tmp_path / "thin.json"
    p.write_bytes(rs.emit_set_json(s))
    code, report = run_cli(capsys, "member", str(p), "--point", "1.05", "--max-iter", "1")
    assert code == 4
    assert report["result"]["verdict"] == "Indeterminate"


def test_member_on_halfspace_is_invalid(files, capsys):
    code, _ = run_cli(capsys, "member", files["hs"], "--point", "0,0")
    assert code == 2


def test_bad_tolerances_are_invalid(files, capsys):
    code, _ = run_cli(capsys, "member", files["ring"], "--point", "1,0", "--tol-feas", "-1")
    assert code == 2


# --------------------------------------------------------------------------
# ops


def test_op_minksum_writes_result(files, tmp_path, capsys):
    out = tmp_path / "sum.json"
    code, report = run_cli(capsys, "op", "minksum", files["outer"], files["outer"], "-o", str(out))
    assert code == 0
    assert report["result"]["kind"] == "ccg"
    written = rs.parse_set_json(out.read_bytes())
    assert written.n_generators == 4


def test_op_two_rings_unsupported(files, tmp_path, capsys):
    out = tmp_path / "never.json"
    code, report = run_cli(capsys, "op", "minksum", files["ring"], files["ring"], "-o", str(out))
    assert code == 5
    assert report is None
    assert not out.exists()
    code, _ = run_cli(capsys, "op", "intersect", files["ring"], files["ring"], "-o", str(out))
    assert code == 5


def test_op_halfspace_prints_dmax(files, tmp_path, capsys):
    out = tmp_path / "cut.json"
    code, report = run_cli(capsys, "op", "halfspace", files["outer"], files["hs"], "-o", str(out))
    assert code == 0
    assert report["result"]["d_max"] == 2.0
    assert not report["result"]["empty"]
    assert out.exists()


def test_op_halfspace_empty(files, tmp_path, capsys):
    out = tmp_path / "cut.json"
    code, report = run_cli(capsys, "op", "halfspace", files["outer"], files["hs_far"], "-o", str(out))
    assert code == 1
    assert report["result"]["empty"]
    assert report["result"]["d_max"] == -3.0
    assert not out.exists()


def test_op_halfspace_on_ring_unsupported(files, tmp_path, capsys):
    code, _ = run_cli(
        capsys, "op", "halfspace", files["ring"], files["hs"], "-o", str(tmp_path / "x.json")
    )
    assert code == 5


def test_op_map(files, tmp_path, capsys):
    out = tmp_path / "mapped.json"
    code, report = run_cli(
        capsys, "op", "map", files["ring"], "--matrix", "[[0,1],[1,0]]", "-o", str(out)
    )
    assert code == 0
    mapped = rs.parse_set_json(out.read_bytes())
    assert np.allclose(mapped.outer.G, [[0, 1.5], [2, 0]])
    code, _ = run_cli(
        capsys, "op", "map", files["ring"], "--matrix", "[[0,1],", "-o", str(out)
    )
    assert code == 2


def test_op_annulus(files, capsys):
    code, report = run_cli(capsys, "op", "annulus", files["ring"])
    assert code == 0
    assert report["result"] == {
        "applicable": True,
        "lower": 0.5,
        "upper": 1.0,
        "p_outer": 2.0,
        "p_inner": 2.0,
        "c": [0.0, 0.0],
        "G": [[2.0, 0.0], [0.0, 1.5]],
    }
    code, _ = run_cli(capsys, "op", "annulus", files["outer"])
    assert code == 2


def test_op_rz_intersect(tmp_path, capsys):
    G = [[2, 0.5], [0.5, 2]]
    rz = rs.roundabout_zonotope([1, 1], G, [1, 1], G, 0.6)
    y = rs.Ccg([3, 2.5], [[1, -0.8, 0.3], [0.8, 1, 0.1]], rs.single_group(3, "inf", 1.0))
    rz_p, y_p = tmp_path / "rz.json", tmp_path / "y.json"
    rz_p.write_bytes(rs.emit_set_json(rz))
    y_p.write_bytes(rs.emit_set_json(y))
    out = tmp_path / "cut.json"
    code, report = run_cli(capsys, "op", "rz-intersect", str(rz_p), str(y_p), "-o", str(out))
    assert code == 0
    assert report["result"]["param_region"] == {"lower": 0.6, "upper": 1.0}
    cut = rs.parse_set_json(out.read_bytes())
    assert rs.rcg_member([3, 2.5], cut).status is rs.Status.FEASIBLE


# --------------------------------------------------------------------------
# raster / batch


def test_raster_outputs(files, tmp_path, capsys):
    csv_p = tmp_path / "grid.csv"
    svg_p = tmp_path / "grid.svg"
    code, report = run_cli(
        capsys,
        "raster", files["ring"],
        "--bbox=-3,3,-3,3", "--res", "50,50",
        "--csv", str(csv_p), "--svg", str(svg_p),
    )
    assert code == 0
    assert abs(report["result"]["filled_fraction"] - 2.25 * math.pi / 36) < 0.01
    grid = rs.parse_csv(csv_p.read_bytes())
    assert grid.nx == grid.ny == 50
    assert svg_p.read_bytes().startswith(b"<?xml")


def test_raster_reports_are_reproducible(files, tmp_path, capsys):
    argv = [
        "raster", files["ring"],
        "--bbox=-3,3,-3,3", "--res", "30,30",
        "--csv", str(tmp_path / "g.csv"),
    ]
    code, first = run_cli(capsys, *argv)
    assert code == 0
    blob1 = (tmp_path / "g.csv").read_bytes()
    code, second = run_cli(capsys, *argv)
    blob2 = (tmp_path / "g.csv").read_bytes()
    assert first == second
    assert blob1 == blob2


def test_raster_bad_bbox(files, capsys):
    code, _ = run_cli(capsys, "raster", files["ring"], "--bbox=-3,3", "--res", "20,20")
    assert code == 2


def test_batch_norm_grid(tmp_path, capsys):
    """A 3x3 grid of rings, one per (outer norm, inner norm) pair."""
    G = [[1.5, 0.3], [0.2, 1.2]]
    jobs = []
    for po in ("1", "2", "inf"):
        for pi in ("1", "2", "inf"):
            outer = rs.Ccg([0, 0], G, rs.single_group(2, po, 1.0))
            inner = rs.Ccg([0, 0], G, rs.single_group(2, pi, 0.5))
            name = f"ring_{po}_{pi}"
            (tmp_path / f"{name}.json").write_bytes(
                rs.emit_set_json(rs.from_difference(outer, inner))
            )
            jobs.append(
                {
                    "set": f"{name}.json",
                    "bbox": [-2, 2, -2, 2],
                    "res": [64, 64],
                    "svg": f"{name}.svg",
                    "fill": "#2255aa",
                }
            )
    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"jobs": jobs}))
    out_dir = tmp_path / "out"
    code, report = run_cli(capsys, "batch", str(manifest), "--out-dir", str(out_dir))
    assert code == 0
    assert len(report["jobs"]) == 9
    svgs = sorted(out_dir.glob("*.svg"))
    assert len(svgs) == 9
    fractions = [job["filled_fraction"] for job in report["jobs"]]
    # every ring is nonempty and covers less than the box
    assert all(0.05 < f < 0.95 for f in fractions)
    # footprint = outer area minus a quarter of the hole norm's area, so the
    # extremes are (1-norm outer, inf hole) and (inf outer, 1-norm hole)
    assert fractions[2] == min(fractions)
    assert fractions[6] == max(fractions)


def test_batch_rejects_bad_manifest(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    manifest.write_text('{"jobs": [{}]}')
    code, _ = run_cli(capsys, "batch", str(manifest))
    assert code == 2
    manifest.write_text("[]")
    code, _ = run_cli(capsys, "batch", str(manifest))
    assert code == 2


# --------------------------------------------------------------------------
# console entry point


def test_console_script_runs(files):
    proc = subprocess.run(
        [sys.executable, "-m", "roundsets.cli", "validate", files["ring"]],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "wall_time_s=" in proc.stderr
    json.loads(proc.stdout)
