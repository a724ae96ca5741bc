import json
from pathlib import Path

import pytest

from monopole_vdim.cli import main

CONFIGS = Path(__file__).parent.parent / "configs"


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, body: dict, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"schema": "monopole-vdim/1", **body}, indent=2))
    return str(path)


SPHERE = {"components": [{"genus": 0, "charge": 1, "metric": {"type": "sphere"}}]}


def test_roots_table_and_number_line(capsys):
    code, out, _ = run(["roots", "--config", str(CONFIGS / "torus.json")], capsys)
    assert code == 0
    assert "topological" in out and "geometric" in out
    assert "0.61803398875" in out
    assert "O" in out.splitlines()[-3] or any("O" in line for line in out.splitlines()[-4:])


def test_roots_json_and_csv(tmp_path, capsys):
    csv_path = tmp_path / "roots.csv"
    code, out, _ = run(["roots", "--config", str(CONFIGS / "sphere.json"), "--json",
                        "--csv", str(csv_path), "--cutoff", "5.5"], capsys)
    assert code == 0
    values = sorted(r["value"] for r in json.loads(out)["roots"])
    assert values == [-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]
    assert csv_path.read_text().startswith("value,multiplicity,origins")


def test_vdim_json(capsys):
    code, out, _ = run(["vdim", "--config", str(CONFIGS / "torus.json"), "--json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["vdim"] == 5 and data["defect"] == 1
    assert (data["u0_order"], data["u1_order"]) == (1, 2)


def test_vdim_alpha_override_and_table(capsys):
    code, out, _ = run(["vdim", "--config", str(CONFIGS / "sphere.json"), "--alpha", "0.5"], capsys)
    assert code == 0
    assert "vdim" in out and "surjective (Prop 5.1)" in out and "window (-1, 1)" in out


def test_vdim_union(capsys):
    code, out, _ = run(["vdim", "--config", str(CONFIGS / "sphere_and_torus.json"), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["vdim"] == 11


def test_vdim_genus_two_mesh(capsys):
    code, out, _ = run(["vdim", "--config", str(CONFIGS / "genus2_mesh.json"), "--json"], capsys)
    assert code == 0
    assert json.loads(out)["vdim"] == 6


def test_alpha_at_root_exit_3(capsys):
    code, _, err = run(["vdim", "--config", str(CONFIGS / "sphere.json"), "--alpha", "1"], capsys)
    assert code == 3
    assert "r = 1" in err


def test_json_is_byte_identical(capsys):
    argv = ["vdim", "--config", str(CONFIGS / "sphere_and_torus.json"), "--json"]
    first = run(argv, capsys)[1]
    second = run(argv, capsys)[1]
    assert first == second


def test_output_prefix_writes_files(tmp_path, capsys):
    cfg = write_config(tmp_path, {**SPHERE, "alpha": 0.5, "output": "out/sphere"})
    assert run(["vdim", "--config", cfg], capsys)[0] == 0
    assert run(["roots", "--config", cfg], capsys)[0] == 0
    # relative output prefixes resolve against the working directory
    written = {p.name for p in Path("out").glob("sphere_*")}
    assert {"sphere_vdim.json", "sphere_defect.csv", "sphere_roots.csv"} <= written


@pytest.fixture(autouse=True)
def _chdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def test_defect_csv(tmp_path, capsys):
    path = tmp_path / "defect.csv"
    code, _, _ = run(["vdim", "--config", str(CONFIGS / "torus.json"), "--csv", str(path)], capsys)
    assert code == 0
    rows = path.read_text().splitlines()
    assert rows[0] == "alpha_low,alpha_high,defect"
    assert "-0.61803398875,0,1" in rows and "0,0.61803398875,-1" in rows


def test_spectrum_sphere_csv(capsys):
    code, out, _ = run(["spectrum", "--config", str(CONFIGS / "sphere.json"), "--cutoff", "12"], capsys)
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "component,eigenvalue,multiplicity"
    assert rows[1:] == ["0,0,1", "0,2,3", "0,6,5", "0,12,7"]


def test_spectrum_torus_json(capsys):
    code, out, _ = run(["spectrum", "--config", str(CONFIGS / "torus.json"), "--cutoff", "2", "--json"],
                       capsys)
    assert code == 0
    entries = json.loads(out)["entries"]
    assert [(e["eigenvalue"], e["multiplicity"]) for e in entries] == [(0, 1), (1, 4), (2, 4)]


def test_spectrum_mesh_matches_analytic(tmp_path, data_dir, capsys):
    cfg = write_config(tmp_path, {"components": [
        {"genus": 0, "metric": {"type": "mesh", "path": str(data_dir / "icosphere_L4.off")}}]})
    code, out, _ = run(["spectrum", "--config", cfg, "--cutoff", "7"], capsys)
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert [int(r[2]) for r in rows] == [1, 3, 5]
    assert abs(float(rows[2][1]) - 6) < 0.05


@pytest.mark.parametrize("body, message", [
    ({"components": []}, "at least one"),
    ({**SPHERE, "colour": 1}, "unknown key"),
    ({"components": [{"genus": 0, "metric": {"type": "mesh", "path": "missing.off"}}]}, "missing.off"),
    ({**SPHERE, "root_cutoff": 1.0}, "root_cutoff"),
])
def test_input_errors_exit_2(tmp_path, capsys, body, message):
    cfg = write_config(tmp_path, body)
    code, _, err = run(["vdim", "--config", cfg, "--alpha", "0.5"], capsys)
    assert code == 2
    assert message in err


def test_bad_mesh_exit_2(tmp_path, data_dir, capsys):
    for name in ("open_sphere.off", "two_spheres.off"):
        cfg = write_config(tmp_path, {"components": [
            {"genus": 0, "metric": {"type": "mesh", "path": str(data_dir / name)}}]})
        assert run(["spectrum", "--config", cfg], capsys)[0] == 2
    broken = tmp_path / "broken.off"
    broken.write_text("OFF\n3 1 0\n0 0 0\n1 0 x\n0 1 0\n3 0 1 2\n")
    cfg = write_config(tmp_path, {"components": [{"genus": 0, "metric": {"type": "mesh", "path": str(broken)}}]})
    code, _, err = run(["spectrum", "--config", cfg], capsys)
    assert code == 2 and "parse error at line 4, column 5" in err


def test_malformed_json_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "schema": "monopole-vdim/1",\n  "components": [\n')
    code, _, err = run(["roots", "--config", str(path)], capsys)
    assert code == 2 and "line" in err


def test_missing_alpha(tmp_path, capsys):
    cfg = write_config(tmp_path, SPHERE)
    code, _, err = run(["vdim", "--config", cfg], capsys)
    assert code == 2 and "alpha" in err


def test_verify_clifford(capsys):
    code, out, _ = run(["verify-clifford", "--json"], capsys)
    assert code == 0
    assert json.loads(out)["passed"] is True
    assert run(["verify-clifford", "--n", "4"], capsys)[0] == 2


def test_seed_env(monkeypatch, capsys):
    monkeypatch.setenv("MONOPOLE_VDIM_SEED", "17")
    first = run(["verify-clifford", "--json"], capsys)[1]
    assert first == run(["verify-clifford", "--json"], capsys)[1]
    monkeypatch.setenv("MONOPOLE_VDIM_SEED", "abc")
    assert run(["verify-clifford"], capsys)[0] == 2


def test_verify_bps_small(tmp_path, capsys):
    vtk = tmp_path / "phi.vtk"
    code, out, _ = run(["verify-bps", "--n", "33", "--levels", "2", "--json", "--vtk", str(vtk)], capsys)
    data = json.loads(out)
    assert data["grid"] == [17, 33]
    assert data["checks"]["symbol_exactness"] and data["checks"]["gauge_consistency"]
    assert vtk.exists()
    assert code in (0, 1)
    assert code == (0 if all(data["checks"].values()) else 1)


def test_verify_bps_bad_grid(capsys):
    assert run(["verify-bps", "--n", "30"], capsys)[0] == 2
