import json
import os

import pytest

from mop_trees.cli import main

ANG_DOC = {
    "schema": "mop-trees/1",
    "type": "angelesco",
    "mu1": {"pieces": [{"a": -2.0, "b": -1.0, "density": {"kind": "uniform"}}]},
    "mu2": {"pieces": [{"a": 1.0, "b": 2.0, "density": {"kind": "uniform"}}]},
}

NIK_DOC = {
    "schema": "mop-trees/1",
    "type": "nikishin",
    "mu1": {"pieces": [{"a": 2.0, "b": 3.0, "density": {"kind": "uniform"}}]},
    "tau": {"pieces": [{"a": 0.0, "b": 1.0, "density": {"kind": "uniform"}}]},
}


@pytest.fixture(scope="module")
def ang_file(tmp_path_factory):
    p = tmp_path_factory.mktemp("sys") / "ang_u.json"
    p.write_text(json.dumps(ANG_DOC))
    return str(p)


@pytest.fixture(scope="module")
def nik_file(tmp_path_factory):
    p = tmp_path_factory.mktemp("sys") / "nik_u.json"
    p.write_text(json.dumps(NIK_DOC))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestCommands:
    def test_mop_coeffs_origin(self, ang_file, capsys):
        code, out = run(capsys, "mop", "coeffs", "--system", ang_file, "--n", "0,0")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema"] == "mop-trees/1"
        assert doc["record"]["b"] == pytest.approx([-1.5, 1.5])

    def test_tree_spectrum_count(self, ang_file, capsys):
        code, out = run(
            capsys, "tree", "spectrum", "--system", ang_file, "--N", "2,1", "--kappa", "0,1"
        )
        assert code == 0
        doc = json.loads(out)
        assert sum(e["g"] for e in doc["eigenvalues"]) == 9
        assert doc["dense_gap"] < 1e-9

    def test_tree_svec(self, ang_file, capsys):
        code, out = run(
            capsys, "tree", "svec", "--system", ang_file, "--N", "1,1", "--kappa", "1,0"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["orthobasis"]["inertia"] == [5, 0]

    def test_angelesco_green(self, ang_file, capsys):
        code, out = run(
            capsys,
            "angelesco", "green", "--system", ang_file,
            "--kappa", "1,0", "--z", "5", "--depth", "10",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["rel_error"] < 1e-6

    def test_angelesco_rho(self, ang_file, capsys):
        code, out = run(capsys, "angelesco", "rho", "--system", ang_file, "--kappa", "1,0")
        assert code == 0
        doc = json.loads(out)
        assert doc["total_mass"] == pytest.approx(1.0, abs=1e-8)

    def test_dos_profile_csv(self, ang_file, capsys, tmp_path):
        out_path = str(tmp_path / "rho.csv")
        code, _ = run(
            capsys,
            "angelesco", "dos-profile", "--system", ang_file,
            "--kappa", "1,0", "--grid", "100", "--out", out_path,
        )
        assert code == 0
        lines = open(out_path).read().splitlines()
        assert lines[0] == "x,value"
        assert len(lines) == 101

    def test_nikishin_signs(self, nik_file, capsys):
        code, out = run(capsys, "nikishin", "signs", "--system", nik_file, "--nmax", "3")
        assert code == 0
        assert json.loads(out)["verdict"] == "PASS"

    def test_nikishin_blowup(self, nik_file, capsys):
        code, out = run(capsys, "nikishin", "blowup", "--system", nik_file, "--nmax", "3")
        assert code == 0
        doc = json.loads(out)
        a2 = [d["a2"] for d in doc["diagonal"]]
        assert a2 == sorted(a2)

    def test_periodic_surface(self, capsys):
        code, out = run(capsys, "periodic", "surface", "--A", "0.25,0.25", "--B=-1,1")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["branch_points"]) == 4

    def test_periodic_dos_csv(self, capsys, tmp_path):
        out_path = str(tmp_path / "dos.csv")
        code, _ = run(
            capsys,
            "periodic", "dos", "--A", "0.25,0.25", "--B=-1,1",
            "--l", "1", "--grid", "200", "--out", out_path,
        )
        assert code == 0
        lines = open(out_path).read().splitlines()
        assert lines[0] == "x,value" and len(lines) == 201

    def test_periodic_raylimit(self, ang_file, capsys):
        code, out = run(
            capsys, "periodic", "raylimit", "--system", ang_file, "--c", "0.5", "--nmax", "4"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["A_hat"][0] == pytest.approx(doc["A_hat"][1], abs=1e-15)

    def test_verify_all(self, nik_file, capsys):
        code, out = run(capsys, "verify", "all", "--system", nik_file, "--nmax", "3")
        assert code == 0
        assert json.loads(out)["verdict"] == "PASS"


class TestExitCodesAndDeterminism:
    def test_usage_error_exits_one(self, capsys):
        assert main(["tree", "spectrum", "--N", "2,1"]) == 1

    def test_missing_file_exits_one(self, capsys):
        assert main(["mop", "coeffs", "--system", "/nonexistent.json", "--n", "1,1"]) == 1

    def test_validation_failure_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "type": "angelesco",
                    "mu1": {"pieces": [{"a": 0.0, "b": 1.0, "density": {"kind": "uniform"}}]},
                    "mu2": {"pieces": [{"a": 0.5, "b": 2.0, "density": {"kind": "uniform"}}]},
                }
            )
        )
        code = main(["mop", "coeffs", "--system", str(bad), "--n", "1,1"])
        out = capsys.readouterr().out
        assert code == 2
        assert "OverlapError" in json.loads(out)["error"]["code"]

    def test_byte_identical_reruns(self, ang_file, capsys):
        _, out1 = run(capsys, "mop", "coeffs", "--system", ang_file, "--n", "1,1")
        _, out2 = run(capsys, "mop", "coeffs", "--system", ang_file, "--n", "1,1")
        assert out1 == out2

    def test_empty_grid_usage_error(self, ang_file, capsys):
        code = main(
            ["angelesco", "dos-profile", "--system", ang_file, "--kappa", "1,0", "--grid", "0"]
        )
        assert code == 1

    def test_thread_env_respected(self, ang_file, capsys, monkeypatch, tmp_path):
        monkeypatch.setenv("MOP_TREES_THREADS", "2")
        out_path = str(tmp_path / "dos2.csv")
        code, _ = run(
            capsys,
            "periodic", "dos", "--A", "0.25,0.25", "--B=-1,1",
            "--grid", "50", "--out", out_path,
        )
        assert code == 0
        assert len(open(out_path).read().splitlines()) == 51
