import json
from pathlib import Path

import numpy as np
import pytest

from swkernels import io
from swkernels.cli import main, parse_config_text, ConfigError
from swkernels.density import normalize_2d
from swkernels.sliced import make_template, phi_embed


def gaussian(n, v=(0.0, 0.0), sd=4.0):
    c = np.arange(n) - (n - 1) / 2
    X, Y = np.meshgrid(c, c)
    return np.exp(-((X - v[0]) ** 2 + (Y - v[1]) ** 2) / (2 * sd**2))


def write_dir(root: Path, items: dict):
    root.mkdir(parents=True, exist_ok=True)
    for name, values in items.items():
        path = root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        io.write_density(path, normalize_2d(values, epsilon=0.0))
    return root


def run(*argv):
    return main([str(a) for a in argv])


SYNTH = [
    "--set", "synthetic=translates",
    "--set", "synth_per_class=8",
    "--set", "synth_size=24",
    "--set", "synth_sigma=2.0",
    "--set", "synth_separation=6.0",
    "--set", "synth_spread=0.6",
    "--angles", "24",
]


def read_csv_matrix(path):
    return np.loadtxt(path, delimiter=",", comments="#")


def test_parse_config():
    cfg = parse_config_text("# c\nangles = 30\n\nseed=4  # trailing\n")
    assert cfg == {"angles": "30", "seed": "4"}
    with pytest.raises(ConfigError):
        parse_config_text("angles 30")


def test_distance_identical_pair(tmp_path):
    data = write_dir(tmp_path / "d", {"a.csv": gaussian(20), "b.csv": gaussian(20)})
    assert run("distance", "--set", f"data={data}", "--angles", 30, "--out", tmp_path / "o") == 0
    m = read_csv_matrix(tmp_path / "o" / "distance.csv")
    np.testing.assert_array_equal(m, np.zeros((2, 2)))
    assert (tmp_path / "o" / "config.resolved.txt").read_text().startswith("command=distance\n")


def test_distance_translate_pair(tmp_path):
    data = write_dir(tmp_path / "d", {"a.csv": gaussian(40), "b.csv": gaussian(40, (1.0, 0.0))})
    assert run("distance", "--set", f"data={data}", "--out", tmp_path / "o") == 0
    m = read_csv_matrix(tmp_path / "o" / "distance.csv")
    assert np.array_equal(m, m.T)
    assert m[0, 1] == pytest.approx(1 / np.sqrt(2), rel=0.02)


def test_distance_grid_mismatch_names_both_files(tmp_path, capsys):
    data = write_dir(tmp_path / "d", {"a.csv": gaussian(8), "b.csv": gaussian(9)})
    assert run("distance", "--set", f"data={data}", "--out", tmp_path / "o") == 2
    err = capsys.readouterr().err
    assert "a.csv" in err and "b.csv" in err and "data" in err


@pytest.mark.parametrize(
    "argv, field",
    [
        (["pca", "--set", "synthetic=translates"], "out"),
        (["cluster", "--set", "synthetic=translates", "--out", "X"], "seed"),
        (["pca", "--set", "synthetic=translates", "--set", "angles=many", "--out", "X"], "angles"),
        (["pca", "--set", "data=/no/such/dir", "--out", "X"], "data"),
        (["pca", "--set", "bogus=1", "--out", "X"], "bogus"),
        (["pca", "--set", "synthetic=translates", "--set", "kernels=cosine", "--out", "X"], "kernels"),
        (["pca", "--config", "/no/such/file", "--out", "X"], "config"),
        (["pca", "--out", "X"], "data"),
    ],
)
def test_config_errors_exit_2_naming_field(tmp_path, capsys, argv, field):
    argv = [str(tmp_path / a) if a == "X" else a for a in argv]
    assert run(*argv) == 2
    assert f"{field}:" in capsys.readouterr().err


def test_unknown_command_exits_2():
    assert run("frobnicate") == 2


def test_numerical_failure_exits_1(tmp_path, capsys):
    data = write_dir(tmp_path / "d", {"a.csv": gaussian(12), "b.csv": gaussian(12)})
    assert run("pca", "--set", f"data={data}", "--angles", 8, "--out", tmp_path / "o") == 1
    assert "no variance" in capsys.readouterr().err


def test_pca_translate_family(tmp_path):
    shifts = [(x, y) for x in (-2, -1, 0, 1, 2) for y in (-2, 0, 2)]
    data = write_dir(tmp_path / "d", {f"t/{k:02d}.csv": gaussian(32, v) for k, v in enumerate(shifts)})
    out = tmp_path / "o"
    assert run("pca", "--set", f"data={data}", "--angles", 90, "--set", "t_count=128", "--out", out) == 0
    summary = json.loads((out / "pca.json").read_text())
    assert summary["linear_phi"]["components_99"] <= 2
    assert summary["euclid_linear"]["components_99"] > 2
    lines = (out / "cpv.csv").read_text().splitlines()
    assert lines[0] == "kernel,m,cpv"
    assert "coords.csv" in {p.name for p in out.iterdir()}


def test_pca_two_points(tmp_path):
    data = write_dir(tmp_path / "d", {"a.csv": gaussian(16), "b.csv": gaussian(16, (2, 1))})
    out = tmp_path / "o"
    assert run("pca", "--set", f"data={data}", "--angles", 16, "--set", "kernels=linear_phi", "--out", out) == 0
    first = (out / "cpv.csv").read_text().splitlines()[1].split(",")
    assert first[:2] == ["linear_phi", "1"] and float(first[2]) == pytest.approx(100.0)


def test_cluster_separated_and_single(tmp_path):
    out = tmp_path / "o"
    assert run("cluster", *SYNTH, "--seed", 3, "--out", out) == 0
    report = json.loads((out / "cluster.json").read_text())
    for kind, r in report["runs"].items():
        assert r["v_measure"] == 1.0, kind
        assert all(b <= a + 1e-12 for a, b in zip(r["inertia_trace"], r["inertia_trace"][1:]))
    assert run("cluster", *SYNTH, "--seed", 3, "--set", "k=1", "--out", tmp_path / "k1") == 0
    single = json.loads((tmp_path / "k1" / "cluster.json").read_text())
    assert all(r["v_measure"] == 0.0 for r in single["runs"].values())


def test_classify_table_and_controls(tmp_path):
    out = tmp_path / "o"
    argv = [*SYNTH, "--set", "synth_noise=0.05", "--set", "folds=4", "--seed", 5]
    assert run("classify", *argv, "--out", out) == 0
    rows = (out / "accuracy.csv").read_text().splitlines()
    assert rows[0] == "kernel,repeat,fold,accuracy,chosen,C"
    kinds = {r.split(",")[0] for r in rows[1:]}
    assert kinds == {"euclid_linear", "euclid_rbf", "sw_gaussian", "sw_poly"}
    assert len(rows) - 1 == 4 * 4
    summary = {r.split(",")[0]: float(r.split(",")[1]) for r in (out / "summary.csv").read_text().splitlines()[1:]}
    assert summary["sw_gaussian"] >= 0.95
    # Shuffled labels: chance level, inside a wide binomial interval.
    assert run("classify", *argv, "--set", "shuffle_labels=true", "--set", "repeats=3",
               "--set", "kernels=sw_gaussian", "--out", tmp_path / "shuf") == 0
    line = (tmp_path / "shuf" / "summary.csv").read_text().splitlines()[1]
    n = 16 * 3
    assert abs(float(line.split(",")[1]) - 0.5) <= 3 * np.sqrt(0.25 / n)


def test_certify_report(tmp_path):
    out = tmp_path / "o"
    assert run("certify", *SYNTH, "--seed", 1, "--set", "cnd_trials=200", "--out", out) == 0
    report = json.loads((out / "certify.json").read_text())
    assert report["controls"]["identity"]["passed"] is True
    assert report["controls"]["circle_geodesic"]["passed"] is False
    assert report["controls"]["circle_geodesic"]["max_form"] > 0
    assert len([e for e in report["pd"] if e["kernel"].startswith("sw_gaussian")]) == 5
    assert report["all_passed"] is True


def test_certify_without_data_runs_controls(tmp_path):
    assert run("certify", "--seed", 0, "--out", tmp_path / "o") == 0
    report = json.loads((tmp_path / "o" / "certify.json").read_text())
    assert set(report) == {"controls"}


def test_invert_zero_vector_and_bad_input(tmp_path):
    data = write_dir(tmp_path / "d", {"a.csv": gaussian(32, (2, 0)), "b.csv": gaussian(32, (-2, 1))})
    from swkernels.ingest import load_dataset

    dens = load_dataset(data).densities
    tpl = make_template(dens, 60)
    zero = tpl.zero()
    io.write_feature(tmp_path / "zero.csv", zero)
    bad = zero.values.copy()
    bad[5] = -4.0 * tpl.t_grid.positions * np.sqrt(tpl.sliced.slices[5])
    io.write_feature(tmp_path / "bad.csv", zero.with_values(bad))
    out = tmp_path / "o"
    assert run("invert", "--set", f"data={data}", "--angles", 60,
               "--set", f"phi={tmp_path / 'zero.csv'},{tmp_path / 'bad.csv'}", "--out", out) == 0
    report = json.loads((out / "invert.json").read_text())
    assert [i["source"] for i in report["items"]] == ["zero.csv"]
    assert "angle 5" in report["errors"][0]["error"]
    rec = io.read_density(out / "reconstructions" / "phi0000.csv", epsilon=0.0)
    assert np.abs(rec.masses - tpl.density.masses).sum() < 0.05


def test_invert_round_trip(tmp_path):
    n = 128
    c = np.arange(n) - (n - 1) / 2
    X, Y = np.meshgrid(c, c)
    s = 0.09 * n
    two = np.exp(-((X + 0.15 * n) ** 2 + (Y - 0.1 * n) ** 2) / (2 * s**2))
    two += 0.7 * np.exp(-((X - 0.18 * n) ** 2 + (Y + 0.12 * n) ** 2) / (2 * s**2))
    data = write_dir(tmp_path / "d", {"a.csv": two, "b.csv": gaussian(n, (5, -3), 0.15 * n)})
    out = tmp_path / "o"
    assert run("invert", "--set", f"data={data}", "--out", out) == 0
    report = json.loads((out / "invert.json").read_text())
    assert report["max_l1_error"] <= 0.08


def test_invert_decision_axis(tmp_path):
    out = tmp_path / "o"
    assert run("invert", *SYNTH, "--seed", 2, "--set", "axis_steps=3", "--out", out) == 0
    report = json.loads((out / "invert.json").read_text())
    assert [a["s"] for a in report["axis"]][1] == 0.0
    assert (out / "reconstructions" / "axis002.csv").exists()


def test_ingest_images(tmp_path):
    from swkernels.ingest import write_pgm

    rng = np.random.default_rng(0)
    for cls in ("a", "b"):
        (tmp_path / "img" / cls).mkdir(parents=True)
        for k in range(2):
            write_pgm(tmp_path / "img" / cls / f"{k}.pgm", rng.integers(0, 256, (12, 12)))
    cfg = tmp_path / "run.cfg"
    cfg.write_text("data = img\nlevels = 8\n")
    out = tmp_path / "o"
    assert run("ingest", "--config", cfg, "--out", out) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert [i["class"] for i in man["items"]] == ["a", "a", "b", "b"]
    d = io.read_density(out / "densities" / "item0000.csv", epsilon=0.0)
    assert d.shape == (8, 8)
