"""Acceptance criteria 1 to 9.

Each test prints one ``PASS criterion N`` or ``FAIL criterion N`` line with
the measured quantities, then asserts. Run ``pytest tests/test_acceptance.py -s``
to see the lines inline; they are also echoed outside pytest's capture.
"""
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import ndimage

from swkernels.cli import main
from swkernels.density import Grid1D, normalize_1d, normalize_2d
from swkernels.ingest import GlcmSpec, glcm, synth_translates
from swkernels.kernels import KernelSpec, certify_cnd, certify_pd, embed_dataset, gram
from swkernels.learn import cross_validate, gamma_grid, kernel_kmeans, kpca_fit, v_measure
from swkernels.radon import radon_forward
from swkernels.sliced import (
    make_template,
    pairwise_sw2,
    phi_embed,
    phi_invert,
    sw_distance,
    sw_from_sliced,
)
from swkernels.transport import psi_embed, psi_invert, riemann_norm, wasserstein2_1d

from oracles import (
    FROZEN,
    circle_geodesic_sq,
    gaussian_values,
    random_mixture_1d,
    random_mixture_2d,
)


@pytest.fixture
def report(capsys):
    def _report(n: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return _report


def bump(n, v=(0.0, 0.0), sd=4.0):
    c = np.arange(n) - (n - 1) / 2
    X, Y = np.meshgrid(c, c)
    return normalize_2d(np.exp(-((X - v[0]) ** 2 + (Y - v[1]) ** 2) / (2 * sd**2)))


def glcm_densities(rng, count, levels=32):
    out = []
    for _ in range(count):
        img = ndimage.gaussian_filter(rng.uniform(0, 255, size=(48, 48)), rng.uniform(0.5, 3))
        out.append(glcm(img, GlcmSpec(levels)))
    return out


def translate_classes(rng, per_class, separation, spread):
    """Two clusters of shifts; centre gap over cluster radius is separation/spread."""
    groups = []
    for cx in (-separation / 2, separation / 2):
        r = spread * np.sqrt(rng.uniform(size=per_class))
        a = rng.uniform(0, 2 * np.pi, size=per_class)
        groups.append(np.stack([cx + r * np.cos(a), r * np.sin(a)], axis=1))
    return groups


def test_criterion_1_gaussian_closed_form(report):
    grid = Grid1D.cells(-20.0, 20.0, 1024)
    a = normalize_1d(gaussian_values(grid.positions, 0.0, 1.0), grid)
    b = normalize_1d(gaussian_values(grid.positions, 2.0, 3.0), grid)
    wasserstein2_1d(a, b)  # warm-up, so the timing excludes first-call overhead
    start = time.perf_counter()
    w = wasserstein2_1d(a, b)
    elapsed = time.perf_counter() - start
    err = abs(w - FROZEN["w2_gauss_0_1__2_3"])
    report(1, err <= 1e-2 and elapsed < 0.1, f"W2={w:.6f} |err|={err:.2e} time={elapsed * 1e3:.2f} ms")


def test_criterion_2_isometry(report):
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    # 1D: 50 pairs against a shared template. Midpoint quadrature of the
    # embedding norm is O(spacing^2): 2.7e-3 relative at 512 cells, 4e-4 at 1024.
    grid = Grid1D.cells(-15.0, 15.0, 1024)
    tpl1 = normalize_1d(random_mixture_1d(rng, grid.positions), grid)
    worst_1d = 0.0
    for _ in range(50):
        a = normalize_1d(random_mixture_1d(rng, grid.positions), grid)
        b = normalize_1d(random_mixture_1d(rng, grid.positions), grid)
        w = wasserstein2_1d(a, b)
        e = riemann_norm(psi_embed(a, tpl1) - psi_embed(b, tpl1), grid)
        worst_1d = max(worst_1d, abs(e - w) / w)
    # 2D: 50 distinct pairs out of a 20-density set, 512 offsets per angle.
    dens = [normalize_2d(random_mixture_2d(rng, 64)) for _ in range(20)]
    tpl2 = make_template(dens, 32, t_count=512)
    emb = embed_dataset(dens, tpl2)
    sw = np.sqrt(emb.sw2())
    iu = np.transpose(np.triu_indices(20, 1))
    worst_2d = 0.0
    for i, j in iu[rng.choice(len(iu), size=50, replace=False)]:
        e = np.linalg.norm(emb.features[i] - emb.features[j])
        worst_2d = max(worst_2d, abs(e - sw[i, j]) / sw[i, j])
    elapsed = time.perf_counter() - start
    ok = worst_1d <= 1e-3 and worst_2d <= 1e-3 and elapsed < 30
    report(2, ok, f"max rel err 1D={worst_1d:.2e} 2D={worst_2d:.2e} time={elapsed:.1f} s")


def test_criterion_3_translate_geometry(report):
    rng = np.random.default_rng(3)
    n, sd = 64, 5.0
    base = bump(n, sd=sd)
    worst = 0.0
    for _ in range(10):
        v = rng.uniform(0.8, 4.0) * np.array([np.cos(a := rng.uniform(0, 2 * np.pi)), np.sin(a)])
        sw = sw_distance(bump(n, v, sd), base, 180)
        worst = max(worst, abs(sw / (np.linalg.norm(v) / np.sqrt(2)) - 1))
    g = np.arange(-2, 3) * 1.5
    shifts = [(x, y) for y in g for x in g]
    data = synth_translates(bump(40, sd=3.0), [shifts], tolerance=1e-3)
    tpl = make_template(data.densities, 180, t_count=128)
    model = kpca_fit(gram(embed_dataset(data.densities, tpl), KernelSpec("linear_phi")))
    cpv2 = model.cpv(2)
    report(3, worst <= 0.02 and cpv2 >= 99.0, f"max rel err SW vs |v|/sqrt2={worst:.2e} CPV(2)={cpv2:.3f}%")


def test_criterion_4_pd_certification(report):
    rng = np.random.default_rng(4)
    data = embed_dataset(dens := glcm_densities(rng, 20), make_template(dens, 90))
    worst = []
    ok = True
    for g in (0.01, 0.1, 1.0, 10.0, 100.0):
        cert = certify_pd(gram(data, KernelSpec("sw_gaussian", gamma=g)), tolerance=1e-8)
        ok &= cert.passed
        worst.append(cert.min_eigenvalue / cert.max_eigenvalue)
    for d in (1, 2, 3):
        for o in (0, 1):
            cert = certify_pd(gram(data, KernelSpec("sw_poly", degree=d, offset=o)), tolerance=1e-8)
            ok &= cert.passed
            worst.append(cert.min_eigenvalue / cert.max_eigenvalue)
    report(4, bool(ok), f"11 Grams, min eig / max eig >= {min(worst):.2e}")


def test_criterion_5_cnd_certification(report):
    rng = np.random.default_rng(5)
    grid = Grid1D.cells(-15.0, 15.0, 256)
    one = [normalize_1d(random_mixture_1d(rng, grid.positions), grid) for _ in range(20)]
    w2 = np.array([[wasserstein2_1d(a, b) ** 2 for b in one] for a in one])
    np.fill_diagonal(w2, 0.0)
    w2 = 0.5 * (w2 + w2.T)
    dens = [normalize_2d(random_mixture_2d(rng, 32)) for _ in range(20)]
    sw2 = pairwise_sw2([radon_forward(d, 60) for d in dens])
    cw = certify_cnd(w2, trials=1000, tolerance=1e-8, seed=1)
    cs = certify_cnd(sw2, trials=1000, tolerance=1e-8, seed=1)
    circle = certify_cnd(circle_geodesic_sq(4), trials=1000, tolerance=1e-8, seed=1)
    ok = cw.passed and cs.passed and not circle.passed and circle.max_form > 0
    report(
        5,
        ok,
        f"max form W2^2={cw.max_form:.2e} SW^2={cs.max_form:.2e} circle control={circle.max_form:.3f} (>0 expected)",
    )


def test_criterion_6_metric_axioms(report):
    rng = np.random.default_rng(6)
    grid = Grid1D.cells(-15.0, 15.0, 256)
    pool1 = [normalize_1d(random_mixture_1d(rng, grid.positions), grid) for _ in range(30)]
    pool2 = [radon_forward(normalize_2d(random_mixture_2d(rng, 32)), 24) for _ in range(30)]
    slack = 1e-6
    failures = {"W2": 0, "SW": 0}
    for name, pool, dist in (("W2", pool1, wasserstein2_1d), ("SW", pool2, sw_from_sliced)):
        cache = {}

        def d(i, j):
            if (i, j) not in cache:
                cache[i, j] = dist(pool[i], pool[j])
            return cache[i, j]

        for _ in range(1000):
            i, j, k = rng.choice(len(pool), size=3, replace=False)
            bad = (
                abs(d(i, j) - d(j, i)) > slack
                or d(i, k) > d(i, j) + d(j, k) + slack
                or d(i, i) > slack
                or d(i, j) <= slack
            )
            failures[name] += bool(bad)
    ok = failures["W2"] == 0 and failures["SW"] == 0
    report(6, ok, f"1000 triples each, failures W2={failures['W2']} SW={failures['SW']}")


def test_criterion_7_invertibility(report):
    start = time.perf_counter()
    n = 128
    c = np.arange(n) - (n - 1) / 2
    X, Y = np.meshgrid(c, c)
    s = 0.09 * n
    img = np.exp(-((X + 0.15 * n) ** 2 + (Y - 0.1 * n) ** 2) / (2 * s**2))
    img += 0.7 * np.exp(-((X - 0.18 * n) ** 2 + (Y + 0.12 * n) ** 2) / (2 * s**2))
    smooth = [normalize_2d(img), normalize_2d(random_mixture_2d(np.random.default_rng(7), n))]
    tpl = make_template([bump(n, sd=0.2 * n)], 180)
    phi_err = max(np.abs(phi_invert(phi_embed(d, tpl), tpl).masses - d.masses).sum() for d in smooth)
    rng = np.random.default_rng(17)
    grid = Grid1D.cells(-15.0, 15.0, 512)
    tpl1 = normalize_1d(random_mixture_1d(rng, grid.positions), grid)
    psi_err = 0.0
    for _ in range(5):
        d = normalize_1d(random_mixture_1d(rng, grid.positions), grid)
        psi_err = max(psi_err, np.abs(psi_invert(psi_embed(d, tpl1), tpl1).masses - d.masses).sum())
    elapsed = time.perf_counter() - start
    ok = phi_err <= 0.08 and psi_err <= 1e-2 and elapsed < 60
    report(7, ok, f"phi L1={phi_err:.4f} psi L1={psi_err:.2e} time={elapsed:.1f} s")


def test_criterion_8_learning_benchmark(report):
    rng = np.random.default_rng(8)
    groups = translate_classes(rng, 40, separation=6.0, spread=0.6)
    base = bump(32, sd=2.0)
    noisy = synth_translates(base, groups, noise=0.1, seed=8, tolerance=1e-3)
    tpl = make_template(noisy.densities, 60)
    emb = embed_dataset(noisy.densities, tpl)
    grid = [gram(emb, KernelSpec("sw_gaussian", gamma=g)) for g in gamma_grid(emb.sw2())]
    cv = cross_validate({"sw_gaussian": grid}, noisy.labels, folds=5, repeats=20, seed=8)
    acc = cv.summary()["sw_gaussian"][0]
    clean = synth_translates(base, groups, tolerance=1e-3)
    ctpl = make_template(clean.densities, 60)
    cemb = embed_dataset(clean.densities, ctpl)
    monotone = True
    vs = {}
    for spec in (KernelSpec("sw_gaussian", gamma=gamma_grid(cemb.sw2(), (0,))[0]), KernelSpec("linear_phi")):
        fit = kernel_kmeans(gram(cemb, spec), 2, restarts=10, seed=8)
        vs[spec.kind] = v_measure(clean.labels, fit.labels)
        for tr in fit.restart_traces:
            monotone &= bool(np.all(np.diff(tr) <= 1e-12 * max(1.0, tr[0])))
    ok = acc >= 0.95 and all(v == 1.0 for v in vs.values()) and monotone
    report(8, ok, f"CV mean accuracy={acc:.4f} k-means V={vs} traces monotone={monotone}")


def test_criterion_9_cli_determinism(report, tmp_path):
    synth = [
        "--set", "synthetic=translates", "--set", "synth_per_class=10",
        "--set", "synth_size=24", "--set", "synth_noise=0.05", "--angles", "24",
    ]
    data = tmp_path / "data"
    (data / "a").mkdir(parents=True)
    (data / "b").mkdir()
    from swkernels.ingest import write_pgm

    rng = np.random.default_rng(9)
    for cls in ("a", "b"):
        for k in range(3):
            write_pgm(data / cls / f"{k}.pgm", rng.integers(0, 256, (20, 20)))
    runs = {
        "distance": [*synth],
        "pca": [*synth],
        "cluster": [*synth, "--seed", "4"],
        "classify": [*synth, "--seed", "4", "--set", "folds=3"],
        "certify": [*synth, "--seed", "4", "--set", "cnd_trials=100"],
        "invert": [*synth, "--seed", "4", "--set", "axis_steps=3"],
        "ingest": ["--set", f"data={data}", "--levels", "8"],
    }
    differing = []
    for cmd, argv in runs.items():
        out = tmp_path / cmd
        snapshots = []
        for _ in range(2):
            assert main([cmd, *argv, "--out", str(out)]) == 0
            snapshots.append({p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()})
            for p in sorted(out.rglob("*"), reverse=True):
                p.unlink() if p.is_file() else p.rmdir()
        if snapshots[0] != snapshots[1] or not snapshots[0]:
            differing.append(cmd)
    report(9, not differing, f"{len(runs)} commands rerun, differing outputs: {differing or 'none'}")
