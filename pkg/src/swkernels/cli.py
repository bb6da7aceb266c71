"""Command-line experiments: ``swkernels <command> [--config FILE] [options]``.

Configuration is a flat ``key=value`` file (``#`` starts a comment); the
``--seed``, ``--angles``, ``--levels``, ``--out`` flags and repeated
``--set key=value`` override it. Every run writes ``config.resolved.txt``
next to its outputs. Exit status: 0 success, 1 numerical failure, 2
configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .density import DEFAULT_EPSILON, DensityError, normalize_2d
from .ingest import GlcmSpec, IngestError, LabeledDataset, load_dataset, synth_translates
from .kernels import (
    KERNEL_KINDS,
    EmbeddedDataset,
    KernelError,
    KernelSpec,
    certify_cnd,
    certify_pd,
    embed_dataset,
    gram,
)
from .learn import (
    cross_validate,
    gamma_grid,
    kernel_kmeans,
    kpca_fit,
    svm_decision_axis,
    svm_train,
    v_measure,
)
from .learn.kpca import KpcaError
from .learn.svm import SvmError
from .radon import AngleSet, RadonError, radon_forward
from .sliced import EmbeddingError, Template, make_template, phi_embed, phi_invert
from .transport import TransportError

COMMANDS = ("distance", "pca", "cluster", "classify", "certify", "invert", "ingest")
RANDOMIZED = ("cluster", "classify", "certify")

DEFAULTS = {
    "data": "",
    "synthetic": "",
    "synth_classes": "2",
    "synth_per_class": "40",
    "synth_size": "32",
    "synth_sigma": "2.0",
    "synth_separation": "6.0",
    "synth_spread": "0.6",
    "synth_noise": "0.0",
    "levels": "32",
    "offsets": "1:0,0:1,1:1,1:-1",
    "symmetric": "true",
    "epsilon": repr(DEFAULT_EPSILON),
    "angles": "180",
    "t_count": "",
    "template": "dataset_mean",
    "kernels": "",
    "gamma": "1.0",
    "gamma_exponents": "-2,-1,0,1,2",
    "degrees": "1,2,3",
    "offsets_poly": "0,1",
    "C_grid": "0.1,1,10,100",
    "folds": "5",
    "repeats": "1",
    "inner_folds": "3",
    "svm_tol": "1e-3",
    "shuffle_labels": "false",
    "k": "",
    "restarts": "10",
    "components": "2",
    "certify_gammas": "0.01,0.1,1,10,100",
    "cnd_trials": "1000",
    "pd_tolerance": "1e-8",
    "cnd_tolerance": "1e-8",
    "phi": "",
    "axis_steps": "0",
    "seed": "",
    "out": "",
}

DEFAULT_KERNELS = {
    "pca": "linear_phi,euclid_linear",
    "cluster": "linear_phi,sw_gaussian,euclid_linear",
    "classify": "euclid_linear,euclid_rbf,sw_gaussian,sw_poly",
}


class ConfigError(Exception):
    """Bad configuration; ``field`` names the offending key."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class NumericalError(Exception):
    pass


# --------------------------------------------------------------------- config

def parse_config_text(text: str, source: str = "<config>") -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{source}:{lineno}", f"expected key=value, got {line!r}")
        out[key.strip()] = value.strip()
    return out


@dataclass
class Config:
    command: str
    values: dict

    def raw(self, key: str) -> str:
        return self.values.get(key, "")

    def int(self, key: str, minimum: int | None = None) -> int:
        try:
            v = int(self.raw(key))
        except ValueError:
            raise ConfigError(key, f"expected an integer, got {self.raw(key)!r}") from None
        if minimum is not None and v < minimum:
            raise ConfigError(key, f"must be at least {minimum}, got {v}")
        return v

    def float(self, key: str, positive: bool = False) -> float:
        try:
            v = float(self.raw(key))
        except ValueError:
            raise ConfigError(key, f"expected a number, got {self.raw(key)!r}") from None
        if positive and not v > 0:
            raise ConfigError(key, f"must be positive, got {v}")
        return v

    def bool(self, key: str) -> bool:
        v = self.raw(key).lower()
        if v in ("1", "true", "yes", "on"):
            return True
        if v in ("0", "false", "no", "off"):
            return False
        raise ConfigError(key, f"expected true/false, got {self.raw(key)!r}")

    def floats(self, key: str) -> list[float]:
        try:
            return [float(x) for x in self.raw(key).split(",") if x.strip()]
        except ValueError:
            raise ConfigError(key, f"expected comma-separated numbers, got {self.raw(key)!r}") from None

    def ints(self, key: str) -> list[int]:
        try:
            return [int(x) for x in self.raw(key).split(",") if x.strip()]
        except ValueError:
            raise ConfigError(key, f"expected comma-separated integers, got {self.raw(key)!r}") from None

    def kernels(self) -> list[str]:
        names = [k.strip() for k in self.raw("kernels").split(",") if k.strip()]
        for k in names:
            if k not in KERNEL_KINDS:
                raise ConfigError("kernels", f"unknown kernel {k!r}; choose from {', '.join(KERNEL_KINDS)}")
        if not names:
            raise ConfigError("kernels", "no kernels given")
        return names

    def resolved_text(self) -> str:
        lines = [f"command={self.command}"] + [f"{k}={self.values[k]}" for k in sorted(self.values)]
        return "\n".join(lines) + "\n"


def build_config(args) -> Config:
    values = dict(DEFAULTS)
    if args.command in DEFAULT_KERNELS:
        values["kernels"] = DEFAULT_KERNELS[args.command]
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError("config", f"no such file: {path}")
        loaded = parse_config_text(path.read_text(), str(path))
        # Relative data/template/phi paths are taken relative to the config file.
        for key in ("data", "template", "phi"):
            value = loaded.get(key, "")
            if value and value != "dataset_mean":
                loaded[key] = ",".join(
                    str(path.parent / p.strip()) for p in value.split(",") if p.strip()
                )
        unknown = sorted(set(loaded) - set(DEFAULTS))
        if unknown:
            raise ConfigError(unknown[0], "unknown configuration key")
        values.update(loaded)
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep or key not in DEFAULTS:
            raise ConfigError(key or item, "unknown configuration key" if sep else "expected key=value")
        values[key] = value
    for flag in ("seed", "angles", "levels", "out"):
        v = getattr(args, flag)
        if v is not None:
            values[flag] = str(v)
    cfg = Config(args.command, values)
    if not cfg.raw("out"):
        raise ConfigError("out", "an output directory is required (--out)")
    if args.command in RANDOMIZED and not cfg.raw("seed"):
        raise ConfigError("seed", f"'{args.command}' is randomized and needs an explicit seed")
    if cfg.raw("seed"):
        cfg.int("seed", 0)
    if args.command != "certify" or cfg.raw("data") or cfg.raw("synthetic"):
        if bool(cfg.raw("data")) == bool(cfg.raw("synthetic")):
            raise ConfigError("data", "give exactly one of data=<directory> or synthetic=translates")
    if cfg.raw("data") and not Path(cfg.raw("data")).is_dir():
        raise ConfigError("data", f"no such directory: {cfg.raw('data')}")
    tpl = cfg.raw("template")
    if tpl != "dataset_mean" and not Path(tpl).is_file():
        raise ConfigError("template", f"expected 'dataset_mean' or an existing density file, got {tpl!r}")
    for p in [p for p in cfg.raw("phi").split(",") if p]:
        if not Path(p).is_file():
            raise ConfigError("phi", f"no such file: {p}")
    return cfg


# ------------------------------------------------------------------ dataset

def glcm_spec(cfg: Config) -> GlcmSpec:
    try:
        offsets = []
        for tok in cfg.raw("offsets").split(","):
            dx, dy = tok.split(":")
            offsets.append((int(dx), int(dy)))
        return GlcmSpec(cfg.int("levels", 2), tuple(offsets), cfg.bool("symmetric"))
    except (ValueError, IngestError) as exc:
        raise ConfigError("offsets", str(exc)) from None


def synthetic_dataset(cfg: Config, noise: float | None = None) -> LabeledDataset:
    """Classes of translated Gaussian bumps on a square grid.

    Class centres sit on a circle of radius ``synth_separation / 2`` pixels
    (opposite for two classes); members are shifted uniformly within
    ``synth_spread`` pixels of their centre.
    """
    if cfg.raw("synthetic") != "translates":
        raise ConfigError("synthetic", f"only 'translates' is supported, got {cfg.raw('synthetic')!r}")
    n = cfg.int("synth_size", 8)
    classes = cfg.int("synth_classes", 1)
    per = cfg.int("synth_per_class", 1)
    sigma = cfg.float("synth_sigma", positive=True)
    sep = cfg.float("synth_separation")
    spread = cfg.float("synth_spread")
    noise = cfg.float("synth_noise") if noise is None else noise
    x = np.arange(n) - (n - 1) / 2
    X, Y = np.meshgrid(x, x)
    base = normalize_2d(np.exp(-(X**2 + Y**2) / (2 * sigma**2)), 1.0, 0.0)
    rng = np.random.default_rng(cfg.int("seed", 0) if cfg.raw("seed") else 0)
    groups = []
    for c in range(classes):
        angle = 2 * np.pi * c / classes
        centre = 0.5 * sep * np.array([np.cos(angle), np.sin(angle)])
        r = spread * np.sqrt(rng.uniform(size=per))
        phi = rng.uniform(0, 2 * np.pi, size=per)
        groups.append(centre + np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1))
    try:
        return synth_translates(base, groups, noise, int(rng.integers(2**31)),
                                tolerance=1e-3, epsilon=cfg.float("epsilon"))
    except IngestError as exc:
        raise ConfigError("synth_size", str(exc)) from None


def load(cfg: Config) -> LabeledDataset:
    if cfg.raw("synthetic"):
        return synthetic_dataset(cfg)
    try:
        return load_dataset(cfg.raw("data"), glcm_spec(cfg), cfg.float("epsilon"))
    except IngestError as exc:
        raise ConfigError("data", str(exc)) from None


def template_for(cfg: Config, data: LabeledDataset) -> Template:
    angles = AngleSet(cfg.int("angles", 1))
    t_count = cfg.int("t_count", 2) if cfg.raw("t_count") else None
    eps = cfg.float("epsilon")
    if cfg.raw("template") == "dataset_mean":
        return make_template(data.densities, angles, t_count, eps)
    try:
        d = io.read_density(cfg.raw("template"), eps)
    except (io.FormatError, DensityError) as exc:
        raise ConfigError("template", str(exc)) from None
    if getattr(d, "ndim", 2) != 2 and not hasattr(d, "pixel_size"):
        raise ConfigError("template", "template must be a 2D density")
    if data.densities and not d.same_grid(data.densities[0]):
        raise ConfigError("template", f"template grid {d.shape} differs from dataset grid {data.densities[0].shape}")
    return Template(d, radon_forward(d, angles, t_count, eps))


def median_scale(d2: np.ndarray) -> float:
    off = d2[np.triu_indices_from(d2, k=1)]
    off = off[off > 0]
    return 1.0 / float(np.median(off)) if off.size else 1.0


def euclid_sq(E: EmbeddedDataset) -> np.ndarray:
    sq = np.sum(E.raw**2, axis=1)
    return np.maximum(sq[:, None] + sq[None, :] - 2 * E.raw @ E.raw.T, 0.0)


def single_spec(cfg: Config, kind: str, E: EmbeddedDataset) -> KernelSpec:
    """One kernel per kind for tasks without a hyperparameter search."""
    g = cfg.float("gamma", positive=True)
    if kind == "sw_gaussian":
        return KernelSpec(kind, gamma=g * median_scale(E.sw2()))
    if kind == "euclid_rbf":
        return KernelSpec(kind, gamma=g * median_scale(euclid_sq(E)))
    if kind in ("sw_poly", "euclid_poly"):
        degrees = cfg.ints("degrees") or [1]
        offsets = cfg.ints("offsets_poly") or [0]
        return KernelSpec(kind, degree=degrees[0], offset=offsets[0])
    return KernelSpec(kind)


def spec_grid(cfg: Config, kind: str, E: EmbeddedDataset) -> list[KernelSpec]:
    exps = cfg.ints("gamma_exponents")
    if kind == "sw_gaussian":
        return [KernelSpec(kind, gamma=g) for g in gamma_grid(E.sw2(), exps)]
    if kind == "euclid_rbf":
        return [KernelSpec(kind, gamma=g) for g in gamma_grid(euclid_sq(E), exps)]
    if kind in ("sw_poly", "euclid_poly"):
        return [KernelSpec(kind, degree=d, offset=o) for d in cfg.ints("degrees") for o in cfg.ints("offsets_poly")]
    return [KernelSpec(kind)]


# ------------------------------------------------------------------- output

def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="ascii")


def write_rows(path: Path, header: list[str], rows) -> None:
    def fmt(v):
        if isinstance(v, (float, np.floating)):
            return io.format_float(v)
        return str(v)
    lines = [",".join(header)] + [",".join(fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


# ------------------------------------------------------------------ commands

def cmd_ingest(cfg: Config, out: Path) -> dict:
    data = load(cfg)
    dens_dir = out / "densities"
    dens_dir.mkdir(exist_ok=True)
    for k, d in enumerate(data.densities):
        io.write_density(dens_dir / f"item{k:04d}.csv", d)
    data.write_manifest(out / "manifest.json")
    return {"items": len(data), "skipped": len(data.skipped)}


def cmd_distance(cfg: Config, out: Path) -> dict:
    data = load(cfg)
    if len(data) < 2:
        raise ConfigError("data", "distance needs at least two densities")
    tpl = template_for(cfg, data)
    E = embed_dataset(data.densities, tpl)
    sw = np.sqrt(E.sw2())
    io.write_matrix_csv(out / "distance.csv", sw, f"# sw_distance n={len(data)} L={tpl.angle_set.count}")
    write_rows(out / "items.csv", ["index", "label", "source"],
               [(k, data.class_names[int(c)], data._name(k)) for k, c in enumerate(data.labels)])
    return {"n": len(data)}


def cmd_pca(cfg: Config, out: Path) -> dict:
    data = load(cfg)
    tpl = template_for(cfg, data)
    E = embed_dataset(data.densities, tpl)
    m_req = cfg.int("components", 1)
    cpv_rows, coord_rows, summary = [], [], {}
    for kind in cfg.kernels():
        spec = single_spec(cfg, kind, E)
        model = kpca_fit(gram(E, spec))
        curve = model.cpv_curve()
        cpv_rows += [(kind, m + 1, float(v)) for m, v in enumerate(curve)]
        m = min(m_req, model.n_components)
        coords = model.training_coordinates(m)
        for i, row in enumerate(coords):
            coord_rows.append((kind, i, int(data.labels[i]), *[float(v) for v in row], *[""] * (m_req - m)))
        summary[kind] = {"components_99": model.components_for(99.0), "clamped": model.clamped}
    write_rows(out / "cpv.csv", ["kernel", "m", "cpv"], cpv_rows)
    write_rows(out / "coords.csv", ["kernel", "index", "label"] + [f"c{j + 1}" for j in range(m_req)], coord_rows)
    write_json(out / "pca.json", summary)
    return summary


def cmd_cluster(cfg: Config, out: Path) -> dict:
    data = load(cfg)
    tpl = template_for(cfg, data)
    E = embed_dataset(data.densities, tpl)
    k = cfg.int("k", 1) if cfg.raw("k") else len(data.class_names)
    if k > len(data):
        raise ConfigError("k", f"{k} clusters for {len(data)} items")
    report = {}
    for kind in cfg.kernels():
        G = gram(E, single_spec(cfg, kind, E))
        res = kernel_kmeans(G, k, cfg.int("restarts", 1), cfg.int("seed", 0))
        if np.any(np.diff(res.trace) > 1e-9 * max(1.0, res.trace[0])):
            raise NumericalError(f"{kind}: inertia increased during Lloyd iterations")
        # Inertia after scaling features to unit average norm, for comparability.
        mean_norm = float(np.mean(np.sqrt(np.maximum(np.diag(G.entries), 0.0))))
        report[kind] = {
            "spec": G.spec.label(),
            "labels": [int(v) for v in res.labels],
            "inertia": res.inertia,
            "normalized_inertia": res.inertia / mean_norm**2 if mean_norm > 0 else 0.0,
            "v_measure": v_measure(data.labels, res.labels),
            "iterations": res.iterations,
            "converged": res.converged,
            "inertia_trace": [float(v) for v in res.trace],
        }
    write_json(out / "cluster.json", {"k": k, "true_labels": [int(v) for v in data.labels], "runs": report})
    return {kind: r["v_measure"] for kind, r in report.items()}


def cmd_classify(cfg: Config, out: Path) -> dict:
    data = load(cfg)
    tpl = template_for(cfg, data)
    E = embed_dataset(data.densities, tpl)
    labels = data.labels.copy()
    seed = cfg.int("seed", 0)
    if cfg.bool("shuffle_labels"):
        labels = np.random.default_rng([seed, 1]).permutation(labels)
    candidates = {kind: [gram(E, s) for s in spec_grid(cfg, kind, E)] for kind in cfg.kernels()}
    try:
        res = cross_validate(
            candidates, labels, cfg.int("folds", 2), cfg.int("repeats", 1), seed,
            cfg.floats("C_grid"), cfg.int("inner_folds", 2), cfg.float("svm_tol", positive=True),
        )
    except ValueError as exc:
        raise ConfigError("folds", str(exc)) from None
    write_rows(out / "accuracy.csv", ["kernel", "repeat", "fold", "accuracy", "chosen", "C"],
               [(r.kernel, r.repeat, r.fold, r.accuracy, r.chosen, r.C) for r in res.rows])
    summary = res.summary()
    write_rows(out / "summary.csv", ["kernel", "mean", "std"],
               [(name, m, s) for name, (m, s) in summary.items()])
    return {name: m for name, (m, _) in summary.items()}


def circle_control(points: int = 4) -> np.ndarray:
    """Squared geodesic distances of equally spaced points on the unit circle."""
    k = np.arange(points)
    steps = np.abs(k[:, None] - k[None, :])
    steps = np.minimum(steps, points - steps)
    return (2 * np.pi * steps / points) ** 2


def cmd_certify(cfg: Config, out: Path) -> dict:
    seed = cfg.int("seed", 0)
    trials = cfg.int("cnd_trials", 1)
    pd_tol = cfg.float("pd_tolerance")
    cnd_tol = cfg.float("cnd_tolerance")

    def pd_entry(G, label):
        c = certify_pd(G, pd_tol)
        return {"kernel": label, "passed": c.passed, "min_eigenvalue": c.min_eigenvalue,
                "max_eigenvalue": c.max_eigenvalue}

    def cnd_entry(d2, label):
        c = certify_cnd(d2, trials, cnd_tol, seed)
        return {"matrix": label, "passed": c.passed, "max_form": c.max_form,
                "max_projected_eigenvalue": c.max_projected_eigenvalue}

    report = {"controls": {
        "identity": pd_entry(np.eye(4), "identity"),
        "circle_geodesic": cnd_entry(circle_control(4), "circle geodesic, 4 points at 90 degrees"),
    }}
    if cfg.raw("data") or cfg.raw("synthetic"):
        data = load(cfg)
        tpl = template_for(cfg, data)
        E = embed_dataset(data.densities, tpl)
        pd = [pd_entry(gram(E, KernelSpec("sw_gaussian", gamma=g)), f"sw_gaussian(gamma={g:g})")
              for g in cfg.floats("certify_gammas")]
        for d in cfg.ints("degrees"):
            for o in cfg.ints("offsets_poly"):
                spec = KernelSpec("sw_poly", degree=d, offset=o)
                pd.append(pd_entry(gram(E, spec), spec.label()))
        report["pd"] = pd
        report["cnd"] = [cnd_entry(E.sw2(), "sw_squared")]
        checks = [e["passed"] for e in pd] + [e["passed"] for e in report["cnd"]]
        report["all_passed"] = bool(all(checks))
    write_json(out / "certify.json", report)
    return {"all_passed": report.get("all_passed")}


def cmd_invert(cfg: Config, out: Path) -> dict:
    data = load(cfg)
    tpl = template_for(cfg, data)
    rec_dir = out / "reconstructions"
    rec_dir.mkdir(exist_ok=True)
    report = {"items": [], "errors": []}
    io.write_density(out / "template.csv", tpl.density)
    phi_files = [p for p in cfg.raw("phi").split(",") if p]
    if phi_files:
        for k, path in enumerate(phi_files):
            try:
                v = io.read_feature(path)
                d = phi_invert(v, tpl)
            except (io.FormatError, EmbeddingError, ValueError) as exc:
                report["errors"].append({"source": Path(path).name, "error": str(exc)})
                continue
            io.write_density(rec_dir / f"phi{k:04d}.csv", d)
            report["items"].append({"source": Path(path).name, "output": f"phi{k:04d}.csv"})
    else:
        for k, dens in enumerate(data.densities):
            v = phi_embed(dens, tpl)
            rec = phi_invert(v, tpl)
            l1 = float(np.abs(rec.masses - dens.masses).sum())
            io.write_density(rec_dir / f"item{k:04d}.csv", rec)
            report["items"].append({"source": data._name(k), "output": f"item{k:04d}.csv", "l1_error": l1})
        if report["items"]:
            report["max_l1_error"] = max(i["l1_error"] for i in report["items"])
    steps = cfg.int("axis_steps", 0)
    if steps:
        if len(data.class_names) != 2:
            raise ConfigError("axis_steps", "the decision axis needs exactly two classes")
        E = embed_dataset(data.densities, tpl)
        G = gram(E, KernelSpec("linear_phi"))
        model = svm_train(G, data.labels, C=(cfg.floats("C_grid") or [1.0])[-1])
        try:
            s_values, dens, decision = svm_decision_axis(model, E, steps)
        except SvmError as exc:
            report["errors"].append({"source": "decision_axis", "error": str(exc)})
        else:
            axis = []
            for j, (s, d, dv) in enumerate(zip(s_values, dens, decision)):
                io.write_density(rec_dir / f"axis{j:03d}.csv", d)
                axis.append({"s": float(s), "decision": float(dv), "output": f"axis{j:03d}.csv"})
            report["axis"] = axis
    write_json(out / "invert.json", report)
    return {"reconstructed": len(report["items"]), "errors": len(report["errors"])}


HANDLERS = {
    "distance": cmd_distance,
    "pca": cmd_pca,
    "cluster": cmd_cluster,
    "classify": cmd_classify,
    "certify": cmd_certify,
    "invert": cmd_invert,
    "ingest": cmd_ingest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swkernels", description="Sliced Wasserstein kernel experiments.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--angles", type=int)
    parser.add_argument("--levels", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one configuration key")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = build_config(args)
        out = Path(cfg.raw("out"))
        out.mkdir(parents=True, exist_ok=True)
        (out / "config.resolved.txt").write_text(cfg.resolved_text(), encoding="ascii")
        summary = HANDLERS[args.command](cfg, out)
    except ConfigError as exc:
        print(f"swkernels: configuration error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, DensityError, RadonError, TransportError, EmbeddingError,
            KernelError, KpcaError, SvmError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"swkernels: numerical failure: {exc}", file=sys.stderr)
        return 1
    print(json.dumps({"command": args.command, "result": summary}, sort_keys=True))
    return 0


def main_exit() -> None:  # console-script entry point
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
