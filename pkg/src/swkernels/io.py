"""CSV formats for densities, sinograms, embeddings and Gram matrices.

Every file starts with one ``#`` header line of ``key=value`` fields; numbers
are written with ``repr`` so a write/read round trip is exact and reruns are
byte-identical.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .density import (
    DEFAULT_EPSILON,
    DiscreteDensity1D,
    DiscreteDensity2D,
    Grid1D,
    normalize_1d,
    normalize_2d,
)
from .kernels import GramMatrix, KernelSpec
from .radon import AngleSet, SlicedRepresentation
from .sliced import FeatureVector

__all__ = [
    "FormatError",
    "format_float",
    "write_matrix_csv",
    "read_density",
    "write_density",
    "read_sinogram",
    "write_sinogram",
    "read_feature",
    "write_feature",
    "read_gram",
    "write_gram",
]


class FormatError(ValueError):
    pass


def format_float(x) -> str:
    return repr(float(x))


def _header(tag: str, **fields) -> str:
    parts = [f"{k}={format_float(v) if isinstance(v, float) else v}" for k, v in fields.items()]
    return "# " + " ".join([tag, *parts])


def write_matrix_csv(path, matrix, header: str | None = None) -> None:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    lines = [] if header is None else [header]
    lines += [",".join(format_float(v) for v in row) for row in matrix]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def _read(path) -> tuple[str, dict, np.ndarray]:
    text = Path(path).read_text(encoding="ascii")
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise FormatError(f"{path}: missing '#' header line")
    tokens = lines[0][1:].split()
    if not tokens:
        raise FormatError(f"{path}: empty header")
    tag, fields = tokens[0], {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise FormatError(f"{path}: malformed header field {tok!r}")
        fields[key] = value
    rows = [ln for ln in lines[1:] if ln.strip() and not ln.startswith("#")]
    try:
        data = np.array([[float(v) for v in ln.split(",")] for ln in rows], dtype=float)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    if rows and len({len(r.split(",")) for r in rows}) != 1:
        raise FormatError(f"{path}: ragged rows")
    return tag, fields, data


def _field(fields: dict, key: str, kind=float, path=""):
    if key not in fields:
        raise FormatError(f"{path}: header lacks {key}=")
    try:
        return kind(fields[key])
    except ValueError:
        raise FormatError(f"{path}: bad value for {key}: {fields[key]!r}") from None


def read_density(path, epsilon: float = DEFAULT_EPSILON):
    """Read a raw nonnegative grid and normalize it.

    1D files carry ``# grid origin=<r> spacing=<r>`` and one value per line;
    2D files carry ``# grid rows=<n> cols=<n> pixel=<r>``.
    """
    tag, fields, data = _read(path)
    if tag != "grid":
        raise FormatError(f"{path}: expected a '# grid' header, got {tag!r}")
    if "rows" in fields:
        rows = _field(fields, "rows", int, path)
        cols = _field(fields, "cols", int, path)
        pixel = _field(fields, "pixel", float, path)
        if data.shape != (rows, cols):
            raise FormatError(f"{path}: header says {rows}x{cols}, data is {data.shape}")
        return normalize_2d(data, pixel, epsilon)
    origin = _field(fields, "origin", float, path)
    spacing = _field(fields, "spacing", float, path)
    if data.ndim != 2 or data.shape[1] != 1:
        raise FormatError(f"{path}: 1D density needs exactly one column")
    values = data[:, 0]
    return normalize_1d(values, Grid1D(origin, spacing, values.size), epsilon)


def write_density(path, d: DiscreteDensity1D | DiscreteDensity2D) -> None:
    """Write cell masses; reading back with ``epsilon=0`` restores ``d``."""
    if isinstance(d, DiscreteDensity1D):
        header = _header("grid", origin=float(d.grid.origin), spacing=float(d.grid.spacing))
        write_matrix_csv(path, d.masses[:, None], header)
    else:
        header = _header("grid", rows=d.rows, cols=d.cols, pixel=float(d.pixel_size))
        write_matrix_csv(path, d.masses, header)


def _sino_header(tag, angle_set: AngleSet, grid: Grid1D, **extra) -> str:
    return _header(
        tag, L=angle_set.count, T=grid.count,
        t_origin=float(grid.origin), t_spacing=float(grid.spacing), **extra,
    )


def _sino_geometry(fields, data, path):
    L = _field(fields, "L", int, path)
    T = _field(fields, "T", int, path)
    grid = Grid1D(_field(fields, "t_origin", float, path), _field(fields, "t_spacing", float, path), T)
    if data.shape != (L, T):
        raise FormatError(f"{path}: header says {L}x{T}, data is {data.shape}")
    return AngleSet(L), grid


def write_sinogram(path, s: SlicedRepresentation) -> None:
    write_matrix_csv(path, s.slices, _sino_header("sinogram", s.angle_set, s.t_grid))


def read_sinogram(path) -> SlicedRepresentation:
    tag, fields, data = _read(path)
    if tag != "sinogram":
        raise FormatError(f"{path}: expected a '# sinogram' header, got {tag!r}")
    angles, grid = _sino_geometry(fields, data, path)
    return SlicedRepresentation(angles, grid, data)


def write_feature(path, v: FeatureVector) -> None:
    write_matrix_csv(path, v.values, _sino_header("phi", v.angle_set, v.t_grid))


def read_feature(path) -> FeatureVector:
    tag, fields, data = _read(path)
    if tag != "phi":
        raise FormatError(f"{path}: expected a '# phi' header, got {tag!r}")
    angles, grid = _sino_geometry(fields, data, path)
    return FeatureVector(angles, grid, data)


def write_gram(path, G: GramMatrix) -> None:
    s = G.spec
    header = _header(
        "gram", kind=s.kind, gamma=float(s.gamma), degree=int(s.degree),
        offset=int(s.offset), min_eig=float(G.min_eigenvalue),
    )
    write_matrix_csv(path, G.entries, header)


def read_gram(path) -> GramMatrix:
    tag, fields, data = _read(path)
    if tag != "gram":
        raise FormatError(f"{path}: expected a '# gram' header, got {tag!r}")
    spec = KernelSpec(
        fields.get("kind", ""),
        _field(fields, "gamma", float, path),
        _field(fields, "degree", int, path),
        _field(fields, "offset", int, path),
    )
    return GramMatrix.from_entries(data, spec)
