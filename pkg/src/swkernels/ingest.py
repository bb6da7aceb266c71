"""Image ingestion: co-occurrence densities, PGM datasets, synthetic translates."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import ndimage

from .density import DEFAULT_EPSILON, DiscreteDensity2D, normalize_2d

__all__ = [
    "GlcmSpec",
    "LabeledDataset",
    "IngestError",
    "glcm_counts",
    "glcm",
    "read_pgm",
    "write_pgm",
    "load_dataset",
    "synth_translates",
]

DEFAULT_OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1))
IMAGE_SUFFIXES = (".pgm", ".png")
DENSITY_SUFFIX = ".csv"
DATA_SUFFIXES = IMAGE_SUFFIXES + (DENSITY_SUFFIX,)


class IngestError(ValueError):
    pass


@dataclass(frozen=True)
class GlcmSpec:
    """Quantization levels and pixel offsets ``(dx, dy)`` = (column, row) steps."""

    levels: int = 32
    offsets: tuple = DEFAULT_OFFSETS
    symmetric: bool = True

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(tuple(int(v) for v in o) for o in self.offsets))
        if self.levels < 2:
            raise IngestError("levels must be at least 2")
        if not self.offsets:
            raise IngestError("at least one offset is required")
        if any(o == (0, 0) or len(o) != 2 for o in self.offsets):
            raise IngestError("offsets must be nonzero (dx, dy) pairs")

    def to_dict(self) -> dict:
        return {"levels": self.levels, "offsets": [list(o) for o in self.offsets], "symmetric": self.symmetric}


def quantize(image: np.ndarray, levels: int) -> np.ndarray:
    """Uniform binning into ``levels`` gray levels.

    Images whose values all lie in ``[0, 1]`` and that are floating point are
    read as ``[0, 1]`` intensities; anything else as ``[0, 255]``.
    """
    image = np.asarray(image)
    if image.size == 0:
        raise IngestError("empty image")
    data = image.astype(float)
    if np.issubdtype(image.dtype, np.floating) and data.min() >= 0 and data.max() <= 1:
        top = 1.0
    else:
        top = 255.0
    if data.min() < 0 or data.max() > top:
        raise IngestError(f"intensities must lie in [0, {top:g}]")
    return np.minimum((data / top * levels).astype(int), levels - 1)


def glcm_counts(image, spec: GlcmSpec = GlcmSpec()) -> np.ndarray:
    """Raw co-occurrence counts summed over all offsets."""
    q = quantize(image, spec.levels)
    if q.ndim != 2:
        raise IngestError("expected a 2D grayscale image")
    rows, cols = q.shape
    counts = np.zeros((spec.levels, spec.levels))
    for dx, dy in spec.offsets:
        if abs(dx) >= cols or abs(dy) >= rows:
            raise IngestError(f"image {q.shape} is smaller than offset ({dx}, {dy})")
        a = q[max(0, -dy):rows - max(0, dy), max(0, -dx):cols - max(0, dx)]
        b = q[max(0, dy):rows - max(0, -dy), max(0, dx):cols - max(0, -dx)]
        np.add.at(counts, (a.ravel(), b.ravel()), 1)
    if spec.symmetric:
        counts = counts + counts.T
    return counts


def glcm(image, spec: GlcmSpec = GlcmSpec(), epsilon: float = DEFAULT_EPSILON) -> DiscreteDensity2D:
    """Normalized gray-level co-occurrence matrix as a ``levels x levels`` density."""
    return normalize_2d(glcm_counts(image, spec), 1.0, epsilon)


def read_pgm(path) -> np.ndarray:
    """Read a binary (P5) or ASCII (P2) PGM; 16-bit data is scaled to [0, 255]."""
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise IngestError(f"{path}: truncated PGM header")
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    magic = tokens[0]
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise IngestError(f"{path}: malformed PGM header") from None
    if magic not in (b"P2", b"P5") or width < 1 or height < 1 or not 0 < maxval < 65536:
        raise IngestError(f"{path}: not a PGM image")
    if magic == b"P5":
        pos += 1  # single whitespace after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = width * height * dtype.itemsize
        if len(data) - pos < need:
            raise IngestError(f"{path}: truncated pixel data")
        pixels = np.frombuffer(data, dtype=dtype, count=width * height, offset=pos)
    else:
        try:
            pixels = np.array(data[pos:].split(), dtype=int)
        except ValueError:
            raise IngestError(f"{path}: malformed ASCII pixel data") from None
        if pixels.size < width * height:
            raise IngestError(f"{path}: truncated pixel data")
        pixels = pixels[: width * height]
    if pixels.max(initial=0) > maxval:
        raise IngestError(f"{path}: pixel value exceeds maxval")
    image = pixels.reshape(height, width).astype(float)
    if maxval != 255:
        image = image * (255.0 / maxval)
    return image


def write_pgm(path, image) -> None:
    """Write an 8-bit binary PGM."""
    image = np.asarray(image)
    if image.ndim != 2:
        raise IngestError("expected a 2D image")
    pixels = np.clip(np.rint(image), 0, 255).astype(np.uint8)
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii")
    Path(path).write_bytes(header + pixels.tobytes())


def _read_image(path: Path) -> np.ndarray:
    if path.suffix.lower() == ".pgm":
        return read_pgm(path)
    try:
        from PIL import Image
    except ImportError:  # pragma: no cover - Pillow is optional
        raise IngestError(f"{path}: PNG support needs Pillow") from None
    try:
        with Image.open(path) as im:
            return np.asarray(im.convert("L"), dtype=float)
    except OSError as exc:
        raise IngestError(f"{path}: {exc}") from None


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    densities: list = field(repr=False)
    labels: np.ndarray
    class_names: tuple
    origins: tuple = ()
    skipped: tuple = ()  # (path, reason) pairs
    spec: GlcmSpec | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        object.__setattr__(self, "labels", labels)
        if len(self.densities) != labels.size:
            raise IngestError("one label per density is required")
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.class_names)):
            raise IngestError("labels out of range of class names")
        for k, d in enumerate(self.densities[1:], start=1):
            if not d.same_grid(self.densities[0]):
                raise IngestError(
                    f"item {k} ({self._name(k)}) has grid {d.shape}, "
                    f"item 0 ({self._name(0)}) has {self.densities[0].shape}"
                )

    def _name(self, k):
        return self.origins[k] if k < len(self.origins) else f"#{k}"

    def __len__(self):
        return len(self.densities)

    def manifest(self) -> dict:
        return {
            "items": [
                {"source": self._name(k), "class": self.class_names[int(c)], "label": int(c)}
                for k, c in enumerate(self.labels)
            ],
            "skipped": [{"source": p, "reason": r} for p, r in self.skipped],
            "classes": list(self.class_names),
            "glcm": self.spec.to_dict() if self.spec else None,
        }

    def write_manifest(self, path) -> None:
        Path(path).write_text(json.dumps(self.manifest(), indent=2, sort_keys=True) + "\n")


def _read_item(path: Path, spec: GlcmSpec, epsilon: float) -> DiscreteDensity2D:
    if path.suffix.lower() == DENSITY_SUFFIX:
        from .io import FormatError, read_density

        try:
            d = read_density(path, epsilon)
        except FormatError as exc:
            raise IngestError(str(exc)) from None
        if not isinstance(d, DiscreteDensity2D):
            raise IngestError(f"{path}: expected a 2D density")
        return d
    return glcm(_read_image(path), spec, epsilon)


def _data_files(folder: Path) -> list[Path]:
    return sorted(
        (p for p in folder.iterdir() if p.is_file() and p.suffix.lower() in DATA_SUFFIXES),
        key=lambda p: p.name,
    )


def load_dataset(root, spec: GlcmSpec = GlcmSpec(), epsilon: float = DEFAULT_EPSILON) -> LabeledDataset:
    """Load ``root/<class_name>/*`` as a labeled set of 2D densities.

    Images (``.pgm``, ``.png``) become GLCM densities; ``.csv`` files are
    read as stored densities. A root without class subdirectories is a
    single unlabeled class named after the root. Classes and files are taken
    in lexicographic order. Unreadable files are skipped with a warning and
    recorded in the manifest.
    """
    root = Path(root)
    if not root.is_dir():
        raise IngestError(f"{root} is not a directory")
    class_dirs = sorted((p for p in root.iterdir() if p.is_dir()), key=lambda p: p.name)
    if not class_dirs:
        if not _data_files(root):
            raise IngestError(f"{root} has no class subdirectories and no data files")
        class_dirs = [root]
    densities, labels, origins, skipped = [], [], [], []
    for label, cdir in enumerate(class_dirs):
        kept = 0
        for path in _data_files(cdir):
            rel = path.relative_to(root).as_posix()
            try:
                densities.append(_read_item(path, spec, epsilon))
            except (IngestError, ValueError) as exc:
                warnings.warn(f"skipping {rel}: {exc}", stacklevel=2)
                skipped.append((rel, str(exc)))
                continue
            labels.append(label)
            origins.append(rel)
            kept += 1
        if kept == 0:
            raise IngestError(f"class {cdir.name!r} has no readable files")
    return LabeledDataset(
        densities, np.array(labels), tuple(p.name for p in class_dirs),
        tuple(origins), tuple(skipped), spec,
    )


def _shift(values: np.ndarray, v) -> np.ndarray:
    """Periodic translation by ``v = (dx, dy)`` pixels.

    Integer shifts are exact rolls; fractional ones use a Fourier phase
    shift, which is unitary, so shifting by ``v`` then ``-v`` restores the
    input to rounding.
    """
    dx, dy = float(v[0]), float(v[1])
    if dx == int(dx) and dy == int(dy):
        return np.roll(values, (int(dy), int(dx)), axis=(0, 1))
    spectrum = ndimage.fourier_shift(np.fft.fft2(values), (dy, dx))
    return np.maximum(np.real(np.fft.ifft2(spectrum)), 0.0)


def synth_translates(
    base: DiscreteDensity2D,
    shifts: Sequence[Sequence[Sequence[float]]],
    noise: float = 0.0,
    seed: int = 0,
    class_names: Sequence[str] | None = None,
    tolerance: float = 1e-6,
    epsilon: float = DEFAULT_EPSILON,
) -> LabeledDataset:
    """Translated copies of ``base``, one class per group of shifts.

    ``shifts[c]`` lists the ``(dx, dy)`` pixel shifts of class ``c``. Shifts
    wrap around the grid; a shift that carries more than ``tolerance`` of the
    mass across the border is rejected. ``noise`` is the standard deviation
    of a multiplicative Gaussian perturbation applied per pixel.
    """
    rng = np.random.default_rng(seed)
    values = base.masses
    rows, cols = values.shape
    densities, labels, origins = [], [], []
    for c, group in enumerate(shifts):
        for v in group:
            dx, dy = float(v[0]), float(v[1])
            # Mass that would leave the grid without wrap-around.
            kept = values[
                max(0, int(np.ceil(-dy))):rows - max(0, int(np.ceil(dy))),
                max(0, int(np.ceil(-dx))):cols - max(0, int(np.ceil(dx))),
            ].sum()
            if 1.0 - kept > tolerance:
                raise IngestError(
                    f"shift ({dx:g}, {dy:g}) pushes {1.0 - kept:.3g} of the mass off the grid"
                )
            moved = _shift(values, (dx, dy))
            if noise > 0:
                moved = moved * np.maximum(1.0 + noise * rng.standard_normal(moved.shape), 0.0)
            densities.append(normalize_2d(moved, base.pixel_size, epsilon))
            labels.append(c)
            origins.append(f"class{c}:shift({dx:g},{dy:g})")
    if class_names is None:
        class_names = tuple(f"class{c}" for c in range(len(shifts)))
    return LabeledDataset(densities, np.array(labels), tuple(class_names), tuple(origins))
