"""
Readers and writers for the on-disk formats.

* SURF1 surface grids: a header line
  ``SURF1 <rows> <cols> <hurst> <index> <label> <spacing>`` followed by
  `rows` lines of `cols` space-separated floats.
* Profile CSV: ``parent_index,label,spacing,h0,h1,...``.
* Diagram CSV: ``dim,birth,death`` plus a ``# global_max=<v>`` comment.
* Feature CSV: provenance-tagged column names, one specimen per row, label last.

Floats are written with ``repr`` so that a round trip is exact. Every writer
goes through a temporary file and an atomic rename.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .classify import FeatureMatrix
from .errors import DataError
from .persistence import PersistenceDiagram
from .surface_synth import Profile, RoughnessLabel, SurfaceGrid


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _f(x) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# SURF1

def format_surface(s: SurfaceGrid) -> str:
    rows, cols = s.shape
    lines = [f"SURF1 {rows} {cols} {_f(s.hurst)} {s.index} {s.label.name} {_f(s.spacing)}"]
    lines.extend(" ".join(_f(v) for v in row) for row in s.heights)
    return "\n".join(lines) + "\n"


def write_surface(path, s: SurfaceGrid) -> None:
    atomic_write_text(path, format_surface(s))


def parse_surface(text: str) -> SurfaceGrid:
    lines = text.strip().splitlines()
    if not lines:
        raise DataError("empty SURF1 file")
    head = lines[0].split()
    if len(head) != 7 or head[0] != "SURF1":
        raise DataError(f"bad SURF1 header: {lines[0]!r}")
    try:
        rows, cols = int(head[1]), int(head[2])
        hurst, index = float(head[3]), int(head[4])
        label = RoughnessLabel.parse(head[5])
        spacing = float(head[6])
        grid = np.array([[float(v) for v in ln.split()] for ln in lines[1:]])
    except (ValueError, KeyError) as exc:
        raise DataError(f"malformed SURF1 data: {exc}") from exc
    if grid.shape != (rows, cols):
        raise DataError(f"SURF1 grid is {grid.shape}, header says {(rows, cols)}")
    return SurfaceGrid(grid, hurst, index, label, spacing)


def read_surface(path) -> SurfaceGrid:
    return parse_surface(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# profiles

def format_profiles(profiles) -> str:
    n = max((len(p) for p in profiles), default=0)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["parent_index", "label", "spacing", *(f"h{i}" for i in range(n))])
    for p in profiles:
        w.writerow([p.parent_index, p.label.name, _f(p.spacing), *(_f(v) for v in p.heights)])
    return buf.getvalue()


def write_profiles(path, profiles) -> None:
    atomic_write_text(path, format_profiles(profiles))


def read_profiles(path) -> list[Profile]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        r = csv.reader(fh)
        header = next(r, None)
        if header is None or header[:3] != ["parent_index", "label", "spacing"]:
            raise DataError(f"bad profile CSV header in {path}")
        for row in r:
            try:
                out.append(Profile(np.array([float(v) for v in row[3:] if v != ""]),
                                   float(row[2]), RoughnessLabel.parse(row[1]), int(row[0])))
            except (ValueError, KeyError, IndexError) as exc:
                raise DataError(f"malformed profile row in {path}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# diagrams

def format_diagrams(diagrams) -> str:
    diagrams = list(diagrams)
    gmax = diagrams[0].global_max if diagrams else 0.0
    lines = [f"# global_max={_f(gmax)}", "dim,birth,death"]
    for d in diagrams:
        lines.extend(f"{d.dim},{_f(b)},{_f(e)}" for b, e in d.pairs)
    return "\n".join(lines) + "\n"


def write_diagrams(path, diagrams) -> None:
    atomic_write_text(path, format_diagrams(diagrams))


def read_diagrams(path) -> list[PersistenceDiagram]:
    gmax = None
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "global_max":
                gmax = float(val)
            continue
        if line.startswith("dim"):
            continue
        try:
            d, b, e = line.split(",")
            rows.append((int(d), float(b), float(e)))
        except ValueError as exc:
            raise DataError(f"malformed diagram row in {path}: {line!r}") from exc
    if gmax is None:
        raise DataError(f"diagram file {path} lacks '# global_max=' line")
    dims = sorted({r[0] for r in rows}) or [0]
    return [PersistenceDiagram(k, [(b, e) for d, b, e in rows if d == k], gmax) for k in dims]


# ---------------------------------------------------------------------------
# feature matrices

def format_feature_matrix(fm: FeatureMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*fm.column_names, "label"])
    for row, lab in zip(fm.X, fm.y):
        w.writerow([*(_f(v) for v in row), int(lab)])
    return buf.getvalue()


def write_feature_matrix(path, fm: FeatureMatrix) -> None:
    atomic_write_text(path, format_feature_matrix(fm))


def read_feature_matrix(path, featurization_id: str | None = None, target: str = "") -> FeatureMatrix:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            r = csv.reader(fh)
            header = next(r)
            rows = [row for row in r if row]
        X = np.array([[float(v) for v in row[:-1]] for row in rows]).reshape(len(rows), len(header) - 1)
        y = np.array([int(row[-1]) for row in rows], dtype=int)
    except (StopIteration, ValueError, IndexError) as exc:
        raise DataError(f"malformed feature CSV {path}: {exc}") from exc
    return FeatureMatrix(X, y, header[:-1], featurization_id or path.stem, target)
