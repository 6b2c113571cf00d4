"""Solution profiles: parallel (eta, f, f', f'') columns plus their CSV form.

The CSV format is part of the tool's contract: header ``eta,f,fp,fpp``, one
row per abscissa, every number printed with 17 significant digits so a
re-parsed file reproduces the in-memory profile exactly.  Comment lines start
with ``#`` and are ignored on read.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

__all__ = ["SolutionProfile", "format_float", "write_profile_csv", "read_profile_csv"]

CSV_HEADER = "eta,f,fp,fpp"


def format_float(value: float) -> str:
    """17 significant digits: enough to round-trip any IEEE double exactly."""
    return format(float(value), ".17g")


def _column(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SolutionProfile:
    """Columns of a solved profile; eta strictly increasing.

    Physical boundary-layer profiles additionally have non-decreasing f and
    non-negative fp; that is a property of the solutions, checked in tests,
    not enforced here (trained approximations may violate it slightly).
    """

    eta: np.ndarray
    f: np.ndarray
    fp: np.ndarray
    fpp: np.ndarray

    def __post_init__(self):
        eta = _column(self.eta, "eta")
        cols = {name: _column(getattr(self, name), name) for name in ("f", "fp", "fpp")}
        if not all(col.shape == eta.shape for col in cols.values()):
            raise ValueError("all profile columns must share eta's length")
        if eta.size < 1:
            raise ValueError("profile must contain at least one row")
        if eta.size > 1 and np.any(np.diff(eta) <= 0.0):
            raise ValueError("eta must be strictly increasing")
        object.__setattr__(self, "eta", eta)
        for name, col in cols.items():
            object.__setattr__(self, name, col)

    def __len__(self) -> int:
        return int(self.eta.size)

    def rows(self) -> Iterator[tuple[float, float, float, float]]:
        for i in range(len(self)):
            yield (float(self.eta[i]), float(self.f[i]), float(self.fp[i]), float(self.fpp[i]))

    def index_of(self, eta: float, tol: float = 1e-12) -> int:
        """Index of the row whose abscissa matches eta within tol; raise if absent."""
        hits = np.nonzero(np.abs(self.eta - eta) <= tol)[0]
        if hits.size == 0:
            raise KeyError(f"no profile row at eta = {eta}")
        return int(hits[0])

    def row_at(self, eta: float, tol: float = 1e-12) -> tuple[float, float, float, float]:
        i = self.index_of(eta, tol)
        return (float(self.eta[i]), float(self.f[i]), float(self.fp[i]), float(self.fpp[i]))


def write_profile_csv(profile: SolutionProfile, destination, comments: dict | None = None) -> None:
    """Write the profile as CSV to a path or text file object.

    Path writes are atomic (temp file in the same directory, then rename).
    Optional comments become ``# key = value`` lines above the header.
    """
    lines = []
    for key, value in (comments or {}).items():
        lines.append(f"# {key} = {value}")
    lines.append(CSV_HEADER)
    for eta, f, fp, fpp in profile.rows():
        lines.append(",".join(format_float(x) for x in (eta, f, fp, fpp)))
    text = "\n".join(lines) + "\n"
    if isinstance(destination, (str, Path)):
        _atomic_write_text(Path(destination), text)
    else:
        destination.write(text)


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def read_profile_csv(source) -> SolutionProfile:
    """Parse a profile CSV written by write_profile_csv (comments skipped)."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    rows = []
    header_seen = False
    for line_no, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != CSV_HEADER:
                raise ValueError(f"line {line_no}: expected header '{CSV_HEADER}', got '{line}'")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {line_no}: expected 4 columns, got {len(parts)}")
        rows.append([float(p) for p in parts])
    if not header_seen:
        raise ValueError("missing CSV header")
    if not rows:
        raise ValueError("profile CSV contains no data rows")
    data = np.array(rows)
    return SolutionProfile(eta=data[:, 0], f=data[:, 1], fp=data[:, 2], fpp=data[:, 3])
