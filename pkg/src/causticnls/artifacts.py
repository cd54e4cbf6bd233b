"""CSV and JSON artifact writers.

Schemas: wave-field files carry (x, re, im, density); spectrum files
(k, re, im, magnitude); series files (t, mass, energy, sup_norm,
sigma_norm).  Headers included, UTF-8, '.' decimal, newline-terminated
rows, 17 significant digits (round-trip exact for float64), so re-running
a deterministic preset reproduces byte-identical payloads.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from causticnls.observables import ObservableRecord, position_density
from causticnls.spectral import SpectrumField, WaveField

__all__ = [
    "fmt",
    "write_table_csv",
    "write_wavefield_csv",
    "write_spectrum_csv",
    "write_series_csv",
    "write_metadata",
]


def fmt(value: object) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_table_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_wavefield_csv(path: Path, field: WaveField) -> Path:
    x = field.grid.nodes()
    v = field.values
    density = position_density(field)
    rows = zip(x, v.real, v.imag, density)
    return write_table_csv(path, ("x", "re", "im", "density"), rows)


def write_spectrum_csv(path: Path, spec: SpectrumField) -> Path:
    k = spec.grid.wavenumber_indices()
    c = spec.coeffs
    rows = zip(k, c.real, c.imag, np.abs(c))
    return write_table_csv(path, ("k", "re", "im", "magnitude"), rows)


def write_series_csv(path: Path, records: Sequence[ObservableRecord]) -> Path:
    rows = ((r.t, r.mass, r.energy, r.sup_norm, r.sigma_norm) for r in records)
    return write_table_csv(path, ("t", "mass", "energy", "sup_norm", "sigma_norm"), rows)


def write_metadata(path: Path, meta: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return path
