"""Measurement ingestion, outlier filtering, and train/test splitting.

The on-disk format is a comma-separated file with '.' decimals, an exact
header row, and optional blank or ``#`` comment lines::

    temperature_K,SiO2,CaO,MgO,Al2O3,FeO,conductivity_S_per_m

Floats are written with ``repr``, which round-trips IEEE doubles exactly, so
``load_csv(write_csv(d))`` reproduces ``d`` bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, RowError, SchemaError
from .rng import STREAM_SPLIT, seeded_rng

FEATURE_COLUMNS = ("temperature_K", "SiO2", "CaO", "MgO", "Al2O3", "FeO")
TARGET_COLUMN = "conductivity_S_per_m"
CSV_HEADER = FEATURE_COLUMNS + (TARGET_COLUMN,)

# Tolerance on |sum of the five molar fractions - 1| at ingestion.
FRACTION_SUM_TOL = 1e-6


@dataclass(frozen=True)
class Sample:
    """One conductivity measurement: temperature, composition, conductivity.

    Temperature is in Kelvin, the five oxide contents are molar fractions,
    and conductivity is in S/m.  A sample loaded from a feature-only file
    (prediction input) carries ``conductivity = nan``.
    """

    temperature: float
    x_sio2: float
    x_cao: float
    x_mgo: float
    x_al2o3: float
    x_feo: float
    conductivity: float = math.nan

    @property
    def fractions(self) -> tuple[float, float, float, float, float]:
        return (self.x_sio2, self.x_cao, self.x_mgo, self.x_al2o3, self.x_feo)

    @property
    def features(self) -> tuple[float, ...]:
        """Predictor values in the fixed column order (T first)."""
        return (self.temperature,) + self.fractions


@dataclass
class Dataset:
    """An ordered collection of samples plus provenance."""

    samples: list[Sample]
    source_path: str = ""
    provenance_notes: str = ""

    def __len__(self) -> int:
        return len(self.samples)

    def feature_matrix(self) -> np.ndarray:
        """(N, 6) float64 matrix of predictors in column order."""
        return np.array([s.features for s in self.samples], dtype=np.float64).reshape(len(self.samples), 6)

    def target_vector(self) -> np.ndarray:
        """(N,) float64 vector of conductivities in S/m."""
        return np.array([s.conductivity for s in self.samples], dtype=np.float64)

    def subset(self, indices) -> "Dataset":
        return Dataset(
            samples=[self.samples[i] for i in indices],
            source_path=self.source_path,
            provenance_notes=self.provenance_notes,
        )


@dataclass
class SplitIndices:
    """Disjoint train/test index lists produced by a seeded shuffle."""

    train_indices: list[int]
    test_indices: list[int]
    seed: int = 0


def _parse_float(text: str, line_no: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise RowError(line_no, f"column {column!r}: {text!r} is not a number") from None
    if not math.isfinite(value):
        raise RowError(line_no, f"column {column!r}: value {text!r} is not finite")
    return value


def _validate_row(line_no: int, values: dict[str, float], renormalize: bool, with_target: bool) -> Sample:
    temperature = values["temperature_K"]
    if temperature <= 0:
        raise RowError(line_no, f"temperature_K must be positive, got {temperature!r}")

    fractions = [values[c] for c in FEATURE_COLUMNS[1:]]
    for name, frac in zip(FEATURE_COLUMNS[1:], fractions):
        if not 0.0 <= frac <= 1.0:
            raise RowError(line_no, f"column {name!r}: molar fraction {frac!r} outside [0, 1]")

    total = sum(fractions)
    if renormalize:
        if total <= 0:
            raise RowError(line_no, "molar fractions sum to zero, cannot renormalize")
        fractions = [f / total for f in fractions]
        total = sum(fractions)
    if abs(total - 1.0) > FRACTION_SUM_TOL:
        raise RowError(
            line_no,
            f"molar fractions sum to {total!r}, expected 1 within {FRACTION_SUM_TOL:g} "
            "(pass renormalize to rescale rows with trace constituents)",
        )

    conductivity = math.nan
    if with_target:
        conductivity = values[TARGET_COLUMN]
        if conductivity < 0:
            raise RowError(line_no, f"column {TARGET_COLUMN!r}: conductivity {conductivity!r} is negative")

    return Sample(temperature, *fractions, conductivity)


def load_csv(path: str, renormalize_fractions: bool = False, require_target: bool = True) -> Dataset:
    """Read a measurement file into a Dataset, preserving file order.

    With ``require_target=False`` (prediction inputs) the conductivity column
    may be absent; if present its values are ignored and not validated.
    Raises SchemaError for a bad header, RowError (with the 1-based line
    number) for a bad row, DataError for an empty file.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()

    rows: list[tuple[int, list[str]]] = []
    for line_no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        rows.append((line_no, [cell.strip() for cell in text.split(",")]))

    if not rows:
        raise SchemaError(f"{path}: no header row found")

    _, header = rows[0]
    if tuple(header) == CSV_HEADER:
        columns = CSV_HEADER
    elif not require_target and tuple(header) == FEATURE_COLUMNS:
        columns = FEATURE_COLUMNS
    else:
        expected = CSV_HEADER if require_target else FEATURE_COLUMNS
        for got, want in zip(header, expected):
            if got != want:
                raise SchemaError(f"{path}: expected column {want!r}, found {got!r}")
        missing = expected[len(header):]
        if missing:
            raise SchemaError(f"{path}: missing column {missing[0]!r}")
        raise SchemaError(f"{path}: unexpected extra columns {header[len(expected):]!r}")

    samples = []
    for line_no, cells in rows[1:]:
        if len(cells) != len(columns):
            raise RowError(line_no, f"expected {len(columns)} fields, found {len(cells)}")
        values = {
            name: _parse_float(cell, line_no, name)
            for name, cell in zip(columns, cells)
            if require_target or name != TARGET_COLUMN
        }
        samples.append(_validate_row(line_no, values, renormalize_fractions, require_target))

    if not samples:
        raise DataError(f"{path}: empty dataset (header only)")

    return Dataset(samples=samples, source_path=path)


def write_csv(dataset: Dataset, path: str) -> None:
    """Write a dataset back to the documented CSV format."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for s in dataset.samples:
            fields = [repr(float(v)) for v in s.features] + [repr(float(s.conductivity))]
            fh.write(",".join(fields) + "\n")


def remove_outliers(dataset: Dataset) -> tuple[Dataset, int]:
    """Drop samples whose conductivity lies beyond 3 standard deviations.

    Mean and population standard deviation are computed once over all input
    samples; the filter keeps exactly those with |c - mean| <= 3 sigma.  The
    pass is not iterated.  Order of the retained samples is preserved.
    """
    n = len(dataset)
    if n < 2:
        raise DataError(f"degenerate dataset: need at least 2 samples, got {n}")

    cond = dataset.target_vector()
    mu = float(np.mean(cond))
    sigma = float(np.std(cond))  # population form (divide by N)

    keep = [i for i, c in enumerate(cond) if abs(c - mu) <= 3.0 * sigma]
    filtered = dataset.subset(keep)
    filtered.provenance_notes = (
        dataset.provenance_notes + f"[outlier filter: kept {len(keep)}/{n}, mu={mu!r}, sigma={sigma!r}]"
    )
    return filtered, n - len(keep)


def split(dataset: Dataset, train_fraction: float, seed: int) -> SplitIndices:
    """Seeded shuffle split: first floor(fraction * N) indices train, rest test."""
    n = len(dataset)
    if not 0.0 < train_fraction < 1.0:
        raise DataError(f"train_fraction must be in (0, 1), got {train_fraction!r}")
    if n < 2:
        raise DataError(f"cannot split a dataset of {n} sample(s)")

    order = seeded_rng(seed, STREAM_SPLIT).permutation(n)
    n_train = int(math.floor(train_fraction * n))
    if n_train == 0:
        raise DataError(f"train partition is empty for N={n}, fraction={train_fraction!r}")
    return SplitIndices(
        train_indices=[int(i) for i in order[:n_train]],
        test_indices=[int(i) for i in order[n_train:]],
        seed=seed,
    )


def histogram_counts(values, n_bins: int) -> list[tuple[float, float, int]]:
    """Equal-width histogram over [min, max]; returns (lo, hi, count) rows.

    Degenerate input (all values equal) falls back to numpy's unit-width
    window around the value, so exactly one bin is occupied.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise DataError("cannot histogram an empty value list")
    if n_bins < 1:
        raise DataError(f"bin count must be positive, got {n_bins}")
    counts, edges = np.histogram(arr, bins=n_bins)
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i])) for i in range(n_bins)]
