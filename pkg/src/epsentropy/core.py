"""Shared data model, geometry, special functions, and the RNG contract.

Everything downstream (pair counting, estimators, process generators) works
on a ``SeriesSample``: an immutable (n, d) float64 array of consecutive
observations from a stationary sequence.  This module also carries the small
amount of closed-form special-function machinery the estimators need:

* unit-ball volumes through the half-integer gamma recursion,
* the standard normal quantile (rational approximation, so samplers and
  confidence intervals do not depend on an external statistics library),
* reproducible, splittable random streams keyed by (seed, stream_id).
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_DIM",
    "SeriesSample",
    "RngStream",
    "ball_volume",
    "unit_ball_volume",
    "euclidean_distance",
    "normal_quantile",
    "normal_cdf",
    "standard_normals",
    "worker_count",
    "read_sample_csv",
    "write_sample_csv",
    "read_symbol_csv",
    "write_symbol_csv",
]

MAX_DIM = 64


@dataclass(frozen=True)
class SeriesSample:
    """Consecutive observations of an R^d-valued series, shape (n, d).

    The array is coerced to contiguous float64, validated (finite entries,
    1 <= d <= MAX_DIM, n >= 1) and frozen.  Row order is meaningful: lagged
    statistics pair row i with row i+h.
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise ValueError(f"sample must be 1-D or 2-D, got ndim={pts.ndim}")
        n, d = pts.shape
        if n < 1:
            raise ValueError("sample needs at least one observation")
        if not 1 <= d <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {d}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("sample contains non-finite values")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def prefix(self, n: int) -> "SeriesSample":
        """First n rows as a new sample."""
        if not 1 <= n <= self.n:
            raise ValueError(f"prefix length {n} outside [1, {self.n}]")
        return SeriesSample(self.points[:n])

    def project(self, columns) -> "SeriesSample":
        """Sub-sample restricted to the given column indices (key subsets)."""
        cols = list(columns)
        if len(cols) == 0:
            raise ValueError("projection needs at least one column")
        if len(set(cols)) != len(cols):
            raise ValueError("projection columns must be distinct")
        for c in cols:
            if not 0 <= c < self.d:
                raise ValueError(f"column {c} outside [0, {self.d})")
        return SeriesSample(self.points[:, cols])


def _gamma_half(two_a: int) -> float:
    """Gamma(two_a / 2) for integer two_a >= 1, by the exact recursion.

    Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(x + 1) = x * Gamma(x).
    """
    if two_a < 1:
        raise ValueError("gamma argument must be >= 1/2")
    if two_a % 2 == 0:
        x, g = 1.0, 1.0
    else:
        x, g = 0.5, math.sqrt(math.pi)
    target = two_a / 2.0
    while x < target:
        g *= x
        x += 1.0
    return g


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in R^d: 2 pi^{d/2} / (d Gamma(d/2))."""
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise ValueError("dimension must be an integer")
    if not 1 <= d <= MAX_DIM:
        raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {d}")
    return 2.0 * math.pi ** (d / 2.0) / (d * _gamma_half(int(d)))


def ball_volume(d: int, eps: float) -> float:
    """Volume of a radius-eps ball in R^d, eps^d * unit_ball_volume(d)."""
    vol1 = unit_ball_volume(d)
    eps = float(eps)
    if not (eps > 0.0) or not math.isfinite(eps):
        raise ValueError(f"radius must be positive and finite, got {eps}")
    return eps**d * vol1


def euclidean_distance(x, y) -> float:
    """Plain Euclidean distance between two points of equal dimension."""
    xa = np.asarray(x, dtype=np.float64).ravel()
    ya = np.asarray(y, dtype=np.float64).ravel()
    if xa.shape != ya.shape:
        raise ValueError(f"dimension mismatch: {xa.shape} vs {ya.shape}")
    if xa.size == 0:
        raise ValueError("points must have dimension >= 1")
    return float(np.sqrt(np.sum((xa - ya) ** 2)))


# ---------------------------------------------------------------------------
# standard normal quantile / cdf
# ---------------------------------------------------------------------------

# Rational minimax approximation to the standard normal quantile,
# algorithm AS 241 (PPND16).  Relative accuracy ~1e-16, far inside the
# 1e-9 contract; coefficients reproduced verbatim.
_A = (
    3.3871328727963666080e0,
    1.3314166789178437745e2,
    1.9715909503065514427e3,
    1.3731693765509461125e4,
    4.5921953931549871457e4,
    6.7265770927008700853e4,
    3.3430575583588128105e4,
    2.5090809287301226727e3,
)
_B = (
    1.0,
    4.2313330701600911252e1,
    6.8718700749205790830e2,
    5.3941960214247511077e3,
    2.1213794301586595867e4,
    3.9307895800092710610e4,
    2.8729085735721942674e4,
    5.2264952788528545610e3,
)
_C = (
    1.42343711074968357734e0,
    4.63033784615654529590e0,
    5.76949722146069140550e0,
    3.64784832476320460504e0,
    1.27045825245236838258e0,
    2.41780725177450611770e-1,
    2.27238449892691845833e-2,
    7.74545014278341407640e-4,
)
_D = (
    1.0,
    2.05319162663775882187e0,
    1.67638483018380384940e0,
    6.89767334985100004550e-1,
    1.48103976427480074590e-1,
    1.51986665636164571966e-2,
    5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_E = (
    6.65790464350110377720e0,
    5.46378491116411436990e0,
    1.78482653991729133580e0,
    2.96560571828504891230e-1,
    2.65321895265761230930e-2,
    1.24266094738807843860e-3,
    2.71155556874348757815e-5,
    2.01033439929228813265e-7,
)
_F = (
    1.0,
    5.99832206555887937690e-1,
    1.36929880922735805310e-1,
    1.48753612908506148525e-2,
    7.86869131145613259100e-4,
    1.84631831751005468180e-5,
    1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _polyval(coeffs, x):
    acc = np.zeros_like(x) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * x + c
    return acc


def normal_quantile(p):
    """Standard normal quantile Phi^{-1}(p) for p in (0, 1).

    Accepts scalars or arrays; raises on p outside the open interval.
    """
    arr = np.asarray(p, dtype=np.float64)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ValueError("quantile argument must lie strictly inside (0, 1)")
    q = arr - 0.5
    out = np.empty_like(arr)

    central = np.abs(q) <= 0.425
    if np.any(central):
        r = 0.180625 - q[central] ** 2
        out[central] = q[central] * _polyval(_A, r) / _polyval(_B, r)

    if np.any(~central):
        qt = q[~central]
        pt = np.where(qt < 0.0, arr[~central], 1.0 - arr[~central])
        r = np.sqrt(-np.log(pt))
        near = r <= 5.0
        val = np.empty_like(r)
        if np.any(near):
            rr = r[near] - 1.6
            val[near] = _polyval(_C, rr) / _polyval(_D, rr)
        if np.any(~near):
            rr = r[~near] - 5.0
            val[~near] = _polyval(_E, rr) / _polyval(_F, rr)
        out[~central] = np.where(qt < 0.0, -val, val)

    if np.isscalar(p) or arr.ndim == 0:
        return float(out)
    return out


def normal_cdf(x):
    """Standard normal CDF via the error function."""
    arr = np.asarray(x, dtype=np.float64)
    flat = np.array([0.5 * math.erfc(-v / math.sqrt(2.0)) for v in arr.ravel()])
    out = flat.reshape(arr.shape)
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# random streams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream addressed by (seed, stream_id).

    Identical (seed, stream_id) pairs reproduce identical draws across runs;
    distinct stream_ids index statistically independent streams (PCG64 seeded
    through SeedSequence spawn keys).  Streams are single-owner values: hand a
    replicate its own ``stream(i)`` rather than sharing one generator.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.seed, (int, np.integer)) or isinstance(self.seed, bool):
            raise ValueError("seed must be an integer")
        if not isinstance(self.stream_id, (int, np.integer)) or isinstance(self.stream_id, bool):
            raise ValueError("stream_id must be an integer")
        if self.seed < 0 or self.stream_id < 0:
            raise ValueError("seed and stream_id must be nonnegative")

    def stream(self, stream_id: int) -> "RngStream":
        """Sibling stream under the same seed."""
        return RngStream(self.seed, stream_id)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(ss))


def standard_normals(gen: np.random.Generator, size: int) -> np.ndarray:
    """Standard normal draws by inverse-CDF transform of uniforms.

    Deterministic given the generator state (no rejection step), so a stream
    of uniforms maps to the same normals on every platform.  The uniform grid
    point 0.0 is nudged to the smallest representable grid value.
    """
    u = gen.random(size)
    u[u == 0.0] = 2.0**-54
    return normal_quantile(u)


def worker_count(n_tasks: int) -> int:
    """Worker cap for task pools.

    RENYI_THREADS overrides when set (min 1); otherwise the CPU count.  Never
    more workers than tasks.  Results must still be merged by task index;
    the pool size only affects wall time, never output.
    """
    if n_tasks < 1:
        return 1
    env = os.environ.get("RENYI_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise ValueError(f"RENYI_THREADS must be an integer, got {env!r}") from None
        if cap < 1:
            raise ValueError(f"RENYI_THREADS must be >= 1, got {cap}")
    else:
        cap = os.cpu_count() or 1
    return min(cap, n_tasks)


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------


def _read_rows(path: str):
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    return rows


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def read_sample_csv(path: str) -> SeriesSample:
    """Load a sample from CSV: one row per time index, d numeric columns.

    A single leading header row is tolerated (detected by non-numeric cells);
    ragged rows are rejected.
    """
    rows = _read_rows(path)
    if not all(_is_number(tok) for tok in rows[0]):
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: header only, no data rows")
    width = len(rows[0])
    data = np.empty((len(rows), width), dtype=np.float64)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: ragged row {i + 1} (expected {width} columns, got {len(row)})")
        try:
            data[i] = [float(tok) for tok in row]
        except ValueError as exc:
            raise ValueError(f"{path}: non-numeric value in row {i + 1}: {exc}") from None
    return SeriesSample(data)


def write_sample_csv(sample: SeriesSample, path: str, header: list[str] | None = None) -> None:
    """Write a sample to CSV with full float64 round-trip precision."""
    if header is not None and len(header) != sample.d:
        raise ValueError("header width must match sample dimension")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow(header)
        for row in sample.points:
            writer.writerow([repr(float(v)) for v in row])


def read_symbol_csv(path: str) -> np.ndarray:
    """Load an integer symbol table from CSV; any non-integer token is rejected.

    Floating-point observations must be quantized by the caller before they
    enter the discrete path, since silent rounding would corrupt tie counts.
    """
    rows = _read_rows(path)
    if not all(_is_number(tok) for tok in rows[0]):
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: header only, no data rows")
    width = len(rows[0])
    data = np.empty((len(rows), width), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: ragged row {i + 1} (expected {width} columns, got {len(row)})")
        for j, tok in enumerate(row):
            try:
                data[i, j] = int(tok)
            except ValueError:
                raise ValueError(
                    f"{path}: row {i + 1} column {j + 1}: {tok!r} is not an integer symbol"
                ) from None
    return data


def write_symbol_csv(symbols: np.ndarray, path: str) -> None:
    arr = np.asarray(symbols)
    if arr.ndim == 1:
        arr = arr[:, None]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in arr:
            writer.writerow([int(v) for v in row])
