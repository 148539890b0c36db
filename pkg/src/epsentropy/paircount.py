"""Exact epsilon-close pair and lagged-triple counting.

Counting is exact and boundary-inclusive: a pair at distance exactly eps
counts.  All comparisons run on squared distances against eps^2, never on
square roots.  Two interchangeable backends produce identical counts:

* a uniform grid with cell side eps, scanning same-and-adjacent cells only,
* a blockwise O(n^2) scan.

The grid is used when it is safe and profitable (low dimension, bounded
bounding-box cell count); otherwise the scan runs.  Counts never differ
between backends, only speed does.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import SeriesSample

__all__ = [
    "PairCountResult",
    "NeighborCounts",
    "count_close_pairs",
    "close_pairs",
    "neighbor_counts",
    "count_uh_triples",
    "min_interpoint_distance",
]

GRID_DIM_LIMIT = 12
GRID_CELL_BUDGET_FACTOR = 16
_BRUTE_BLOCK = 512


@dataclass(frozen=True)
class PairCountResult:
    """Outcome of a pair count at radius eps over n points.

    min_distance is the exact minimum inter-point distance of the whole
    sample (not only of the pairs within eps), so n_pairs_close >= 1 implies
    min_distance <= eps and n_pairs_close == 0 implies min_distance > eps.
    """

    n_pairs_close: int
    min_distance: float
    n: int
    eps: float


@dataclass(frozen=True)
class NeighborCounts:
    """Per-index neighbor counts at radius eps0.

    counts[i] = #{j != i : j not excluded, d(X_i, X_j) <= eps0}.  The sum of
    counts equals twice the pair count when nothing is excluded.
    """

    counts: np.ndarray
    eps0: float
    excluded: tuple[int, ...]


def _grid_is_profitable(pts: np.ndarray, eps: float) -> bool:
    n, d = pts.shape
    if n < 2 or d > GRID_DIM_LIMIT:
        return False
    # neighbor enumeration is 3^d per occupied cell; past ~n offsets the
    # O(n^2) scan wins regardless of occupancy
    if 3**d > max(n, 729):
        return False
    spans = pts.max(axis=0) - pts.min(axis=0)
    cells = 1.0
    for s in spans:
        cells *= math.floor(s / eps) + 1.0
        if cells > GRID_CELL_BUDGET_FACTOR * n:
            return False
    return True


def _cell_table(pts: np.ndarray, side: float) -> dict[tuple[int, ...], np.ndarray]:
    # anchor the grid at the data minimum: cell indices then span only the
    # bounding box, so far-from-origin coordinates cannot overflow the keys
    keys = np.floor((pts - pts.min(axis=0)) / side).astype(np.int64)
    order = np.lexsort(keys.T[::-1])
    sorted_keys = keys[order]
    breaks = np.nonzero(np.any(sorted_keys[1:] != sorted_keys[:-1], axis=1))[0] + 1
    starts = np.concatenate(([0], breaks))
    ends = np.concatenate((breaks, [len(order)]))
    table: dict[tuple[int, ...], np.ndarray] = {}
    for s, e in zip(starts, ends):
        table[tuple(sorted_keys[s])] = order[s:e]
    return table


def _half_offsets(d: int) -> list[tuple[int, ...]]:
    # lexicographically positive half of {-1,0,1}^d, so each unordered cell
    # pair is visited once
    out = []
    for off in itertools.product((-1, 0, 1), repeat=d):
        if off > (0,) * d:
            out.append(off)
    return out


def _grid_candidate_pairs(
    pts: np.ndarray, side: float, table: dict | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j), i < j, within same or adjacent cells of the grid.

    Superset of all pairs at distance <= side; distances still need checking.
    Any grid origin works: per-coordinate gaps of close pairs are <= side, so
    their cell indices differ by at most one in every coordinate.
    """
    if table is None:
        table = _cell_table(pts, side)
    offsets = _half_offsets(pts.shape[1])
    ii: list[np.ndarray] = []
    jj: list[np.ndarray] = []
    for key, idx in table.items():
        k = len(idx)
        if k > 1:
            a, b = np.triu_indices(k, 1)
            ii.append(idx[a])
            jj.append(idx[b])
        for off in offsets:
            other = table.get(tuple(key[t] + off[t] for t in range(len(off))))
            if other is None:
                continue
            ii.append(np.repeat(idx, len(other)))
            jj.append(np.tile(other, k))
    if not ii:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    i_arr = np.concatenate(ii)
    j_arr = np.concatenate(jj)
    swap = i_arr > j_arr
    i_arr[swap], j_arr[swap] = j_arr[swap], i_arr[swap].copy()
    return i_arr, j_arr


def _sq_dists(pts: np.ndarray, i_arr: np.ndarray, j_arr: np.ndarray) -> np.ndarray:
    diff = pts[i_arr] - pts[j_arr]
    return np.einsum("ij,ij->i", diff, diff)


def _brute_scan(pts: np.ndarray, eps_sq: float, collect: bool):
    """Blockwise full scan: (count, min_sq, pairs or None)."""
    n = pts.shape[0]
    count = 0
    min_sq = math.inf
    pair_i: list[np.ndarray] = []
    pair_j: list[np.ndarray] = []
    for start in range(0, n - 1, _BRUTE_BLOCK):
        stop = min(start + _BRUTE_BLOCK, n - 1)
        block = pts[start:stop]  # rows i, paired against all j > i
        diff = block[:, None, :] - pts[None, start + 1 :, :]
        sq = np.einsum("ijk,ijk->ij", diff, diff)
        rows = np.arange(start, stop)
        cols = np.arange(start + 1, n)
        valid = cols[None, :] > rows[:, None]
        sq_valid = sq[valid]
        if sq_valid.size:
            min_sq = min(min_sq, float(sq_valid.min()))
        hit = valid & (sq <= eps_sq)
        count += int(hit.sum())
        if collect and hit.any():
            r, c = np.nonzero(hit)
            pair_i.append(rows[r])
            pair_j.append(cols[c])
    if collect:
        if pair_i:
            return count, min_sq, (np.concatenate(pair_i), np.concatenate(pair_j))
        empty = np.empty(0, dtype=np.int64)
        return count, min_sq, (empty, empty)
    return count, min_sq, None


def _min_sq_distance(pts: np.ndarray) -> float:
    """Exact squared minimum inter-point distance.

    Consecutive rows give a cheap upper bound u (they are actual pairs); the
    minimal pair then lies in same-or-adjacent cells of a grid with side u,
    so one candidate sweep at that side is exact.
    """
    n, d = pts.shape
    if n < 2:
        raise ValueError("minimum distance needs at least two points")
    if n <= 256 or d > GRID_DIM_LIMIT or 3**d > max(n, 729):
        _, min_sq, _ = _brute_scan(pts, -1.0, False)
        return min_sq
    cons = pts[1:] - pts[:-1]
    u_sq = float(np.einsum("ij,ij->i", cons, cons).min())
    if u_sq == 0.0:
        return 0.0
    side = math.sqrt(u_sq)
    # bail out to the scan when the bound is so small that cell indices lose
    # exactness (span/side beyond 2^52) or cells are overfull (clustered data
    # with far-apart consecutive rows would make the sweep quadratic anyway)
    spans = pts.max(axis=0) - pts.min(axis=0)
    if float(spans.max()) / side > 2.0**52:
        _, min_sq, _ = _brute_scan(pts, -1.0, False)
        return min_sq
    table = _cell_table(pts, side)
    if max(len(idx) for idx in table.values()) * n > 10_000_000:
        _, min_sq, _ = _brute_scan(pts, -1.0, False)
        return min_sq
    i_arr, j_arr = _grid_candidate_pairs(pts, side, table)
    if i_arr.size == 0:
        return u_sq
    return min(u_sq, float(_sq_dists(pts, i_arr, j_arr).min()))


def min_interpoint_distance(sample: SeriesSample) -> float:
    """Exact minimum pairwise distance Y_n = min_{i<j} d(X_i, X_j)."""
    return math.sqrt(_min_sq_distance(sample.points))


def count_close_pairs(sample: SeriesSample, eps: float) -> PairCountResult:
    """Count pairs i < j with d(X_i, X_j) <= eps; also report exact Y_n."""
    eps = float(eps)
    if not (eps > 0.0) or not math.isfinite(eps):
        raise ValueError(f"eps must be positive and finite, got {eps}")
    pts = sample.points
    n = sample.n
    if n < 2:
        raise ValueError("pair counting needs at least two observations")
    eps_sq = eps * eps
    if _grid_is_profitable(pts, eps):
        i_arr, j_arr = _grid_candidate_pairs(pts, eps)
        if i_arr.size:
            sq = _sq_dists(pts, i_arr, j_arr)
            count = int((sq <= eps_sq).sum())
            cand_min = float(sq.min())
        else:
            count = 0
            cand_min = math.inf
        # candidate minimum is the global minimum only if it is <= eps;
        # otherwise the closest pair may sit in non-adjacent cells
        min_sq = cand_min if cand_min <= eps_sq else _min_sq_distance(pts)
    else:
        count, min_sq, _ = _brute_scan(pts, eps_sq, False)
    return PairCountResult(n_pairs_close=count, min_distance=math.sqrt(min_sq), n=n, eps=eps)


def close_pairs(sample: SeriesSample, eps: float) -> tuple[np.ndarray, np.ndarray]:
    """All pairs (i, j), i < j, with d(X_i, X_j) <= eps, as index arrays."""
    eps = float(eps)
    if not (eps > 0.0) or not math.isfinite(eps):
        raise ValueError(f"eps must be positive and finite, got {eps}")
    pts = sample.points
    if sample.n < 2:
        raise ValueError("pair counting needs at least two observations")
    eps_sq = eps * eps
    if _grid_is_profitable(pts, eps):
        i_arr, j_arr = _grid_candidate_pairs(pts, eps)
        if i_arr.size == 0:
            return i_arr, j_arr
        keep = _sq_dists(pts, i_arr, j_arr) <= eps_sq
        return i_arr[keep], j_arr[keep]
    _, _, pairs = _brute_scan(pts, eps_sq, True)
    return pairs


def neighbor_counts(
    sample: SeriesSample, eps0: float, excluded: tuple[int, ...] = ()
) -> NeighborCounts:
    """Per-index counts of eps0-neighbors, ignoring any excluded indices.

    counts[i] stays defined for excluded i as well: exclusion removes
    indices from the *neighbor* role only.
    """
    ex = tuple(int(e) for e in excluded)
    for e in ex:
        if not 0 <= e < sample.n:
            raise ValueError(f"excluded index {e} outside [0, {sample.n})")
    if len(set(ex)) != len(ex):
        raise ValueError("excluded indices must be distinct")
    i_arr, j_arr = close_pairs(sample, eps0)
    counts = np.zeros(sample.n, dtype=np.int64)
    if i_arr.size:
        if ex:
            ex_arr = np.asarray(ex, dtype=np.int64)
            np.add.at(counts, i_arr[~np.isin(j_arr, ex_arr)], 1)
            np.add.at(counts, j_arr[~np.isin(i_arr, ex_arr)], 1)
        else:
            np.add.at(counts, i_arr, 1)
            np.add.at(counts, j_arr, 1)
    return NeighborCounts(counts=counts, eps0=float(eps0), excluded=ex)


def _adjacency_masks(n: int, i_arr: np.ndarray, j_arr: np.ndarray) -> list[int]:
    """Neighbor sets as per-index bitmasks (bit j of masks[i] == j in N(i))."""
    masks = [0] * n
    for a, b in zip(i_arr.tolist(), j_arr.tolist()):
        masks[a] |= 1 << b
        masks[b] |= 1 << a
    return masks


def _uh_count_from_masks(masks: list[int], n: int, h: int) -> int:
    """Lagged coincidence-triple count from adjacency masks; exact integers.

    Counts triples (i, j, k) with 0 <= i <= n-h-2, j, k not in {i, i+h},
    j != k, d(X_i, X_j) <= eps0 and d(X_{i+h}, X_k) <= eps0, factorized as
    sum_i [a_i * b_i - overlap_i].
    """
    total = 0
    if h == 0:
        for i in range(n - 1):
            c = masks[i].bit_count()
            total += c * (c - 1)
        return total
    for i in range(n - h - 1):
        m_i = masks[i]
        m_j = masks[i + h]
        ex = (m_i >> (i + h)) & 1
        a = m_i.bit_count() - ex
        b = m_j.bit_count() - ex
        total += a * b - (m_i & m_j).bit_count()
    return total


def count_uh_triples(sample: SeriesSample, h: int, eps0: float) -> int:
    """Count lagged triples (i, j, k) hitting both eps0-balls.

    A triple counts when d(X_i, X_j) <= eps0 and d(X_{i+h}, X_k) <= eps0 with
    0 <= i <= n-h-2 and j, k distinct indices outside {i, i+h}.
    """
    h = int(h)
    if h < 0:
        raise ValueError(f"lag must be nonnegative, got {h}")
    if sample.n < h + 4:
        raise ValueError(f"need n >= h + 4 (n={sample.n}, h={h})")
    i_arr, j_arr = close_pairs(sample, eps0)
    masks = _adjacency_masks(sample.n, i_arr, j_arr)
    return _uh_count_from_masks(masks, sample.n, h)
