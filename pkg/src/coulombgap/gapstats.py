"""Nearest-neighbour gap statistics of planar point configurations.

Points are ordered by the total order "imaginary part first, then real part".
For a configuration ``z_1 <= ... <= z_n`` in that order, every index
``i < n`` emits one gap event ``(n^(3/4) * |z_i* - z_i|, z_i)`` where ``i*``
is the closest strict successor of ``i``.  The module also extracts the
``k`` smallest *pairwise* rescaled distances.

Both extractions run on a uniform-grid spatial hash that is exact (the ring
search always covers every cell that could beat the current best candidate,
and distance ties are broken by the smaller successor index).  Brute-force
O(n^2) counterparts are kept as independent oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GapEvent",
    "PointSample",
    "GridIndex",
    "precedes",
    "sort_by_precedence",
    "build_grid",
    "nearest_successor_gaps",
    "nearest_successor_gaps_bruteforce",
    "k_smallest_pair_gaps",
    "k_smallest_pair_gaps_bruteforce",
    "k_smallest_pair_events",
    "count_in_window",
]


def precedes(z1: complex, z2: complex) -> bool:
    """Strict total order: imaginary part first, real part second."""
    z1 = complex(z1)
    z2 = complex(z2)
    if z1.imag != z2.imag:
        return z1.imag < z2.imag
    return z1.real < z2.real


def sort_by_precedence(points) -> np.ndarray:
    """Sort a complex array ascending in the (Im, Re) lexicographic order."""
    z = np.asarray(points, dtype=np.complex128).ravel()
    return z[np.lexsort((z.real, z.imag))]


@dataclass(eq=False)
class PointSample:
    """A point configuration sorted by precedence, with sampling provenance."""

    points: np.ndarray
    spec: object = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.complex128).ravel()
        im, re = self.points.imag, self.points.real
        ordered = (im[1:] > im[:-1]) | ((im[1:] == im[:-1]) & (re[1:] >= re[:-1]))
        if not np.all(ordered):
            raise ValueError("points are not sorted by precedence; use PointSample.from_points")

    @classmethod
    def from_points(cls, points, spec=None) -> "PointSample":
        return cls(points=sort_by_precedence(points), spec=spec)

    @property
    def n(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class GapEvent:
    """One atom of the gap point process.

    ``rescaled_size`` is ``n^(3/4)`` times the planar distance from point
    ``i`` to its nearest strict successor ``i_star`` (0-based indices into
    the precedence-sorted configuration); ``location`` is point ``i``.
    """

    rescaled_size: float
    location: complex
    i: int
    i_star: int


@dataclass
class GridIndex:
    """Uniform bucket grid over the bounding box of a configuration."""

    cell_size: float
    x0: float
    y0: float
    nx: int
    ny: int
    buckets: dict = field(default_factory=dict)

    def cell_of(self, z: complex) -> tuple:
        ix = min(int((z.real - self.x0) / self.cell_size), self.nx - 1)
        iy = min(int((z.imag - self.y0) / self.cell_size), self.ny - 1)
        return (max(ix, 0), max(iy, 0))


def build_grid(points: np.ndarray) -> GridIndex:
    """Hash every point into a grid of roughly sqrt(n) x sqrt(n) cells."""
    n = points.size
    x0, x1 = points.real.min(), points.real.max()
    y0, y1 = points.imag.min(), points.imag.max()
    side = max(x1 - x0, y1 - y0)
    divisions = max(1, math.isqrt(max(n, 1)))
    cell = side / divisions if side > 0 else 1.0
    nx = max(1, min(divisions, int((x1 - x0) / cell) + 1))
    ny = max(1, min(divisions, int((y1 - y0) / cell) + 1))
    grid = GridIndex(cell_size=cell, x0=x0, y0=y0, nx=nx, ny=ny)
    for idx in range(n):
        key = grid.cell_of(points[idx])
        grid.buckets.setdefault(key, []).append(idx)
    return grid


def _ring_cells(grid: GridIndex, cx: int, cy: int, r: int):
    """Cells at Chebyshev distance exactly r from (cx, cy), clipped to the grid."""
    if r == 0:
        yield (cx, cy)
        return
    x_lo, x_hi = cx - r, cx + r
    y_lo, y_hi = cy - r, cy + r
    for ix in range(max(x_lo, 0), min(x_hi, grid.nx - 1) + 1):
        if 0 <= y_lo:
            yield (ix, y_lo)
        if y_hi <= grid.ny - 1:
            yield (ix, y_hi)
    for iy in range(max(y_lo + 1, 0), min(y_hi - 1, grid.ny - 1) + 1):
        if 0 <= x_lo:
            yield (x_lo, iy)
        if x_hi <= grid.nx - 1:
            yield (x_hi, iy)


def _nearest_successor(points: np.ndarray, grid: GridIndex, i: int) -> tuple:
    """Index and distance of the nearest strict successor of point i.

    Exact: ring r is scanned whenever cells in it could still contain a
    candidate at distance <= the incumbent (cells in ring r are at least
    (r-1) * cell_size away), so ties at the boundary are also found and
    resolved toward the smallest index.
    """
    z = points[i]
    cx, cy = grid.cell_of(z)
    best_d = math.inf
    best_j = -1
    max_ring = max(grid.nx, grid.ny)
    for r in range(max_ring + 1):
        if best_j >= 0 and (r - 1) * grid.cell_size > best_d:
            break
        for key in _ring_cells(grid, cx, cy, r):
            bucket = grid.buckets.get(key)
            if not bucket:
                continue
            for j in bucket:
                if j <= i:
                    continue
                d = abs(points[j] - z)
                if d < best_d or (d == best_d and j < best_j):
                    best_d = d
                    best_j = j
    return best_j, best_d


def nearest_successor_gaps(sample: PointSample) -> list:
    """All n-1 gap events of the configuration, via the grid accelerator."""
    points = sample.points
    n = points.size
    if n < 2:
        raise ValueError("need at least two points")
    grid = build_grid(points)
    scale = float(n) ** 0.75
    events = []
    for i in range(n - 1):
        j, d = _nearest_successor(points, grid, i)
        events.append(GapEvent(rescaled_size=scale * d, location=complex(points[i]), i=i, i_star=j))
    return events


def nearest_successor_gaps_bruteforce(sample: PointSample) -> list:
    """O(n^2) oracle for :func:`nearest_successor_gaps` (same tie rule)."""
    points = sample.points
    n = points.size
    if n < 2:
        raise ValueError("need at least two points")
    scale = float(n) ** 0.75
    events = []
    for i in range(n - 1):
        d = np.abs(points[i + 1:] - points[i])
        off = int(np.argmin(d))  # argmin returns the first minimum: smallest j on ties
        events.append(
            GapEvent(rescaled_size=scale * float(d[off]), location=complex(points[i]), i=i, i_star=i + 1 + off)
        )
    return events


def _pairs_within(points: np.ndarray, grid: GridIndex, radius: float) -> list:
    """Every unordered pair at distance <= radius, as (distance, i, j) with i < j."""
    reach = int(math.ceil(radius / grid.cell_size)) + 1
    out = []
    for i in range(points.size):
        z = points[i]
        cx, cy = grid.cell_of(z)
        for ix in range(max(cx - reach, 0), min(cx + reach, grid.nx - 1) + 1):
            for iy in range(max(cy - reach, 0), min(cy + reach, grid.ny - 1) + 1):
                bucket = grid.buckets.get((ix, iy))
                if not bucket:
                    continue
                for j in bucket:
                    if j <= i:
                        continue
                    d = abs(points[j] - z)
                    if d <= radius:
                        out.append((d, i, j))
    return out


def k_smallest_pair_events(sample: PointSample, k: int) -> list:
    """The k smallest rescaled pairwise gaps with their endpoint indices.

    Returns ``(rescaled_size, i, j)`` triples, ascending in size, where
    ``i < j`` index the precedence-sorted configuration.  Exact: the search
    radius doubles until the k-th smallest candidate lies within it, at which
    point no uncollected pair can be smaller.
    """
    points = sample.points
    n = points.size
    if n < 2:
        raise ValueError("need at least two points")
    max_pairs = n * (n - 1) // 2
    if not 1 <= k <= max_pairs:
        raise ValueError(f"k must lie in [1, {max_pairs}], got {k}")
    grid = build_grid(points)
    scale = float(n) ** 0.75
    span = math.hypot(grid.nx * grid.cell_size, grid.ny * grid.cell_size)
    radius = grid.cell_size
    while True:
        pairs = _pairs_within(points, grid, radius)
        if len(pairs) >= k:
            pairs.sort()
            if pairs[k - 1][0] <= radius:
                return [(scale * d, i, j) for d, i, j in pairs[:k]]
        if radius > span:
            pairs.sort()
            return [(scale * d, i, j) for d, i, j in pairs[:k]]
        radius *= 2.0


def k_smallest_pair_gaps(sample: PointSample, k: int) -> np.ndarray:
    """The k smallest values of the rescaled pairwise distances, ascending."""
    return np.array([size for size, _, _ in k_smallest_pair_events(sample, k)])


def k_smallest_pair_gaps_bruteforce(sample: PointSample, k: int) -> np.ndarray:
    """O(n^2) oracle for :func:`k_smallest_pair_gaps`."""
    points = sample.points
    n = points.size
    if n < 2:
        raise ValueError("need at least two points")
    max_pairs = n * (n - 1) // 2
    if not 1 <= k <= max_pairs:
        raise ValueError(f"k must lie in [1, {max_pairs}], got {k}")
    iu, ju = np.triu_indices(n, 1)
    d = np.abs(points[ju] - points[iu])
    smallest = np.sort(np.partition(d, k - 1)[:k])
    return float(n) ** 0.75 * smallest


def count_in_window(events, interval, region) -> int:
    """Number of gap events with size in ``(lo, hi]`` and location in ``region``.

    ``region`` is any object with a ``contains(z)`` predicate; ``hi`` may be
    infinite.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if lo < 0 or not lo < hi:
        raise ValueError("interval must satisfy 0 <= lo < hi")
    total = 0
    for event in events:
        if lo < event.rescaled_size <= hi and region.contains(event.location):
            total += 1
    return total
