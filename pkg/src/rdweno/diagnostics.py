"""Error norms, observed convergence orders, and front tracking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .grid import Grid, StateField


class NoCrossingError(ValueError):
    pass


class InsufficientSamplesError(ValueError):
    pass


@dataclass(frozen=True)
class ErrorNorms:
    l1: float
    l2: float
    linf: float


def error_norms(numeric, exact, dx: float | None = None, convention: str = "mean") -> list[ErrorNorms]:
    """Per-species discrete L1, L2 and L-infinity norms of ``numeric - exact``.

    ``convention="mean"`` averages over all grid points (boundary points included);
    ``"integral"`` weights the sums by ``dx`` instead.
    """
    num = numeric.values if isinstance(numeric, StateField) else np.atleast_2d(np.asarray(numeric, dtype=float))
    ex = exact.values if isinstance(exact, StateField) else np.atleast_2d(np.asarray(exact, dtype=float))
    if num.shape != ex.shape:
        raise ValueError(f"shape mismatch: {num.shape} vs {ex.shape}")
    if convention == "mean":
        weight = 1.0 / num.shape[1]
    elif convention == "integral":
        if dx is None:
            raise ValueError("integral convention needs dx")
        weight = float(dx)
    else:
        raise ValueError(f"unknown norm convention {convention!r}")
    out = []
    for e in num - ex:
        a = np.abs(e)
        out.append(ErrorNorms(float(weight * a.sum()), float(math.sqrt(weight * np.dot(e, e))), float(a.max())))
    return out


def convergence_order(errors: Sequence[tuple[int, float]]) -> list[float]:
    """Observed order between consecutive ``(N, error)`` rows."""
    rows = [(int(n), float(e)) for n, e in errors]
    for n, e in rows:
        if not e > 0:
            raise ValueError(f"order undefined for non-positive error {e} at N={n}")
    orders = []
    for (n0, e0), (n1, e1) in zip(rows, rows[1:]):
        if n1 <= n0:
            raise ValueError("N must be strictly increasing")
        orders.append(math.log(e0 / e1) / math.log(n1 / n0))
    return orders


def front_position(field_, grid: Grid, level: float = 0.5, species: int = 0,
                   previous: float | None = None) -> float:
    """Linear-interpolated crossing of ``level``.

    The first crossing from the left is used unless ``previous`` is given, in which
    case the bracketing interval closest to it wins.
    """
    u = field_.values[species] if isinstance(field_, StateField) else np.asarray(field_, dtype=float)
    if u.ndim == 2:
        u = u[species]
    d = u - level
    idx = np.flatnonzero(d[:-1] * d[1:] <= 0.0)
    # drop flat segments lying on the level with no actual bracket direction
    idx = idx[(d[idx] != 0.0) | (d[idx + 1] != 0.0)]
    if idx.size == 0:
        raise NoCrossingError(f"level {level} is never crossed by species {species}")
    x = grid.a + np.arange(u.size) * grid.dx
    if previous is None:
        i = idx[0]
    else:
        i = idx[np.argmin(np.abs(x[idx] + 0.5 * grid.dx - previous))]
    du = u[i + 1] - u[i]
    frac = 0.0 if du == 0.0 else (level - u[i]) / du
    return float(x[i] + grid.dx * frac)


@dataclass
class FrontTrack:
    level: float = 0.5
    times: list[float] = field(default_factory=list)
    positions: list[float] = field(default_factory=list)

    def append(self, t: float, x: float) -> None:
        if self.times and not t > self.times[-1]:
            raise ValueError("front samples must be strictly increasing in time")
        self.times.append(float(t))
        self.positions.append(float(x))

    def __len__(self) -> int:
        return len(self.times)


def _slope(t: np.ndarray, x: np.ndarray) -> float:
    tc = t - t.mean()
    return float(np.dot(tc, x - x.mean()) / np.dot(tc, tc))


def default_window(track: FrontTrack, fraction: float = 0.25) -> int:
    """Number of trailing intervals covering the last ``fraction`` of elapsed time."""
    t = np.asarray(track.times)
    if t.size < 2:
        raise InsufficientSamplesError("need at least two front samples")
    start = t[-1] - fraction * (t[-1] - t[0])
    return max(1, int(t.size - 1 - np.searchsorted(t, start, side="left")))


def front_speed(track: FrontTrack, window: int | None = None) -> float:
    """Least-squares slope of position against time over the last ``window + 1`` samples."""
    if window is None:
        window = default_window(track)
    if window < 1 or len(track) < window + 1:
        raise InsufficientSamplesError(f"need {window + 1} samples, have {len(track)}")
    t = np.asarray(track.times[-(window + 1):])
    x = np.asarray(track.positions[-(window + 1):])
    return _slope(t, x)


def speed_series(track: FrontTrack, window: int) -> tuple[np.ndarray, np.ndarray]:
    """Sliding trailing-window speed estimate at every sample from ``window`` on."""
    t = np.asarray(track.times)
    x = np.asarray(track.positions)
    if t.size < window + 1:
        raise InsufficientSamplesError(f"need {window + 1} samples, have {t.size}")
    speeds = np.array([_slope(t[k - window:k + 1], x[k - window:k + 1]) for k in range(window, t.size)])
    return t[window:], speeds
