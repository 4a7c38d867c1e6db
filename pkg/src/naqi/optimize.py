"""Deterministic derivative-free maximization over low-dimensional angle boxes.

The strategy is a dense coarse grid scan followed by Nelder-Mead refinement
started from the best grid cells.  Everything is deterministic for a fixed
configuration: no randomness enters the search, and ties between refined
candidates are broken by the lexicographically smallest point.

Angle coordinates may be periodic; candidate points are evaluated modulo the
period during refinement so the simplex can move freely across the seam.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True)
class OptimizerConfig:
    grid_points_per_dim: int = 24
    refine_iterations: int = 200
    refine_tolerance: float = 1e-9
    multistart_count: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.grid_points_per_dim < 1:
            raise ValueError("grid_points_per_dim must be positive")
        if self.refine_iterations < 1:
            raise ValueError("refine_iterations must be positive")
        if self.refine_tolerance <= 0:
            raise ValueError("refine_tolerance must be positive")
        if self.multistart_count < 1:
            raise ValueError("multistart_count must be positive")


DEFAULT_CONFIG = OptimizerConfig()


def _wrap_into_box(x: np.ndarray, box, periodic) -> np.ndarray:
    out = x.copy()
    for d, (lo, hi) in enumerate(box):
        if periodic[d]:
            out[d] = lo + (out[d] - lo) % (hi - lo)
        else:
            out[d] = min(max(out[d], lo), hi)
    return out


def _check_value(v: float, x: np.ndarray) -> float:
    v = float(v)
    if not np.isfinite(v):
        raise ValueError(f"objective returned non-finite value {v} at {x.tolist()}")
    return v


def _nelder_mead(f, x0, step, box, periodic, config):
    """Maximize f from x0 with initial simplex scale ``step`` per dimension.

    Returns (value, point, evaluations, converged).  Points are evaluated
    after wrapping/clipping into the box; simplex coordinates stay unwrapped.
    """
    dim = len(x0)
    alpha, gamma, rho_c, sigma = 1.0, 2.0, 0.5, 0.5
    evaluations = 0

    def eval_at(x):
        nonlocal evaluations
        evaluations += 1
        return _check_value(f(_wrap_into_box(x, box, periodic)), x)

    simplex = [np.array(x0, dtype=float)]
    for d in range(dim):
        v = simplex[0].copy()
        v[d] += step[d]
        simplex.append(v)
    values = [eval_at(v) for v in simplex]

    converged = False
    for _ in range(config.refine_iterations):
        order = sorted(range(dim + 1), key=lambda i: -values[i])
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]

        diameter = max(
            float(np.abs(simplex[0] - simplex[i]).max()) for i in range(1, dim + 1)
        )
        if diameter <= config.refine_tolerance:
            converged = True
            break

        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + alpha * (centroid - simplex[-1])
        f_reflected = eval_at(reflected)

        if f_reflected > values[0]:
            expanded = centroid + gamma * (reflected - centroid)
            f_expanded = eval_at(expanded)
            if f_expanded > f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
        elif f_reflected > values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
        else:
            contracted = centroid + rho_c * (simplex[-1] - centroid)
            f_contracted = eval_at(contracted)
            if f_contracted > values[-1]:
                simplex[-1], values[-1] = contracted, f_contracted
            else:
                for i in range(1, dim + 1):
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                    values[i] = eval_at(simplex[i])

    best = int(np.argmax(values))
    point = _wrap_into_box(simplex[best], box, periodic)
    return values[best], point, evaluations, converged


def _grid_axes(box, periodic, points: int):
    axes = []
    for (lo, hi), per in zip(box, periodic):
        if points == 1:
            axes.append(np.array([(lo + hi) / 2.0]))
        elif per:
            axes.append(np.linspace(lo, hi, points, endpoint=False))
        else:
            axes.append(np.linspace(lo, hi, points))
    return axes


def maximize(
    f: Callable[[np.ndarray], float],
    box: Sequence[tuple[float, float]],
    config: OptimizerConfig | None = None,
    *,
    periodic: Sequence[bool] | None = None,
    f_batch: Callable[[np.ndarray], np.ndarray] | None = None,
):
    """Grid scan plus multistart Nelder-Mead refinement inside ``box``.

    ``f_batch``, when given, evaluates an (N, dim) array of points in one call
    and is used for the grid stage only.  It may be the exact objective or a
    pointwise lower bound of it: the grid stage only selects refinement seeds,
    and the reported maximum is never below the best exact value seen.

    Returns (value, argmax array, diagnostics dict).
    """
    config = config or DEFAULT_CONFIG
    box = [(float(lo), float(hi)) for lo, hi in box]
    if not box or len(box) > 4:
        raise ValueError("box dimension must be between 1 and 4")
    if any(hi <= lo for lo, hi in box):
        raise ValueError("box intervals must have positive length")
    periodic = list(periodic) if periodic is not None else [False] * len(box)
    if len(periodic) != len(box):
        raise ValueError("periodic flags must match the box dimension")

    axes = _grid_axes(box, periodic, config.grid_points_per_dim)
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)

    if f_batch is not None:
        grid_values = np.asarray(f_batch(points), dtype=float)
        if grid_values.shape != (points.shape[0],):
            raise ValueError("f_batch must return one value per point")
        if not np.all(np.isfinite(grid_values)):
            bad = points[int(np.argmax(~np.isfinite(grid_values)))]
            raise ValueError(f"objective returned non-finite value at {bad.tolist()}")
    else:
        grid_values = np.array([_check_value(f(p), p) for p in points])

    n_starts = min(config.multistart_count, points.shape[0])
    seed_idx = np.argsort(-grid_values, kind="stable")[:n_starts]

    steps = np.array(
        [(hi - lo) / (2.0 * config.grid_points_per_dim) for lo, hi in box]
    )
    candidates = []
    evaluations = int(points.shape[0])
    any_converged = False
    for idx in seed_idx:
        value, point, used, converged = _nelder_mead(
            f, points[idx], steps, box, periodic, config
        )
        evaluations += used
        any_converged = any_converged or converged
        candidates.append((value, tuple(point), converged))

    # the exact value at the best seed guards against a surrogate f_batch
    best_seed_point = points[seed_idx[0]]
    candidates.append(
        (_check_value(f(best_seed_point), best_seed_point), tuple(best_seed_point), True)
    )

    candidates.sort(key=lambda c: (-c[0], c[1]))
    best_value, best_point, best_converged = candidates[0]
    runner_up = candidates[1][0] if len(candidates) > 1 else best_value
    diagnostics = {
        "starts": int(n_starts),
        "grid_points": int(points.shape[0]),
        "evaluations": evaluations,
        "best_gap": float(best_value - runner_up),
        "converged": bool(best_converged),
        "any_start_converged": bool(any_converged),
    }
    return float(best_value), np.array(best_point), diagnostics


def bisect_threshold(
    g: Callable[[float], float], lo: float, hi: float, tol: float = 1e-5
) -> float:
    """Locate the sign change of a monotone function by bisection.

    ``g(lo)`` and ``g(hi)`` must have opposite signs; the caller asserts
    monotonicity.  Returns the bracketing midpoint once the bracket width
    falls below ``tol``.
    """
    lo, hi = float(lo), float(hi)
    if not hi > lo:
        raise ValueError("bisect_threshold needs lo < hi")
    g_lo = float(g(lo))
    g_hi = float(g(hi))
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo > 0) == (g_hi > 0):
        raise ValueError(
            f"no sign change on [{lo}, {hi}]: g(lo)={g_lo:.6g}, g(hi)={g_hi:.6g}"
        )
    while (hi - lo) / 2.0 > tol:
        mid = 0.5 * (lo + hi)
        g_mid = float(g(mid))
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
