"""Nonlocal advantage of quantum imaginarity (NAQI) for two-qubit states.

One party measures one of three projective observables on qubit A and
announces the outcome; the other party evaluates the imaginarity of the
conditional state of qubit B, each measurement paired with one basis of a
MUB triple.  The figure of merit is the probability-weighted sum of those
conditional imaginarities, maximized over the measurements and the triple.
A state has NAQI when the maximum strictly exceeds the single-qubit
complementarity bound, which certifies steerability from A to B.

Two evaluation routes exist and are tested against each other:

* ``objective`` works directly on density matrices through conditional
  ensembles; it is the reference route.
* The optimizer works on the two-qubit Pauli form (r, s, T): a measurement
  along axis a yields outcome probabilities (1 +- r.a)/2 and conditional
  Bloch vectors (s +- T^T a)/(1 +- r.a), and a basis enters the measures
  only through its imaginarity axis.  This route is orders of magnitude
  faster and exactly equivalent.

The maximized sum separates over the three measurements, so for every
candidate triple the three inner maximizations run independently; a flat
search over all eight angles at once is never needed (a coarse flat-grid
oracle in the test suite guards this decomposition).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import frames, qmat
from .complementarity import bound_constant
from .imaginarity import Measure, imag_measure
from .optimize import DEFAULT_CONFIG, OptimizerConfig, maximize

VERDICT_MARGIN = 1e-7
ZERO_PROBABILITY = 1e-12

_TWO_PI = 2.0 * math.pi
_SCREEN_CHUNK = 2048
_INNER_STARTS = 3


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Bob's post-measurement ensemble: (probability, qubit state) pairs."""

    outcomes: tuple[tuple[float, np.ndarray], ...]

    def average_state(self) -> np.ndarray:
        out = np.zeros((2, 2), dtype=complex)
        for p, state in self.outcomes:
            out += p * state
        return out


@dataclass
class NaqiResult:
    measure: Measure
    value: float
    witness: float
    verdict: bool
    steerable_implied: bool
    optimal_mub_angles: tuple[float, float, float]  # (theta1, phi1, chi)
    optimal_measurement_angles: tuple[tuple[float, float], ...]
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "value": self.value,
            "witness": self.witness,
            "verdict": self.verdict,
            "steerable_implied": self.steerable_implied,
            "optimal_mub_angles": list(self.optimal_mub_angles),
            "optimal_measurement_angles": [list(a) for a in self.optimal_measurement_angles],
            "diagnostics": self.diagnostics,
        }


def _check_two_qubit(rho_ab) -> np.ndarray:
    rho = np.asarray(rho_ab, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("expected a 4x4 two-qubit density matrix")
    diag = qmat.validate_state(rho)
    if not diag.ok:
        raise ValueError(
            f"invalid two-qubit state: hermiticity defect {diag.hermiticity_defect:.3e}, "
            f"trace defect {diag.trace_defect:.3e}, min eigenvalue {diag.min_eigenvalue:.3e}"
        )
    return rho


def conditional_ensemble(rho_ab, projectors: Sequence[np.ndarray]) -> ConditionalEnsemble:
    """Bob's ensemble induced by one of Alice's projective measurements.

    Outcomes with probability below 1e-12 contribute nothing to averages and
    carry the maximally mixed state as a placeholder.
    """
    rho = _check_two_qubit(rho_ab)
    outcomes = []
    for pi in projectors:
        big = np.kron(np.asarray(pi, dtype=complex), qmat.IDENTITY_2)
        p = float(np.trace(big @ rho).real)
        p = min(max(p, 0.0), 1.0)
        if p < ZERO_PROBABILITY:
            outcomes.append((0.0, qmat.IDENTITY_2 / 2.0))
            continue
        sub = qmat.partial_trace(big @ rho @ big, keep=[1], dims=[2, 2])
        outcomes.append((p, sub / p))
    return ConditionalEnsemble(outcomes=tuple(outcomes))


def objective(
    rho_ab,
    mub: frames.MubTriple,
    meas: frames.MeasurementSet,
    measure: Measure | str,
) -> float:
    """Probability-weighted conditional imaginarity, summed over the triple.

    This is the reference evaluation route, straight from density matrices.
    """
    measure = Measure(measure)
    total = 0.0
    for basis, projectors in zip(mub.bases, meas.projectors):
        for p, state in conditional_ensemble(rho_ab, projectors).outcomes:
            if p >= ZERO_PROBABILITY:
                total += p * imag_measure(measure, state, basis)
    return total


# ---------------------------------------------------------------------------
# fast Bloch-form route
# ---------------------------------------------------------------------------


def _entropy_arg(x):
    """Vector-safe H((1 + x) / 2) for x in [0, 1]."""
    x = np.clip(x, 0.0, 1.0)
    a = (1.0 + x) / 2.0
    b = 1.0 - a
    # b * log2(max(b, tiny)) is exactly 0 at b == 0, matching 0 log 0 := 0
    return -(a * np.log2(a) + b * np.log2(np.maximum(b, 1e-300)))


def _h_half(x: float) -> float:
    """Scalar H((1 + x) / 2) for x in [0, 1]."""
    x = min(max(x, 0.0), 1.0)
    a = (1.0 + x) / 2.0
    b = 1.0 - a
    if b <= 0.0:
        return 0.0
    return -(a * math.log2(a) + b * math.log2(b))


def _canonical_sphere_angles(theta: float, phi: float) -> tuple[float, float]:
    theta = theta % _TWO_PI
    if theta > math.pi:
        theta = _TWO_PI - theta
        phi = phi + math.pi
    return theta, phi % _TWO_PI


def _axis_to_angles(a: np.ndarray) -> tuple[float, float]:
    theta = math.acos(min(max(float(a[2]), -1.0), 1.0))
    phi = math.atan2(float(a[1]), float(a[0])) % _TWO_PI
    return theta, phi


def _l1_inner_max(s, T, m) -> tuple[float, np.ndarray]:
    """Exact inner maximum of one l1 term over the measurement axis.

    The term equals max(|m.s|, |(Tm).a|), so the best axis aligns with Tm and
    the maximum is max(|m.s|, |Tm|).
    """
    tm = T @ m
    norm = float(np.linalg.norm(tm))
    axis = tm / norm if norm > 1e-15 else np.array([0.0, 0.0, 1.0])
    return max(abs(float(m @ s)), norm), axis


def _sphere_grid(points_per_dim: int) -> np.ndarray:
    thetas = np.linspace(0.0, math.pi, points_per_dim)
    phis = np.linspace(0.0, _TWO_PI, points_per_dim, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)


class _RelWorkspace:
    """Per-state scratch data for fast relative-entropy term evaluation.

    Everything that depends on the state and the measurement-axis grid alone
    (not on the imaginarity axis m) is precomputed once: grid probabilities,
    the unnormalized conditional Bloch vectors u = p * b, conditional Bloch
    lengths and their entropy terms.
    """

    def __init__(self, r: np.ndarray, s: np.ndarray, T: np.ndarray, grid_points: int):
        self.r, self.s, self.T = r, s, T
        self.axes = _sphere_grid(grid_points)
        self._grid_points = grid_points
        v = self.axes @ T  # rows are T^T a
        ra = self.axes @ r
        self.parts = []
        for sign in (1.0, -1.0):
            p = 0.5 * (1.0 + sign * ra)
            u = 0.5 * (s[None, :] + sign * v)
            safe_p = np.maximum(p, ZERO_PROBABILITY)
            w = np.minimum(np.linalg.norm(u, axis=1) / safe_p, 1.0)
            active = p >= ZERO_PROBABILITY
            self.parts.append((p, u, safe_p, _entropy_arg(w), w, active))
        # flat scalar copies for the refinement loop
        self._rx, self._ry, self._rz = (float(x) for x in r)
        self._sx, self._sy, self._sz = (float(x) for x in s)
        (self._t00, self._t01, self._t02), (self._t10, self._t11, self._t12), (
            self._t20,
            self._t21,
            self._t22,
        ) = ((float(x) for x in row) for row in T)

    def term_grid(self, m: np.ndarray) -> np.ndarray:
        """Term values over the whole measurement-axis grid for one axis m."""
        total = np.zeros(self.axes.shape[0])
        for p, u, safe_p, hw, w, active in self.parts:
            y = (u @ m) / safe_p
            x = np.sqrt(np.clip(w * w - y * y, 0.0, None))
            total += np.where(active, p * (_entropy_arg(x) - hw), 0.0)
        return total

    def term_grid_max_batch(self, axes_m: np.ndarray) -> np.ndarray:
        """Grid-only inner maxima for a batch of imaginarity axes (K, 3)."""
        total = np.zeros((axes_m.shape[0], self.axes.shape[0]))
        for p, u, safe_p, hw, w, active in self.parts:
            y = (axes_m @ u.T) / safe_p[None, :]
            x = np.sqrt(np.clip(w[None, :] ** 2 - y * y, 0.0, None))
            contrib = p[None, :] * (_entropy_arg(x) - hw[None, :])
            total += np.where(active[None, :], contrib, 0.0)
        return total.max(axis=1)

    def term_scalar(self, mx: float, my: float, mz: float, theta: float, phi: float) -> float:
        st, ct = math.sin(theta), math.cos(theta)
        cp, sp = math.cos(phi), math.sin(phi)
        ax, ay, az = st * cp, st * sp, ct
        vx = self._t00 * ax + self._t10 * ay + self._t20 * az
        vy = self._t01 * ax + self._t11 * ay + self._t21 * az
        vz = self._t02 * ax + self._t12 * ay + self._t22 * az
        ra = self._rx * ax + self._ry * ay + self._rz * az
        log2, sqrt = math.log2, math.sqrt
        total = 0.0
        for sign in (1.0, -1.0):
            p = 0.5 * (1.0 + sign * ra)
            if p < ZERO_PROBABILITY:
                continue
            ux = 0.5 * (self._sx + sign * vx)
            uy = 0.5 * (self._sy + sign * vy)
            uz = 0.5 * (self._sz + sign * vz)
            w = sqrt(ux * ux + uy * uy + uz * uz) / p
            if w > 1.0:
                w = 1.0
            y = (mx * ux + my * uy + mz * uz) / p
            x2 = w * w - y * y
            x = sqrt(x2) if x2 > 0.0 else 0.0
            # inlined H((1 + x)/2) - H((1 + w)/2)
            a = 0.5 * (1.0 + x)
            b = 1.0 - a
            hx = -(a * log2(a) + b * log2(b)) if b > 0.0 else 0.0
            a = 0.5 * (1.0 + w)
            b = 1.0 - a
            hw = -(a * log2(a) + b * log2(b)) if b > 0.0 else 0.0
            total += p * (hx - hw)
        return total

    def _grid_angle(self, index: int) -> tuple[float, float]:
        g = self._grid_points
        theta = math.pi * (index // g) / (g - 1) if g > 1 else 0.0
        phi = _TWO_PI * (index % g) / g
        return theta, phi

    def inner_max(self, m: np.ndarray, config: OptimizerConfig) -> tuple[float, tuple[float, float]]:
        """Maximize one relative-entropy term over its measurement angles."""
        mx, my, mz = float(m[0]), float(m[1]), float(m[2])
        grid_values = self.term_grid(m)
        order = np.argsort(-grid_values, kind="stable")[:_INNER_STARTS]
        step = math.pi / (2.0 * self._grid_points)
        # the term value is quadratic around an interior maximum, so a looser
        # simplex diameter than the outer one loses nothing measurable
        tol = max(config.refine_tolerance, 1e-7)

        def f(theta: float, phi: float) -> float:
            return self.term_scalar(mx, my, mz, theta, phi)

        best_value = float(grid_values[order[0]])
        best_angles = self._grid_angle(int(order[0]))
        for idx in order:
            t0, p0 = self._grid_angle(int(idx))
            value, angles = _nm_sphere(f, t0, p0, step, tol, config.refine_iterations)
            if value > best_value:
                best_value, best_angles = value, angles
        return best_value, _canonical_sphere_angles(*best_angles)


def _nm_sphere(f, theta0, phi0, step, tol, max_iterations):
    """Plain-float Nelder-Mead on sphere angles (no box: the sphere is closed).

    Angle coordinates run unconstrained; trigonometry makes any real pair a
    valid axis.  Returns (value, (theta, phi)).
    """
    xs = [theta0, theta0 + step, theta0]
    ys = [phi0, phi0, phi0 + step]
    vs = [f(xs[i], ys[i]) for i in range(3)]
    for _ in range(max_iterations):
        # order best -> worst
        if vs[0] < vs[1]:
            vs[0], vs[1], xs[0], xs[1], ys[0], ys[1] = vs[1], vs[0], xs[1], xs[0], ys[1], ys[0]
        if vs[1] < vs[2]:
            vs[1], vs[2], xs[1], xs[2], ys[1], ys[2] = vs[2], vs[1], xs[2], xs[1], ys[2], ys[1]
        if vs[0] < vs[1]:
            vs[0], vs[1], xs[0], xs[1], ys[0], ys[1] = vs[1], vs[0], xs[1], xs[0], ys[1], ys[0]
        diam = max(abs(xs[0] - xs[1]), abs(xs[0] - xs[2]), abs(ys[0] - ys[1]), abs(ys[0] - ys[2]))
        if diam <= tol:
            break
        cx, cy = 0.5 * (xs[0] + xs[1]), 0.5 * (ys[0] + ys[1])
        rx, ry = cx + (cx - xs[2]), cy + (cy - ys[2])
        fr = f(rx, ry)
        if fr > vs[0]:
            ex, ey = cx + 2.0 * (rx - cx), cy + 2.0 * (ry - cy)
            fe = f(ex, ey)
            if fe > fr:
                xs[2], ys[2], vs[2] = ex, ey, fe
            else:
                xs[2], ys[2], vs[2] = rx, ry, fr
        elif fr > vs[1]:
            xs[2], ys[2], vs[2] = rx, ry, fr
        else:
            kx, ky = cx + 0.5 * (xs[2] - cx), cy + 0.5 * (ys[2] - cy)
            fk = f(kx, ky)
            if fk > vs[2]:
                xs[2], ys[2], vs[2] = kx, ky, fk
            else:
                for i in (1, 2):
                    xs[i] = xs[0] + 0.5 * (xs[i] - xs[0])
                    ys[i] = ys[0] + 0.5 * (ys[i] - ys[0])
                    vs[i] = f(xs[i], ys[i])
    best = max(range(3), key=lambda i: vs[i])
    return vs[best], (xs[best], ys[best])


def _frame_axes(points: np.ndarray, mub_family: str) -> tuple[np.ndarray, np.ndarray]:
    if mub_family == "paper":
        chi = np.zeros(points.shape[0])
    else:
        chi = points[:, 2]
    return frames.triple_axes(points[:, 0], points[:, 1], chi)


def _frame_box(mub_family: str):
    if mub_family == "paper":
        return [(0.0, math.pi), (0.0, _TWO_PI)], [False, True]
    # chi has period pi exactly: chi -> chi + pi flips both axes' signs
    return (
        [(0.0, math.pi), (0.0, _TWO_PI), (0.0, math.pi)],
        [False, True, True],
    )


def _angles_tuple(point: np.ndarray, mub_family: str) -> tuple[float, float, float]:
    chi = 0.0 if mub_family == "paper" else float(point[2])
    return (float(point[0]), float(point[1]), chi)


def naqi_value(
    rho_ab,
    measure: Measure | str,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    verdict_margin: float = VERDICT_MARGIN,
) -> NaqiResult:
    """Maximize the conditional-imaginarity sum and report the NAQI verdict.

    ``mub_family`` selects the triple search space: "full" (default) covers
    the whole rotation orbit through the extra relative phase chi; "paper"
    restricts to the two-angle construction with chi = 0.  Only the full
    family makes the result invariant under local unitaries.
    """
    measure = Measure(measure)
    config = config or DEFAULT_CONFIG
    if mub_family not in ("full", "paper"):
        raise ValueError("mub_family must be 'full' or 'paper'")
    rho = _check_two_qubit(rho_ab)
    r, s, T = qmat.pauli_decompose(rho)
    box, periodic = _frame_box(mub_family)

    if measure is Measure.L1:

        def f(point):
            m, mp = frames.triple_axes(
                point[0], point[1], 0.0 if mub_family == "paper" else point[2]
            )
            return 2.0 * _l1_inner_max(s, T, m)[0] + _l1_inner_max(s, T, mp)[0]

        def f_batch(points):
            m, mp = _frame_axes(points, mub_family)
            g_m = np.maximum(np.abs(m @ s), np.linalg.norm(m @ T.T, axis=1))
            g_p = np.maximum(np.abs(mp @ s), np.linalg.norm(mp @ T.T, axis=1))
            return 2.0 * g_m + g_p

        value, point, diagnostics = maximize(
            f, box, config, periodic=periodic, f_batch=f_batch
        )
        m, mp = frames.triple_axes(*_angles_tuple(point, mub_family))
        _, axis_m = _l1_inner_max(s, T, m)
        _, axis_p = _l1_inner_max(s, T, mp)
        meas_angles = (
            _axis_to_angles(axis_m),
            _axis_to_angles(axis_m),
            _axis_to_angles(axis_p),
        )
    else:
        workspace = _RelWorkspace(r, s, T, config.grid_points_per_dim)

        def f(point):
            m, mp = frames.triple_axes(
                point[0], point[1], 0.0 if mub_family == "paper" else point[2]
            )
            return (
                2.0 * workspace.inner_max(m, config)[0]
                + workspace.inner_max(mp, config)[0]
            )

        def f_batch(points):
            # grid-only inner maxima: a pointwise lower bound used to pick seeds
            out = np.empty(points.shape[0])
            for start in range(0, points.shape[0], _SCREEN_CHUNK):
                block = points[start : start + _SCREEN_CHUNK]
                m, mp = _frame_axes(block, mub_family)
                out[start : start + _SCREEN_CHUNK] = (
                    2.0 * workspace.term_grid_max_batch(m)
                    + workspace.term_grid_max_batch(mp)
                )
            return out

        value, point, diagnostics = maximize(
            f, box, config, periodic=periodic, f_batch=f_batch
        )
        m, mp = frames.triple_axes(*_angles_tuple(point, mub_family))
        _, ang_m = workspace.inner_max(m, config)
        _, ang_p = workspace.inner_max(mp, config)
        meas_angles = (ang_m, ang_m, ang_p)

    bound = bound_constant(measure)
    witness_value = value - bound.value
    verdict = witness_value > verdict_margin
    diagnostics = dict(diagnostics)
    diagnostics["certified"] = diagnostics.get("converged", False)
    diagnostics["mub_family"] = mub_family
    diagnostics["verdict_margin"] = verdict_margin
    return NaqiResult(
        measure=measure,
        value=float(value),
        witness=float(witness_value),
        verdict=bool(verdict),
        steerable_implied=bool(verdict),
        optimal_mub_angles=_angles_tuple(point, mub_family),
        optimal_measurement_angles=meas_angles,
        diagnostics=diagnostics,
    )


def witness(
    rho_ab,
    measure: Measure | str,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    verdict_margin: float = VERDICT_MARGIN,
) -> NaqiResult:
    """The NAQI witness: maximized value minus the complementarity bound.

    A strictly positive witness (beyond the verdict margin) certifies NAQI
    and therefore steerability from A to B.
    """
    return naqi_value(
        rho_ab, measure, config, mub_family=mub_family, verdict_margin=verdict_margin
    )


def reduced_state_lower_bound(
    rho_ab,
    measure: Measure | str,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
) -> float:
    """Triple-imaginarity sum of Bob's reduced state, maximized over triples.

    The maximized conditional sum can never fall below this value: averaging
    the conditional states reproduces the reduced state, and both measures
    are convex.
    """
    measure = Measure(measure)
    config = config or DEFAULT_CONFIG
    rho = _check_two_qubit(rho_ab)
    s = qmat.density_to_bloch(qmat.partial_trace(rho, keep=[1], dims=[2, 2]))
    s_len = float(np.linalg.norm(s))
    box, periodic = _frame_box(mub_family)

    if measure is Measure.L1:

        def term(axes):
            return np.abs(axes @ s)

    else:
        h_len = _h_half(min(s_len, 1.0))

        def term(axes):
            y = axes @ s
            x = np.sqrt(np.clip(s_len * s_len - y * y, 0.0, None))
            return _entropy_arg(x) - h_len

    def f(point):
        m, mp = frames.triple_axes(
            point[0], point[1], 0.0 if mub_family == "paper" else point[2]
        )
        return float(2.0 * term(m[None, :])[0] + term(mp[None, :])[0])

    def f_batch(points):
        m, mp = _frame_axes(points, mub_family)
        return 2.0 * term(m) + term(mp)

    value, _, _ = maximize(f, box, config, periodic=periodic, f_batch=f_batch)
    return float(value)
