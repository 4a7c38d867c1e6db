"""Named state families and the sweep drivers built on them.

Covers the two-qubit families used for the threshold studies (a mixture of
two Bell states, and the Werner line) and a three-qubit pure family whose
qubit pairs exhibit the NAQI exclusion effect: on the scanned grids at most
one ordered pair of qubits shows NAQI at a time.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import qmat
from .advantage import VERDICT_MARGIN, NaqiResult, naqi_value
from .imaginarity import Measure
from .optimize import OptimizerConfig, bisect_threshold

BELL_PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)
BELL_PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)


def _pure(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


def bell_mixture(p: float) -> np.ndarray:
    """p |phi+><phi+| + (1-p) |psi+><psi+| for p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p={p} outside [0, 1]")
    return p * _pure(BELL_PHI_PLUS) + (1.0 - p) * _pure(BELL_PSI_PLUS)


def werner(p: float) -> np.ndarray:
    """p |phi+><phi+| + (1-p)/4 I(x)I for p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p={p} outside [0, 1]")
    return p * _pure(BELL_PHI_PLUS) + (1.0 - p) / 4.0 * np.eye(4, dtype=complex)


def three_qubit_pure(lams: Sequence[float], phi: float = 0.0) -> np.ndarray:
    """Pure three-qubit state l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>.

    The amplitudes must be normalized (sum of squares 1 within 1e-10); signed
    real amplitudes are accepted so that trigonometric parametrizations can
    be scanned over their stated full angle ranges.
    """
    lams = [float(x) for x in lams]
    if len(lams) != 5:
        raise ValueError("exactly five amplitudes l0..l4 are required")
    norm = sum(x * x for x in lams)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"amplitudes must be normalized; sum of squares is {norm!r}")
    if not 0.0 <= phi <= math.pi + 1e-12:
        raise ValueError(f"phase phi={phi} outside [0, pi]")
    vec = np.zeros(8, dtype=complex)
    vec[0b000] = lams[0]
    vec[0b100] = lams[1] * np.exp(1j * phi)
    vec[0b101] = lams[2]
    vec[0b110] = lams[3]
    vec[0b111] = lams[4]
    return _pure(vec)


def three_qubit_two_angle(alpha: float, beta: float) -> np.ndarray:
    """The (alpha, beta) slice: l0 = cos a, l2 = sin a cos b, l3 = sin a sin b."""
    return three_qubit_pure(
        [math.cos(alpha), 0.0, math.sin(alpha) * math.cos(beta), math.sin(alpha) * math.sin(beta), 0.0]
    )


def three_qubit_one_angle(theta: float) -> np.ndarray:
    """The circle slice: l0 = sqrt(2)/2, l2 = l0 cos t, l3 = l0 sin t."""
    h = math.sqrt(2.0) / 2.0
    return three_qubit_pure([h, 0.0, h * math.cos(theta), h * math.sin(theta), 0.0])


TWO_QUBIT_FAMILIES = {"bellmix": bell_mixture, "werner": werner}


def build_state(family: str, **params) -> np.ndarray:
    """Construct a family member by tag; raises on unknown tags or bad domains."""
    if family in TWO_QUBIT_FAMILIES:
        return TWO_QUBIT_FAMILIES[family](params["p"])
    if family == "three-qubit":
        return three_qubit_pure(params["lams"], params.get("phi", 0.0))
    raise ValueError(f"unknown state family {family!r}")


@dataclass(frozen=True)
class ScanRecord:
    param: float
    value: float
    witness: float
    verdict: bool


def _scan_point(
    param: float,
    family: str,
    measure: Measure,
    config: OptimizerConfig | None,
    mub_family: str,
) -> ScanRecord:
    result = naqi_value(
        TWO_QUBIT_FAMILIES[family](param), measure, config, mub_family=mub_family
    )
    return ScanRecord(
        param=float(param),
        value=result.value,
        witness=result.witness,
        verdict=result.verdict,
    )


def _map_ordered(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def scan_family(
    family: str,
    params: Iterable[float],
    measure: Measure | str,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    workers: int = 1,
) -> list[ScanRecord]:
    """One witness record per grid point, in grid order."""
    if family not in TWO_QUBIT_FAMILIES:
        raise ValueError(f"unknown two-qubit family {family!r}")
    fn = functools.partial(
        _scan_point,
        family=family,
        measure=Measure(measure),
        config=config,
        mub_family=mub_family,
    )
    return _map_ordered(fn, params, workers)


def find_naqi_threshold(
    family: str,
    measure: Measure | str,
    bracket: tuple[float, float],
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    tol: float = 1e-5,
) -> float:
    """Bisect the witness over the bracket to locate the NAQI onset."""
    if family not in TWO_QUBIT_FAMILIES:
        raise ValueError(f"unknown two-qubit family {family!r}")
    measure = Measure(measure)

    def g(p: float) -> float:
        return naqi_value(
            TWO_QUBIT_FAMILIES[family](p), measure, config, mub_family=mub_family
        ).witness

    return bisect_threshold(g, bracket[0], bracket[1], tol=tol)


# ---------------------------------------------------------------------------
# three-qubit exclusion study
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExclusionRecord:
    """NAQI results for the ordered qubit pairs (A->B), (B->C), (C->A)."""

    params: tuple[tuple[str, float], ...]
    n_ab: NaqiResult
    n_bc: NaqiResult
    n_ca: NaqiResult
    count_exceeding: int

    @property
    def values(self) -> tuple[float, float, float]:
        return (self.n_ab.value, self.n_bc.value, self.n_ca.value)


def pair_reduced_states(rho_abc) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced pair states (A,B), (B,C), (C,A) of a three-qubit state.

    The (C,A) pair is reordered so that the measured party C comes first.
    """
    rho = np.asarray(rho_abc, dtype=complex)
    if rho.shape != (8, 8):
        raise ValueError("expected an 8x8 three-qubit density matrix")
    dims = [2, 2, 2]
    rho_ab = qmat.partial_trace(rho, keep=[0, 1], dims=dims)
    rho_bc = qmat.partial_trace(rho, keep=[1, 2], dims=dims)
    rho_ca = qmat.swap_parties(qmat.partial_trace(rho, keep=[0, 2], dims=dims))
    return rho_ab, rho_bc, rho_ca


def exclusion_point(
    rho_abc,
    measure: Measure | str = Measure.L1,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    verdict_margin: float = VERDICT_MARGIN,
    reverse_roles: bool = False,
    params: tuple[tuple[str, float], ...] = (),
) -> ExclusionRecord:
    """NAQI for the three ordered qubit pairs of one three-qubit state.

    The measurement acts on the first party of each ordered pair and the
    imaginarity is evaluated on the second; ``reverse_roles`` swaps that
    assignment for exploration.
    """
    measure = Measure(measure)
    pair_states = pair_reduced_states(rho_abc)
    if reverse_roles:
        pair_states = tuple(qmat.swap_parties(x) for x in pair_states)
    results = [
        naqi_value(
            state, measure, config, mub_family=mub_family, verdict_margin=verdict_margin
        )
        for state in pair_states
    ]
    count = sum(1 for res in results if res.verdict)
    return ExclusionRecord(
        params=params,
        n_ab=results[0],
        n_bc=results[1],
        n_ca=results[2],
        count_exceeding=count,
    )


def _two_angle_point(args, measure, config, mub_family, reverse_roles):
    alpha, beta = args
    return exclusion_point(
        three_qubit_two_angle(alpha, beta),
        measure,
        config,
        mub_family=mub_family,
        reverse_roles=reverse_roles,
        params=(("alpha", float(alpha)), ("beta", float(beta))),
    )


def _one_angle_point(theta, measure, config, mub_family, reverse_roles):
    return exclusion_point(
        three_qubit_one_angle(theta),
        measure,
        config,
        mub_family=mub_family,
        reverse_roles=reverse_roles,
        params=(("theta", float(theta)),),
    )


def exclusion_scan_two_angle(
    alphas: Iterable[float],
    betas: Iterable[float],
    measure: Measure | str = Measure.L1,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    workers: int = 1,
    reverse_roles: bool = False,
) -> list[ExclusionRecord]:
    """Exclusion records over the (alpha, beta) product grid, row-major order."""
    points = [(a, b) for a in alphas for b in betas]
    fn = functools.partial(
        _two_angle_point,
        measure=Measure(measure),
        config=config,
        mub_family=mub_family,
        reverse_roles=reverse_roles,
    )
    return _map_ordered(fn, points, workers)


def exclusion_scan_one_angle(
    thetas: Iterable[float],
    measure: Measure | str = Measure.L1,
    config: OptimizerConfig | None = None,
    *,
    mub_family: str = "full",
    workers: int = 1,
    reverse_roles: bool = False,
) -> list[ExclusionRecord]:
    """Exclusion records along the one-angle circle family."""
    fn = functools.partial(
        _one_angle_point,
        measure=Measure(measure),
        config=config,
        mub_family=mub_family,
        reverse_roles=reverse_roles,
    )
    return _map_ordered(fn, thetas, workers)


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def scan_records_to_csv(records: Sequence[ScanRecord]) -> str:
    lines = ["param,N,witness,verdict"]
    for rec in records:
        lines.append(
            f"{_fmt(rec.param)},{_fmt(rec.value)},{_fmt(rec.witness)},"
            f"{'true' if rec.verdict else 'false'}"
        )
    return "\n".join(lines) + "\n"


def exclusion_records_to_csv(records: Sequence[ExclusionRecord]) -> str:
    if not records:
        raise ValueError("no exclusion records to serialize")
    param_names = [name for name, _ in records[0].params]
    lines = [",".join(param_names + ["N_AB", "N_BC", "N_CA", "count_exceeding"])]
    for rec in records:
        fields = [_fmt(value) for _, value in rec.params]
        fields += [_fmt(v) for v in rec.values]
        fields.append(str(rec.count_exceeding))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"
