"""Two-photon interference analytics.

Coincidence probability and Hong-Ou-Mandel visibility from exact state
overlaps, Gaussian-envelope dip curves, visibility estimation by least
squares, and visibility sweeps over pairs of processes.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .circuit import PhotonState, run_circuit
from .constants import TOL
from .errors import (
    DimensionMismatch,
    FitDidNotConverge,
    InternalError,
    InvalidParameter,
)
from .markov import CausalState
from .quantum import IdealOutputState, ProcessSpec, process_json_dict


def _amplitudes(state) -> np.ndarray:
    if isinstance(state, (PhotonState, IdealOutputState)):
        return state.amplitudes
    return np.asarray(state, dtype=complex)


def _overlap_squared(psi, phi) -> float:
    """|<phi|psi>|^2 normalized by the actual state norms.

    Numerator and denominator are the same floating-point sums when the two
    amplitude arrays are equal, so identical states give exactly 1.
    """
    a = _amplitudes(psi)
    b = _amplitudes(phi)
    if a.shape != b.shape:
        raise DimensionMismatch(f"state shapes differ: {a.shape} vs {b.shape}")
    num = complex(np.vdot(a, b))
    if abs(num.imag) > TOL.imag_residue:
        raise InternalError(f"state overlap has imaginary residue {num.imag!r}")
    norm_a = float(np.vdot(a, a).real)
    norm_b = float(np.vdot(b, b).real)
    v = (num.real * num.real) / (norm_a * norm_b)
    if v > 1.0 + 1e-9:
        raise InternalError(f"squared overlap {v!r} exceeds 1 beyond rounding")
    return min(v, 1.0)


def state_overlap(psi, phi) -> float:
    """Magnitude of the overlap between two output states."""
    return math.sqrt(_overlap_squared(psi, phi))


def visibility(psi, phi) -> float:
    """HOM dip visibility: the squared magnitude of the state overlap."""
    return _overlap_squared(psi, phi)


def coincidence_probability(psi, phi) -> float:
    """Probability of a twofold coincidence behind a 50:50 beam splitter."""
    return 0.5 * (1.0 - _overlap_squared(psi, phi))


def dip_model(delay_ns, baseline: float, vis: float, sigma_ns: float, center_ns: float = 0.0):
    """Expected coincidences versus relative delay:
    baseline * (1 - v * exp(-(tau - center)^2 / (2 sigma^2))).
    """
    tau = np.asarray(delay_ns, dtype=float) - center_ns
    return baseline * (1.0 - vis * np.exp(-(tau**2) / (2.0 * sigma_ns**2)))


@dataclass(frozen=True)
class DipCurve:
    """Expected coincidence counts over a grid of relative delays."""

    delays_ns: np.ndarray
    counts: np.ndarray
    envelope_sigma_ns: float
    baseline: float


def dip_curve_from_visibility(
    vis: float,
    envelope_sigma_ns: float,
    delays_ns,
    baseline: float,
) -> DipCurve:
    if envelope_sigma_ns <= 0.0:
        raise InvalidParameter(f"envelope sigma must be positive, got {envelope_sigma_ns}")
    if baseline <= 0.0:
        raise InvalidParameter(f"baseline must be positive, got {baseline}")
    if not 0.0 <= vis <= 1.0:
        raise InvalidParameter(f"visibility must be in [0, 1], got {vis}")
    delays = np.asarray(delays_ns, dtype=float)
    counts = dip_model(delays, baseline, vis, envelope_sigma_ns)
    return DipCurve(delays, counts, envelope_sigma_ns, baseline)


def dip_curve(psi, phi, envelope_sigma_ns: float, delays_ns, baseline: float) -> DipCurve:
    """Ideal HOM dip of two simulator output states under a Gaussian envelope."""
    return dip_curve_from_visibility(visibility(psi, phi), envelope_sigma_ns, delays_ns, baseline)


@dataclass(frozen=True)
class VisibilityFit:
    """Least-squares estimate of the dip parameters."""

    visibility: float
    visibility_err: float
    baseline: float
    sigma_ns: float
    center_ns: float
    covariance: np.ndarray


def fit_visibility(samples, assume_poisson: bool = True, max_evals: int = 10000) -> VisibilityFit:
    """Fit the dip model to (delay, counts) samples.

    Free parameters: baseline, visibility, envelope sigma and dip center.
    With `assume_poisson` the points are weighted by sqrt(counts) errors,
    which gives calibrated uncertainties on counting data.
    """
    data = np.asarray([(float(d), float(c)) for d, c in samples], dtype=float)
    if data.ndim != 2 or data.shape[0] < 5:
        raise InvalidParameter("need at least 5 (delay, counts) samples spanning the dip")
    delays, counts = data[:, 0], data[:, 1]
    top = float(counts.max())
    if top <= 0.0:
        raise InvalidParameter("counts must contain positive values")
    center0 = float(delays[int(np.argmin(counts))])
    vis0 = min(max(1.0 - float(counts.min()) / top, 0.0), 1.0)
    span = float(delays.max() - delays.min())
    sigma0 = span / 6.0 if span > 0.0 else 1.0
    weights = np.sqrt(np.clip(counts, 1.0, None)) if assume_poisson else None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, pcov = curve_fit(
                dip_model,
                delays,
                counts,
                p0=[top, vis0, sigma0, center0],
                sigma=weights,
                absolute_sigma=assume_poisson,
                maxfev=max_evals,
            )
    except RuntimeError as exc:
        raise FitDidNotConverge(str(exc)) from exc
    return VisibilityFit(
        visibility=float(popt[1]),
        visibility_err=float(np.sqrt(pcov[1, 1])),
        baseline=float(popt[0]),
        sigma_ns=abs(float(popt[2])),
        center_ns=float(popt[3]),
        covariance=pcov,
    )


@dataclass(frozen=True)
class VisibilityRecord:
    """Overlap, visibility and minimum coincidence probability for one pair."""

    overlap: float
    visibility: float
    coincidence_min: float
    process_pair: tuple[tuple[ProcessSpec, CausalState], tuple[ProcessSpec, CausalState]]

    def __post_init__(self) -> None:
        if abs(self.visibility - self.overlap**2) > TOL.exact:
            raise InvalidParameter("visibility must equal the squared overlap")


def visibility_sweep(
    fixed: tuple[ProcessSpec, CausalState],
    varying: list[tuple[ProcessSpec, CausalState]],
    steps: int,
) -> list[VisibilityRecord]:
    """Interference visibility of one fixed process against a list of others.

    Visibility is 1 exactly when the pair's future distributions and final
    causal states coincide, which makes the sweep a comparison of the two
    statistical futures.
    """
    if not varying:
        raise InvalidParameter("the varying list must be nonempty")
    spec_a, start_a = fixed
    psi = run_circuit(spec_a.coin, start_a, steps)
    records = []
    for spec_b, start_b in varying:
        phi = run_circuit(spec_b.coin, start_b, steps)
        v = visibility(psi, phi)
        records.append(
            VisibilityRecord(
                overlap=math.sqrt(v),
                visibility=v,
                coincidence_min=0.5 * (1.0 - v),
                process_pair=((spec_a, start_a), (spec_b, start_b)),
            )
        )
    return records


def visibility_records_to_json(records: list[VisibilityRecord]) -> str:
    payload = []
    for rec in records:
        (spec_a, start_a), (spec_b, start_b) = rec.process_pair
        payload.append(
            {
                "overlap": rec.overlap,
                "visibility": rec.visibility,
                "coincidence_min": rec.coincidence_min,
                "process_a": process_json_dict(spec_a, start_a),
                "process_b": process_json_dict(spec_b, start_b),
            }
        )
    return json.dumps(payload, indent=2)
