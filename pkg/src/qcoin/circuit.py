"""Amplitude-exact simulation of the time-bin photonic processor.

Each processor block works on a photon whose polarization carries the memory
state and whose arrival time carries the outcomes so far:

* a polarizing beam splitter routes |H> to the short path and |V> to the
  long path (the long path of block k adds a delay of 2^(k-1) time bins);
* a wave plate in each path re-prepares the polarization in the block's
  |S0> (short) or |S1> (long) causal state;
* the paths recombine on a 50:50 beam splitter and the run is post-selected
  on one output arm.

Because the two paths land in disjoint time bins they cannot interfere at
the recombiner, so the selected arm keeps exactly half of the norm whatever
the input; the 1/sqrt(2) post-selection factor and the renormalization of
the kept state cancel.  `block_norm_accounting` tracks both arms explicitly
to verify that bookkeeping.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .constants import TOL
from .encoding import arrival_time_ns, bits_to_index, index_to_bits
from .errors import EmptyBin, InvalidParameter, StepCountTooLarge
from .markov import CausalState, OutcomeDistribution, PerturbedCoin, StationaryWeights
from .quantum import DensityMatrix2, causal_state

MAX_CIRCUIT_STEPS = 12

# Polarization basis indices.
H, V = 0, 1


@dataclass(frozen=True)
class BlockSpec:
    """One processor block; the coin fixes the wave-plate rotations in both paths."""

    coin: PerturbedCoin


@dataclass(frozen=True)
class PhotonState:
    """Post-selected photon state after `steps_applied` blocks.

    `amplitudes[b, p]` is the amplitude in time bin b with polarization p
    (0 = H, 1 = V).  Bin b encodes the outcome string via its binary digits,
    first outcome in the least-significant bit.  `success_probability` is
    the probability that all post-selections so far succeeded.
    """

    steps_applied: int
    amplitudes: np.ndarray
    success_probability: float

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.steps_applied, 2):
            raise InvalidParameter(
                f"expected amplitude shape {(2**self.steps_applied, 2)}, got {amps.shape}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        norm_sq = float(np.vdot(amps, amps).real)
        if abs(norm_sq - 1.0) > TOL.state_norm:
            raise InvalidParameter(f"photon state is not normalized: |.|^2 = {norm_sq!r}")
        if not 0.0 < self.success_probability <= 1.0:
            raise InvalidParameter(
                f"success probability must be in (0, 1], got {self.success_probability!r}"
            )

    def bin_probability(self, bits: str) -> float:
        row = self.amplitudes[bits_to_index(bits)]
        return float((row.real**2 + row.imag**2).sum())

    def to_json_dict(self) -> dict:
        bins = {}
        for b in range(2**self.steps_applied):
            row = self.amplitudes[b]
            bins[str(b)] = {
                "H": [float(row[H].real), float(row[H].imag)],
                "V": [float(row[V].real), float(row[V].imag)],
            }
        return {
            "steps": self.steps_applied,
            "success_probability": self.success_probability,
            "bins": bins,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def prepare_input(coin: PerturbedCoin, start: CausalState) -> PhotonState:
    """Photon in time bin 0 with its polarization set to the initial causal state."""
    amps = np.zeros((1, 2), dtype=complex)
    amps[0] = causal_state(coin, start).amplitudes
    return PhotonState(0, amps, 1.0)


def apply_block(state: PhotonState, block: BlockSpec) -> PhotonState:
    """One processor block: H keeps its bin and becomes |S0>, V moves up by
    2^k bins and becomes |S1>; the post-selection halves the success
    probability and leaves the kept amplitudes as plain products (see the
    module docstring for why no explicit renormalization is needed).
    """
    k = state.steps_applied
    if k >= MAX_CIRCUIT_STEPS:
        raise StepCountTooLarge(f"cannot apply more than {MAX_CIRCUIT_STEPS} blocks")
    s0 = causal_state(block.coin, CausalState.S0).amplitudes
    s1 = causal_state(block.coin, CausalState.S1).amplitudes
    n = state.amplitudes.shape[0]
    out = np.empty((2 * n, 2), dtype=complex)
    out[:n] = np.outer(state.amplitudes[:, H], s0)
    out[n:] = np.outer(state.amplitudes[:, V], s1)
    return PhotonState(k + 1, out, state.success_probability * 0.5)


def block_norm_accounting(state: PhotonState, block: BlockSpec) -> tuple[float, float]:
    """Squared norm reaching each recombiner arm, before post-selection.

    Returns (retained, discarded); for a normalized input these sum to 1
    and each equals 1/2 regardless of the coin and the input state.
    """
    s0 = causal_state(block.coin, CausalState.S0).amplitudes
    s1 = causal_state(block.coin, CausalState.S1).amplitudes
    n = state.amplitudes.shape[0]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    short = np.outer(state.amplitudes[:, H], s0) * inv_sqrt2
    long = np.outer(state.amplitudes[:, V], s1) * inv_sqrt2
    retained = np.concatenate([short, long])
    discarded = np.concatenate([short, -long])
    return (
        float(np.vdot(retained, retained).real),
        float(np.vdot(discarded, discarded).real),
    )


def run_circuit(coin: PerturbedCoin, start: CausalState, steps: int) -> PhotonState:
    """Send one photon through `steps` identical blocks."""
    if not 1 <= steps <= MAX_CIRCUIT_STEPS:
        raise StepCountTooLarge(f"steps must be in 1..{MAX_CIRCUIT_STEPS}, got {steps}")
    state = prepare_input(coin, start)
    block = BlockSpec(coin)
    for _ in range(steps):
        state = apply_block(state, block)
    return state


def arrival_time_distribution(state: PhotonState) -> tuple[OutcomeDistribution, dict[str, float]]:
    """Outcome probabilities (both polarizations of each bin) and arrival times in ns."""
    steps = state.steps_applied
    if steps < 1:
        raise InvalidParameter("the photon has not passed any block yet")
    probs = {}
    times = {}
    for b in range(2**steps):
        bits = index_to_bits(b, steps)
        probs[bits] = state.bin_probability(bits)
        times[bits] = arrival_time_ns(bits)
    return OutcomeDistribution(steps, probs), times


def arrival_time_csv_rows(state: PhotonState) -> list[tuple[str, float, float]]:
    """(bitstring, time_ns, probability) rows, ordered by bitstring."""
    dist, times = arrival_time_distribution(state)
    return [(bits, times[bits], p) for bits, p in sorted(dist.probabilities.items())]


def conditional_polarization(state: PhotonState, bits: str) -> DensityMatrix2:
    """Polarization state conditioned on the photon arriving in the bin of `bits`.

    Noise-free equivalent of the tomographic reconstruction at one arrival
    time; always the projector onto the causal state of the final outcome.
    """
    p = state.bin_probability(bits)
    if p <= TOL.empty_bin:
        raise EmptyBin(f"bin for {bits!r} carries probability {p!r}")
    row = state.amplitudes[bits_to_index(bits)] / math.sqrt(p)
    return DensityMatrix2(np.outer(row, row.conj()))


def reconstruct_memory_density(
    coin: PerturbedCoin,
    weights: StationaryWeights,
    steps: int,
) -> DensityMatrix2:
    """Ensemble average of the conditional polarization over inputs and outcomes.

    Runs the circuit from both causal states, weighs every outcome's
    conditional polarization state by its probability and the input weight;
    matches the direct causal-state mixture.
    """
    rho = np.zeros((2, 2), dtype=complex)
    for weight, start in ((weights.s0, CausalState.S0), (weights.s1, CausalState.S1)):
        if weight == 0.0:
            continue
        state = run_circuit(coin, start, steps)
        dist, _ = arrival_time_distribution(state)
        for bits, p in dist.probabilities.items():
            if p <= TOL.empty_bin:
                continue
            rho += weight * p * conditional_polarization(state, bits).matrix
    return DensityMatrix2(rho)


def block_gate_unitary(coin: PerturbedCoin) -> np.ndarray:
    """Gate-level model of one block on the basis |memory> x |outcome>.

    Composition: a controlled-X copying the memory onto the fresh outcome
    qubit, a rotation R on the memory with R|0> = |S0>, and an
    outcome-controlled V with V R|1> = |S1>.  R and V are only fixed up to
    signs/phases on the orthogonal subspace; the real-rotation solution is
    used here.  Basis index is 2*memory + outcome.
    """
    root_stay = math.sqrt(coin.stay_heads)
    root_flip = math.sqrt(1.0 - coin.stay_heads)
    r = np.array([[root_stay, -root_flip], [root_flip, root_stay]], dtype=complex)
    r_one = r @ np.array([0.0, 1.0], dtype=complex)
    s1 = causal_state(coin, CausalState.S1).amplitudes
    delta = math.atan2(s1[1].real, s1[0].real) - math.atan2(r_one[1].real, r_one[0].real)
    v = np.array(
        [[math.cos(delta), -math.sin(delta)], [math.sin(delta), math.cos(delta)]],
        dtype=complex,
    )
    cx = np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )
    cv = np.eye(4, dtype=complex)
    for mem_out in range(2):
        for mem_in in range(2):
            cv[2 * mem_out + 1, 2 * mem_in + 1] = v[mem_out, mem_in]
    return cv @ np.kron(r, np.eye(2, dtype=complex)) @ cx


def gate_decomposition_max_deviation(coin: PerturbedCoin) -> float:
    """Largest amplitude difference between the gate-level block and the
    optical block map, over both input causal states.
    """
    u = block_gate_unitary(coin)
    worst = 0.0
    for start in (CausalState.S0, CausalState.S1):
        mem_in = causal_state(coin, start).amplitudes
        gate_out = u @ np.kron(mem_in, np.array([1.0, 0.0], dtype=complex))
        block_out = apply_block(prepare_input(coin, start), BlockSpec(coin)).amplitudes
        for outcome in range(2):
            for mem in range(2):
                dev = abs(gate_out[2 * mem + outcome] - block_out[outcome, mem])
                worst = max(worst, dev)
    return worst
