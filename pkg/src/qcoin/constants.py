"""Numerical tolerances and timing constants.

Every tolerance used by the library, the CLI checks and the test suite
lives in one frozen record so that all layers agree on what "equal" means.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    exact: float = 1e-12            # amplitude/matrix equivalences, stationary identities
    prob_sum: float = 1e-9          # distribution normalization
    state_norm: float = 1e-9        # state-vector norms
    psd_floor: float = -1e-12       # density-matrix eigenvalue floor at construction
    entropy_floor: float = -1e-9    # eigenvalue floor before entropy evaluation
    imag_residue: float = 1e-12     # largest tolerated imaginary part of a real observable
    empty_bin: float = 1e-15        # smallest bin probability that can be conditioned on
    entropy_oracle: float = 1e-10   # agreement with the independent eigenvalue oracle
    fit_roundtrip: float = 1e-6     # noiseless visibility-fit recovery


TOL = Tolerances()

# The long path of block k delays the photon by 2^(k-1) times this base
# delay, so every outcome string maps to a unique arrival time (a 3-step
# run spans 0..14 ns).
FIRST_DELAY_NS = 2.0


def block_delay_ns(step: int) -> float:
    """Delay added by the long path of block `step` (1-based): 2, 4, 8, ... ns."""
    return FIRST_DELAY_NS * float(2 ** (step - 1))
