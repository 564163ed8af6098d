"""Dense pure-state simulator for a data register plus an ancilla register.

Basis-state indexing packs both registers into one integer::

    composite = (data_index << n_anc) | ancilla_index

so ``amplitudes.reshape(2**n_data, 2**n_anc)[k, a]`` is the amplitude of
|k, a>.  Post-selection on an ancilla outcome is then a strided slice.

All operations are pure: they never mutate their inputs and return fresh
values.  Amplitude arrays are marked read-only so states can be shared
across concurrent tasks.

Sampling uses numpy's PCG64 generator (``np.random.default_rng``), a
published, seedable algorithm, so sampled outcomes are reproducible for a
fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError, ImpossibleOutcomeError

# Tolerance ladder used across the package: algebraic identities at 1e-12,
# normalization checks at 1e-10, and an outcome with probability <= EPS_PROB
# is treated as impossible (its conditional state is numerically meaningless).
NORM_ATOL = 1e-10
EPS_PROB = 1e-12

DEFAULT_QUBIT_CAP = 24  # 2**24 complex amplitudes ~ 256 MB, the desk-scale limit

DATA = "data"
ANCILLA = "ancilla"
BOTH = "both"


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit counts for the (data, ancilla) register pair."""

    n_data: int
    n_anc: int
    cap: int = DEFAULT_QUBIT_CAP

    def __post_init__(self) -> None:
        if self.n_data < 1 or self.n_anc < 1:
            raise DomainError(
                f"need n_data >= 1 and n_anc >= 1, got ({self.n_data}, {self.n_anc})"
            )
        if self.n_data + self.n_anc > self.cap:
            raise CapacityError(
                f"{self.n_data} + {self.n_anc} qubits exceeds the cap of {self.cap}"
            )

    @property
    def data_dim(self) -> int:
        return 1 << self.n_data

    @property
    def anc_dim(self) -> int:
        return 1 << self.n_anc

    @property
    def total_dim(self) -> int:
        return 1 << (self.n_data + self.n_anc)

    def register_dim(self, register: str) -> int:
        if register == DATA:
            return self.data_dim
        if register == ANCILLA:
            return self.anc_dim
        if register == BOTH:
            return self.total_dim
        raise DomainError(f"unknown register {register!r}")

    def composite_index(self, data_index: int, anc_index: int) -> int:
        return (data_index << self.n_anc) | anc_index

    def split_index(self, composite: int) -> tuple[int, int]:
        return composite >> self.n_anc, composite & (self.anc_dim - 1)


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over the composite (data, ancilla) basis."""

    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.layout.total_dim,):
            raise DomainError(
                f"expected {self.layout.total_dim} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise DomainError(f"state norm {norm} deviates from 1 by more than {NORM_ATOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    def grid(self) -> np.ndarray:
        """Amplitudes reshaped to (data_dim, anc_dim); row k, column a = |k, a>."""
        return self.amplitudes.reshape(self.layout.data_dim, self.layout.anc_dim)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probability of each outcome of one register (or of the composite index)."""

    probs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.min(initial=0.0) < -1e-15:
            raise DomainError(f"negative probability {probs.min()}")
        total = probs.sum()
        if abs(total - 1.0) > NORM_ATOL:
            raise DomainError(f"probabilities sum to {total}, not 1")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def __getitem__(self, outcome: int) -> float:
        return float(self.probs[outcome])

    def __len__(self) -> int:
        return len(self.probs)

    def items(self):
        return enumerate(self.probs.tolist())

    def total_variation(self, other: "OutcomeDistribution") -> float:
        """Half the L1 distance; 0 means statistically indistinguishable."""
        if len(self) != len(other):
            raise DomainError("distributions live on different outcome sets")
        return 0.5 * float(np.abs(self.probs - other.probs).sum())


def uniform_superposition(layout: RegisterLayout) -> StateVector:
    """Equal-amplitude superposition 1/sqrt(N) over all data states, ancilla at 0.

    Every |k, 0...0> gets amplitude 1/sqrt(2**n_data); everything else is 0.
    """
    grid = np.zeros((layout.data_dim, layout.anc_dim), dtype=complex)
    grid[:, 0] = 1.0 / np.sqrt(layout.data_dim)
    return StateVector(layout, grid.reshape(-1))


def _check_outcome(layout: RegisterLayout, register: str, outcome: int) -> None:
    dim = layout.register_dim(register)
    if not 0 <= outcome < dim:
        raise DomainError(f"outcome {outcome} out of range for {register} register (dim {dim})")


def marginal_probability(state: StateVector, register: str, outcome: int) -> float:
    """Probability of measuring `outcome` on one register, other register summed out."""
    _check_outcome(state.layout, register, outcome)
    grid = state.grid()
    if register == DATA:
        sq = np.abs(grid[outcome, :]) ** 2
    else:
        sq = np.abs(grid[:, outcome]) ** 2
    return float(sq.sum())


def marginal_distribution(state: StateVector, register: str) -> OutcomeDistribution:
    """Full outcome distribution of one register."""
    grid = np.abs(state.grid()) ** 2
    axis = 1 if register == DATA else 0
    if register not in (DATA, ANCILLA):
        raise DomainError(f"unknown register {register!r}")
    return OutcomeDistribution(grid.sum(axis=axis))


def postselect(
    state: StateVector, register: str, outcome: int, eps: float = EPS_PROB
) -> tuple[float, StateVector]:
    """Condition on one register reading `outcome`.

    Returns the probability of that outcome together with the renormalized
    conditional state (amplitudes inconsistent with the outcome zeroed).

    Raises:
        ImpossibleOutcomeError: outcome probability <= eps; the conditional
            state is undefined.
    """
    prob = marginal_probability(state, register, outcome)
    if prob <= eps:
        raise ImpossibleOutcomeError(
            f"{register}={outcome} has probability {prob} <= {eps}; cannot post-select"
        )
    grid = np.zeros((state.layout.data_dim, state.layout.anc_dim), dtype=complex)
    if register == DATA:
        grid[outcome, :] = state.grid()[outcome, :]
    else:
        grid[:, outcome] = state.grid()[:, outcome]
    grid /= np.sqrt(prob)
    return prob, StateVector(state.layout, grid.reshape(-1))


def joint_distribution(state: StateVector) -> OutcomeDistribution:
    """Born-rule distribution over composite indices (data << n_anc) | anc."""
    return OutcomeDistribution(np.abs(state.amplitudes) ** 2)


def sample_measurement(
    state: StateVector,
    register: str,
    rng: int | np.random.Generator,
    size: int | None = None,
):
    """Draw measurement outcomes from the exact distribution of `register`.

    `register` is "data", "ancilla", or "both" (composite index).  `rng` is a
    seed or an existing ``np.random.Generator``; a fixed seed gives identical
    outcomes on every run.  With `size=None` a single int is returned,
    otherwise an int array of that length.
    """
    gen = np.random.default_rng(rng)
    if register == BOTH:
        probs = np.abs(state.amplitudes) ** 2
    else:
        probs = marginal_distribution(state, register).probs
    probs = probs / probs.sum()  # absorb float rounding so choice() accepts it
    drawn = gen.choice(len(probs), size=size, p=probs)
    if size is None:
        return int(drawn)
    return drawn.astype(int)
