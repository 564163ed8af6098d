import numpy as np
import pytest

from postopt.errors import CapacityError, DomainError, ImpossibleOutcomeError
from postopt.statevec import (
    ANCILLA,
    BOTH,
    DATA,
    OutcomeDistribution,
    RegisterLayout,
    StateVector,
    joint_distribution,
    marginal_distribution,
    marginal_probability,
    postselect,
    sample_measurement,
    uniform_superposition,
)

RT2 = np.sqrt(2.0)


def random_state(layout: RegisterLayout, rng: np.random.Generator) -> StateVector:
    amps = rng.normal(size=layout.total_dim) + 1j * rng.normal(size=layout.total_dim)
    return StateVector(layout, amps / np.linalg.norm(amps))


# ---------------------------------------------------------------------------
# layout and state validation

def test_layout_validation():
    with pytest.raises(DomainError):
        RegisterLayout(0, 1)
    with pytest.raises(DomainError):
        RegisterLayout(3, 0)
    with pytest.raises(CapacityError):
        RegisterLayout(23, 2)
    RegisterLayout(23, 1)  # exactly at the cap is fine


def test_index_convention():
    layout = RegisterLayout(3, 2)
    assert layout.composite_index(5, 3) == (5 << 2) | 3
    assert layout.split_index(23) == (5, 3)
    state = uniform_superposition(layout)
    # grid[k, a] must be the amplitude of composite (k << n_anc) | a
    assert state.grid()[5, 3] == state.amplitudes[23]


def test_state_rejects_bad_norm_and_shape():
    layout = RegisterLayout(1, 1)
    with pytest.raises(DomainError):
        StateVector(layout, np.array([1.0, 1.0, 0.0, 0.0]))
    with pytest.raises(DomainError):
        StateVector(layout, np.array([1.0, 0.0]))


def test_state_is_immutable():
    state = uniform_superposition(RegisterLayout(2, 1))
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.3


# ---------------------------------------------------------------------------
# uniform superposition

def test_uniform_superposition_2_1():
    state = uniform_superposition(RegisterLayout(2, 1))
    expected = np.zeros(8, dtype=complex)
    expected[[0, 2, 4, 6]] = 0.5  # data 0..3 with ancilla 0
    assert np.allclose(state.amplitudes, expected, atol=1e-15)


def test_uniform_superposition_1_1():
    state = uniform_superposition(RegisterLayout(1, 1))
    assert np.allclose(state.amplitudes, [1 / RT2, 0, 1 / RT2, 0], atol=1e-15)


def test_uniform_superposition_norm_large():
    state = uniform_superposition(RegisterLayout(12, 2))
    assert abs(state.norm() - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# marginals

def test_marginal_examples():
    state = uniform_superposition(RegisterLayout(2, 1))
    assert marginal_probability(state, ANCILLA, 0) == pytest.approx(1.0, abs=1e-12)
    assert marginal_probability(state, DATA, 3) == pytest.approx(0.25, abs=1e-12)


def test_marginal_of_encoded_state():
    # costs [1, 2], cosine b=1: a = (cos(pi/4), 0), anc-0 mass = (1/2)(1/2) = 0.25
    grid = np.array([[0.5, 0.5], [0.0, 1 / RT2]], dtype=complex)
    state = StateVector(RegisterLayout(1, 1), grid.reshape(-1))
    assert marginal_probability(state, ANCILLA, 0) == pytest.approx(0.25, abs=1e-12)


def test_marginal_out_of_range():
    state = uniform_superposition(RegisterLayout(2, 1))
    with pytest.raises(DomainError):
        marginal_probability(state, ANCILLA, 2)
    with pytest.raises(DomainError):
        marginal_probability(state, DATA, 4)
    with pytest.raises(DomainError):
        marginal_probability(state, "junk_register", 0)


# ---------------------------------------------------------------------------
# postselection

def test_postselect_certain_outcome():
    state = uniform_superposition(RegisterLayout(2, 1))
    prob, cond = postselect(state, ANCILLA, 0)
    assert prob == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(cond.amplitudes, state.amplitudes, atol=1e-12)


def test_postselect_impossible_outcome():
    state = uniform_superposition(RegisterLayout(2, 1))
    with pytest.raises(ImpossibleOutcomeError):
        postselect(state, ANCILLA, 1)


def test_postselect_encoded_state():
    # hand computation: a(1) = cos(pi/4), a(2) = 0, so anc=0 leaves only data 0
    grid = np.array([[0.5, 0.5], [0.0, 1 / RT2]], dtype=complex)
    state = StateVector(RegisterLayout(1, 1), grid.reshape(-1))
    prob, cond = postselect(state, ANCILLA, 0)
    assert prob == pytest.approx(0.25, abs=1e-12)
    assert marginal_probability(cond, DATA, 0) == pytest.approx(1.0, abs=1e-12)


def test_postselect_data_register():
    rng = np.random.default_rng(7)
    state = random_state(RegisterLayout(3, 2), rng)
    prob, cond = postselect(state, DATA, 5)
    assert prob == pytest.approx(marginal_probability(state, DATA, 5), abs=1e-14)
    assert abs(cond.norm() - 1.0) < 1e-10
    assert marginal_probability(cond, DATA, 5) == pytest.approx(1.0, abs=1e-10)


# ---------------------------------------------------------------------------
# joint distribution

def test_joint_uniform_1_1():
    dist = joint_distribution(uniform_superposition(RegisterLayout(1, 1)))
    assert dist[0] == pytest.approx(0.5, abs=1e-12)   # (data 0, anc 0)
    assert dist[2] == pytest.approx(0.5, abs=1e-12)   # (data 1, anc 0)
    assert dist[1] == dist[3] == 0.0


def test_joint_encoded_state():
    grid = np.array([[0.5, 0.5], [0.0, 1 / RT2]], dtype=complex)
    dist = joint_distribution(StateVector(RegisterLayout(1, 1), grid.reshape(-1)))
    assert dist[0b00] == pytest.approx(0.25, abs=1e-12)  # (0, anc 0)
    assert dist[0b01] == pytest.approx(0.25, abs=1e-12)  # (0, junk)
    assert dist[0b11] == pytest.approx(0.50, abs=1e-12)  # (1, junk)


def test_joint_normalized_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        state = random_state(RegisterLayout(int(rng.integers(1, 6)), int(rng.integers(1, 4))), rng)
        dist = joint_distribution(state)
        assert dist.probs.min() >= 0.0
        assert abs(dist.probs.sum() - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# sampling

def test_sample_deterministic_distribution():
    grid = np.zeros((8, 2), dtype=complex)
    grid[5, 0] = 1.0
    state = StateVector(RegisterLayout(3, 1), grid.reshape(-1))
    for seed in (0, 1, 42):
        assert sample_measurement(state, DATA, seed) == 5


def test_sample_frequencies_within_5_sigma():
    state = uniform_superposition(RegisterLayout(2, 1))
    draws = sample_measurement(state, DATA, 123, size=100_000)
    sigma = np.sqrt(0.25 * 0.75 / 100_000)
    for outcome in range(4):
        freq = np.mean(draws == outcome)
        assert abs(freq - 0.25) < 5 * sigma


def test_sample_reproducible():
    rng = np.random.default_rng(3)
    state = random_state(RegisterLayout(4, 2), rng)
    assert sample_measurement(state, BOTH, 99) == sample_measurement(state, BOTH, 99)
    a = sample_measurement(state, ANCILLA, 5, size=64)
    b = sample_measurement(state, ANCILLA, 5, size=64)
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# invariants on random states

@pytest.mark.parametrize("n_data,n_anc", [(1, 1), (2, 1), (3, 2), (4, 3), (6, 2)])
def test_marginals_sum_to_one(n_data, n_anc):
    rng = np.random.default_rng(n_data * 10 + n_anc)
    state = random_state(RegisterLayout(n_data, n_anc), rng)
    total = sum(marginal_probability(state, ANCILLA, a) for a in range(1 << n_anc))
    assert abs(total - 1.0) < 1e-10
    total = sum(marginal_probability(state, DATA, d) for d in range(1 << n_data))
    assert abs(total - 1.0) < 1e-10


@pytest.mark.parametrize("n_data,n_anc", [(2, 1), (3, 2), (5, 3)])
def test_chain_consistency(n_data, n_anc):
    # joint[(d, a)] = p(anc = a) * p(d | anc = a) wherever the conditional exists
    rng = np.random.default_rng(n_data * 100 + n_anc)
    layout = RegisterLayout(n_data, n_anc)
    state = random_state(layout, rng)
    joint = joint_distribution(state)
    for a in range(layout.anc_dim):
        p_a = marginal_probability(state, ANCILLA, a)
        if p_a <= 1e-12:
            continue
        _, cond = postselect(state, ANCILLA, a)
        for d in range(layout.data_dim):
            expected = p_a * marginal_probability(cond, DATA, d)
            assert abs(joint[layout.composite_index(d, a)] - expected) < 1e-10


@pytest.mark.parametrize("n_data,n_anc", [(2, 1), (3, 2), (4, 2)])
def test_sequential_equals_joint_distribution_level(n_data, n_anc):
    rng = np.random.default_rng(n_data * 7 + n_anc)
    layout = RegisterLayout(n_data, n_anc)
    state = random_state(layout, rng)
    rebuilt = np.zeros(layout.total_dim)
    for a in range(layout.anc_dim):
        p_a = marginal_probability(state, ANCILLA, a)
        if p_a <= 1e-12:
            continue
        _, cond = postselect(state, ANCILLA, a)
        for d in range(layout.data_dim):
            rebuilt[layout.composite_index(d, a)] = p_a * marginal_probability(cond, DATA, d)
    tv = joint_distribution(state).total_variation(OutcomeDistribution(rebuilt))
    assert tv <= 1e-10


def test_postselect_preserves_norm_random():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        layout = RegisterLayout(int(rng.integers(1, 6)), int(rng.integers(1, 4)))
        state = random_state(layout, rng)
        a = int(rng.integers(layout.anc_dim))
        if marginal_probability(state, ANCILLA, a) <= 1e-12:
            continue
        _, cond = postselect(state, ANCILLA, a)
        assert abs(cond.norm() - 1.0) < 1e-10


def test_outcome_distribution_validation():
    with pytest.raises(DomainError):
        OutcomeDistribution(np.array([0.5, 0.4]))  # does not sum to 1
    with pytest.raises(DomainError):
        OutcomeDistribution(np.array([1.1, -0.1]))  # negative entry
    dist = OutcomeDistribution(np.array([0.25, 0.75]))
    assert dist.total_variation(OutcomeDistribution(np.array([0.75, 0.25]))) == pytest.approx(0.5)
