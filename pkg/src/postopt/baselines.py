"""Comparison strategies: random search, hill climbing, amplitude amplification.

Random search is the benchmark the post-selection scheme provably cannot
beat; hill climbing shows what exploiting landscape structure buys; the
Grover baseline is the genuine quantum speedup, simulated exactly on the
data register with an ideal cost < c_tol oracle.

Trial counting is in cost-oracle calls for the classical strategies, so
their `trials_used` are directly comparable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .costfn import CostInstance, count_below
from .errors import DomainError

_BLOCK = 4096  # random draws consumed in blocks of this size


@dataclass(frozen=True)
class SearchResult:
    strategy: str
    trials_used: int
    best_index: int
    best_cost: float
    hit: bool


def random_search(
    instance: CostInstance, c_tol: float, seed: int = 0, max_trials: int = 10_000
) -> SearchResult:
    """Draw uniform indices with replacement until cost < c_tol or budget ends.

    Trials to first hit is geometric with mean N/M.
    """
    if max_trials < 1:
        raise DomainError("max_trials must be >= 1")
    rng = np.random.default_rng(seed)
    best_index, best_cost = -1, math.inf
    used = 0
    while used < max_trials:
        block = rng.integers(0, instance.size, size=min(_BLOCK, max_trials - used))
        block_costs = instance.costs[block]
        hit_pos = np.nonzero(block_costs < c_tol)[0]
        stop = int(hit_pos[0]) + 1 if hit_pos.size else len(block)
        seen = block_costs[:stop]
        local_best = int(np.argmin(seen))
        if seen[local_best] < best_cost:
            best_index, best_cost = int(block[local_best]), float(seen[local_best])
        used += stop
        if hit_pos.size:
            return SearchResult("random", used, best_index, best_cost, True)
    return SearchResult("random", used, best_index, best_cost, best_cost < c_tol)


def hill_climb(
    instance: CostInstance, c_tol: float, seed: int = 0, max_restarts: int = 100
) -> SearchResult:
    """Steepest single-bit-flip descent with random restarts.

    From each random start, move to the strictly improving Hamming-1 neighbor
    with the lowest cost (ties toward the lowest bit index) until a local
    minimum.  Every cost evaluation counts as a trial and is checked against
    c_tol, so the search stops the moment it has seen a low-cost state.
    """
    rng = np.random.default_rng(seed)
    best_index, best_cost = -1, math.inf
    trials = 0

    def evaluate(k: int) -> float:
        nonlocal trials, best_index, best_cost
        trials += 1
        c = float(instance.costs[k])
        if c < best_cost:
            best_index, best_cost = k, c
        return c

    for _ in range(max_restarts):
        current = int(rng.integers(0, instance.size))
        current_cost = evaluate(current)
        if best_cost < c_tol:
            return SearchResult("hillclimb", trials, best_index, best_cost, True)
        while True:
            step_to, step_cost = None, current_cost
            for j in range(instance.n_data):
                neighbor = current ^ (1 << j)
                c = evaluate(neighbor)
                if best_cost < c_tol:
                    return SearchResult("hillclimb", trials, best_index, best_cost, True)
                if c < step_cost:
                    step_to, step_cost = neighbor, c
            if step_to is None:
                break  # local minimum
            current, current_cost = step_to, step_cost
    return SearchResult("hillclimb", trials, best_index, best_cost, best_cost < c_tol)


def amplitude_amplification_success(n_data: int, m: int, iterations: int) -> float:
    """Closed-form success probability of Grover iterations: sin^2((2t+1) theta).

    theta = arcsin(sqrt(M/N)); t = 0 reduces to random sampling, M/N.
    """
    n = 1 << n_data
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= M <= N, got M={m}, N={n}")
    if iterations < 0:
        raise DomainError("iterations must be >= 0")
    theta = math.asin(math.sqrt(m / n))
    return math.sin((2 * iterations + 1) * theta) ** 2


def optimal_iterations(n_data: int, m: int) -> int:
    """Iteration count maximizing the closed form: round(pi/(4 theta) - 1/2)."""
    n = 1 << n_data
    if not 1 <= m <= n:
        raise DomainError(f"need 1 <= M <= N, got M={m}, N={n}")
    theta = math.asin(math.sqrt(m / n))
    return max(0, round(math.pi / (4 * theta) - 0.5))


def grover_state(instance: CostInstance, c_tol: float, iterations: int) -> np.ndarray:
    """Amplitudes over the data register after `iterations` Grover steps.

    Each step phase-flips the states with cost < c_tol, then reflects about
    the mean (diffusion).  No ancilla: the oracle is ideal.
    """
    if count_below(instance, c_tol) < 1:
        raise DomainError("Grover iteration needs at least one marked state")
    if iterations < 0:
        raise DomainError("iterations must be >= 0")
    marked = instance.costs < c_tol
    amps = np.full(instance.size, 1.0 / math.sqrt(instance.size))
    for _ in range(iterations):
        amps = np.where(marked, -amps, amps)
        amps = 2.0 * amps.mean() - amps
    return amps


def grover_simulate(instance: CostInstance, c_tol: float, iterations: int) -> float:
    """Probability mass on the cost < c_tol states after exact Grover steps."""
    amps = grover_state(instance, c_tol, iterations)
    return float((amps[instance.costs < c_tol] ** 2).sum())
