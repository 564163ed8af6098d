"""The prepare / encode / post-select / measure procedure and its bound checks.

`exact_analysis` computes, from the encoded state's exact amplitudes:

    p_first  probability the ancilla reads 0...0
    p_cond   probability the post-selected data sample has cost < c_tol
    p_joint  their product, the per-preparation success probability

and checks them against the ceiling M/N, where M counts states with cost
strictly below c_tol.  `chain_decomposition` evaluates p(A & B) three ways
(A = low-cost data outcome, B = ancilla 0...0), `sequential_vs_joint_check`
compares the two measurement orderings at the distribution level, and
`run_repeat_until_success` is the sampled protocol.

Tolerance ladder, used package-wide: 1e-12 for algebraic identities, 1e-9
for bound checks (float error accumulated over N terms), 5-sigma bands for
sampled statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .costfn import CostInstance, count_below
from .encoding import AmplitudeEncoder, JunkPolicy, encode
from .errors import ConfigurationError, DomainError
from .statevec import (
    ANCILLA,
    DATA,
    EPS_PROB,
    OutcomeDistribution,
    RegisterLayout,
    StateVector,
    joint_distribution,
    marginal_distribution,
    marginal_probability,
    postselect,
    uniform_superposition,
)

ATOL_IDENTITY = 1e-12
ATOL_BOUND = 1e-9
SIGMA_BAND = 5.0


@dataclass(frozen=True)
class RunConfig:
    """Everything one run of the procedure depends on besides the instance."""

    c_tol: float
    encoder: AmplitudeEncoder
    junk: JunkPolicy = JunkPolicy.CONCENTRATED
    n_anc: int = 1
    max_preparations: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_preparations < 1:
            raise ConfigurationError("max_preparations must be >= 1")
        if self.n_anc < 1:
            raise ConfigurationError("n_anc must be >= 1")


@dataclass(frozen=True)
class ExactAnalysis:
    """Exact success probabilities of one configuration and their ceiling.

    `p_cond` is None when the ancilla never reads 0...0 (p_first below the
    impossible-outcome threshold); p_joint is then 0.  `per_state_products`
    holds p_first * p(data = k | ancilla 0...0) for every k; no encoder can
    push any of them above 1/N.
    """

    p_first: float
    p_cond: float | None
    p_joint: float
    m: int
    n: int
    bound: float
    per_state_products: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ChainDecomposition:
    """p(A & B) computed three ways; A = cost < c_tol, B = ancilla 0...0.

    `via_ancilla` = p(A|B) p(B), `direct` = p(A & B) off the joint
    distribution, `via_cost` = p(B|A) p(A).  A conditional that is undefined
    (p(B) ~ 0 or M = 0) leaves its route and `p_b_given_a` as None; `direct`
    is always reported.
    """

    direct: float
    via_ancilla: float | None
    via_cost: float | None
    p_b_given_a: float | None


@dataclass(frozen=True)
class TrialStats:
    """Counts and estimates from a sampled repeat-until-success run."""

    preparations_used: int
    accepted_samples: int
    low_cost_hits: int
    p_joint_estimate: float
    ci_low: float
    ci_high: float
    expected_preparations_per_hit: float
    first_hit_preparation: int | None


def encoded_state(instance: CostInstance, config: RunConfig) -> StateVector:
    """Prepare |psi_0> and run the cost encoding for this configuration."""
    layout = RegisterLayout(instance.n_data, config.n_anc)
    return encode(uniform_superposition(layout), instance, config.encoder, config.junk)


def exact_analysis(instance: CostInstance, config: RunConfig) -> ExactAnalysis:
    """Success probabilities of one attempt, from the exact amplitudes."""
    state = encoded_state(instance, config)
    n = instance.size
    m = count_below(instance, config.c_tol)
    low = instance.costs < config.c_tol

    p_first = marginal_probability(state, ANCILLA, 0)
    if p_first <= EPS_PROB:
        # acceptance never happens; the conditional is undefined
        products = np.abs(state.grid()[:, 0]) ** 2
        return ExactAnalysis(p_first, None, 0.0, m, n, m / n, products)

    _, conditional = postselect(state, ANCILLA, 0)
    cond_data = marginal_distribution(conditional, DATA).probs
    p_cond = float(cond_data[low].sum())
    products = p_first * cond_data
    return ExactAnalysis(p_first, p_cond, p_first * p_cond, m, n, m / n, products)


def per_state_product(instance: CostInstance, config: RunConfig, k: int) -> float:
    """p_first * p(data = k | ancilla 0...0) for a single state; at most 1/N."""
    if not 0 <= k < instance.size:
        raise DomainError(f"index {k} out of range for {instance.size} states")
    return float(exact_analysis(instance, config).per_state_products[k])


def chain_decomposition(instance: CostInstance, config: RunConfig) -> ChainDecomposition:
    """Evaluate the probability chain p(A|B)p(B) = p(A & B) = p(B|A)p(A).

    The via-cost route exposes p(B|A): since p(A) is exactly M/N on this
    state, p(A & B) = (M/N) * p(B|A) <= M/N, which is the entire reason the
    scheme cannot beat random search.
    """
    state = encoded_state(instance, config)
    layout = state.layout
    low = instance.costs < config.c_tol
    low_composites = (np.nonzero(low)[0] << layout.n_anc) | 0

    joint = joint_distribution(state)
    direct = float(joint.probs[low_composites].sum())

    p_first = marginal_probability(state, ANCILLA, 0)
    via_ancilla = None
    if p_first > EPS_PROB:
        _, conditional = postselect(state, ANCILLA, 0)
        p_a_given_b = float(marginal_distribution(conditional, DATA).probs[low].sum())
        via_ancilla = p_a_given_b * p_first

    via_cost = None
    p_b_given_a = None
    if count_below(instance, config.c_tol) >= 1:
        data_marg = marginal_distribution(state, DATA).probs
        p_a = float(data_marg[low].sum())
        anc0 = np.abs(state.grid()[:, 0]) ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            cond_b_given_k = np.where(data_marg > EPS_PROB, anc0 / data_marg, 0.0)
        p_b_given_a = float((data_marg[low] * cond_b_given_k[low]).sum()) / p_a
        via_cost = p_b_given_a * p_a

    return ChainDecomposition(direct, via_ancilla, via_cost, p_b_given_a)


def sequential_vs_joint_check(instance: CostInstance, config: RunConfig) -> float:
    """Total variation distance between the two measurement orderings.

    Builds the distribution over (data, ancilla) outcomes once from the joint
    Born rule and once as ancilla-marginal times post-selected data
    conditional, summed over ancilla outcomes.  The law of total probability
    says the distance is zero; the contract allows 1e-10 of float slack.
    """
    state = encoded_state(instance, config)
    layout = state.layout
    joint = joint_distribution(state)

    rebuilt = np.zeros(layout.total_dim)
    data_indices = np.arange(layout.data_dim)
    for a in range(layout.anc_dim):
        p_a = marginal_probability(state, ANCILLA, a)
        if p_a <= EPS_PROB:
            continue
        _, conditional = postselect(state, ANCILLA, a)
        cond_data = marginal_distribution(conditional, DATA).probs
        rebuilt[(data_indices << layout.n_anc) | a] = p_a * cond_data
    return joint.total_variation(OutcomeDistribution(rebuilt))


def wilson_interval(hits: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    p_hat = hits / trials
    denom = 1.0 + z**2 / trials
    center = (p_hat + z**2 / (2 * trials)) / denom
    half = z * math.sqrt(p_hat * (1 - p_hat) / trials + z**2 / (4 * trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def run_repeat_until_success(instance: CostInstance, config: RunConfig) -> TrialStats:
    """Sample the full protocol: prepare, encode, measure ancilla, retry on junk.

    Every preparation is an independent draw from the same encoded state, so
    the run consumes the whole `max_preparations` budget and counts every
    accepted sample and every low-cost hit along the way (back-to-back
    repeat-until-success episodes); `first_hit_preparation` records when the
    first episode would have stopped.  Deterministic for a fixed seed.
    """
    state = encoded_state(instance, config)
    layout = state.layout
    rng = np.random.default_rng(config.seed)
    budget = config.max_preparations

    anc_probs = marginal_distribution(state, ANCILLA).probs
    anc_draws = rng.choice(layout.anc_dim, size=budget, p=anc_probs / anc_probs.sum())
    accepted_at = np.nonzero(anc_draws == 0)[0]

    hits = np.zeros(0, dtype=bool)
    if accepted_at.size:
        _, conditional = postselect(state, ANCILLA, 0)
        cond_data = marginal_distribution(conditional, DATA).probs
        data_draws = rng.choice(
            layout.data_dim, size=accepted_at.size, p=cond_data / cond_data.sum()
        )
        hits = instance.costs[data_draws] < config.c_tol

    n_hits = int(hits.sum())
    first_hit = int(accepted_at[np.nonzero(hits)[0][0]]) + 1 if n_hits else None
    ci_low, ci_high = wilson_interval(n_hits, budget)
    return TrialStats(
        preparations_used=budget,
        accepted_samples=int(accepted_at.size),
        low_cost_hits=n_hits,
        p_joint_estimate=n_hits / budget,
        ci_low=ci_low,
        ci_high=ci_high,
        expected_preparations_per_hit=budget / n_hits if n_hits else math.inf,
        first_hit_preparation=first_hit,
    )
