"""Single-arm subsidy machinery and the relaxed activation constraint.

With a subsidy lam paid for every passive slot, the optimal single-arm
policy is a pair of stopping rules: probe t0* slots after a 0-observation
and t0* + 1 slots after a 1-observation.  Renewal-reward over probe cycles
gives the average reward

    g(lam) = ( lam (t0 - 1 + p(t0)) - c sum_{k<=t0} p(k) ) / ( t0 + p(t0) )

maximised over t0, and the activation rate 1 / (t0* + p(t0*)).  When the
per-slot probe budget K binds only on average, the optimal policy runs
each arm's subsidy policy at a common multiplier lam*, chosen so the
activation rates sum to K, randomising at index-equal states to hit the
boundary exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arm import ArmState
from .attack import ComponentSpec, MarkovIID, Table, marginal_p
from .whittle import index_values, whittle_index

DEFAULT_T_CAP = 10_000
_CONVERGENCE_EPS = 1e-12
_MASS_EPS = 1e-15


@dataclass(frozen=True)
class SubsidyPolicy:
    """Probe delays after a 0- and a 1-observation.  t1_star = t0_star + 1
    for nonnegative subsidies; a negative subsidy makes every state active."""

    t0_star: int
    t1_star: int


@dataclass(frozen=True)
class GainResult:
    """Maximum average reward per slot under the subsidy, and its argmax."""

    g: float
    t0_star: int


@dataclass(frozen=True)
class RelaxedPlan:
    """Common multiplier lam*, per-arm boundary mixing probabilities, and
    the resulting stopping delays and activation rates."""

    lambda_star: float
    mixing: tuple
    t0_star: tuple
    rates: tuple


def _objective(spec: ComponentSpec, lam: float, t: int, p_t: float, cum: float) -> float:
    return (lam * (t - 1.0 + p_t) - spec.cost * cum) / (t + p_t)


def _best_stopping(spec: ComponentSpec, lam: float, t_cap: int):
    """Scan t0 = 1..t_cap for the largest cycle reward, smallest argmax on
    ties.  Once the marginals have converged the tail of the objective is
    monotone toward lam - c p_inf, so the scan can stop (or jump straight
    to the cap when the tail still improves)."""
    proc, c = spec.process, spec.cost
    table_len = len(proc.values) if isinstance(proc, Table) else None
    best_t, best_v = 1, None
    cum = 0.0
    t = 1
    while t <= t_cap:
        p_t = marginal_p(proc, t)
        cum += p_t
        v = _objective(spec, lam, t, p_t, cum)
        if best_v is None or v > best_v:
            best_t, best_v = t, v
        converged = (table_len is not None and t >= table_len) or (
            table_len is None and 1.0 - p_t <= _CONVERGENCE_EPS
        )
        if converged:
            # In the constant-marginal tail the objective approaches
            # lam - c*p monotonically; its sign of approach is fixed.
            limit = lam - c * p_t
            if limit > best_v and t < t_cap:
                cum_cap = cum + (t_cap - t) * p_t
                v_cap = _objective(spec, lam, t_cap, p_t, cum_cap)
                if v_cap > best_v:
                    best_t, best_v = t_cap, v_cap
            break
        t += 1
    return best_t, best_v


def optimal_stopping(spec: ComponentSpec, lam: float, t_cap: int = DEFAULT_T_CAP) -> SubsidyPolicy:
    """Optimal probe delays under subsidy lam, searching t0 in [1, t_cap]."""
    if t_cap < 1:
        raise ValueError(f"t_cap must be >= 1, got {t_cap}")
    if lam < 0.0:
        return SubsidyPolicy(t0_star=1, t1_star=1)
    t0, _ = _best_stopping(spec, lam, t_cap)
    return SubsidyPolicy(t0_star=t0, t1_star=t0 + 1)


def gain(spec: ComponentSpec, lam: float, t_cap: int = DEFAULT_T_CAP) -> GainResult:
    """Average reward of the optimal stopping rule (cycle-reward formula
    evaluated at t0*; a negative subsidy pins t0* = 1)."""
    if t_cap < 1:
        raise ValueError(f"t_cap must be >= 1, got {t_cap}")
    if lam < 0.0:
        p1 = marginal_p(spec.process, 1)
        return GainResult(g=_objective(spec, lam, 1, p1, p1), t0_star=1)
    t0, v = _best_stopping(spec, lam, t_cap)
    return GainResult(g=v, t0_star=t0)


def activation_rate(spec: ComponentSpec, lam: float, t_cap: int = DEFAULT_T_CAP) -> float:
    """Long-run fraction of active slots, 1 / (t0* + p(t0*)): each probe
    cycle lasts t0* slots plus one more when the probe finds the component
    abnormal."""
    pol = optimal_stopping(spec, lam, t_cap)
    t0 = pol.t0_star
    return 1.0 / (t0 + marginal_p(spec.process, t0))


class _IndexCache:
    """Growable W(0, t) lookup sharing the index_values accumulation."""

    def __init__(self, spec: ComponentSpec):
        self.spec = spec
        self.vals = index_values(spec, 64)

    def __getitem__(self, t: int) -> float:
        while t >= len(self.vals):
            self.vals = index_values(self.spec, 2 * (len(self.vals) - 1))
        return self.vals[t]


def _activation_prob(w: float, lam: float, gamma: float) -> float:
    if w > lam:
        return 1.0
    if w == lam:
        return gamma
    return 0.0


def _interval_stats(spec: ComponentSpec, lam: float, gamma: float, start_obs: int,
                    cache: _IndexCache, walk_cap: int):
    """Distribution of the gap until the next probe after an observation.

    After a 0-observation the component restarts immediately, so g slots
    later it is abnormal with probability p(g) and the interval accrues
    cost c * sum_{k<=g} p(k).  After a 1-observation the repair lands one
    slot later and everything shifts by one.  Returns (E[gap],
    P(next observation = 1), E[interval cost], unprobed residual mass).
    """
    proc, c = spec.process, spec.cost
    mass = 1.0
    e_gap = p_obs1 = e_cost = 0.0
    cum = 0.0
    for g in range(1, walk_cap + 1):
        if start_obs == 0:
            b = marginal_p(proc, g)
            cum += b
            cost_here = cum
            a = _activation_prob(cache[g], lam, gamma)
        else:
            b = marginal_p(proc, g - 1)
            cum += b
            cost_here = cum
            a = _activation_prob(cache[g - 1], lam, gamma)
        pr = mass * a
        if pr > 0.0:
            e_gap += pr * g
            p_obs1 += pr * b
            e_cost += pr * cost_here * c
        mass *= 1.0 - a
        if mass < _MASS_EPS:
            mass = 0.0
            break
    return e_gap, p_obs1, e_cost, mass


def _policy_rates(spec: ComponentSpec, lam: float, gamma: float,
                  walk_cap: int = 200_000):
    """Stationary (activation rate, cost rate) of the threshold-with-mixing
    policy: active when the state index exceeds lam, passive below it,
    Bernoulli(gamma) at index-equal states.

    Probes form a Markov renewal process alternating interval types by the
    last observation; solving for the stationary observation mix gives the
    long-run rates.  If the walk leaves unprobed mass the arm is eventually
    parked forever, so the activation rate is zero.
    """
    cache = _IndexCache(spec)
    e0, b0, c0, m0 = _interval_stats(spec, lam, gamma, 0, cache, walk_cap)
    if m0 > 1e-9:
        p_inf = marginal_p(spec.process, walk_cap)
        return 0.0, spec.cost * p_inf
    e1, b1, c1, _ = _interval_stats(spec, lam, gamma, 1, cache, walk_cap)
    denom = 1.0 - b1 + b0
    theta = b0 / denom if denom > 0.0 else 0.0
    e_len = (1.0 - theta) * e0 + theta * e1
    rate = 1.0 / e_len
    cost_rate = ((1.0 - theta) * c0 + theta * c1) / e_len
    return rate, cost_rate


def average_cost_rate(spec: ComponentSpec, lam: float, gamma: float = 0.0) -> float:
    """Long-run abnormal cost per slot under the subsidy-lam policy."""
    return _policy_rates(spec, lam, gamma)[1]


def _total_rate(specs, lam: float, gamma: float) -> float:
    return sum(_policy_rates(s, lam, gamma)[0] for s in specs)


def solve_lambda_star(specs, K: int, t_cap: int = DEFAULT_T_CAP) -> RelaxedPlan:
    """Smallest multiplier at which the summed activation rates cross K,
    with boundary mixing chosen so the crossing is hit exactly.

    The summed rate is a nonincreasing step function of lam whose jumps sit
    at the arms' index values, so it suffices to scan those candidates and
    bisect the common mixing probability at the jump that straddles K.
    """
    specs = list(specs)
    n = len(specs)
    if not 1 <= K < n:
        raise ValueError(f"need 1 <= K < N, got K={K}, N={n}")

    def solve_gamma(lam: float) -> float:
        lo, hi = 0.0, 1.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if _total_rate(specs, lam, mid) < K:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def finish(lam: float) -> RelaxedPlan:
        g = solve_gamma(lam)
        mixing, t0s, rates = [], [], []
        for s in specs:
            lo_rate = _policy_rates(s, lam, 0.0)[0]
            hi_rate = _policy_rates(s, lam, 1.0)[0]
            boundary = hi_rate != lo_rate
            mixing.append(g if boundary else 0.0)
            t0s.append(optimal_stopping(s, lam, t_cap).t0_star)
            rates.append(_policy_rates(s, lam, g if boundary else 0.0)[0])
        return RelaxedPlan(lambda_star=lam, mixing=tuple(mixing),
                           t0_star=tuple(t0s), rates=tuple(rates))

    if _total_rate(specs, 0.0, 0.0) <= K:
        return finish(0.0)

    t_limit = 64
    while True:
        cands = set()
        for s in specs:
            w = index_values(s, min(t_limit, t_cap))
            cands.update(v for v in w[1:] if v > 0.0)
        for lam in sorted(cands):
            if _total_rate(specs, lam, 0.0) <= K + 1e-12:
                return finish(lam)
        if t_limit >= t_cap:
            raise RuntimeError(
                f"no multiplier within the stopping cap {t_cap} meets the budget K={K}"
            )
        t_limit = min(2 * t_limit, t_cap)


def relaxed_select(specs, states, plan: RelaxedPlan, rng) -> tuple:
    """Arms activated this slot under the relaxed plan: index above lam*
    activates, below deactivates, equal mixes via the caller's generator.
    The number of active arms varies slot to slot; only its average is K."""
    active = []
    for idx, (spec, state) in enumerate(zip(specs, states)):
        w = whittle_index(spec, state)
        if w > plan.lambda_star:
            active.append(idx)
        elif w == plan.lambda_star and rng.random() < plan.mixing[idx]:
            active.append(idx)
    return tuple(active)


def single_arm_q(spec: ComponentSpec, lam: float, state: ArmState, horizon: int):
    """Finite-horizon action values of the subsidy bandit at one state.

    Backward induction on total reward (subsidy for passivity minus
    expected abnormal cost), independent of the closed-form index; used to
    confirm that the index is exactly the subsidy making both actions
    equally good.  Returns (passive value, active value).
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if state.t < 1:
        raise ValueError("action values are undefined at the (0,0) sentinel")
    proc, c = spec.process, spec.cost
    tmax = state.t + horizon + 2
    p = np.array([marginal_p(proc, k) for k in range(tmax + 2)])
    b0 = p[1 : tmax + 1]
    b1 = p[0:tmax]
    v0 = np.zeros(tmax + 2)
    v1 = np.zeros(tmax + 2)
    for _ in range(horizon - 1):
        probe_cont = b0 * v1[1] + (1.0 - b0) * v0[1]
        pas0 = lam - c * b0 + v0[2 : tmax + 2]
        act0 = -c * b0 + probe_cont
        probe_cont1 = b1 * v1[1] + (1.0 - b1) * v0[1]
        pas1 = lam - c * b1 + v1[2 : tmax + 2]
        act1 = -c * b1 + probe_cont1
        nv0 = np.zeros(tmax + 2)
        nv1 = np.zeros(tmax + 2)
        nv0[1 : tmax + 1] = np.maximum(pas0, act0)
        nv1[1 : tmax + 1] = np.maximum(pas1, act1)
        v0, v1 = nv0, nv1
    b = marginal_p(proc, state.t - state.i)
    vown = v0 if state.i == 0 else v1
    q_passive = lam - c * b + vown[state.t + 1]
    q_active = -c * b + b * v1[1] + (1.0 - b) * v0[1]
    return q_passive, q_active


def indifference_gap(spec: ComponentSpec, state: ArmState, lam: float, horizon: int = 200) -> float:
    """|passive - active| value gap of the subsidy bandit at `state`."""
    q_passive, q_active = single_arm_q(spec, lam, state, horizon)
    return abs(q_passive - q_active)
