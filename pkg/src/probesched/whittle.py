"""Closed-form Whittle indices for the reset-monitoring bandit.

For a component with marginals p and per-slot abnormal cost c the index of
arm state (0, t) is

    W(0, t) = ( p(t+1) (t + p(t)) / (1 + p(t+1) - p(t)) - sum_{k<=t} p(k) ) * c

with W(0, 0) = 0, and W(1, t) = W(0, t-1) because a repaired component lags
a reset one by exactly one slot.  Under strictly concave marginals W(0, .)
is strictly increasing, which makes the index the infimum passivity subsidy
at each state.
"""

from __future__ import annotations

from functools import lru_cache

from .arm import ArmState
from .attack import ComponentSpec, marginal_p


def index_values(spec: ComponentSpec, horizon: int) -> list:
    """W(0, t) for t = 0..horizon, by forward accumulation of sum p(k)."""
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    proc, c = spec.process, spec.cost
    out = [0.0]
    cum = 0.0
    p_t = 0.0
    for t in range(1, horizon + 1):
        p_t = marginal_p(proc, t)
        p_next = marginal_p(proc, t + 1)
        cum += p_t
        out.append((p_next * (t + p_t) / (1.0 + p_next - p_t) - cum) * c)
    return out


@lru_cache(maxsize=512)
def _cached_values(spec: ComponentSpec, horizon: int) -> tuple:
    return tuple(index_values(spec, horizon))


def whittle_index(spec: ComponentSpec, state: ArmState) -> float:
    """Whittle index of an arm state; W(1, t) shares the W(0, t-1) code
    path bit for bit.

    Values are memoised per spec in power-of-two blocks; the forward
    accumulation makes every prefix independent of the block length, so
    cached and uncached lookups agree bitwise.
    """
    t = state.t - state.i
    if t < 0:
        raise ValueError(f"no index is defined at (i={state.i}, t={state.t})")
    horizon = 8
    while horizon < t:
        horizon *= 2
    return _cached_values(spec, horizon)[t]


def verify_strict_indexability(spec: ComponentSpec, horizon: int) -> bool:
    """True iff W(0, t) is strictly increasing for 0 <= t <= horizon,
    the exact characterisation of states leaving the active set one at a
    time as the subsidy grows."""
    if horizon < 2:
        raise ValueError(f"horizon must be >= 2, got {horizon}")
    w = index_values(spec, horizon)
    return all(a < b for a, b in zip(w, w[1:]))


def index_table(spec: ComponentSpec, horizon: int) -> list:
    """[(state, index)] for (0, 1..horizon) then (1, 1..horizon)."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    w = index_values(spec, horizon)
    rows = [(ArmState(0, t), w[t]) for t in range(1, horizon + 1)]
    rows += [(ArmState(1, t), w[t - 1]) for t in range(1, horizon + 1)]
    return rows
