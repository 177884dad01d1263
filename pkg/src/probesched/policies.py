"""Slot-by-slot arm selection rules.

All selectors break ties by the same deterministic chain: larger index,
then larger cost-weighted abnormal belief, then longer time since the last
probe, then smaller arm id.  The probe-age layer is what makes the index,
myopic and queue policies coincide selection-for-selection on homogeneous
components instead of merely up to exchangeable sets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arm import ArmState, belief_abnormal
from .whittle import whittle_index

POLICY_NAMES = ("whittle", "myopic", "queue", "random")


def _validate(specs, states, k: int) -> int:
    n = len(specs)
    if len(states) != n:
        raise ValueError(f"{n} specs but {len(states)} states")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= K <= N, got K={k}, N={n}")
    return n


def _take(keys, k: int) -> tuple:
    keys.sort()
    return tuple(sorted(key[-1] for key in keys[:k]))


def select_whittle(specs, states, k: int) -> tuple:
    """The K arms with the largest Whittle indices."""
    _validate(specs, states, k)
    keys = [
        (-whittle_index(s, st), -s.cost * belief_abnormal(s, st), -st.t, idx)
        for idx, (s, st) in enumerate(zip(specs, states))
    ]
    return _take(keys, k)


def select_myopic(specs, states, k: int) -> tuple:
    """The K arms with the largest abnormal probabilities right now.

    Deliberately greedy and cost-blind in its primary key (the cost enters
    only through the shared tie-break); it coincides with the index policy
    on homogeneous components and serves as the baseline it is measured
    against elsewhere.
    """
    _validate(specs, states, k)
    keys = [
        (-belief_abnormal(s, st), -s.cost * belief_abnormal(s, st), -st.t, idx)
        for idx, (s, st) in enumerate(zip(specs, states))
    ]
    return _take(keys, k)


def select_random(n: int, k: int, rng) -> tuple:
    """A uniform K-subset drawn from the caller's generator."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= K <= N, got K={k}, N={n}")
    picked = rng.choice(n, size=k, replace=False)
    return tuple(sorted(int(a) for a in picked))


@dataclass(frozen=True)
class QueueState:
    """Probe order for the parameter-free homogeneous policy; the head
    arms are probed next."""

    order: tuple


def queue_init(n: int, initial_order) -> QueueState:
    if n < 1:
        raise ValueError(f"need N >= 1, got {n}")
    order = tuple(int(a) for a in initial_order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{initial_order!r} is not a permutation of 0..{n - 1}")
    return QueueState(order=order)


def queue_step(queue: QueueState, k: int, observations: dict):
    """Probe the K head arms and requeue them at the bottom, those observed
    healthy above those observed abnormal, each group in arm-id order.

    A probed-abnormal arm is one repair slot behind a probed-healthy one,
    so it stays below it (and below the next cohort's healthy arms, whose
    abnormal probability it matches) for the rest of time.  Id-ordering
    inside each group mirrors the selectors' final tie-break, keeping the
    queue and the index policy aligned arm for arm.
    """
    n = len(queue.order)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= K <= N, got K={k}, N={n}")
    head = queue.order[:k]
    if set(observations) != set(head):
        raise ValueError(
            f"observations {sorted(observations)} do not match the probed head {sorted(head)}"
        )
    for a, o in observations.items():
        if o not in (0, 1):
            raise ValueError(f"observation for arm {a} must be 0 or 1, got {o!r}")
    selection = tuple(sorted(head))
    healthy = sorted(a for a in head if observations[a] == 0)
    abnormal = sorted(a for a in head if observations[a] == 1)
    return selection, QueueState(order=queue.order[k:] + tuple(healthy) + tuple(abnormal))


def whittle_policy(specs, k: int):
    """A stationary selector closure for the exact-evaluation machinery."""
    return lambda states: select_whittle(specs, states, k)


def myopic_policy(specs, k: int):
    return lambda states: select_myopic(specs, states, k)
