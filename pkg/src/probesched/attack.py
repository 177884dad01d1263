"""Per-component attack processes.

A component's exposure is summarised by the marginal probability p(t) that
it is abnormal t slots after its last reset.  p(0) = 0 by the reset
convention and p is nondecreasing because the abnormal state is absorbing
until the component is probed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class MarkovIID:
    """Memoryless attacks: an exposed component is compromised with
    probability q in each slot, so p(t) = 1 - (1-q)^t."""

    q: float

    def __post_init__(self):
        if not (isinstance(self.q, (int, float)) and 0.0 < self.q < 1.0):
            raise ValueError(f"q must lie in (0, 1), got {self.q!r}")


@dataclass(frozen=True)
class Table:
    """Tabulated marginals p(1), p(2), ... (p(0) = 0 is implicit).

    The entries must be nondecreasing probabilities; queries past the end
    of the table clamp to the last entry.
    """

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("a table process needs at least one entry")
        prev = 0.0
        for k, v in enumerate(vals, start=1):
            if math.isnan(v) or not 0.0 <= v <= 1.0:
                raise ValueError(f"p({k}) = {v} lies outside [0, 1]")
            if v < prev:
                raise ValueError(f"p({k}) = {v} decreases below p({k - 1}) = {prev}")
            prev = v


AttackProcess = MarkovIID | Table


@dataclass(frozen=True)
class ComponentSpec:
    """An attack process together with the per-slot cost of being abnormal."""

    process: AttackProcess
    cost: float

    def __post_init__(self):
        if not (isinstance(self.process, (MarkovIID, Table))):
            raise ValueError(f"unsupported process {self.process!r}")
        c = float(self.cost)
        if math.isnan(c) or c < 0.0:
            raise ValueError(f"cost must be nonnegative, got {self.cost!r}")
        object.__setattr__(self, "cost", c)


def marginal_p(process: AttackProcess, t: int) -> float:
    """P(abnormal t slots after a reset).  Pure; clamps table overruns."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0:
        return 0.0
    if isinstance(process, MarkovIID):
        return 1.0 - (1.0 - process.q) ** t
    vals = process.values
    return vals[t - 1] if t <= len(vals) else vals[-1]


def hazard(process: AttackProcess, t: int) -> float:
    """Conditional flip probability at step t since reset.

    h(t) = (p(t) - p(t-1)) / (1 - p(t-1)), the 0->1 transition rate whose
    products reproduce the marginals.  When p(t-1) = 1 the conditioning
    event is vacuous and the hazard is 1 by convention.
    """
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if isinstance(process, MarkovIID):
        return process.q
    prev = marginal_p(process, t - 1)
    if prev >= 1.0:
        return 1.0
    return (marginal_p(process, t) - prev) / (1.0 - prev)


def check_c1(process: AttackProcess, horizon: int) -> bool:
    """True iff the increments p(t+1) - p(t) are strictly decreasing over
    1 <= t <= horizon - 1.

    Strictly concave marginals guarantee strict indexability of the
    closed-form index.  Memoryless processes satisfy this for every
    horizon (increments q(1-q)^t); clamped tables fail once two zero
    increments fall inside the window.
    """
    if horizon < 2:
        raise ValueError(f"horizon must be >= 2, got {horizon}")
    if isinstance(process, MarkovIID):
        return True
    deltas = [
        marginal_p(process, t + 1) - marginal_p(process, t)
        for t in range(1, horizon)
    ]
    return all(a > b for a, b in zip(deltas, deltas[1:]))


def process_to_json(process: AttackProcess) -> dict:
    if isinstance(process, MarkovIID):
        return {"kind": "markov", "q": process.q}
    return {"kind": "table", "p": list(process.values)}


def process_from_json(obj: dict) -> AttackProcess:
    kind = obj.get("kind")
    if kind == "markov":
        if "q" not in obj:
            raise ValueError("markov process needs a 'q' field")
        return MarkovIID(q=float(obj["q"]))
    if kind == "table":
        if "p" not in obj:
            raise ValueError("table process needs a 'p' field")
        return Table(values=tuple(obj["p"]))
    raise ValueError(f"unknown process kind {kind!r}")


def component_to_json(spec: ComponentSpec) -> dict:
    out = process_to_json(spec.process)
    out["cost"] = spec.cost
    return out


def component_from_json(obj: dict) -> ComponentSpec:
    if "cost" not in obj:
        raise ValueError("component descriptor needs a 'cost' field")
    return ComponentSpec(process=process_from_json(obj), cost=float(obj["cost"]))
