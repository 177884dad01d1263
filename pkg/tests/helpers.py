"""Shared fixtures: reference processes and random spec generators."""

import numpy as np

from probesched import ComponentSpec, MarkovIID, Table

# Concave marginal table used by the bundled index preset: p(1)..p(8).
CONCAVE8 = (0.5, 0.7, 0.85, 0.95, 0.97, 0.975, 0.978, 0.98)


def concave_spec(cost=1.0):
    return ComponentSpec(Table(CONCAVE8), cost)


def markov_spec(q=0.5, cost=1.0):
    return ComponentSpec(MarkovIID(q), cost)


def random_concave_table(rng, length=14, ceiling=0.98):
    """Strictly concave marginals: geometric increments, sum below 1."""
    ratio = rng.uniform(0.4, 0.85)
    total = rng.uniform(0.5, ceiling)
    weights = ratio ** np.arange(length)
    deltas = weights / weights.sum() * total
    return Table(tuple(np.cumsum(deltas)))


def random_strict_specs(n, seed, table_length=14):
    """Specs whose increments are strictly decreasing everywhere that the
    index enumeration reaches: memoryless arms and strictly concave tables."""
    rng = np.random.default_rng(seed)
    specs = []
    for k in range(n):
        cost = float(rng.uniform(0.3, 3.0))
        if k % 2 == 0:
            specs.append(ComponentSpec(MarkovIID(float(rng.uniform(0.06, 0.94))), cost))
        else:
            specs.append(ComponentSpec(random_concave_table(rng, table_length), cost))
    return specs
