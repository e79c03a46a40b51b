"""Seeded random problem generators for sweeps and property tests."""
from __future__ import annotations

from itertools import product

import numpy as np

from .reps import P_TORUS, TORUS, GroupDescriptor, Representation


def nonzero_vectors(p: int, k: int) -> list[tuple[int, ...]]:
    return [v for v in product(range(p), repeat=k) if any(v)]


def _random_rep(rng: np.random.Generator, group: GroupDescriptor, pool: list, n_slots: int) -> Representation:
    slots = [pool[rng.integers(len(pool))] for _ in range(n_slots)]
    return Representation.from_slots(group, slots)


def random_problem(rng: np.random.Generator, p: int, k: int, max_d: int = 12) -> tuple[Representation, Representation]:
    """Random ``(V, W)`` over ``Z_p^k`` with ``d(V) + d(W) <= max_d``.

    W draws half of its slots from the lines of V, so both verdicts occur.
    """
    group = GroupDescriptor(P_TORUS, k, p)
    allv = nonzero_vectors(p, k)
    nv = int(rng.integers(1, max_d))
    nw = int(rng.integers(0, max_d - nv + 1))
    n_distinct = int(rng.integers(1, min(len(allv), 4) + 1))
    pool = [allv[i] for i in rng.choice(len(allv), n_distinct, replace=False)]
    V = _random_rep(rng, group, pool, nv)
    near = [tuple((j * x) % p for x in w) for w in V.slots for j in range(1, p)]
    slots = [
        near[rng.integers(len(near))] if rng.random() < 0.6 else allv[rng.integers(len(allv))]
        for _ in range(nw)
    ]
    W = Representation.from_slots(group, slots)
    return V, W


def random_torus_problem(rng: np.random.Generator, k: int, max_d: int = 12, box: int = 3) -> tuple[Representation, Representation]:
    group = GroupDescriptor(TORUS, k)
    pool = [v for v in product(range(-box, box + 1), repeat=k) if any(v)]
    nv = int(rng.integers(1, max_d))
    nw = int(rng.integers(0, max_d - nv + 1))
    return _random_rep(rng, group, pool, nv), _random_rep(rng, group, pool, nw)


def sweep(seed: int, n: int, primes=(2, 3, 5), max_rank: int = 3, max_d: int = 12):
    """``n`` seeded p-torus instances cycling through ``primes``."""
    rng = np.random.default_rng(seed)
    for i in range(n):
        p = primes[i % len(primes)]
        k = int(rng.integers(1, max_rank + 1))
        V, W = random_problem(rng, p, k, max_d)
        yield p, k, V, W
