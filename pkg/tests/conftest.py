from itertools import combinations, product

import pytest


def all_vectors(p, k):
    return list(product(range(p), repeat=k))


def brute_span(gens, p, k):
    """Set of all F_p-combinations of ``gens`` by direct enumeration."""
    gens = list(gens)
    out = set()
    for coeffs in product(range(p), repeat=len(gens)):
        out.add(tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) % p for i in range(k)))
    if not gens:
        out.add(tuple([0] * k))
    return frozenset(out)


def brute_all_subspaces(p, k):
    """Every subspace of F_p^k as a frozenset of elements.

    Grows subspaces one vector at a time with set arithmetic only.
    """
    vecs = all_vectors(p, k)
    zero = frozenset([tuple([0] * k)])
    subs = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for S in frontier:
            for v in vecs:
                if v in S:
                    continue
                T = frozenset(
                    tuple((a + c * b) % p for a, b in zip(s, v)) for s in S for c in range(p)
                )
                if T not in subs:
                    subs.add(T)
                    nxt.append(T)
        frontier = nxt
    return subs


def brute_annihilator(elements, p, k):
    return frozenset(
        b for b in all_vectors(p, k) if all(sum(x * y for x, y in zip(b, s)) % p == 0 for s in elements)
    )


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
