from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from equimaps.exactalg import (
    AlgebraInputError,
    annihilator,
    full_subspace,
    hnf,
    integer_orthogonal,
    lattice_contains,
    lattice_full,
    lattice_zero,
    mod_inverse,
    rref,
    saturate,
    span_of_subsets,
    zero_subspace,
)

from conftest import all_vectors, brute_all_subspaces, brute_annihilator, brute_span

SMALL = [(p, k) for p in (2, 3, 5) for k in (1, 2, 3)]


# --- rref --------------------------------------------------------------------


def test_rref_dependent_rows_f3():
    # r2 - 2 r1 = (2,1) - (2,4) = (0,-3) = 0 mod 3
    S = rref([(1, 2), (2, 1)], 3)
    assert S.basis == ((1, 2),) and S.rank == 1


def test_rref_zero_row():
    S = rref([(0, 0)], 3)
    assert S.basis == () and S.rank == 0


def test_rref_identity_f2():
    assert rref([(1, 0), (0, 1)], 2).basis == ((1, 0), (0, 1))


def test_rref_rejects_mixed_lengths_and_composite():
    with pytest.raises(AlgebraInputError):
        rref([(1, 0), (1,)], 3)
    with pytest.raises(AlgebraInputError):
        rref([(1, 0)], 4)


def _is_strict_rref(S):
    last = -1
    for i, row in enumerate(S.basis):
        piv = next(c for c, x in enumerate(row) if x)
        if row[piv] != 1 or piv <= last:
            return False
        if any(other[piv] for j, other in enumerate(S.basis) if j != i):
            return False
        last = piv
    return True


@pytest.mark.parametrize("p,k", SMALL)
def test_rref_is_canonical_over_all_subspaces(p, k):
    for elems in brute_all_subspaces(p, k):
        S = rref(list(elems), p, k)
        assert _is_strict_rref(S)
        assert rref(S.basis, p, k) == S
        assert frozenset(S.elements()) == elems


@settings(max_examples=60, deadline=None)
@given(
    st.sampled_from([2, 3, 5, 7]),
    st.integers(1, 4),
    st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=1, max_size=4),
    st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(1, 6)), max_size=8),
)
def test_rref_invariant_under_change_of_basis(p, k, raw, ops):
    rows = [[x % p for x in r[:k]] for r in raw]
    S = rref(rows, p, k)
    # Elementary row operations: r_i += c r_j (i != j) or r_i *= c (i == j, c a unit).
    m = len(rows)
    mixed = [list(r) for r in rows]
    for i, j, c in ops:
        i, j, c = i % m, j % m, c % p
        if i != j:
            mixed[i] = [(a + c * b) % p for a, b in zip(mixed[i], mixed[j])]
        elif c:
            mixed[i] = [(a * c) % p for a in mixed[i]]
    assert rref(mixed, p, k) == S


# --- annihilator ----------------------------------------------------------------


def test_annihilator_examples():
    assert annihilator(rref([(1, 0)], 3)) == rref([(0, 1)], 3)
    assert annihilator(zero_subspace(3, 5)) == full_subspace(3, 5)
    assert annihilator(full_subspace(2, 2)) == zero_subspace(2, 2)


@pytest.mark.parametrize("p,k", SMALL)
def test_annihilator_matches_enumeration_and_involution(p, k):
    for elems in brute_all_subspaces(p, k):
        S = rref(list(elems), p, k)
        A = annihilator(S)
        assert frozenset(A.elements()) == brute_annihilator(elems, p, k)
        assert S.rank + A.rank == k
        assert annihilator(A) == S


# --- mod_inverse --------------------------------------------------------------


def test_mod_inverse_examples():
    assert mod_inverse(2, 5) == 3
    assert mod_inverse(1, 7) == 1
    assert mod_inverse(1, 2) == 1
    with pytest.raises(AlgebraInputError):
        mod_inverse(5, 5)


@pytest.mark.parametrize("p", [p for p in range(2, 98) if all(p % d for d in range(2, p))])
def test_mod_inverse_all_units(p):
    for j in range(1, p):
        e = mod_inverse(j, p)
        assert 1 <= e <= p - 1 and (e * j) % p == 1


# --- span_of_subsets ----------------------------------------------------------


def test_span_of_subsets_examples():
    spans = span_of_subsets([(1, 0), (0, 1)], 3)
    assert set(spans) == {rref([(1, 0)], 3), rref([(0, 1)], 3), full_subspace(2, 3)}
    assert span_of_subsets([(1, 0), (2, 0)], 3) == [rref([(1, 0)], 3)]
    assert span_of_subsets([(1, 1, 2)], 3) == [rref([(1, 1, 2)], 3)]


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_span_of_subsets_matches_all_subsets(p, k, rng):
    vecs = [v for v in all_vectors(p, k) if any(v)]
    for _ in range(15):
        n = int(rng.integers(1, 5))
        gens = [vecs[i] for i in rng.integers(len(vecs), size=n)]
        brute = {
            brute_span(sub, p, k) for r in range(1, n + 1) for sub in combinations(gens, r)
        }
        got = {frozenset(S.elements()) for S in span_of_subsets(gens, p)}
        assert got == brute


@pytest.mark.parametrize("p,k", SMALL)
def test_line_count(p, k):
    nonzero = [v for v in all_vectors(p, k) if any(v)]
    lines = [S for S in span_of_subsets(nonzero, p) if S.rank == 1]
    assert len(lines) == (p**k - 1) // (p - 1)
    # the brute-force count of 1-dimensional subspaces agrees
    assert len({brute_span([v], p, k) for v in nonzero}) == len(lines)


# --- integer lattices ------------------------------------------------------------


def test_hnf_examples():
    L = hnf([(2, 0), (0, 1)])
    assert L.basis == ((2, 0), (0, 1)) and L.rank == 2
    assert hnf([(1, 1), (1, 1)]).basis == ((1, 1),)
    assert hnf([], 3).rank == 0


def test_hnf_canonical_under_unimodular_change():
    rows = [(4, 6, 2), (1, 3, 5)]
    U = [[2, 1], [1, 1]]  # det 1
    mixed = [tuple(sum(U[i][j] * rows[j][c] for j in range(2)) for c in range(3)) for i in range(2)]
    assert hnf(mixed) == hnf(rows)
    H = hnf(rows)
    for i, row in enumerate(H.basis):
        piv = next(c for c, x in enumerate(row) if x)
        assert row[piv] > 0
        assert all(0 <= H.basis[j][piv] < row[piv] for j in range(i))


def test_saturate_examples():
    assert saturate(hnf([(2, 0), (0, 1)])) == lattice_full(2)
    assert saturate(hnf([(1, 1)])) == hnf([(1, 1)])
    assert saturate(hnf([(2, 2)])) == hnf([(1, 1)])


def test_integer_orthogonal_examples():
    assert integer_orthogonal(hnf([(0, 1)])) == hnf([(1, 0)])
    assert integer_orthogonal(lattice_zero(3)) == lattice_full(3)
    assert integer_orthogonal(lattice_full(3)) == lattice_zero(3)


int_rows = st.integers(1, 3).flatmap(
    lambda k: st.lists(st.lists(st.integers(-4, 4), min_size=k, max_size=k), min_size=0, max_size=3).map(
        lambda rows: (k, rows)
    )
)


def _rational_rank(rows, k):
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float).reshape(-1, k))) if rows else 0


@settings(max_examples=80, deadline=None)
@given(int_rows)
def test_orthogonal_and_saturation_properties(kr):
    k, rows = kr
    L = hnf(rows, k)
    O = integer_orthogonal(L)
    assert all(sum(a * b for a, b in zip(o, l)) == 0 for o in O.basis for l in L.basis)
    assert L.rank + O.rank == k
    assert L.rank == _rational_rank(rows, k)
    S = saturate(L)
    assert S.rank == L.rank
    assert all(lattice_contains(S, v) for v in L.basis)
    assert saturate(S) == S


@settings(max_examples=40, deadline=None)
@given(int_rows)
def test_saturation_against_box_enumeration(kr):
    # Oracle: integer points of a box lying in the rational span of L.
    k, rows = kr
    L = hnf(rows, k)
    S = saturate(L)
    r = L.rank
    for v in product(range(-3, 4), repeat=k):
        in_span = _rational_rank(list(L.basis) + [v], k) == r
        assert lattice_contains(S, v) == in_span
