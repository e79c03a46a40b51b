"""Exact linear algebra over F_p and over the integers.

Vectors are plain tuples of ints. Subspaces of F_p^k are stored by their
reduced row-echelon basis and integer lattices by their Hermite normal form,
so equality and hashing of the frozen dataclasses below is equality of the
underlying spans.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

FpVector = tuple[int, ...]
IntVector = tuple[int, ...]


class AlgebraInputError(ValueError):
    """Raised for malformed input to the exact-algebra routines."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise AlgebraInputError(f"modulus must be a prime, got {p!r}")
    return p


@dataclass(frozen=True)
class FpSubspace:
    """A subspace of F_p^k held by its canonical (RREF) basis."""

    basis: tuple[FpVector, ...]
    ambient_rank: int
    p: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, v: Sequence[int]) -> bool:
        v = tuple(int(x) % self.p for x in v)
        return rref(self.basis + (v,), self.p, self.ambient_rank).rank == self.rank

    def elements(self) -> list[FpVector]:
        """All p**rank vectors of the subspace (small cases only)."""
        out = [tuple([0] * self.ambient_rank)]
        for b in self.basis:
            out = [
                tuple((x + c * y) % self.p for x, y in zip(v, b))
                for v in out
                for c in range(self.p)
            ]
        return out

    def to_list(self) -> list[list[int]]:
        return [list(b) for b in self.basis]


@dataclass(frozen=True)
class IntLattice:
    """A sublattice of Z^k held by its Hermite normal form basis."""

    basis: tuple[IntVector, ...]
    ambient_rank: int

    @property
    def rank(self) -> int:
        return len(self.basis)

    def to_list(self) -> list[list[int]]:
        return [list(b) for b in self.basis]


def _as_rows(rows: Iterable[Sequence[int]], k: int | None) -> tuple[list[list[int]], int]:
    out = [[int(x) for x in r] for r in rows]
    lengths = {len(r) for r in out}
    if len(lengths) > 1:
        raise AlgebraInputError(f"rows of different lengths: {sorted(lengths)}")
    if lengths:
        n = lengths.pop()
        if k is not None and n != k:
            raise AlgebraInputError(f"rows have length {n}, expected {k}")
        k = n
    if k is None:
        raise AlgebraInputError("cannot infer ambient rank from an empty row list")
    return out, k


def rref(rows: Iterable[Sequence[int]], p: int, k: int | None = None) -> FpSubspace:
    """Row-reduce ``rows`` over F_p and return the canonical span."""
    check_prime(p)
    mat, k = _as_rows(rows, k)
    mat = [[x % p for x in r] for r in mat]
    pivot_row = 0
    for col in range(k):
        pivot = next((r for r in range(pivot_row, len(mat)) if mat[r][col]), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        inv = pow(mat[pivot_row][col], -1, p)
        mat[pivot_row] = [(x * inv) % p for x in mat[pivot_row]]
        for r in range(len(mat)):
            if r != pivot_row and mat[r][col]:
                c = mat[r][col]
                mat[r] = [(x - c * y) % p for x, y in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    basis = tuple(tuple(r) for r in mat[:pivot_row])
    return FpSubspace(basis, k, p)


def zero_subspace(k: int, p: int) -> FpSubspace:
    return FpSubspace((), k, check_prime(p))


def full_subspace(k: int, p: int) -> FpSubspace:
    return rref([[int(i == j) for j in range(k)] for i in range(k)], p, k)


def annihilator(S: FpSubspace) -> FpSubspace:
    """Vectors pairing to zero with every element of ``S``.

    Built from the RREF: each free column contributes one kernel vector.
    """
    p, k = S.p, S.ambient_rank
    pivots = [next(i for i, x in enumerate(b) if x) for b in S.basis]
    free = [c for c in range(k) if c not in pivots]
    rows = []
    for f in free:
        v = [0] * k
        v[f] = 1
        for b, pc in zip(S.basis, pivots):
            v[pc] = (-b[f]) % p
        rows.append(v)
    return rref(rows, p, k)


def mod_inverse(j: int, p: int) -> int:
    check_prime(p)
    if j % p == 0:
        raise AlgebraInputError(f"{j} is not invertible mod {p}")
    return pow(j, -1, p)


def span_of_subsets(vectors: Sequence[Sequence[int]], p: int) -> list[FpSubspace]:
    """Distinct spans of all nonempty subsets of ``vectors``.

    Breadth-first closure: every span reachable by adding one generator at a
    time, deduplicated on canonical form. Output is sorted by (rank, basis).
    """
    if not vectors:
        raise AlgebraInputError("need at least one vector")
    gens, k = _as_rows(vectors, None)
    singles = [rref([g], p, k) for g in gens]
    seen = set(singles)
    frontier = list(dict.fromkeys(singles))
    while frontier:
        nxt = []
        for S in frontier:
            for g in gens:
                T = rref(S.basis + (tuple(g),), p, k)
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(seen, key=lambda S: (S.rank, S.basis))


# --- integer lattices -----------------------------------------------------


def _hnf_with_transform(rows: list[list[int]], k: int) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF ``H = U @ A`` with ``U`` unimodular.

    Returns the full (m x k) H including trailing zero rows, and U (m x m).
    """
    m = len(rows)
    A = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for col in range(k):
        if r == m:
            break
        # Euclid down the column until a single nonzero entry remains at row r.
        while True:
            nz = [i for i in range(r, m) if A[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            done = True
            for i in range(r + 1, m):
                if A[i][col]:
                    q = A[i][col] // A[r][col]
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if not A[r][col]:
            continue
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = A[i][col] // A[r][col]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return A, U


def hnf(rows: Iterable[Sequence[int]], k: int | None = None) -> IntLattice:
    """Canonical Hermite normal form basis of the row lattice."""
    mat, k = _as_rows(rows, k)
    H, _ = _hnf_with_transform(mat, k)
    basis = tuple(tuple(r) for r in H if any(r))
    return IntLattice(basis, k)


def _integer_kernel(rows: list[list[int]], k: int) -> list[list[int]]:
    """Z-basis of {w in Z^k : A w = 0}; the result is always saturated."""
    if not rows:
        return [[int(i == j) for j in range(k)] for i in range(k)]
    At = [list(col) for col in zip(*rows)]  # k x m
    H, U = _hnf_with_transform(At, len(rows))
    return [U[i] for i in range(k) if not any(H[i])]


def integer_orthogonal(L: IntLattice) -> IntLattice:
    """Integer vectors orthogonal to every vector of ``L``."""
    return hnf(_integer_kernel([list(b) for b in L.basis], L.ambient_rank), L.ambient_rank)


def saturate(L: IntLattice) -> IntLattice:
    """Smallest primitive lattice containing ``L``: Z^k meet its rational span."""
    return integer_orthogonal(integer_orthogonal(L))


def lattice_zero(k: int) -> IntLattice:
    return IntLattice((), k)


def lattice_full(k: int) -> IntLattice:
    return hnf([[int(i == j) for j in range(k)] for i in range(k)], k)


def lattice_contains(L: IntLattice, v: Sequence[int]) -> bool:
    return hnf(L.basis + (tuple(v),), L.ambient_rank) == L
