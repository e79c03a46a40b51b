"""Representations of p-tori and tori as multisets of weights.

A representation with no trivial summand is a list of nonzero characters
with multiplicities. For ``Z_p^k`` a character is a vector of F_p^k, for the
torus ``T^k`` an integer vector. Subgroups are canonical subspaces
(p-torus) or saturated cocharacter lattices of subtori (torus).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import chain
from typing import Any, Iterable, Mapping, Sequence, Union

from .exactalg import (
    AlgebraInputError,
    FpSubspace,
    IntLattice,
    annihilator,
    check_prime,
    hnf,
    integer_orthogonal,
    is_prime,
    rref,
    saturate,
    span_of_subsets,
    zero_subspace,
)

P_TORUS = "p-torus"
TORUS = "torus"

Weight = tuple[int, ...]
Subgroup = Union[FpSubspace, IntLattice]


class InputError(ValueError):
    """A problem document or representation failed validation."""


class FixedPointError(InputError):
    """A trivial weight was supplied, so V^G would be nonzero."""


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str
    rank: int
    p: int | None = None

    def __post_init__(self):
        if self.kind not in (P_TORUS, TORUS):
            raise InputError(f"unknown group kind {self.kind!r}")
        if not isinstance(self.rank, int) or self.rank < 1:
            raise InputError(f"rank must be a positive integer, got {self.rank!r}")
        if self.kind == P_TORUS:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise InputError(f"p must be prime, got {self.p!r}")
        elif self.p is not None:
            raise InputError("a torus takes no modulus p")

    @property
    def is_real(self) -> bool:
        """True when slots are real lines (p = 2), False for complex slots."""
        return self.kind == P_TORUS and self.p == 2

    @property
    def slot_real_dim(self) -> int:
        return 1 if self.is_real else 2

    def normalize_weight(self, w: Sequence[int]) -> Weight:
        w = tuple(int(x) for x in w)
        if len(w) != self.rank:
            raise InputError(f"weight {list(w)} has length {len(w)}, group rank is {self.rank}")
        if self.kind == P_TORUS:
            w = tuple(x % self.p for x in w)
        if not any(w):
            raise FixedPointError(
                f"weight {list(w)} is trivial: fixed-point condition V^G = {{0}} violated"
            )
        return w

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"kind": self.kind}
        if self.p is not None:
            d["p"] = self.p
        d["rank"] = self.rank
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "GroupDescriptor":
        try:
            return cls(kind=d["kind"], rank=d["rank"], p=d.get("p"))
        except KeyError as e:
            raise InputError(f"group descriptor missing field {e}") from None


@dataclass(frozen=True)
class Representation:
    group: GroupDescriptor
    weights: tuple[tuple[Weight, int], ...] = ()
    slots: tuple[Weight, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        seen = set()
        normed = []
        for w, m in self.weights:
            w = self.group.normalize_weight(w)
            if not isinstance(m, int) or m < 1:
                raise InputError(f"multiplicity of {list(w)} must be a positive integer, got {m!r}")
            if w in seen:
                raise InputError(f"duplicate weight {list(w)}")
            seen.add(w)
            normed.append((w, m))
        object.__setattr__(self, "weights", tuple(normed))
        object.__setattr__(
            self, "slots", tuple(chain.from_iterable([w] * m for w, m in normed))
        )

    @classmethod
    def from_slots(cls, group: GroupDescriptor, slots: Iterable[Sequence[int]]) -> "Representation":
        """Group consecutive and repeated slot weights by first appearance."""
        counts: dict[Weight, int] = {}
        for w in slots:
            w = group.normalize_weight(w)
            counts[w] = counts.get(w, 0) + 1
        return cls(group, tuple(counts.items()))

    @property
    def n_slots(self) -> int:
        return len(self.slots)

    def multiplicity(self, w: Sequence[int]) -> int:
        w = tuple(w)
        return next((m for u, m in self.weights if u == w), 0)

    def to_dict(self) -> dict[str, Any]:
        return {"weights": [{"w": list(w), "mult": m} for w, m in self.weights]}


def _weights_from_doc(group: GroupDescriptor, doc: Any, name: str) -> tuple[tuple[Weight, int], ...]:
    try:
        entries = doc["weights"]
    except (KeyError, TypeError):
        raise InputError(f"{name}: expected an object with a 'weights' list") from None
    out = []
    for e in entries:
        try:
            out.append((e["w"], e.get("mult", 1)))
        except (KeyError, TypeError, AttributeError):
            raise InputError(f"{name}: malformed weight entry {e!r}") from None
    return tuple(out)


def representation_from_doc(group: GroupDescriptor, doc: Any, name: str = "V") -> Representation:
    return Representation(group, _weights_from_doc(group, doc, name))


def parse_representation(document: Mapping[str, Any]) -> tuple[GroupDescriptor, Representation, Representation]:
    """Validate a problem document into ``(group, V, W)``."""
    if not isinstance(document, Mapping) or "group" not in document:
        raise InputError("problem document needs a 'group' object")
    group = GroupDescriptor.from_dict(document["group"])
    for key in ("V", "W"):
        if key not in document:
            raise InputError(f"problem document is missing {key!r}")
    V = representation_from_doc(group, document["V"], "V")
    W = representation_from_doc(group, document["W"], "W")
    return group, V, W


def problem_to_doc(V: Representation, W: Representation) -> dict[str, Any]:
    _same_group(V, W)
    return {"group": V.group.to_dict(), "V": V.to_dict(), "W": W.to_dict()}


def _same_group(V: Representation, W: Representation) -> GroupDescriptor:
    if V.group != W.group:
        raise InputError(f"group mismatch: {V.group} vs {W.group}")
    return V.group


def real_dim(R: Representation) -> int:
    return R.group.slot_real_dim * R.n_slots


def complex_dim(R: Representation) -> int:
    if R.group.is_real:
        raise InputError("complex dimension is undefined for p = 2 (real representation)")
    return R.n_slots


def d(R: Representation) -> int:
    """Complex dimension for odd p and the torus, real dimension for p = 2."""
    return R.n_slots


# --- subgroups --------------------------------------------------------------


def trivial_subgroup(group: GroupDescriptor) -> Subgroup:
    if group.kind == P_TORUS:
        return zero_subspace(group.rank, group.p)
    return IntLattice((), group.rank)


def _check_subgroup(group: GroupDescriptor, H: Subgroup) -> None:
    if group.kind == P_TORUS:
        if not isinstance(H, FpSubspace) or H.p != group.p:
            raise InputError("p-torus subgroups are F_p subspaces of the same modulus")
    elif not isinstance(H, IntLattice):
        raise InputError("torus subgroups are given by cocharacter lattices")
    if H.ambient_rank != group.rank:
        raise InputError(f"subgroup lives in rank {H.ambient_rank}, group has rank {group.rank}")


def vanishing_characters(group: GroupDescriptor, H: Subgroup) -> Subgroup:
    """Characters trivial on ``H``."""
    _check_subgroup(group, H)
    if group.kind == P_TORUS:
        return annihilator(H)
    return integer_orthogonal(H)


def _vanishes(group: GroupDescriptor, w: Weight, H: Subgroup) -> bool:
    if group.kind == P_TORUS:
        return all(sum(a * b for a, b in zip(w, h)) % group.p == 0 for h in H.basis)
    return all(sum(a * b for a, b in zip(w, h)) == 0 for h in H.basis)


def fixed_subrep(R: Representation, H: Subgroup) -> Representation:
    """The summand ``R^H``: weights whose character is trivial on ``H``."""
    _check_subgroup(R.group, H)
    kept = tuple((w, m) for w, m in R.weights if _vanishes(R.group, w, H))
    return Representation(R.group, kept)


def kernel_of(group: GroupDescriptor, weights: Sequence[Weight]) -> Subgroup:
    """Common kernel of the given characters (identity component for a torus)."""
    if group.kind == P_TORUS:
        return annihilator(rref(weights, group.p, group.rank))
    return integer_orthogonal(hnf(weights, group.rank))


def subgroup_key(H: Subgroup):
    return (-H.rank, H.basis)


def isotropy_subgroups(R: Representation) -> list[Subgroup]:
    """Isotropy groups of points of S(R): kernels of subsets of its weights.

    For the torus only identity components are produced.
    """
    group = R.group
    ws = [w for w, _ in R.weights]
    if not ws:
        return []
    if group.kind == P_TORUS:
        spans = span_of_subsets(ws, group.p)
        return sorted((annihilator(S) for S in spans), key=subgroup_key)
    # Torus: closure over saturated spans, the integer analogue of span_of_subsets.
    seen = {saturate(hnf([w], group.rank)) for w in ws}
    frontier = list(seen)
    while frontier:
        nxt = []
        for L in frontier:
            for w in ws:
                M = saturate(hnf(L.basis + (w,), group.rank))
                if M not in seen:
                    seen.add(M)
                    nxt.append(M)
        frontier = nxt
    return sorted((integer_orthogonal(L) for L in seen), key=subgroup_key)


def canonical_line(w: Weight, p: int) -> tuple[Weight, int]:
    """Return ``(alpha, j)`` with ``w = j * alpha`` and alpha's first nonzero entry 1."""
    j = next(x for x in w if x % p)
    inv = pow(j, -1, p)
    return tuple((x * inv) % p for x in w), j % p


def _require_p_torus(R: Representation) -> int:
    if R.group.kind != P_TORUS:
        raise InputError("operation is defined for p-torus representations only")
    return R.group.p


@dataclass(frozen=True)
class Line:
    """One projective line of weights and the slots of a representation on it."""

    alpha: Weight
    slots: tuple[int, ...]
    real_dim: int

    @property
    def kernel_dim(self) -> int:
        return len(self.alpha) - 1


@dataclass(frozen=True)
class LinePartition:
    lines: tuple[Line, ...]

    def by_alpha(self) -> dict[Weight, Line]:
        return {ln.alpha: ln for ln in self.lines}


def line_partition(R: Representation) -> LinePartition:
    """Group slots by projective line, lines in order of first appearance."""
    p = _require_p_torus(R)
    members: dict[Weight, list[int]] = {}
    for i, w in enumerate(R.slots):
        alpha, _ = canonical_line(w, p)
        members.setdefault(alpha, []).append(i)
    per = R.group.slot_real_dim
    return LinePartition(
        tuple(Line(a, tuple(s), per * len(s)) for a, s in members.items())
    )


def line_kernel(group: GroupDescriptor, alpha: Weight) -> FpSubspace:
    return annihilator(rref([alpha], group.p, group.rank))


def maximal_isotropy(R: Representation) -> list[Subgroup]:
    """The corank-one kernels ``ker alpha``, one per line met by ``R``."""
    _require_p_torus(R)
    kernels = {line_kernel(R.group, ln.alpha) for ln in line_partition(R).lines}
    return sorted(kernels, key=subgroup_key)


def subgroup_to_doc(H: Subgroup) -> dict[str, Any]:
    key = "basis" if isinstance(H, FpSubspace) else "cocharacters"
    return {key: H.to_list(), "rank": H.rank}


__all__ = [
    "AlgebraInputError",
    "FixedPointError",
    "GroupDescriptor",
    "InputError",
    "Line",
    "LinePartition",
    "P_TORUS",
    "Representation",
    "TORUS",
    "canonical_line",
    "check_prime",
    "complex_dim",
    "d",
    "fixed_subrep",
    "isotropy_subgroups",
    "kernel_of",
    "line_kernel",
    "line_partition",
    "maximal_isotropy",
    "parse_representation",
    "problem_to_doc",
    "real_dim",
    "representation_from_doc",
    "subgroup_to_doc",
    "trivial_subgroup",
    "vanishing_characters",
]
