"""Existence decisions and lower bounds for the zero-set dimension.

For an equivariant ``f: S(V) -> W`` the zero set satisfies
``coh.dim Z_f >= dim_R V - dim_R W - 1``, and the same holds for the
restriction of ``f`` to every fixed sphere ``S(V^H)``. For ``Z_p^k`` a map
``S(V) -> S(W)`` exists iff ``dim_R V^H <= dim_R W^H`` for every corank-one
kernel ``H = ker alpha`` of a weight of V.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import islice
from typing import Any, Iterable, Sequence

from .reps import (
    P_TORUS,
    InputError,
    Representation,
    Subgroup,
    Weight,
    _same_group,
    fixed_subrep,
    isotropy_subgroups,
    line_kernel,
    line_partition,
    real_dim,
    subgroup_to_doc,
    trivial_subgroup,
)


class Verdict(str, enum.Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    NONEXISTENCE_BY_DIMENSION = "NonexistenceByDimension"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class LineRecord:
    alpha: Weight
    kernel: Subgroup
    dim_v: int
    dim_w: int

    @property
    def satisfied(self) -> bool:
        return self.dim_v <= self.dim_w

    def to_dict(self) -> dict[str, Any]:
        return {
            "line": list(self.alpha),
            "kernel": subgroup_to_doc(self.kernel),
            "dim_R_VH": self.dim_v,
            "dim_R_WH": self.dim_w,
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class DecisionReport:
    verdict: Verdict
    ledger: tuple[LineRecord, ...]
    dim_v: int
    dim_w: int

    @property
    def violating_lines(self) -> tuple[LineRecord, ...]:
        return tuple(r for r in self.ledger if not r.satisfied)

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict.value,
            "dim_R_V": self.dim_v,
            "dim_R_W": self.dim_w,
            "ledger": [r.to_dict() for r in self.ledger],
            "violating_lines": [list(r.alpha) for r in self.violating_lines],
        }


@dataclass(frozen=True)
class SubgroupBound:
    subgroup: Subgroup
    dim_v: int
    dim_w: int
    derived_by_restriction: bool = False

    @property
    def bound(self) -> int:
        return self.dim_v - self.dim_w - 1

    def to_dict(self) -> dict[str, Any]:
        d = {
            "subgroup": subgroup_to_doc(self.subgroup),
            "dim_R_VH": self.dim_v,
            "dim_R_WH": self.dim_w,
            "bound": self.bound,
        }
        if self.derived_by_restriction:
            d["derived_by_restriction"] = True
        return d


@dataclass(frozen=True)
class BoundReport:
    global_bound: int
    per_subgroup: tuple[SubgroupBound, ...]
    parity_refined: bool

    @property
    def best_bound(self) -> int:
        return max([self.global_bound] + [e.bound for e in self.per_subgroup])

    @property
    def nonempty_zero_set(self) -> bool:
        return self.best_bound >= 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "global_bound": self.global_bound,
            "best_bound": self.best_bound,
            "parity_refined": self.parity_refined,
            "zero_set_nonempty": self.nonempty_zero_set,
            "per_subgroup": [e.to_dict() for e in self.per_subgroup],
        }


def global_bound(V: Representation, W: Representation) -> int:
    _same_group(V, W)
    return real_dim(V) - real_dim(W) - 1


def parity_refine(V: Representation, W: Representation, bound: int) -> tuple[int, bool]:
    """Odd p and torus: the bound is odd, and at least 1 once dim V > dim W."""
    group = _same_group(V, W)
    if group.is_real:
        return bound, False
    # 2(d(V) - d(W)) - 1 is odd for any sign.
    assert bound % 2 == 1, bound
    refined = real_dim(V) > real_dim(W)
    if refined:
        assert bound >= 1
    return bound, refined


def refined_bounds(V: Representation, W: Representation) -> BoundReport:
    """Global bound plus the bound of every restriction ``f^H``."""
    group = _same_group(V, W)
    g = global_bound(V, W)
    _, refined = parity_refine(V, W, g)
    subgroups = isotropy_subgroups(V)
    trivial = trivial_subgroup(group)
    if trivial not in subgroups:
        subgroups.append(trivial)
    by_restriction = group.kind != P_TORUS
    entries = tuple(
        SubgroupBound(H, real_dim(fixed_subrep(V, H)), real_dim(fixed_subrep(W, H)), by_restriction)
        for H in subgroups
    )
    return BoundReport(g, entries, refined)


def decide_map_existence(V: Representation, W: Representation) -> DecisionReport:
    group = _same_group(V, W)
    dv, dw = real_dim(V), real_dim(W)
    if group.kind != P_TORUS:
        verdict = Verdict.NONEXISTENCE_BY_DIMENSION if dv > dw else Verdict.UNKNOWN
        return DecisionReport(verdict, (), dv, dw)
    ledger = []
    for ln in line_partition(V).lines:
        H = line_kernel(group, ln.alpha)
        ledger.append(LineRecord(ln.alpha, H, ln.real_dim, real_dim(fixed_subrep(W, H))))
    ok = all(r.satisfied for r in ledger)
    return DecisionReport(Verdict.EXISTS if ok else Verdict.NOT_EXISTS, tuple(ledger), dv, dw)


def infinite_witness(
    weight_stream: Iterable[Sequence[int]], W: Representation, target_d: int
) -> tuple[Representation, int]:
    """Shortest prefix of a weight stream reaching real dimension ``target_d``.

    Returns the finite sub-representation and its zero-set bound; the bound
    grows without limit with ``target_d``.
    """
    if target_d < 1:
        raise InputError(f"target dimension must be >= 1, got {target_d}")
    group = W.group
    per = group.slot_real_dim
    need = -(-target_d // per)
    prefix = list(islice(iter(weight_stream), need))
    if len(prefix) < need:
        raise InputError(
            f"weight stream ended after {len(prefix)} weights; {need} needed for dim_R >= {target_d}"
        )
    Vd = Representation.from_slots(group, prefix)
    return Vd, global_bound(Vd, W)
