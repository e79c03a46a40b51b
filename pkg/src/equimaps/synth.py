"""Explicit equivariant maps built from power-map blocks.

A map sends source slot ``i`` either to one target slot through
``z -> |z| (z/|z|)^e`` or to nothing (a zero block). Summing blocks over
disjoint slots is the join of the block maps, so the output norm equals the
norm of the source restricted to assigned slots.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, replace
from typing import Any, Mapping, Sequence, Union

import numpy as np

from .bounds import Verdict, decide_map_existence
from .exactalg import mod_inverse
from .reps import (
    P_TORUS,
    InputError,
    Representation,
    GroupDescriptor,
    _same_group,
    canonical_line,
    representation_from_doc,
)


class MapRefused(Exception):
    """No equivariant map S(V) -> S(W) exists (or none can be built)."""

    def __init__(self, message: str, violating_line=None):
        super().__init__(message)
        self.violating_line = violating_line


@dataclass(frozen=True)
class Assignment:
    src: int
    dst: int
    exponent: int = 1


@dataclass(frozen=True)
class ZeroBlock:
    src: int


Block = Union[Assignment, ZeroBlock]


@dataclass(frozen=True)
class SynthesizedMap:
    source: Representation
    target: Representation
    blocks: tuple[Block, ...]
    # Source slots spanning U with Z_f = S(U); None when unknown.
    analytic_zero_set: tuple[int, ...] | None = None

    def __post_init__(self):
        _same_group(self.source, self.target)
        srcs = sorted(b.src for b in self.blocks)
        if srcs != list(range(self.source.n_slots)):
            raise InputError("every source slot must appear in exactly one block")
        dsts = [b.dst for b in self.blocks if isinstance(b, Assignment)]
        if len(set(dsts)) != len(dsts):
            raise InputError("assignments must hit distinct target slots")
        if any(not 0 <= j < self.target.n_slots for j in dsts):
            raise InputError("assignment targets a slot outside W")
        if self.analytic_zero_set is not None:
            if any(not 0 <= i < self.source.n_slots for i in self.analytic_zero_set):
                raise InputError("zero-set slot outside V")

    @property
    def group(self) -> GroupDescriptor:
        return self.source.group

    @property
    def assignments(self) -> tuple[Assignment, ...]:
        return tuple(b for b in self.blocks if isinstance(b, Assignment))

    @property
    def zero_blocks(self) -> tuple[ZeroBlock, ...]:
        return tuple(b for b in self.blocks if isinstance(b, ZeroBlock))

    def analytic_zero_dim(self) -> int | None:
        """Dimension of S(U), -1 for the empty zero set."""
        if self.analytic_zero_set is None:
            return None
        return self.group.slot_real_dim * len(self.analytic_zero_set) - 1

    def to_dict(self) -> dict[str, Any]:
        blocks = []
        for b in self.blocks:
            if isinstance(b, Assignment):
                blocks.append({"type": "assign", "src": b.src, "dst": b.dst, "exponent": b.exponent})
            else:
                blocks.append({"type": "zero", "src": b.src})
        return {
            "group": self.group.to_dict(),
            "source": self.source.to_dict(),
            "target": self.target.to_dict(),
            "blocks": blocks,
            "analytic_zero_set": None
            if self.analytic_zero_set is None
            else list(self.analytic_zero_set),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SynthesizedMap":
        try:
            group = GroupDescriptor.from_dict(doc["group"])
            V = representation_from_doc(group, doc["source"], "source")
            W = representation_from_doc(group, doc["target"], "target")
            blocks: list[Block] = []
            for b in doc["blocks"]:
                if b["type"] == "assign":
                    blocks.append(Assignment(int(b["src"]), int(b["dst"]), int(b["exponent"])))
                elif b["type"] == "zero":
                    blocks.append(ZeroBlock(int(b["src"])))
                else:
                    raise InputError(f"unknown block type {b['type']!r}")
            zs = doc.get("analytic_zero_set")
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed map document: {e}") from None
        return cls(V, W, tuple(blocks), None if zs is None else tuple(int(i) for i in zs))

    @classmethod
    def loads(cls, text: str) -> "SynthesizedMap":
        return cls.from_dict(json.loads(text))


def power_exponent(j1: int, j2: int, p: int) -> int:
    """Exponent ``e`` with ``e * j1 = j2 (mod p)``."""
    if j2 % p == 0:
        raise InputError(f"{j2} is zero mod {p}")
    return (mod_inverse(j1, p) * j2) % p


def _line_slots(R: Representation) -> dict[tuple[int, ...], list[int]]:
    """Slots of ``R`` per canonical line, sorted by (weight, slot index)."""
    p = R.group.p
    out: dict[tuple[int, ...], list[int]] = {}
    for i, w in enumerate(R.slots):
        out.setdefault(canonical_line(w, p)[0], []).append(i)
    for slots in out.values():
        slots.sort(key=lambda i: (R.slots[i], i))
    return out


def _join_blocks(V: Representation, W: Representation) -> tuple[list[Block], list[int]]:
    """Pair slots line by line; surplus V slots on a line become zero blocks."""
    p = V.group.p
    w_lines = _line_slots(W)
    blocks: list[Block] = []
    zeros: list[int] = []
    for alpha, v_slots in _line_slots(V).items():
        w_slots = w_lines.get(alpha, [])
        for n, i in enumerate(v_slots):
            if n < len(w_slots):
                j = w_slots[n]
                e = power_exponent(canonical_line(V.slots[i], p)[1], canonical_line(W.slots[j], p)[1], p)
                blocks.append(Assignment(i, j, e))
            else:
                blocks.append(ZeroBlock(i))
                zeros.append(i)
    blocks.sort(key=lambda b: b.src)
    return blocks, sorted(zeros)


def synthesize_equivariant(V: Representation, W: Representation) -> SynthesizedMap:
    """Equivariant ``S(V) -> S(W)`` as a join of power maps, one per line."""
    group = _same_group(V, W)
    if group.kind != P_TORUS:
        return _torus_identity_map(V, W)
    report = decide_map_existence(V, W)
    if report.verdict is not Verdict.EXISTS:
        bad = report.violating_lines[0]
        raise MapRefused(
            f"no equivariant map S(V) -> S(W): line {list(bad.alpha)} has "
            f"dim_R V^H = {bad.dim_v} > dim_R W^H = {bad.dim_w}",
            violating_line=bad.alpha,
        )
    blocks, zeros = _join_blocks(V, W)
    assert not zeros
    return SynthesizedMap(V, W, tuple(blocks), ())


def _torus_identity_map(V: Representation, W: Representation) -> SynthesizedMap:
    # Only equal weights are paired; no construction is known otherwise.
    free: dict[tuple[int, ...], list[int]] = {}
    for j, w in enumerate(W.slots):
        free.setdefault(w, []).append(j)
    blocks = []
    for i, w in enumerate(V.slots):
        if not free.get(w):
            raise MapRefused(
                f"torus synthesis needs each weight of V in W: weight {list(w)} is short",
                violating_line=w,
            )
        blocks.append(Assignment(i, free[w].pop(0), 1))
    return SynthesizedMap(V, W, tuple(blocks), ())


def synthesize_partial(V: Representation, W: Representation) -> SynthesizedMap:
    """Join map that fills W line by line and zeroes the surplus of V.

    The zero set is exactly the sphere on the zero-block slots.
    """
    group = _same_group(V, W)
    if group.kind != P_TORUS:
        raise InputError("partial synthesis is defined for p-torus problems only")
    blocks, zeros = _join_blocks(V, W)
    return SynthesizedMap(V, W, tuple(blocks), tuple(zeros))


def projection_map(V: Representation, target_slots: Sequence[int]) -> SynthesizedMap:
    """Coordinate projection of V onto the sub-representation on ``target_slots``."""
    target_slots = [int(i) for i in target_slots]
    if len(set(target_slots)) != len(target_slots):
        raise InputError("target slots must be distinct")
    if any(not 0 <= i < V.n_slots for i in target_slots):
        raise InputError("target slot out of range")
    if not target_slots:
        warnings.warn("empty target: projection is the zero map", stacklevel=2)
    W = Representation.from_slots(V.group, [V.slots[i] for i in target_slots])
    free: dict[tuple[int, ...], list[int]] = {}
    for j, w in enumerate(W.slots):
        free.setdefault(w, []).append(j)
    dst = {i: free[V.slots[i]].pop(0) for i in target_slots}
    blocks = tuple(
        Assignment(i, dst[i], 1) if i in dst else ZeroBlock(i) for i in range(V.n_slots)
    )
    zero_slots = tuple(i for i in range(V.n_slots) if i not in dst)
    return SynthesizedMap(V, W, blocks, zero_slots)


def with_exponent(f: SynthesizedMap, block_index: int, exponent: int) -> SynthesizedMap:
    """Copy of ``f`` with one assignment's exponent replaced (fault injection)."""
    blocks = list(f.blocks)
    b = blocks[block_index]
    if not isinstance(b, Assignment):
        raise InputError("block is not an assignment")
    blocks[block_index] = replace(b, exponent=exponent)
    return replace(f, blocks=tuple(blocks))


def exponent_coherent(f: SynthesizedMap) -> bool:
    """Check ``e * j1 = j2 (mod p)`` on every assignment."""
    group = f.group
    if group.kind != P_TORUS:
        return all(f.source.slots[a.src] == f.target.slots[a.dst] and a.exponent == 1 for a in f.assignments)
    p = group.p
    for a in f.assignments:
        (al1, j1), (al2, j2) = canonical_line(f.source.slots[a.src], p), canonical_line(f.target.slots[a.dst], p)
        if al1 != al2 or (a.exponent * j1 - j2) % p:
            return False
    return True


# --- numerics -----------------------------------------------------------------


def coord_dtype(group: GroupDescriptor):
    return np.float64 if group.is_real else np.complex128


def apply(f: SynthesizedMap, X: np.ndarray) -> np.ndarray:
    """Evaluate the block formula on a batch ``(..., n_src)``; no norm check.

    The formula is 1-homogeneous, so it extends off the sphere.
    """
    X = np.asarray(X)
    Y = np.zeros(X.shape[:-1] + (f.target.n_slots,), dtype=coord_dtype(f.group))
    real = f.group.is_real
    for a in f.assignments:
        x = X[..., a.src]
        if real or a.exponent == 1:
            Y[..., a.dst] = x
            continue
        r = np.abs(x)
        u = np.divide(x, r, out=np.zeros_like(x), where=r > 0)
        Y[..., a.dst] = r * u ** a.exponent
    return Y


def evaluate(f: SynthesizedMap, x: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Evaluate ``f`` at a point of the unit sphere S(V)."""
    x = np.asarray(x, dtype=coord_dtype(f.group))
    if x.shape != (f.source.n_slots,):
        raise InputError(f"point has shape {x.shape}, expected ({f.source.n_slots},)")
    if abs(np.linalg.norm(x) - 1.0) > tol:
        raise InputError(f"point is off the unit sphere: |x| = {np.linalg.norm(x)!r}")
    return apply(f, x)


def slot_phases(g, R: Representation) -> np.ndarray:
    """Scalar by which the group element ``g`` acts on each slot of ``R``."""
    group = R.group
    g = np.asarray(g)
    if g.shape[-1:] != (group.rank,):
        raise InputError(f"group element has shape {g.shape}, rank is {group.rank}")
    if R.n_slots == 0:
        return np.zeros(g.shape[:-1] + (0,), dtype=coord_dtype(group))
    Wt = np.array(R.slots, dtype=np.int64)  # (n, k)
    if group.kind == P_TORUS:
        t = (g.astype(np.int64) @ Wt.T) % group.p
        if group.p == 2:
            return 1.0 - 2.0 * t
        return np.exp(2j * np.pi * t / group.p)
    return np.exp(2j * np.pi * (g.astype(np.float64) @ Wt.T))


def act(g, R: Representation, x: np.ndarray) -> np.ndarray:
    """Apply the group element ``g`` to the point(s) ``x`` of R."""
    return slot_phases(g, R) * np.asarray(x)
