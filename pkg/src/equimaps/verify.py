"""Monte-Carlo checks of synthesized maps.

Everything random is drawn from per-chunk substreams of one seed, so results
do not depend on how chunks are spread over workers.
"""
from __future__ import annotations

import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np
from scipy.spatial import cKDTree

from .bounds import global_bound
from .reps import GroupDescriptor, P_TORUS, Representation
from .synth import SynthesizedMap, act, apply, coord_dtype, exponent_coherent

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

# Stream tags keep the equivariance and sampler draws independent.
_EQUIV_STREAM = 1
_ZERO_STREAM = 2


@dataclass(frozen=True)
class VerificationConfig:
    trials: int = 1000
    seed: int = 0
    equiv_tol: float = 1e-9
    norm_tol: float = 1e-12
    zero_tol: float = 1e-7
    fd_step: float = 1e-6
    pca_cutoff: float = 0.1
    neighborhood_radius: float = 0.05
    zero_starts: int = 20000
    step_size: float = 0.25
    max_iter: int = 200
    min_samples: int = 10
    min_neighbors: int = 10
    max_neighborhoods: int = 200
    chunk_size: int = 512
    workers: int = 1

    def __post_init__(self):
        for name in ("equiv_tol", "norm_tol", "zero_tol", "fd_step", "pca_cutoff",
                     "neighborhood_radius", "step_size"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("trials", "zero_starts", "max_iter", "min_samples", "min_neighbors",
                     "max_neighborhoods", "chunk_size", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass
class DimensionEstimate:
    estimated_dim: int | None
    n_zero_samples: int
    n_neighborhoods: int
    singular_values: list[list[float]] = field(default_factory=list, repr=False)
    bound_checked: int | None = None
    reason: str = ""

    @property
    def conclusive(self) -> bool:
        return self.estimated_dim is not None

    def to_dict(self, spectra: int = 5) -> dict[str, Any]:
        d = asdict(self)
        d["singular_values"] = self.singular_values[:spectra]
        return d


def _chunks(total: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(size, total - s)) for s in range(0, total, size)]


def _run_chunks(fn: Callable[[np.random.Generator, int], Any], cfg: VerificationConfig,
                total: int, tag: int) -> list[Any]:
    parts = _chunks(total, cfg.chunk_size)
    seeds = np.random.SeedSequence([cfg.seed, tag]).spawn(len(parts))
    jobs = [(np.random.default_rng(s), n) for s, (_, n) in zip(seeds, parts)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(cfg.workers) as ex:
            return list(ex.map(lambda j: fn(*j), jobs))
    return [fn(*j) for j in jobs]


def random_sphere_points(rng: np.random.Generator, group: GroupDescriptor, n: int, count: int) -> np.ndarray:
    """Uniform points of the unit sphere via normalized Gaussians."""
    if group.is_real:
        X = rng.standard_normal((count, n))
    else:
        X = rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))
    return X / np.linalg.norm(X, axis=-1, keepdims=True)


def random_group_elements(rng: np.random.Generator, group: GroupDescriptor, count: int) -> np.ndarray:
    if group.kind == P_TORUS:
        return rng.integers(0, group.p, size=(count, group.rank))
    return rng.random((count, group.rank))


def equivariance_residuals(f: SynthesizedMap, cfg: VerificationConfig) -> np.ndarray:
    """``|f(g x) - g f(x)|`` for ``cfg.trials`` random pairs (g, x)."""
    group = f.group

    def chunk(rng, n):
        X = random_sphere_points(rng, group, f.source.n_slots, n)
        g = random_group_elements(rng, group, n)
        lhs = apply(f, act(g, f.source, X))
        rhs = act(g, f.target, apply(f, X))
        return np.linalg.norm(lhs - rhs, axis=-1)

    return np.concatenate(_run_chunks(chunk, cfg, cfg.trials, _EQUIV_STREAM))


def check_equivariance(f: SynthesizedMap, cfg: VerificationConfig = VerificationConfig()) -> float:
    if f.source.n_slots == 0:
        return 0.0
    return float(equivariance_residuals(f, cfg).max())


def norm_deviation(f: SynthesizedMap, cfg: VerificationConfig = VerificationConfig()) -> float:
    """Max of ``| |f(x)| - 1 |`` over random sphere points."""
    if f.source.n_slots == 0:
        return 0.0

    def chunk(rng, n):
        X = random_sphere_points(rng, f.group, f.source.n_slots, n)
        return np.abs(np.linalg.norm(apply(f, X), axis=-1) - 1.0)

    return float(np.concatenate(_run_chunks(chunk, cfg, cfg.trials, _EQUIV_STREAM)).max())


def _to_real(X: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(X):
        return np.concatenate([X.real, X.imag], axis=-1)
    return X


def _from_real(R: np.ndarray, complex_: bool) -> np.ndarray:
    if complex_:
        n = R.shape[-1] // 2
        return R[..., :n] + 1j * R[..., n:]
    return R


def _descend(f: SynthesizedMap, X: np.ndarray, cfg: VerificationConfig) -> np.ndarray:
    """Projected gradient descent of |f|^2 on the sphere; returns converged rows."""
    cplx = np.iscomplexobj(X)
    R = _to_real(X)
    m, nr = R.shape
    h = cfg.fd_step
    E = np.eye(nr) * h

    def objective(Rb):
        Y = apply(f, _from_real(Rb, cplx))
        return np.sum(np.abs(Y) ** 2, axis=-1)

    F = objective(R)
    active = np.ones(m, dtype=bool)
    done = np.sqrt(F) < cfg.zero_tol
    active &= ~done
    for _ in range(cfg.max_iter):
        if not active.any():
            break
        A = R[active]
        # Central differences: (m_a, nr, nr) perturbed copies in one batch.
        plus = objective(A[:, None, :] + E[None])
        minus = objective(A[:, None, :] - E[None])
        grad = (plus - minus) / (2 * h)
        step = A - cfg.step_size * grad
        step /= np.linalg.norm(step, axis=-1, keepdims=True)
        Fn = objective(step)
        idx = np.flatnonzero(active)
        stalled = Fn > F[idx] - 1e-15
        R[idx] = step
        F[idx] = Fn
        conv = np.sqrt(Fn) < cfg.zero_tol
        done[idx[conv]] = True
        active[idx[conv | stalled]] = False
    # Final projection so returned points sit on the sphere to rounding.
    out = R[done]
    out /= np.linalg.norm(out, axis=-1, keepdims=True)
    return _from_real(out, cplx)


def sample_zero_set(f: SynthesizedMap, cfg: VerificationConfig = VerificationConfig()) -> np.ndarray:
    """Points of Z_f found by descent from ``cfg.zero_starts`` random starts."""
    n = f.source.n_slots

    def chunk(rng, count):
        X = random_sphere_points(rng, f.group, n, count)
        return _descend(f, X, cfg)

    parts = _run_chunks(chunk, cfg, cfg.zero_starts, _ZERO_STREAM)
    if not parts:
        return np.zeros((0, n), dtype=coord_dtype(f.group))
    Z = np.concatenate(parts)
    if len(Z):
        keep = np.linalg.norm(apply(f, Z), axis=-1) < cfg.zero_tol
        Z = Z[keep]
    return Z


def estimate_local_dimension(samples: np.ndarray, cfg: VerificationConfig = VerificationConfig()) -> DimensionEstimate:
    """Median local PCA rank over radius neighborhoods of the samples."""
    P = _to_real(np.asarray(samples))
    N = len(P)
    if N < cfg.min_samples:
        return DimensionEstimate(None, N, 0, reason=f"only {N} samples (< {cfg.min_samples})")
    tree = cKDTree(P)
    centers = np.linspace(0, N - 1, min(N, cfg.max_neighborhoods)).astype(int)
    counts, spectra = [], []
    for c in centers:
        nb = tree.query_ball_point(P[c], cfg.neighborhood_radius)
        if len(nb) < cfg.min_neighbors:
            continue
        Q = P[nb] - P[nb].mean(axis=0)
        s = np.linalg.svd(Q, compute_uv=False)
        top = s[0] if len(s) else 0.0
        counts.append(0 if top <= 1e-12 else int(np.sum(s > cfg.pca_cutoff * top)))
        spectra.append([float(x) for x in s])
    if not counts:
        return DimensionEstimate(
            None, N, 0,
            reason=f"no neighborhood of radius {cfg.neighborhood_radius} has {cfg.min_neighbors} points",
        )
    return DimensionEstimate(statistics.median_low(counts), N, len(counts), spectra)


@dataclass
class BoundCheck:
    bound: int
    analytic_dim: int | None
    estimate: DimensionEstimate | None
    status: str
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "bound": self.bound,
            "analytic_zero_set_dim": self.analytic_dim,
            "numerical": None if self.estimate is None else self.estimate.to_dict(),
            "status": self.status,
            "note": self.note,
        }


def verify_bound(V: Representation, W: Representation, f: SynthesizedMap,
                 cfg: VerificationConfig = VerificationConfig(),
                 samples: np.ndarray | None = None) -> BoundCheck:
    """Compare zero-set dimensions of ``f`` with the lower bound for (V, W)."""
    bound = global_bound(V, W)
    analytic = f.analytic_zero_dim()
    est = None
    if analytic is None or analytic >= 0:
        if samples is None:
            samples = sample_zero_set(f, cfg)
        est = estimate_local_dimension(samples, cfg)
        est.bound_checked = bound
    if bound < 0 and (analytic is not None or est is not None):
        return BoundCheck(bound, analytic, est, PASS, "bound is vacuous")
    if analytic is not None:
        status = PASS if analytic >= bound else FAIL
        note = "analytic dimension is authoritative"
        if est is not None and est.conclusive and est.estimated_dim != analytic:
            note += f"; numerical estimate {est.estimated_dim} disagrees"
        return BoundCheck(bound, analytic, est, status, note)
    if est is None or not est.conclusive:
        return BoundCheck(bound, None, est, INCONCLUSIVE, est.reason if est else "")
    return BoundCheck(bound, None, est, PASS if est.estimated_dim >= bound else FAIL)


@dataclass
class VerificationReport:
    residual: float
    norm_deviation: float | None
    exponent_coherent: bool
    bound: BoundCheck
    status: str
    trials: int
    seed: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status,
            "equivariance_residual": self.residual,
            "norm_deviation": self.norm_deviation,
            "exponent_coherent": self.exponent_coherent,
            "bound": self.bound.to_dict(),
            "trials": self.trials,
            "seed": self.seed,
        }


def verify_map(V: Representation, W: Representation, f: SynthesizedMap,
               cfg: VerificationConfig = VerificationConfig()) -> VerificationReport:
    """Equivariance, norm and zero-set checks rolled into one verdict."""
    residual = check_equivariance(f, cfg)
    nd = None if f.zero_blocks else norm_deviation(f, cfg)
    bc = verify_bound(V, W, f, cfg)
    failed = residual > cfg.equiv_tol or (nd is not None and nd > cfg.norm_tol) or bc.status == FAIL
    status = FAIL if failed else bc.status
    return VerificationReport(residual, nd, exponent_coherent(f), bc, status, cfg.trials, cfg.seed)
