"""Pullback matrices, dynamical degrees, entropy and degree growth of monomial maps."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, GenericityFailure, SingularMatrixError
from .fans import Fan, common_refinement, fan_p1n, fan_pn
from .linalg import as_matrix, complement, det, eigenvalue_moduli, mat_pow, minor, norm_growth_sequence
from .weights import DualBasisSpec, GenericVector, pick_generic_vector, pullback_along_morphism, pushforward_to_target

RESEED_LIMIT = 50


@dataclass(frozen=True)
class MonomialMap:
    """Monomial self-map of the torus with exponent matrix psi (det psi != 0)."""

    psi: tuple[tuple[int, ...], ...]

    def __init__(self, psi: Sequence[Sequence[int]]):
        m = as_matrix(psi)
        if not m or any(len(r) != len(m) for r in m):
            raise DimensionMismatchError("exponent matrix must be square and nonempty")
        if det(m) == 0:
            raise SingularMatrixError("monomial map is not dominant: det(psi) = 0")
        object.__setattr__(self, "psi", m)

    @property
    def n(self) -> int:
        return len(self.psi)

    def iterate(self, ell: int) -> "MonomialMap":
        return MonomialMap(mat_pow(self.psi, ell))


@dataclass(frozen=True)
class PullbackMatrix:
    """f^* on A^k((P^1)^n) in the basis c_alpha, |alpha| = n-k, lexicographic.

    ``entries[i][j]`` is the c_{basis[i]} coordinate of f^* c_{basis[j]}.
    Index sets are 0-based.
    """

    k: int
    n: int
    basis: tuple[tuple[int, ...], ...]
    entries: tuple[tuple[int, ...], ...]


def _p1n_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range 0..{n}")
    return tuple(combinations(range(n), n - k))


def random_monomial_map(rng: random.Random, n: int, bound: int) -> MonomialMap:
    """Entries uniform in [-bound, bound], redrawn until det != 0."""
    while True:
        m = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        if det(m):
            return MonomialMap(m)


def pullback_matrix_closed(f: MonomialMap, k: int) -> PullbackMatrix:
    """entry(alpha, beta) = |det psi[beta', alpha']|."""
    n = f.n
    basis = _p1n_basis(n, k)
    comp = [complement(a, n) for a in basis]
    entries = tuple(tuple(abs(minor(f.psi, cb, ca)) for cb in comp) for ca in comp)
    return PullbackMatrix(k, n, basis, entries)


@dataclass
class Pipeline:
    """Refinement of a standard target along psi together with a generic vector for it."""

    psi: tuple[tuple[int, ...], ...]
    target: Fan
    refined: Fan
    spec: DualBasisSpec
    v: GenericVector

    @classmethod
    def build(cls, psi: Sequence[Sequence[int]], target: Fan, seed: int = 0) -> "Pipeline":
        refined = common_refinement(target, psi)
        return cls(as_matrix(psi), target, refined, DualBasisSpec(target), pick_generic_vector([refined], seed))

    def reseed(self) -> None:
        self.v = pick_generic_vector([self.refined], self.v.seed + 1)

    def pull_push(self, k: int) -> list[list[int]]:
        """Columns: target coordinates of f^* b for each basis weight b of A^k."""
        basis = self.spec.slice(k)
        for _ in range(RESEED_LIMIT):
            try:
                return [pushforward_to_target(pullback_along_morphism(self.psi, self.refined, self.target, b),
                                              basis, k, self.v)
                        for b in basis.basis]
            except GenericityFailure:
                self.reseed()
        raise GenericityFailure(f"no usable displacement vector after {RESEED_LIMIT} seeds")


def pullback_matrix_pipeline(f: MonomialMap, k: int, seed: int = 0,
                             pipeline: Pipeline | None = None) -> PullbackMatrix:
    """f^* = pi_* o f~^* on (P^1)^n, through refinement, pullback and displacement."""
    n = f.n
    basis = _p1n_basis(n, k)
    pipe = pipeline or Pipeline.build(f.psi, fan_p1n(n), seed)
    columns = pipe.pull_push(k)
    entries = tuple(tuple(col[i] for col in columns) for i in range(len(basis)))
    return PullbackMatrix(k, n, basis, entries)


def pullback_matrices_pipeline(f: MonomialMap, seed: int = 0) -> list[PullbackMatrix]:
    """All k at once, sharing one refinement and one displacement vector."""
    pipe = Pipeline.build(f.psi, fan_p1n(f.n), seed)
    return [pullback_matrix_pipeline(f, k, pipeline=pipe) for k in range(f.n + 1)]


@dataclass
class DegreeReport:
    n: int
    moduli: tuple[float, ...]
    lambdas: list[float]
    entropy: float
    norm_growth: dict[int, list[float]] = field(default_factory=dict)
    degree_growth: dict[int, "GrowthFit"] = field(default_factory=dict)


def degrees_from_moduli(moduli: Sequence[float]) -> list[float]:
    return [float(math.prod(moduli[:k])) for k in range(len(moduli) + 1)]


def entropy_from_moduli(moduli: Sequence[float]) -> float:
    return math.fsum(math.log(m) for m in moduli if m > 1)


def dynamical_degrees(f: MonomialMap, lmax: int = 30) -> DegreeReport:
    """lambda_k = |mu_1 ... mu_k| and entropy sum_{|mu|>1} log|mu|.

    Norm-growth sequences of the compounds are attached for comparison.
    """
    moduli = eigenvalue_moduli(f.psi)
    report = DegreeReport(f.n, moduli, degrees_from_moduli(moduli), entropy_from_moduli(moduli))
    if lmax:
        report.norm_growth = {k: norm_growth_sequence(f.psi, k, lmax) for k in range(f.n + 1)}
    return report


def pn_degrees(psi: Sequence[Sequence[int]], seed: int = 0, ks: Sequence[int] | None = None) -> list[int]:
    """deg_k of the monomial map on P^n: f^* c_k expressed in the generator c_k."""
    n = len(psi)
    pipe = Pipeline.build(psi, fan_pn(n), seed)
    return [pipe.pull_push(k)[0][0] for k in (range(n + 1) if ks is None else ks)]


def cremona_degrees(n: int, seed: int = 0) -> list[int]:
    """deg_k of the standard Cremona involution (psi = -I) on P^n via the full pipeline."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return pn_degrees([[-int(i == j) for j in range(n)] for i in range(n)], seed)


@dataclass
class GrowthFit:
    """Least-squares fit of log deg_k(f^l) - l log lambda_k = m log l + c."""

    k: int
    values: list[int]
    lambda_k: float
    exponent: float
    order: int
    constant: float
    degenerate: bool
    residual: float

    def ratios(self) -> list[float]:
        return [b / a for a, b in zip(self.values, self.values[1:])]

    def band(self, start: int = 5) -> float:
        """max/min of deg_l / (l^m lambda^l) over l >= start, m the fitted exponent."""
        logs = [math.log(v) - self.exponent * math.log(ell) - ell * math.log(self.lambda_k)
                for ell, v in enumerate(self.values, 1) if ell >= start]
        return math.exp(max(logs) - min(logs)) if logs else 1.0


def fit_growth(k: int, n: int, values: Sequence[int], lambda_k: float) -> GrowthFit:
    ell = np.arange(1, len(values) + 1, dtype=float)
    y = np.array([math.log(v) for v in values]) - ell * math.log(lambda_k)
    X = np.column_stack([np.log(ell), np.ones_like(ell)])
    (m_hat, c), *_ = np.linalg.lstsq(X, y, rcond=None)
    residual = float(np.max(np.abs(X @ np.array([m_hat, c]) - y)))
    order = min(max(round(m_hat), 0), math.comb(n, k))
    return GrowthFit(k, list(values), lambda_k, float(m_hat), order, float(c), residual > 0.25, residual)


def degree_growth_pn(f: MonomialMap, k: int, lmax: int | None = None, seed: int = 0) -> GrowthFit:
    """deg_k(f^l) on P^n for l = 1..lmax, each through a fresh refinement for psi^l."""
    n = f.n
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range 0..{n}")
    if lmax is None:
        lmax = 8 if n <= 2 else 5
    if lmax < 3:
        raise ValueError("lmax must be >= 3")
    values = [pn_degrees(f.iterate(ell).psi, seed, ks=[k])[0] for ell in range(1, lmax + 1)]
    lam = degrees_from_moduli(eigenvalue_moduli(f.psi))[k]
    return fit_growth(k, n, values, lam)


__all__ = [
    "MonomialMap", "random_monomial_map", "PullbackMatrix", "Pipeline", "pullback_matrix_closed", "pullback_matrix_pipeline",
    "pullback_matrices_pipeline", "DegreeReport", "degrees_from_moduli", "entropy_from_moduli",
    "dynamical_degrees", "pn_degrees", "cremona_degrees", "GrowthFit", "fit_growth", "degree_growth_pn",
]
