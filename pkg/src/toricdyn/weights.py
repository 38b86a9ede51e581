"""Minkowski weights: balancing check, pullback, cup product at {0}, pushforward."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Callable, Mapping, Sequence

import numpy as np

from .cones import Cone, MeetKind, dot, lattice_normal, translated_meet
from .errors import (
    DimensionMismatchError,
    ExhaustedError,
    GenericityFailure,
    IncompatibleError,
    SingularMatrixError,
    UnsupportedTargetError,
)
from .fans import Fan
from .linalg import det, identity, integer_kernel, lattice_index_sum, matvec, primitive, transpose

COORD_BOUND = 10**6
MAX_ATTEMPTS = 1000


@dataclass(frozen=True, eq=False)
class MinkowskiWeight:
    """Integer function on the codimension-``codim`` cones of ``fan``.

    ``values`` maps cone keys to integers; cones absent from it carry 0.
    Balancing is not enforced on construction, see :func:`verify_weight`.
    """

    fan: Fan
    codim: int
    values: Mapping[tuple, int]

    @classmethod
    def from_function(cls, fan: Fan, codim: int, f: Callable[[Cone], int]) -> "MinkowskiWeight":
        return cls(fan, codim, {c.key: int(f(c)) for c in fan.by_codim(codim)})

    @classmethod
    def zero(cls, fan: Fan, codim: int) -> "MinkowskiWeight":
        return cls(fan, codim, {})

    def __getitem__(self, cone: Cone) -> int:
        return self.values.get(cone.key, 0)

    def support(self) -> list[tuple[Cone, int]]:
        return [(c, self[c]) for c in self.fan.by_codim(self.codim) if self[c]]

    def __add__(self, other: "MinkowskiWeight") -> "MinkowskiWeight":
        keys = set(self.values) | set(other.values)
        return MinkowskiWeight(self.fan, self.codim,
                               {k: self.values.get(k, 0) + other.values.get(k, 0) for k in keys})

    def scale(self, a: int) -> "MinkowskiWeight":
        return MinkowskiWeight(self.fan, self.codim, {k: a * x for k, x in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, MinkowskiWeight) or other.codim != self.codim:
            return NotImplemented
        keys = set(self.values) | set(other.values)
        return all(self.values.get(k, 0) == other.values.get(k, 0) for k in keys)


@dataclass
class WeightReport:
    violations: list[tuple[tuple, tuple[int, ...], int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_weight(c: MinkowskiWeight) -> WeightReport:
    """Check sum_{sigma > tau} <u, n_{sigma,tau}> c(sigma) = 0 for all tau of codim k+1.

    ``u`` runs over a lattice basis of tau-perp; each violation records
    (tau key, u, value of the sum).
    """
    fan, n = c.fan, c.fan.n
    bad = []
    for tau in fan.by_codim(c.codim + 1):
        around = [(s, lattice_normal(s, tau)) for s in fan.cofacets(tau) if s.codim == c.codim]
        for u in integer_kernel(tau.rays, n) if tau.rays else identity(n):
            total = sum(dot(u, normal) * c[s] for s, normal in around)
            if total:
                bad.append((tau.key, tuple(u), total))
    return WeightReport(bad)


# -- standard targets -----------------------------------------------------

@dataclass(frozen=True)
class BasisSlice:
    """Basis of A^k of a standard target and the data needed to read coordinates.

    The coordinate of a class along ``basis[i]`` is its cup product with
    ``duals[i]`` (a class of codim n-k) evaluated at {0}.  ``dual_cones[i]`` is
    the cone whose orbit closure is Poincare dual to ``basis[i]``.
    """

    target: Fan
    k: int
    labels: tuple[tuple[int, ...], ...]
    basis: tuple[MinkowskiWeight, ...]
    duals: tuple[MinkowskiWeight, ...]
    dual_cones: tuple[tuple, ...]


def _support_set(cone: Cone) -> frozenset[int]:
    return frozenset(i for r in cone.rays for i, x in enumerate(r) if x)


def _c_alpha(fan: Fan, alpha: Sequence[int]) -> MinkowskiWeight:
    # c_alpha(sigma) = 1 iff sigma lies in the coordinate subspace E_alpha
    a = frozenset(alpha)
    return MinkowskiWeight.from_function(fan, fan.n - len(alpha), lambda s: _support_set(s) <= a)


def _orthant(n: int, alpha: Sequence[int]) -> tuple:
    return tuple(sorted(tuple(int(i == j) for j in range(n)) for i in alpha))


class DualBasisSpec:
    """Poincare-dual bases of A^*((P^1)^n) or A^*(P^n), built on demand."""

    def __init__(self, target: Fan):
        if target.label not in ("p1n", "pn"):
            raise UnsupportedTargetError("pushforward needs fan_p1n(n) or fan_pn(n) as target")
        self.target = target
        self._slices: dict[int, BasisSlice] = {}

    def slice(self, k: int) -> BasisSlice:
        if k not in self._slices:
            self._slices[k] = self._build(k)
        return self._slices[k]

    def _build(self, k: int) -> BasisSlice:
        fan, n = self.target, self.target.n
        if not 0 <= k <= n:
            raise ValueError(f"k={k} out of range 0..{n}")
        if fan.label == "p1n":
            labels = tuple(combinations(range(n), n - k))
            comp = [tuple(i for i in range(n) if i not in a) for a in labels]
            return BasisSlice(fan, k, labels,
                              tuple(_c_alpha(fan, a) for a in labels),
                              tuple(_c_alpha(fan, b) for b in comp),
                              tuple(_orthant(n, b) for b in comp))
        const = lambda codim: MinkowskiWeight.from_function(fan, codim, lambda s: 1)  # noqa: E731
        return BasisSlice(fan, k, ((),), (const(k),), (const(n - k),), (_orthant(n, range(k)),))


def standard_weight_basis(target: Fan, k: int) -> BasisSlice:
    return DualBasisSpec(target).slice(k)


# -- pullback ---------------------------------------------------------------

def pullback_along_morphism(psi: Sequence[Sequence[int]], src: Fan, dst: Fan,
                            c: MinkowskiWeight) -> MinkowskiWeight:
    """Pull c back along the toric morphism induced by psi.

    For tau' in src of codim k, with tau the smallest cone of dst containing
    psi(tau'), the value is [N : psi(N) + N_tau] * c(tau) when tau has codim k
    and 0 otherwise.
    """
    n = src.n
    if det(psi) == 0:
        raise SingularMatrixError("pullback needs det(psi) != 0")
    columns = transpose(psi)
    index_cache: dict[tuple, int] = {}
    values = {}
    for cone in src.by_codim(c.codim):
        image = [matvec(psi, r) for r in cone.rays]
        tau = dst.smallest_containing(image)
        if tau is None:
            raise IncompatibleError(f"psi maps cone {list(map(list, cone.rays))} into no cone of the target")
        if tau.codim != c.codim or not c[tau]:
            continue
        if tau.key not in index_cache:
            index_cache[tau.key] = lattice_index_sum(columns, tau.lattice_basis, n)
        values[cone.key] = index_cache[tau.key] * c[tau]
    return MinkowskiWeight(src, c.codim, values)


# -- generic displacement vectors ----------------------------------------------

@dataclass(frozen=True)
class GenericVector:
    v: tuple[int, ...]
    seed: int
    attempts: int


_PERM_CACHE: dict[int, list[tuple[tuple[int, ...], int]]] = {}


def _signed_perms(m: int):
    if m not in _PERM_CACHE:
        out = []
        for p in permutations(range(m)):
            inversions = sum(1 for i in range(m) for j in range(i + 1, m) if p[i] > p[j])
            out.append((p, -1 if inversions % 2 else 1))
        _PERM_CACHE[m] = out
    return _PERM_CACHE[m]


def _hyperplane_normals_numpy(rays: np.ndarray, n: int) -> np.ndarray:
    combos = np.array(list(combinations(range(len(rays)), n - 1)), dtype=np.int64)
    out = []
    for chunk in np.array_split(combos, max(1, len(combos) // 50_000)):
        R = rays[chunk]  # (P, n-1, n)
        normal = np.zeros((len(chunk), n), dtype=np.int64)
        for j in range(n):
            cols = [c for c in range(n) if c != j]
            sub = R[:, :, cols]
            acc = np.zeros(len(chunk), dtype=np.int64)
            for perm, sign in _signed_perms(n - 1):
                term = np.ones(len(chunk), dtype=np.int64)
                for i, pi in enumerate(perm):
                    term = term * sub[:, i, pi]
                acc += sign * term
            normal[:, j] = acc if j % 2 == 0 else -acc
        out.append(normal)
    normals = np.concatenate(out)
    normals = normals[np.any(normals != 0, axis=1)]
    g = np.gcd.reduce(np.abs(normals), axis=1)
    normals = normals // g[:, None]
    lead = np.array([row[np.flatnonzero(row)[0]] for row in normals]) if len(normals) else np.array([])
    normals = normals * np.sign(lead)[:, None]
    return np.unique(normals, axis=0)


def _cross(vectors: Sequence[Sequence[int]], n: int) -> tuple[int, ...]:
    return tuple((-1) ** j * det([[v[c] for c in range(n) if c != j] for v in vectors]) for j in range(n))


def _ray_hyperplanes(fan: Fan) -> list[tuple[int, ...]] | np.ndarray:
    """Primitive normals of all hyperplanes spanned by n-1 rays of the fan (cached)."""
    cached = getattr(fan, "_ray_hyperplanes", None)
    if cached is not None:
        return cached
    n, rays = fan.n, fan.rays
    bound = max((abs(x) for r in rays for x in r), default=0)
    if n == 1:
        normals: list | np.ndarray = [(1,)]
    elif math.comb(len(rays), n - 1) > 20_000 and n <= 6 and \
            math.factorial(n) * bound ** (n - 1) * n * COORD_BOUND < 2**62:
        normals = _hyperplane_normals_numpy(np.array(rays, dtype=np.int64), n)
    else:
        seen = set()
        for subset in combinations(rays, n - 1):
            h = _cross(subset, n)
            if any(h):
                h = primitive(h)
                seen.add(max(h, tuple(-x for x in h)))
        normals = sorted(seen)
    fan._ray_hyperplanes = normals
    return normals


def _avoids_ray_hyperplanes(fan: Fan, v: Sequence[int]) -> bool:
    normals = _ray_hyperplanes(fan)
    if isinstance(normals, np.ndarray):
        return bool(np.all(normals @ np.array(v, dtype=np.int64) != 0))
    return all(dot(h, v) for h in normals)


def _no_degenerate_pair(fan: Fan, v: Sequence[int]) -> bool:
    n = fan.n
    for d in range(n + 1):
        for sigma in fan.by_dim(d):
            for tau in fan.by_dim(n - d):
                if translated_meet(sigma, tau, v).kind is MeetKind.DEGENERATE:
                    return False
    return True


def is_generic(fans: Sequence[Fan], v: Sequence[int]) -> bool:
    """No complementary-dimension pair of any fan meets degenerately after translation by v.

    For complete simplicial fans a degenerate pair forces v onto a hyperplane
    spanned by n-1 rays, so avoiding all of those certifies genericity; the
    pairwise test only runs when that certificate fails.
    """
    for fan in fans:
        simplicial = fan.complete and all(c.is_simplicial for c in fan.maximal)
        if simplicial and _avoids_ray_hyperplanes(fan, v):
            continue
        if not _no_degenerate_pair(fan, v):
            return False
    return True


def pick_generic_vector(fans: Sequence[Fan], seed: int = 0) -> GenericVector:
    """Deterministic seeded search for a displacement vector generic for all fans."""
    n = fans[0].n
    if any(f.n != n for f in fans):
        raise DimensionMismatchError("fans of different rank")
    rng = random.Random(seed)
    for attempt in range(1, MAX_ATTEMPTS + 1):
        v = tuple(rng.randint(-COORD_BOUND, COORD_BOUND) for _ in range(n))
        if any(v) and is_generic(fans, v):
            return GenericVector(v, seed, attempt)
    raise ExhaustedError(f"no generic vector after {MAX_ATTEMPTS} attempts (seed {seed})")


# -- products -----------------------------------------------------------------

def cup_at_zero(c1: MinkowskiWeight, c2: MinkowskiWeight, v: GenericVector | Sequence[int]) -> int:
    """(c1 u c2)({0}) by the fan displacement rule.

    Sums [N : N_sigma + N_tau] c1(sigma) c2(tau) over pairs with sigma meeting
    tau + v.  Raises GenericityFailure on a degenerate meet.
    """
    vec = v.v if isinstance(v, GenericVector) else tuple(v)
    fan = c1.fan
    if c2.fan is not fan:
        raise DimensionMismatchError("weights live on different fans")
    if c1.codim + c2.codim != fan.n:
        raise DimensionMismatchError(f"codims {c1.codim} + {c2.codim} != {fan.n}")
    total = 0
    s2 = c2.support()
    for sigma, a in c1.support():
        for tau, b in s2:
            meet = translated_meet(sigma, tau, vec)
            if meet.kind is MeetKind.DEGENERATE:
                raise GenericityFailure(
                    f"v={list(vec)} meets {list(map(list, sigma.rays))} and "
                    f"{list(map(list, tau.rays))} degenerately")
            if meet.kind is MeetKind.POINT:
                total += lattice_index_sum(sigma.lattice_basis, tau.lattice_basis, fan.n) * a * b
    return total


def pushforward_to_target(c_tilde: MinkowskiWeight, spec: DualBasisSpec | BasisSlice,
                          k: int | None, v: GenericVector | Sequence[int]) -> list[int]:
    """Coordinates of pi_* c_tilde in the standard basis of the target.

    pi is induced by the identity of N, so c_tilde.fan must refine the target.
    Each coordinate is (c_tilde u pi^* dual)({0}).
    """
    if isinstance(spec, DualBasisSpec):
        basis = spec.slice(c_tilde.codim if k is None else k)
    else:
        basis = spec
    if basis.k != c_tilde.codim:
        raise DimensionMismatchError(f"weight has codim {c_tilde.codim}, basis is for k={basis.k}")
    ident = identity(c_tilde.fan.n)
    return [cup_at_zero(c_tilde, pullback_along_morphism(ident, c_tilde.fan, basis.target, d), v)
            for d in basis.duals]


__all__ = [
    "MinkowskiWeight", "WeightReport", "verify_weight", "BasisSlice", "DualBasisSpec",
    "standard_weight_basis", "pullback_along_morphism", "GenericVector", "is_generic",
    "pick_generic_vector", "cup_at_zero", "pushforward_to_target",
]
