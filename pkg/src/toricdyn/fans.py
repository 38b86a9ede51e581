"""Complete fans: construction, validation, refinement along a linear map."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence

from .cones import Cone, cone_from_rays, cone_intersection, make_cone, preimage
from .errors import SingularMatrixError
from .linalg import det, inverse, matvec, primitive, smith_normal_form, solve_rational, transpose


class Fan:
    """Finite face-closed collection of cones, keyed by their sorted rays.

    ``label`` records the standard targets ("p1n" or "pn") that carry a
    known Poincare-dual basis.
    """

    def __init__(self, cones: Iterable[Cone], n: int, complete: bool = True, label: str | None = None):
        self.n = n
        self.complete = complete
        self.label = label
        self.cones: dict[tuple, Cone] = {}
        for c in cones:
            self.cones[c.key] = c

    @classmethod
    def from_maximal(cls, maximal: Iterable[Cone], n: int, complete: bool = True,
                     label: str | None = None) -> "Fan":
        cones: set[Cone] = set()
        for c in maximal:
            cones |= c.faces
        return cls(cones, n, complete, label)

    def __len__(self):
        return len(self.cones)

    def __iter__(self):
        return iter(self.sorted_cones)

    def __contains__(self, cone: Cone) -> bool:
        return cone.key in self.cones

    def __repr__(self):
        return f"Fan(n={self.n}, cones={len(self)}, label={self.label!r})"

    @cached_property
    def sorted_cones(self) -> list[Cone]:
        return sorted(self.cones.values(), key=lambda c: (c.dim, c.key))

    @cached_property
    def _by_dim(self) -> dict[int, list[Cone]]:
        out: dict[int, list[Cone]] = {d: [] for d in range(self.n + 1)}
        for c in self.sorted_cones:
            out[c.dim].append(c)
        return out

    def by_dim(self, d: int) -> list[Cone]:
        return self._by_dim.get(d, [])

    def by_codim(self, k: int) -> list[Cone]:
        return self.by_dim(self.n - k)

    @cached_property
    def maximal(self) -> list[Cone]:
        """Cones that are not a proper face of another cone in the fan."""
        covered = set()
        for c in self.sorted_cones:
            for f in c.facet_cones():
                covered.add(f.key)
        return [c for c in self.sorted_cones if c.key not in covered]

    @cached_property
    def rays(self) -> list[tuple[int, ...]]:
        return [c.rays[0] for c in self.by_dim(1)]

    @cached_property
    def _cofacets(self) -> dict[tuple, list[Cone]]:
        out: dict[tuple, list[Cone]] = {k: [] for k in self.cones}
        for c in self.sorted_cones:
            for f in c.facet_cones():
                out.setdefault(f.key, []).append(c)
        return out

    def cofacets(self, tau: Cone) -> list[Cone]:
        """Cones of the fan having tau as a facet."""
        return self._cofacets.get(tau.key, [])

    def smallest_containing(self, points: Sequence[Sequence[int]]) -> Cone | None:
        """Smallest cone containing all points, or None."""
        for c in self.sorted_cones:
            if c.contains_all(points):
                return c
        return None


@dataclass
class ValidationReport:
    violations: list[tuple[str, tuple]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, *witnesses):
        self.violations.append((axiom, witnesses))


def fan_validate(fan: Fan, seed: int = 0) -> ValidationReport:
    """Check face closure, proper pairwise intersection and completeness.

    Pairwise intersections are only tested between maximal cones; with face
    closure in place that implies the axiom for all pairs.
    """
    report = ValidationReport()
    for c in fan.sorted_cones:
        if c.ambient != fan.n:
            report.add("rank", c.key)
        for f in c.facet_cones():
            if f not in fan:
                report.add("face-closure", c.key, f.key)
    maximal = fan.maximal
    for i, a in enumerate(maximal):
        for b in maximal[i + 1:]:
            meet = cone_intersection(a, b)
            if not (meet.is_face_of(a) and meet.is_face_of(b)):
                report.add("intersection-not-face", a.key, b.key)
    if fan.complete:
        n = fan.n
        for c in maximal:
            if c.dim != n:
                report.add("complete:not-pure", c.key)
        for tau in fan.by_codim(1):
            count = sum(1 for s in fan.cofacets(tau) if s.dim == n)
            if count != 2:
                report.add("complete:wall", tau.key, count)
        rng = random.Random(seed)
        full = fan.by_dim(n)
        for _ in range(10 * 3 ** n):
            x = [rng.randint(-10**6, 10**6) for _ in range(n)]
            if not any(c.contains(x) for c in full):
                report.add("complete:uncovered", tuple(x))
                break
    return report


def fan_p1n(n: int) -> Fan:
    """Fan of (P^1)^n: orthants spanned by +-e_i."""
    maximal = []
    for signs in product((1, -1), repeat=n):
        rays = [tuple(s if j == i else 0 for j in range(n)) for i, s in enumerate(signs)]
        maximal.append(cone_from_rays(rays, n))
    return Fan.from_maximal(maximal, n, label="p1n")


def pn_rays(n: int) -> list[tuple[int, ...]]:
    """[e_0, e_1, ..., e_n] with e_0 = -(e_1 + ... + e_n)."""
    return [tuple([-1] * n)] + [tuple(int(i == j) for j in range(n)) for i in range(n)]


def fan_pn(n: int) -> Fan:
    """Fan of P^n: cones over proper subsets of {e_0, ..., e_n}."""
    rays = pn_rays(n)
    maximal = [cone_from_rays(rays[:i] + rays[i + 1:], n) for i in range(n + 1)]
    return Fan.from_maximal(maximal, n, label="p1n" if n == 1 else "pn")


def is_compatible(src: Fan, psi: Sequence[Sequence[int]], dst: Fan) -> bool:
    """True iff psi maps every cone of src into some cone of dst."""
    for c in src.maximal:
        if dst.smallest_containing([matvec(psi, r) for r in c.rays]) is None:
            return False
    return True


@lru_cache(maxsize=None)
def _pulling(cone: Cone) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # Pulling the smallest ray; restricted to any face this is again the
    # pulling triangulation of that face, so shared faces agree.
    if cone.is_simplicial:
        return (cone.rays,)
    r = cone.rays[0]
    out = []
    for facet in cone.facet_cones():
        if r in facet.rays:
            continue
        for simplex in _pulling(facet):
            out.append(tuple(sorted(simplex + (r,))))
    return tuple(out)


def simplicialize(fan: Fan) -> Fan:
    """Triangulate every cone over its own rays (pulling triangulation)."""
    if all(c.is_simplicial for c in fan.maximal):
        return fan
    maximal = [cone_from_rays(s, fan.n) for c in fan.maximal for s in _pulling(c)]
    return Fan.from_maximal(maximal, fan.n, fan.complete, None)


def _parallelepiped_point(cone: Cone) -> tuple[int, ...]:
    """Nonzero primitive lattice point sum t_i r_i with 0 <= t_i < 1."""
    n = cone.ambient
    R = transpose(cone.rays)
    U, D, _ = smith_normal_form(R)
    Uinv = inverse(U)
    i = next(i for i in range(n) if D[i][i] > 1)
    x = [int(Uinv[r][i]) for r in range(n)]
    t = solve_rational(R, x)
    frac = [ti - (ti.numerator // ti.denominator) for ti in t]
    p = [sum(f * r[c] for f, r in zip(frac, cone.rays)) for c in range(n)]
    assert all(isinstance(c, int) or c.denominator == 1 for c in p)
    return primitive([int(c) for c in p])


def smooth(fan: Fan, max_steps: int = 10_000) -> Fan:
    """Stellar subdivisions until every maximal cone is unimodular.

    Each step inserts a lattice point of the fundamental parallelepiped of a
    singular cone; the cones it creates have strictly smaller multiplicity.
    The input must be complete and simplicial.
    """
    maximal = {c.key: c for c in fan.maximal}
    for _ in range(max_steps):
        bad = next((c for _, c in sorted(maximal.items()) if c.multiplicity > 1), None)
        if bad is None:
            return Fan.from_maximal(maximal.values(), fan.n, fan.complete, None)
        p = _parallelepiped_point(bad)
        for key, c in list(maximal.items()):
            if not c.contains(p):
                continue
            coeffs = solve_rational(transpose(c.rays), p)
            del maximal[key]
            for i, a in enumerate(coeffs):
                if a > 0:
                    rays = list(c.rays)
                    rays[i] = p
                    new = cone_from_rays(rays, fan.n)
                    maximal[new.key] = new
    raise RuntimeError("smoothing did not terminate")


def common_refinement(fan: Fan, psi: Sequence[Sequence[int]], smooth_fan: bool = False) -> Fan:
    """Complete simplicial refinement of ``fan`` mapped conewise into ``fan`` by psi.

    Maximal cones are the full-dimensional intersections sigma & psi^-1(sigma')
    over pairs of maximal cones, then triangulated.
    """
    if det(psi) == 0:
        raise SingularMatrixError("refinement needs det(psi) != 0")
    n = fan.n
    full = fan.by_dim(n)
    pulled = [preimage(c, psi) for c in full]
    maximal = []
    for a in full:
        for b in pulled:
            c = cone_intersection(a, b)
            if c.dim == n:
                maximal.append(c)
    refined = simplicialize(Fan.from_maximal(maximal, n, fan.complete))
    if smooth_fan:
        refined = smooth(refined)
    return refined


def fan_from_generators(n: int, maximal_generators: Iterable[Iterable[Sequence[int]]],
                        complete: bool = True) -> Fan:
    return Fan.from_maximal([make_cone(g, n) for g in maximal_generators], n, complete)


__all__ = [
    "Fan", "ValidationReport", "fan_validate", "fan_p1n", "fan_pn", "pn_rays", "is_compatible",
    "simplicialize", "smooth", "common_refinement", "fan_from_generators",
]
