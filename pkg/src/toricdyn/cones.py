"""Rational polyhedral cones with exact double descriptions.

A :class:`Cone` stores both descriptions: its primitive extreme rays and an
H-description made of facet normals ``h`` (``h . x >= 0`` on the cone) plus a
lattice basis of the orthogonal complement of its span.  Facet normals are
taken inside the span, so for a full-dimensional cone they are the usual
inward normals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import chain
from typing import Iterable, Sequence

from .errors import DimensionGapError, DimensionMismatchError, NotStronglyConvexError
from .linalg import integer_kernel, primitive, rank, saturated_basis, snf_diagonal, solve_rational, transpose

Vector = tuple[int, ...]


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _double_description(rows: Sequence[Vector], d: int) -> list[Vector]:
    """Extreme rays of the pointed cone {y in R^d : row . y >= 0 for all rows}.

    Incremental Motzkin double description.  The lineality space of the
    partial cone is tracked explicitly and consumed one inequality at a time;
    once an inequality vanishes on it, rays are split and recombined across
    adjacent pairs (combinatorial adjacency test on tight sets).
    """
    lin: list[Vector] = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    rays: list[tuple[Vector, frozenset]] = []
    done: set[int] = set()
    for idx, b in enumerate(rows):
        if not any(b):
            continue
        vals = [dot(b, l) for l in lin]
        piv = next((i for i, t in enumerate(vals) if t), None)
        if piv is not None:
            l0, s0 = lin.pop(piv), vals.pop(piv)
            if s0 < 0:
                l0, s0 = tuple(-x for x in l0), -s0
            lin = [primitive([s0 * a - t * c for a, c in zip(l, l0)]) for l, t in zip(lin, vals)]
            new = []
            for r, z in rays:
                t = dot(b, r)
                new.append((primitive([s0 * a - t * c for a, c in zip(r, l0)]), z | {idx}))
            new.append((l0, frozenset(done)))
            rays = new
        else:
            pos, neg, new = [], [], []
            for r, z in rays:
                t = dot(b, r)
                if t > 0:
                    pos.append((r, z, t))
                    new.append((r, z))
                elif t < 0:
                    neg.append((r, z, t))
                else:
                    new.append((r, z | {idx}))
            need = d - len(lin) - 2
            for p, zp, tp in pos:
                for q, zq, tq in neg:
                    common = zp & zq
                    if len(common) < need:
                        continue
                    if any(common <= z for r, z in rays if r is not p and r is not q):
                        continue
                    w = primitive([tp * a - tq * c for a, c in zip(q, p)])
                    new.append((w, common | {idx}))
            rays = new
        done.add(idx)
    if lin:
        raise NotStronglyConvexError("cone contains a line")
    return sorted({r for r, _ in rays})


def extreme_rays(ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]], n: int) -> list[Vector]:
    """Primitive extreme rays of {x : h.x >= 0 (h in ineqs), e.x = 0 (e in eqs)}."""
    basis = integer_kernel(list(eqs), n)
    d = len(basis)
    if d == 0:
        return []
    rows = [tuple(dot(h, k) for k in basis) for h in ineqs]
    out = set()
    for y in _double_description(rows, d):
        x = [sum(y[i] * basis[i][c] for i in range(d)) for c in range(n)]
        out.add(primitive(x))
    return sorted(out)


class MeetKind(enum.Enum):
    EMPTY = "EMPTY"
    POINT = "POINT"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class Meet:
    kind: MeetKind
    point: tuple[Fraction, ...] | None = None
    interior: bool = False


@dataclass(frozen=True, eq=False)
class Cone:
    """Strongly convex rational cone in Z^n.

    ``rays`` is the canonical key: the sorted primitive extreme rays.
    """

    ambient: int
    rays: tuple[Vector, ...]
    facets: tuple[Vector, ...]
    equations: tuple[Vector, ...]

    def __eq__(self, other):
        return isinstance(other, Cone) and (self.ambient, self.rays) == (other.ambient, other.rays)

    def __hash__(self):
        return hash((self.ambient, self.rays))

    def __repr__(self):
        return f"Cone({list(map(list, self.rays))})"

    @property
    def key(self) -> tuple[Vector, ...]:
        return self.rays

    @property
    def dim(self) -> int:
        return self.ambient - len(self.equations)

    @property
    def codim(self) -> int:
        return len(self.equations)

    @property
    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    def contains(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(h, x) >= 0 for h in self.facets)

    def contains_all(self, points: Iterable[Sequence]) -> bool:
        return all(self.contains(p) for p in points)

    def in_relative_interior(self, x: Sequence) -> bool:
        return all(dot(e, x) == 0 for e in self.equations) and all(dot(h, x) > 0 for h in self.facets)

    @cached_property
    def interior_point(self) -> Vector:
        return tuple(sum(c) for c in zip(*self.rays)) if self.rays else (0,) * self.ambient

    @cached_property
    def lattice_basis(self) -> list[Vector]:
        """Basis of N_cone, the sublattice generated by the lattice points of the cone."""
        return saturated_basis(self.rays, self.ambient)

    @cached_property
    def span_basis(self) -> tuple[Vector, ...]:
        """Linearly independent subset of the rays spanning the same space."""
        if self.is_simplicial:
            return self.rays
        chosen: list[Vector] = []
        for r in self.rays:
            if rank(chosen + [r]) > len(chosen):
                chosen.append(r)
        return tuple(chosen)

    @cached_property
    def multiplicity(self) -> int:
        """Index of span_Z(rays) in N_cone; 1 iff the cone is smooth."""
        if not self.rays:
            return 1
        return math.prod(d for d in snf_diagonal(transpose(self.rays)) if d)

    def facet_cones(self) -> list["Cone"]:
        return [self._facet(h) for h in self.facets]

    def _facet(self, h: Vector) -> "Cone":
        return cone_from_rays([r for r in self.rays if dot(h, r) == 0], self.ambient)

    @cached_property
    def faces(self) -> frozenset["Cone"]:
        """All faces, including the cone itself and the zero cone."""
        out = {self}
        for f in self.facet_cones():
            out |= f.faces
        return frozenset(out)

    def is_face_of(self, other: "Cone") -> bool:
        return self in other.faces


@lru_cache(maxsize=None)
def _cone_from_extreme_rays(rays: tuple[Vector, ...], n: int) -> Cone:
    eqs = tuple(integer_kernel(rays, n)) if rays else tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    facets = tuple(extreme_rays(rays, eqs, n)) if rays else ()
    return Cone(n, rays, facets, eqs)


def cone_from_rays(rays: Iterable[Sequence[int]], n: int) -> Cone:
    """Cone from rays already known to be its primitive extreme rays."""
    return _cone_from_extreme_rays(tuple(sorted(tuple(r) for r in rays)), n)


def make_cone(raw_generators: Iterable[Sequence[int]], n: int | None = None) -> Cone:
    """Canonical cone generated by arbitrary lattice vectors.

    Generators are made primitive, redundant ones are dropped and the facet
    description is computed.  Raises NotStronglyConvexError if the
    generators span a line.
    """
    gens = [tuple(int(x) for x in g) for g in raw_generators]
    if n is None:
        if not gens:
            raise DimensionMismatchError("ambient rank required for an empty generator list")
        n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise DimensionMismatchError(f"generators must have length {n}")
    gens = sorted({primitive(g) for g in gens if any(g)})
    if not gens:
        return cone_from_rays((), n)
    eqs = integer_kernel(gens, n)
    facets = extreme_rays(gens, eqs, n)
    total = [sum(c) for c in zip(*facets)] if facets else [0] * n
    if any(dot(total, g) <= 0 for g in gens):
        raise NotStronglyConvexError(f"generators {gens} span a line")
    return cone_from_rays(extreme_rays(facets, eqs, n), n)


def cone_from_inequalities(ineqs: Iterable[Sequence[int]], eqs: Iterable[Sequence[int]], n: int) -> Cone:
    return cone_from_rays(extreme_rays(list(ineqs), list(eqs), n), n)


def cone_intersection(a: Cone, b: Cone) -> Cone:
    if a.ambient != b.ambient:
        raise DimensionMismatchError("cones live in lattices of different rank")
    return cone_from_inequalities(a.facets + b.facets, a.equations + b.equations, a.ambient)


def preimage(cone: Cone, psi: Sequence[Sequence[int]]) -> Cone:
    """{x : psi x in cone} for nonsingular psi."""
    pull = lambda h: primitive([dot(h, col) for col in transpose(psi)])  # noqa: E731
    return cone_from_inequalities([pull(h) for h in cone.facets], [pull(e) for e in cone.equations], cone.ambient)


def translated_meet(sigma: Cone, tau: Cone, v: Sequence[int]) -> Meet:
    """Classify sigma meets tau + v for cones of complementary dimension.

    Spans that do not fill R^n give EMPTY when v avoids span(sigma)+span(tau)
    and DEGENERATE otherwise.  For complementary spans the intersection point
    is unique; it is DEGENERATE when it lies on the relative boundary of
    either cone.
    """
    n = sigma.ambient
    if tau.ambient != n or len(v) != n:
        raise DimensionMismatchError("translated_meet: rank mismatch")
    if sigma.dim + tau.dim != n:
        raise DimensionMismatchError(f"dims {sigma.dim} + {tau.dim} != {n}")
    bs, bt = sigma.span_basis, tau.span_basis
    cols = list(bs) + [tuple(-x for x in w) for w in bt]
    M = transpose(cols) if cols else ()
    x = solve_rational(M, v) if n else ()
    if x is None:
        consistent = rank(M) == rank([row + (vi,) for row, vi in zip(M, v)])
        return Meet(MeetKind.DEGENERATE if consistent else MeetKind.EMPTY)
    a, b = x[: len(bs)], x[len(bs):]
    p = tuple(sum((ai * u[c] for ai, u in zip(a, bs)), Fraction(0)) for c in range(n))
    if sigma.is_simplicial and tau.is_simplicial:
        signs = list(chain(a, b))
    else:
        q = [pc - vc for pc, vc in zip(p, v)]
        signs = [dot(h, p) for h in sigma.facets] + [dot(h, q) for h in tau.facets]
    if any(s < 0 for s in signs):
        return Meet(MeetKind.EMPTY)
    if any(s == 0 for s in signs):
        return Meet(MeetKind.DEGENERATE, p, False)
    return Meet(MeetKind.POINT, p, True)


def _xgcd_combination(values: Sequence[int]) -> tuple[int, list[int]]:
    """g >= 0 and coefficients c with sum(c_i * values_i) == g == gcd(values)."""
    g, coeffs = 0, [0] * len(values)
    for i, a in enumerate(values):
        # extended Euclid on (g, a)
        x0, y0, r0, x1, y1, r1 = 1, 0, g, 0, 1, a
        while r1:
            q = r0 // r1
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
            r0, r1 = r1, r0 - q * r1
        if r0 < 0:
            x0, y0, r0 = -x0, -y0, -r0
        coeffs = [x0 * c for c in coeffs]
        coeffs[i] = y0
        g = r0
    return g, coeffs


def lattice_normal(sigma: Cone, tau: Cone) -> Vector:
    """Lattice point n of sigma whose class generates N_sigma / N_tau.

    tau must be a facet of sigma.
    """
    if sigma.dim != tau.dim + 1:
        raise DimensionGapError(f"dim sigma = {sigma.dim}, dim tau = {tau.dim}")
    if not tau.is_face_of(sigma):
        raise DimensionGapError("tau is not a face of sigma")
    h = next(f for f in sigma.facets if all(dot(f, r) == 0 for r in tau.rays))
    basis = sigma.lattice_basis
    g, coeffs = _xgcd_combination([dot(h, b) for b in basis])
    x = [sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(sigma.ambient)]
    w0 = tau.interior_point
    shift = 0
    for f in sigma.facets:
        fw = dot(f, w0)
        if fw > 0:
            shift = max(shift, -(dot(f, x) // fw))
    n = tuple(xi + shift * wi for xi, wi in zip(x, w0))
    assert sigma.contains(n) and dot(h, n) == g
    return n
