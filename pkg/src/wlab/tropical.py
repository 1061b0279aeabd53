"""Tropical enumeration for P2, F0 and F2: floor diagrams, lattice paths,
and the plane-curve recursion, cross-validating each other.

Three independent algorithms compute the same genus-0 counts through
c1.d - 1 generic points:

* floor diagrams: weighted ordered trees encoding the vertical-fiber
  decomposition of a tropical curve; markings count point assignments;
* lattice paths: corner-cutting recursion over lambda-increasing paths in
  the Newton polygon;
* the classical degree recursion for complex counts on P2.

Complex counts weight a diagram by the product of squared edge weights;
purely real (Welschinger) counts keep a diagram only when every bounded
edge weight is odd.  All arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial
from itertools import combinations
from typing import Iterator

from . import _parallel
from .ab_engine import InvariantResult
from .errors import InputError
from .multiplicity import binomial
from .surface_model import (
    Component,
    DivisorClass,
    RealStructureDescriptor,
    SurfaceModel,
)

Point = tuple[int, int]

COMPLEX = "complex"
REAL = "real"


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _lam(p: Point) -> tuple[int, int]:
    # Order induced by x - eps*y for an infinitesimal eps > 0.
    return (p[0], -p[1])


@dataclass(frozen=True)
class NewtonPolygon:
    """Convex lattice polygon, vertices counterclockwise starting at the
    lexicographic minimum.  Two vertices encode the degenerate (segment)
    polygon of a fiber class."""

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if n < 2:
            raise InputError("a Newton polygon needs at least two vertices")
        if len(set(self.vertices)) != n:
            raise InputError("polygon vertices must be distinct")
        if n == 2:
            return
        for i in range(n):
            o, a, b = (
                self.vertices[i],
                self.vertices[(i + 1) % n],
                self.vertices[(i + 2) % n],
            )
            if _cross(o, a, b) <= 0:
                raise InputError("vertices must be strictly convex counterclockwise")

    @property
    def is_segment(self) -> bool:
        return len(self.vertices) == 2

    def contains(self, p: Point) -> bool:
        n = len(self.vertices)
        if self.is_segment:
            a, b = self.vertices
            if _cross(a, b, p) != 0:
                return False
            return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[
                1
            ] <= max(a[1], b[1])
        return all(
            _cross(self.vertices[i], self.vertices[(i + 1) % n], p) >= 0 for i in range(n)
        )

    def lattice_points(self) -> list[Point]:
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return [
            (x, y)
            for x in range(min(xs), max(xs) + 1)
            for y in range(min(ys), max(ys) + 1)
            if self.contains((x, y))
        ]

    def boundary_lattice_length(self) -> int:
        if self.is_segment:
            (ax, ay), (bx, by) = self.vertices
            return 2 * math.gcd(abs(bx - ax), abs(by - ay))
        total = 0
        n = len(self.vertices)
        for i in range(n):
            (ax, ay), (bx, by) = self.vertices[i], self.vertices[(i + 1) % n]
            total += math.gcd(abs(bx - ax), abs(by - ay))
        return total


def _class_coeffs(surface: SurfaceModel, d: DivisorClass) -> tuple[int, ...]:
    if d.lattice != surface.lattice:
        raise InputError("class does not live in the lattice of %s" % surface.name)
    if any(c < 0 for c in d.coeffs):
        raise InputError("class must have nonnegative coordinates, got %s" % (d,))
    if all(c == 0 for c in d.coeffs):
        raise InputError("class must be nonzero")
    return d.coeffs


def polygon_for(surface: SurfaceModel, d: DivisorClass) -> NewtonPolygon:
    """Newton polygon of the class d on a supported toric surface.

    P2 degree d gives the standard triangle; F0 bidegree (a,b) the b-by-a
    rectangle; F2 class aB+bF the quadrilateral with top edge of length b
    and right edge of direction (2,-1), collapsing to a triangle at b=0.
    """
    coeffs = _class_coeffs(surface, d)
    if surface.polygon_family == "P2":
        (deg,) = coeffs
        return NewtonPolygon(((0, 0), (deg, 0), (0, deg)))
    if surface.polygon_family == "F0":
        a, b = coeffs
        if a == 0:
            return NewtonPolygon(((0, 0), (b, 0)))
        if b == 0:
            return NewtonPolygon(((0, 0), (0, a)))
        return NewtonPolygon(((0, 0), (b, 0), (b, a), (0, a)))
    if surface.polygon_family == "F2":
        a, b = coeffs
        if a == 0:
            return NewtonPolygon(((0, 0), (b, 0)))
        if b == 0:
            return NewtonPolygon(((0, 0), (2 * a, 0), (0, a)))
        return NewtonPolygon(((0, 0), (2 * a + b, 0), (b, a), (0, a)))
    raise InputError("no Newton polygon family for surface %s" % surface.name)


# ---------------------------------------------------------------------------
# Floor diagrams


@dataclass(frozen=True)
class FloorDiagram:
    """Weighted ordered tree of floors; elevator edges are oriented downward.

    Floors are 1..floor_count by increasing height.  Bounded edges are
    (lower, upper, weight); bottom/top end counts per floor all have
    weight 1 (forced by the marking budget).
    """

    floor_count: int
    bounded_edges: tuple[tuple[int, int, int], ...]
    bottom_ends: tuple[int, ...]
    top_ends: tuple[int, ...]

    def __post_init__(self) -> None:
        a = self.floor_count
        if a < 1:
            raise InputError("a floor diagram needs at least one floor")
        if len(self.bottom_ends) != a or len(self.top_ends) != a:
            raise InputError("end counts must list one entry per floor")
        if len(self.bounded_edges) != a - 1:
            raise InputError("floors with bounded edges must form a tree")
        seen = set()
        for lower, upper, weight in self.bounded_edges:
            if not 1 <= lower < upper <= a:
                raise InputError("edges must go from an upper floor to a lower one")
            if weight < 1:
                raise InputError("edge weights must be positive")
            if (lower, upper) in seen:
                raise InputError("parallel bounded edges would create a cycle")
            seen.add((lower, upper))
        if not self._is_connected():
            raise InputError("floors with bounded edges must form a tree")

    def _is_connected(self) -> bool:
        if self.floor_count == 1:
            return True
        adjacency: dict[int, list[int]] = {v: [] for v in range(1, self.floor_count + 1)}
        for lower, upper, _ in self.bounded_edges:
            adjacency[lower].append(upper)
            adjacency[upper].append(lower)
        stack, seen = [1], {1}
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == self.floor_count

    def divergence(self, floor: int) -> int:
        out = self.bottom_ends[floor - 1]
        into = self.top_ends[floor - 1]
        for lower, upper, weight in self.bounded_edges:
            if upper == floor:
                out += weight
            if lower == floor:
                into += weight
        return out - into

    def element_count(self) -> int:
        return (
            self.floor_count
            + len(self.bounded_edges)
            + sum(self.bottom_ends)
            + sum(self.top_ends)
        )


@dataclass(frozen=True)
class MarkedFloorDiagram:
    diagram: FloorDiagram
    marking_count: int

    def __post_init__(self) -> None:
        if self.marking_count < 1:
            raise InputError("marked diagrams carry a positive marking count")


def complex_multiplicity(diagram: FloorDiagram) -> int:
    """Product of squared bounded-edge weights."""
    product = 1
    for _, _, weight in diagram.bounded_edges:
        product *= weight * weight
    return product


def real_multiplicity(diagram: FloorDiagram) -> int:
    """1 when every bounded edge weight is odd, else 0.

    A weight-w elevator attaches to its two floors at vertices whose real
    signs square away, so an all-odd diagram counts with sign +1.
    """
    return 1 if all(weight % 2 for _, _, weight in diagram.bounded_edges) else 0


def _floor_shape(surface: SurfaceModel, d: DivisorClass) -> tuple[int, int, int, int]:
    """(floors, per-floor divergence, bottom end total, top end total)."""
    coeffs = _class_coeffs(surface, d)
    if surface.polygon_family == "P2":
        (deg,) = coeffs
        return deg, 1, deg, 0
    if surface.polygon_family == "F0":
        a, b = coeffs
        return a, 0, b, b
    if surface.polygon_family == "F2":
        a, b = coeffs
        return a, 2, 2 * a + b, b
    raise InputError("no floor decomposition for surface %s" % surface.name)


def _spanning_trees(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All spanning trees on floors 1..n as sorted (lower, upper) edge tuples."""
    if n == 1:
        yield ()
        return
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    for edges in combinations(pairs, n - 1):
        parent = list(range(n + 1))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        acyclic = True
        for i, j in edges:
            ri, rj = find(i), find(j)
            if ri == rj:
                acyclic = False
                break
            parent[ri] = rj
        if acyclic:
            yield edges


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def _edge_weights(
    edges: tuple[tuple[int, int], ...],
    bottoms: tuple[int, ...],
    tops: tuple[int, ...],
    divergence: int,
    floor_count: int,
) -> tuple[int, ...] | None:
    """Weights forced by the divergence condition, or None when some
    weight would be nonpositive.

    Cutting an edge splits the tree; summing the per-floor balance over the
    lower component determines that edge's weight.
    """
    weights = []
    for cut_index, (lower, _) in enumerate(edges):
        component = {lower}
        stack = [lower]
        while stack:
            v = stack.pop()
            for idx, (i, j) in enumerate(edges):
                if idx == cut_index:
                    continue
                if i == v and j not in component:
                    component.add(j)
                    stack.append(j)
                elif j == v and i not in component:
                    component.add(i)
                    stack.append(i)
        weight = sum(bottoms[v - 1] - tops[v - 1] for v in component) - divergence * len(
            component
        )
        if weight < 1:
            return None
        weights.append(weight)
    return tuple(weights)


def _poset_predecessors(diagram: FloorDiagram) -> list[int]:
    """Bitmask of elements that must precede each element in a marking.

    Element order: floors (by height), bounded edges, bottom ends, top ends.
    """
    a = diagram.floor_count
    elements = a + len(diagram.bounded_edges) + sum(diagram.bottom_ends) + sum(
        diagram.top_ends
    )
    direct: list[set[int]] = [set() for _ in range(elements)]
    for floor in range(1, a):
        direct[floor].add(floor - 1)  # floor index f has mask index f-1
    index = a
    for lower, upper, _ in diagram.bounded_edges:
        direct[index].add(lower - 1)
        direct[upper - 1].add(index)
        index += 1
    for floor in range(1, a + 1):
        for _ in range(diagram.bottom_ends[floor - 1]):
            direct[floor - 1].add(index)
            index += 1
    for floor in range(1, a + 1):
        for _ in range(diagram.top_ends[floor - 1]):
            direct[index].add(floor - 1)
            index += 1

    closed: list[int] = [0] * elements
    done: list[bool] = [False] * elements

    def close(e: int) -> int:
        if not done[e]:
            mask = 0
            for p in direct[e]:
                mask |= (1 << p) | close(p)
            closed[e] = mask
            done[e] = True
        return closed[e]

    for e in range(elements):
        close(e)
    return closed


_MAX_MARK_ELEMENTS = 22


def _linear_extensions(pred_masks: list[int]) -> int:
    n = len(pred_masks)
    if n > _MAX_MARK_ELEMENTS:
        raise InputError(
            "class too large: %d marked elements exceeds the exact-count limit" % n
        )
    ways = [0] * (1 << n)
    ways[0] = 1
    for mask in range(1 << n):
        w = ways[mask]
        if not w:
            continue
        for e in range(n):
            bit = 1 << e
            if not mask & bit and pred_masks[e] & ~mask == 0:
                ways[mask | bit] += w
    return ways[-1]


def marking_count(diagram: FloorDiagram) -> int:
    """Linear extensions of the element order, up to diagram automorphism.

    Automorphisms permute indistinguishable ends at a common floor; they
    act freely on extensions, so the quotient is an exact division.
    """
    extensions = _linear_extensions(_poset_predecessors(diagram))
    symmetry = 1
    for count in diagram.bottom_ends:
        symmetry *= math.factorial(count)
    for count in diagram.top_ends:
        symmetry *= math.factorial(count)
    quotient, remainder = divmod(extensions, symmetry)
    if remainder:
        raise AssertionError("end symmetry must divide the extension count")
    return quotient


def enumerate_floor_diagrams(
    surface: SurfaceModel, d: DivisorClass
) -> list[MarkedFloorDiagram]:
    """All floor diagrams for the class, each with its marking count.

    Classes without floors (multiples of the fiber) admit none.  The tree
    shape and end distribution determine the edge weights, so the sweep
    over trees and end compositions is exhaustive and duplicate-free.
    """
    floors, divergence, bottom_total, top_total = _floor_shape(surface, d)
    if floors == 0:
        return []
    budget = surface.points_required(d)
    marked = []
    for edges in _spanning_trees(floors):
        for bottoms in _compositions(bottom_total, floors):
            for tops in _compositions(top_total, floors):
                weights = _edge_weights(edges, bottoms, tops, divergence, floors)
                if weights is None:
                    continue
                diagram = FloorDiagram(
                    floor_count=floors,
                    bounded_edges=tuple(
                        (lo, up, w) for (lo, up), w in zip(edges, weights)
                    ),
                    bottom_ends=bottoms,
                    top_ends=tops,
                )
                if diagram.element_count() != budget:
                    raise AssertionError("marking budget violated during enumeration")
                if any(
                    diagram.divergence(v) != divergence for v in range(1, floors + 1)
                ):
                    raise AssertionError("divergence violated during enumeration")
                marked.append(MarkedFloorDiagram(diagram, marking_count(diagram)))
    return marked


def count_complex(surface: SurfaceModel, d: DivisorClass) -> int:
    """Genus-0 complex count of the class through c1.d - 1 generic points."""
    return sum(
        m.marking_count * complex_multiplicity(m.diagram)
        for m in enumerate_floor_diagrams(surface, d)
    )


def count_welschinger_real(surface: SurfaceModel, d: DivisorClass) -> int:
    """Irreducible tropical Welschinger count, all points real."""
    return sum(
        m.marking_count * real_multiplicity(m.diagram)
        for m in enumerate_floor_diagrams(surface, d)
    )


# ---------------------------------------------------------------------------
# Lattice paths


def _arcs(polygon: NewtonPolygon) -> tuple[tuple[Point, ...], tuple[Point, ...]]:
    """Corner sequences of the upper and lower boundary arcs, both running
    from the lambda-minimal to the lambda-maximal vertex.

    Vertices are counterclockwise, so walking forward from the minimum
    traces the lower arc and walking backward the upper one.
    """
    verts = polygon.vertices
    if polygon.is_segment:
        s, t = sorted(verts, key=_lam)
        return (s, t), (s, t)
    si = min(range(len(verts)), key=lambda i: _lam(verts[i]))
    ti = max(range(len(verts)), key=lambda i: _lam(verts[i]))
    n = len(verts)
    lower = [verts[si]]
    i = si
    while i != ti:
        i = (i + 1) % n
        lower.append(verts[i])
    upper = [verts[si]]
    i = si
    while i != ti:
        i = (i - 1) % n
        upper.append(verts[i])
    return tuple(upper), tuple(lower)


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(
        a[1], b[1]
    )


def _path_equals_arc(path: tuple[Point, ...], corners: tuple[Point, ...]) -> bool:
    pts = set(path)
    if any(c not in pts for c in corners[1:-1]):
        return False
    return all(
        any(_on_segment(p, corners[i], corners[i + 1]) for i in range(len(corners) - 1))
        for p in path
    )


def _corner_factor(twice_area: int, mode: str) -> int:
    if mode == COMPLEX:
        return twice_area
    if twice_area % 2 == 0:
        return 0
    return -1 if (twice_area - 1) // 2 % 2 else 1


class _PathCounter:
    """Corner-cutting multiplicity recursion over one polygon, memoized."""

    def __init__(self, polygon: NewtonPolygon, mode: str) -> None:
        if mode not in (COMPLEX, REAL):
            raise InputError("mode must be %r or %r" % (COMPLEX, REAL))
        self.polygon = polygon
        self.mode = mode
        self.upper, self.lower = _arcs(polygon)
        self.memo: dict[tuple[tuple[Point, ...], int], int] = {}

    def mu(self, path: tuple[Point, ...], orientation: int) -> int:
        """Multiplicity toward the upper (+1) or lower (-1) region.

        Cuts the first corner bending toward that region: once with the
        triangle factor and the corner removed, once as a parallelogram
        step moving the corner across, pruned when it leaves the polygon.
        A path with no such corner counts 1 if it follows the matching
        boundary arc and 0 otherwise.
        """
        key = (path, orientation)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        corner = None
        for j in range(1, len(path) - 1):
            turn = _cross(path[j - 1], path[j], path[j + 1])
            if turn * orientation > 0:
                corner = j
                break
        if corner is None:
            arc = self.upper if orientation > 0 else self.lower
            value = 1 if _path_equals_arc(path, arc) else 0
        else:
            u, v, w = path[corner - 1], path[corner], path[corner + 1]
            factor = _corner_factor(abs(_cross(u, v, w)), self.mode)
            value = 0
            if factor:
                value += factor * self.mu(path[:corner] + path[corner + 1 :], orientation)
            across = (u[0] + w[0] - v[0], u[1] + w[1] - v[1])
            if self.polygon.contains(across):
                value += self.mu(
                    path[:corner] + (across,) + path[corner + 1 :], orientation
                )
        self.memo[key] = value
        return value

    def path_weight(self, path: tuple[Point, ...]) -> int:
        return self.mu(path, +1) * self.mu(path, -1)


def _increasing_paths(polygon: NewtonPolygon, steps: int) -> list[tuple[Point, ...]]:
    points = sorted(polygon.lattice_points(), key=_lam)
    if steps < 1 or len(points) < 2:
        return []
    s, t = points[0], points[-1]
    interior = points[1:-1]
    if steps - 1 > len(interior):
        return []
    return [(s,) + middle + (t,) for middle in combinations(interior, steps - 1)]


def _chunk_weight(polygon_vertices: tuple[Point, ...], mode: str, chunk) -> int:
    counter = _PathCounter(NewtonPolygon(polygon_vertices), mode)
    return sum(counter.path_weight(path) for path in chunk)


def lattice_path_count(polygon: NewtonPolygon, mode: str, steps: int | None = None) -> int:
    """Sum of mu_upper * mu_lower over lambda-increasing paths with the
    given number of steps (defaults to boundary lattice length - 1, the
    generic point count for the polygon's class)."""
    if steps is None:
        steps = polygon.boundary_lattice_length() - 1
    paths = _increasing_paths(polygon, steps)
    if not paths:
        return 0
    return _parallel.sum_over(partial(_chunk_weight, polygon.vertices, mode), paths)


def lattice_path_count_for_class(surface: SurfaceModel, d: DivisorClass, mode: str) -> int:
    return lattice_path_count(polygon_for(surface, d), mode, surface.points_required(d))


# ---------------------------------------------------------------------------
# Degree recursion on P2 and the quadric correspondence


def kontsevich_count(degree: int) -> int:
    """Rational plane curves of the given degree through 3d - 1 points,
    by the classical recursion from the WDVV relation."""
    if degree < 1:
        raise InputError("degree must be a positive integer")
    counts = {1: 1}
    for d in range(2, degree + 1):
        total = 0
        for d1 in range(1, d):
            d2 = d - d1
            total += counts[d1] * counts[d2] * (
                d1 * d1 * d2 * d2 * binomial(3 * d - 4, 3 * d1 - 2)
                - d1 ** 3 * d2 * binomial(3 * d - 4, 3 * d1 - 1)
            )
        counts[d] = total
    return counts[degree]


_TAUTOLOGICAL_REAL_LOCUS = {
    "P2": (1, Component("RP2", orientable=False)),
    "F0": (0, Component("T2", orientable=True)),
    "F2": (0, Component("T2", orientable=True)),
}


def welschinger_result(surface: SurfaceModel, d: DivisorClass) -> InvariantResult:
    """Purely real tropical count wrapped with the toric real structure."""
    chi, component = _TAUTOLOGICAL_REAL_LOCUS[surface.name]
    return InvariantResult(
        surface=surface.name,
        class_coeffs=d.coeffs,
        real_structure=RealStructureDescriptor(chi, (component,)),
        r=surface.points_required(d),
        value=count_welschinger_real(surface, d),
        provenance="tropical Welschinger count via floor diagrams on %s" % surface.name,
    )


def quadric_welschinger(degree: int) -> InvariantResult:
    """Welschinger invariant of the quadric ellipsoid in the class d*h.

    Computed as the irreducible tropical Welschinger count of d*B on F2,
    which equals the ellipsoid invariant for every positive d.
    """
    if degree < 1:
        raise InputError("degree must be a positive integer")
    from .surface_model import surface as builtin_surface

    f2 = builtin_surface("F2")
    d = f2.class_from_coeffs((degree, 0))
    value = count_welschinger_real(f2, d)
    return InvariantResult(
        surface="Q",
        class_coeffs=(degree,),
        real_structure=RealStructureDescriptor(2, (Component("S2", orientable=True),)),
        r=f2.points_required(d),
        value=value,
        provenance="quadric ellipsoid W_Q(%dh) via the tropical count of %dB on F2"
        % (degree, degree),
    )


def tropical_count(
    surface: SurfaceModel, d: DivisorClass, invariant: str, algorithm: str
) -> int:
    """Dispatch helper for the CLI: invariant complex|welschinger via
    floor|lattice-path."""
    if invariant == "complex":
        mode = COMPLEX
        floor_fn = count_complex
    elif invariant == "welschinger":
        mode = REAL
        floor_fn = count_welschinger_real
    else:
        raise InputError("invariant must be 'complex' or 'welschinger'")
    if algorithm == "floor":
        return floor_fn(surface, d)
    if algorithm == "lattice-path":
        return lattice_path_count_for_class(surface, d, mode)
    raise InputError("algorithm must be 'floor' or 'lattice-path'")
