"""Exact integer models of the rational surfaces the library works on.

A surface is its second homology lattice (intersection form), its canonical
class, and optionally a tag selecting a toric Newton-polygon family.  Four
models are built in:

* ``P2``          -- the plane, basis H, H.H = 1, K = -3H
* ``F0``          -- P1 x P1, basis B1,B2, hyperbolic pairing, K = -2B1-2B2
* ``F2``          -- second Hirzebruch surface, basis B,F with B.B = 2,
                     B.F = 1, F.F = 0; the (-2)-section is E = B - 2F
* ``CP2_6_conic`` -- the plane blown up in six points on a conic, basis
                     H,E1..E6; the conic class is E = 2H - sum(Ei) and
                     delta = -2K is twice the anticanonical class

Real structures are modelled only through the data the aggregation engine
needs: the Euler characteristic of the real locus, the list of connected
components, and which component carries the point constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError


@dataclass(frozen=True)
class IntersectionLattice:
    """An integral lattice with a symmetric pairing, with named basis vectors."""

    basis_labels: tuple[str, ...]
    pairing: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.basis_labels)
        if len(self.pairing) != n or any(len(row) != n for row in self.pairing):
            raise InputError("pairing matrix shape does not match basis size")
        for i in range(n):
            for j in range(n):
                if self.pairing[i][j] != self.pairing[j][i]:
                    raise InputError("pairing matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def divisor(self, *coeffs: int) -> DivisorClass:
        return DivisorClass(self, tuple(coeffs))


@dataclass(frozen=True)
class DivisorClass:
    """Integer homology class written in the basis of its lattice."""

    lattice: IntersectionLattice
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.lattice.rank:
            raise InputError(
                "coefficient vector length %d does not match lattice rank %d"
                % (len(self.coeffs), self.lattice.rank)
            )

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _require_same_lattice(self, other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        _require_same_lattice(self, other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, scalar: int) -> DivisorClass:
        return DivisorClass(self.lattice, tuple(scalar * a for a in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self) -> DivisorClass:
        return self * -1

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def _require_same_lattice(c1: DivisorClass, c2: DivisorClass) -> None:
    if c1.lattice != c2.lattice:
        raise InputError("divisor classes live in different lattices")


def intersect(c1: DivisorClass, c2: DivisorClass) -> int:
    """Intersection number c1.c2, exact and symmetric."""
    _require_same_lattice(c1, c2)
    m = c1.lattice.pairing
    return sum(
        a * m[i][j] * b for i, a in enumerate(c1.coeffs) for j, b in enumerate(c2.coeffs)
    )


@dataclass(frozen=True)
class Component:
    label: str
    orientable: bool


@dataclass(frozen=True)
class RealStructureDescriptor:
    """Topological bookkeeping for a real locus.

    Only the Euler characteristic, the component list, and the selected
    component (the one carrying the real point constraints) are tracked.
    The list may be empty: an empty real locus has Euler characteristic 0.
    """

    euler_char: int
    components: tuple[Component, ...] = ()
    selected: str | None = None

    def __post_init__(self) -> None:
        labels = [c.label for c in self.components]
        if len(set(labels)) != len(labels):
            raise InputError("component labels must be distinct")
        if self.selected is not None and self.selected not in labels:
            raise InputError("selected component %r not in component list" % self.selected)
        if self.selected is None and self.components:
            object.__setattr__(self, "selected", self.components[0].label)

    @property
    def component_count(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class SurfaceModel:
    """A named surface: lattice, canonical class, optional toric polygon tag."""

    name: str
    lattice: IntersectionLattice
    canonical_class: DivisorClass
    polygon_family: str | None = None

    def anticanonical(self) -> DivisorClass:
        return -self.canonical_class

    def chern_degree(self, d: DivisorClass) -> int:
        """Pairing of the first Chern class (-K) with d."""
        if d.lattice != self.lattice:
            raise InputError("class does not live in the lattice of %s" % self.name)
        return intersect(self.anticanonical(), d)

    def points_required(self, d: DivisorClass) -> int:
        """Number of point constraints cutting the count to finitely many curves."""
        return self.chern_degree(d) - 1

    def class_from_coeffs(self, coeffs: tuple[int, ...] | list[int]) -> DivisorClass:
        return DivisorClass(self.lattice, tuple(coeffs))


def is_minus_two_class(surface: SurfaceModel, e: DivisorClass) -> bool:
    """True when e is a candidate (-2)-curve class: e.e = -2 and c1.e = 0."""
    return intersect(e, e) == -2 and surface.chern_degree(e) == 0


def tangency_budget(surface: SurfaceModel, d: DivisorClass, e: DivisorClass, k: int) -> int:
    """Number of intersection points of a class d-kE curve with the (-2)-curve E.

    A curve meeting E transversally has alpha + 2*beta = (d-kE).E, so this
    is the budget the tangency profiles of relative curve data must exhaust.
    """
    if not is_minus_two_class(surface, e):
        raise InputError("E must satisfy E.E = -2 and c1.E = 0")
    if k < 0:
        raise InputError("k must be nonnegative")
    budget = intersect(d - k * e, e)
    if budget < 0:
        raise InputError("class cannot meet E transversally with this k")
    return budget


@dataclass(frozen=True)
class MorseMove:
    """One smoothing of the nodal degeneration obtained by contracting E.

    The two smoothings either preserve the Euler characteristic of the real
    locus (sign ``plus``) or raise it by 2 (sign ``minus``).
    """

    surface: SurfaceModel
    minus_two_class: DivisorClass
    real_structure: RealStructureDescriptor
    sign: str
    target_euler_char: int = field(init=False)

    def __post_init__(self) -> None:
        if self.sign not in ("plus", "minus"):
            raise InputError("sign must be 'plus' or 'minus'")
        if not is_minus_two_class(self.surface, self.minus_two_class):
            raise InputError("E must satisfy E.E = -2 and c1.E = 0")
        chi = self.real_structure.euler_char
        target = chi if self.sign == "plus" else chi + 2
        object.__setattr__(self, "target_euler_char", target)


def build_morse_move(
    surface: SurfaceModel,
    e: DivisorClass,
    real_structure: RealStructureDescriptor,
    sign: str,
) -> MorseMove:
    return MorseMove(surface, e, real_structure, sign)


def _p2() -> SurfaceModel:
    lat = IntersectionLattice(("H",), ((1,),))
    return SurfaceModel("P2", lat, lat.divisor(-3), polygon_family="P2")


def _f0() -> SurfaceModel:
    lat = IntersectionLattice(("B1", "B2"), ((0, 1), (1, 0)))
    return SurfaceModel("F0", lat, lat.divisor(-2, -2), polygon_family="F0")


def _f2() -> SurfaceModel:
    lat = IntersectionLattice(("B", "F"), ((2, 1), (1, 0)))
    return SurfaceModel("F2", lat, lat.divisor(-2, 0), polygon_family="F2")


def _cp2_6_conic() -> SurfaceModel:
    labels = ("H", "E1", "E2", "E3", "E4", "E5", "E6")
    pairing = tuple(
        tuple((1 if i == j == 0 else -1 if i == j else 0) for j in range(7)) for i in range(7)
    )
    lat = IntersectionLattice(labels, pairing)
    return SurfaceModel("CP2_6_conic", lat, lat.divisor(-3, 1, 1, 1, 1, 1, 1))


_BUILTIN = {
    "P2": _p2,
    "F0": _f0,
    "F2": _f2,
    "CP2_6_conic": _cp2_6_conic,
}

SURFACE_NAMES = tuple(_BUILTIN)


def surface(name: str) -> SurfaceModel:
    """Look up a built-in surface model by CLI name."""
    try:
        return _BUILTIN[name]()
    except KeyError:
        raise InputError(
            "unknown surface %r (available: %s)" % (name, ", ".join(_BUILTIN))
        ) from None


def conic_blowup_classes(model: SurfaceModel) -> tuple[DivisorClass, DivisorClass]:
    """The distinguished classes (delta, E) on CP2_6_conic.

    delta = -2K is twice the anticanonical class, E = 2H - sum(Ei) the conic.
    """
    if model.name != "CP2_6_conic":
        raise InputError("delta and the conic class are specific to CP2_6_conic")
    delta = -2 * model.canonical_class
    e = model.lattice.divisor(2, -1, -1, -1, -1, -1, -1)
    return delta, e


def parse_class(model: SurfaceModel, text: str) -> DivisorClass:
    """Parse a comma-separated coefficient vector in the documented basis order."""
    try:
        coeffs = tuple(int(part.strip()) for part in text.split(","))
    except ValueError:
        raise InputError("class must be a comma-separated integer vector, got %r" % text) from None
    if len(coeffs) != model.lattice.rank:
        raise InputError(
            "surface %s expects %d coefficients, got %d"
            % (model.name, model.lattice.rank, len(coeffs))
        )
    return model.class_from_coeffs(coeffs)
