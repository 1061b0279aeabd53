"""Aggregation engine for relative curve data along a (-2)-curve.

Takes per-curve records (mass, tangency profile) or pre-aggregated per-k
totals and produces the two signed totals W+ and W-, applies the Morse
simplification rule (chi preserved -> W+, chi raised by 2 -> W-), and runs
the qualitative audits: vanishing for disconnected real loci, monotonicity
in the Euler characteristic, and the modified (per-component) signs.

Fixture files are plain text, one `key = value` per line, `#` comments:

    surface = CP2_6_conic
    class = 6,-2,-2,-2,-2,-2,-2
    minus_two_class = 2,-1,-1,-1,-1,-1,-1
    chi_source = -5
    components = S1:nonorientable
    r = 5
    mode = aggregated
    row = k:0 n_plus:522 n_minus:522

Per-curve fixtures use `mode = perCurve` and `curve = k:1 m:0 alpha:2
beta:0 m_in_s:0 count:118` lines instead of (or redundantly with) rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import InputError
from .multiplicity import complex_weight, mu_minus, mu_plus
from .surface_model import (
    Component,
    DivisorClass,
    RealStructureDescriptor,
    SurfaceModel,
    surface,
    tangency_budget,
)


class AuditFailure(Exception):
    """A qualitative consistency rule failed on actual data (CLI exit 1)."""


@dataclass(frozen=True)
class TangencyProfile:
    alpha: int
    beta: int

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise InputError("alpha and beta must be nonnegative")

    @property
    def budget(self) -> int:
        return self.alpha + 2 * self.beta


@dataclass(frozen=True)
class CurveRecord:
    """One isomorphism type of relative curve, with a repetition count."""

    k: int
    mass: int
    mass_in_s: int
    profile: TangencyProfile
    count: int = 1

    def __post_init__(self) -> None:
        if self.k < 0 or self.mass < 0 or self.mass_in_s < 0:
            raise InputError("k, mass and mass_in_s must be nonnegative")
        if self.mass_in_s > self.mass:
            raise InputError("mass_in_s cannot exceed the total mass")
        if self.count < 1:
            raise InputError("count must be positive")


@dataclass(frozen=True)
class AggregatedRow:
    k: int
    n_plus: int
    n_minus: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise InputError("k must be nonnegative")


@dataclass(frozen=True)
class InvariantResult:
    """A computed invariant with enough provenance to audit it later."""

    surface: str
    class_coeffs: tuple[int, ...]
    real_structure: RealStructureDescriptor
    r: int
    value: int
    provenance: str

    def to_json_dict(self) -> dict:
        return {
            "surface": self.surface,
            "class": list(self.class_coeffs),
            "chi_target": self.real_structure.euler_char,
            "r": self.r,
            "value": self.value,
            "provenance": self.provenance,
        }


AGGREGATED = "aggregated"
PER_CURVE = "perCurve"


@dataclass(frozen=True)
class RelativeCountSet:
    """All relative curve data for one (surface, class, E, real structure, r)."""

    surface: SurfaceModel
    target_class: DivisorClass
    minus_two_class: DivisorClass
    real_structure: RealStructureDescriptor
    r: int
    mode: str
    rows: tuple[AggregatedRow, ...] = ()
    curves: tuple[CurveRecord, ...] = ()
    source: str = "<constructed>"

    def __post_init__(self) -> None:
        if self.mode not in (AGGREGATED, PER_CURVE):
            raise InputError("mode must be %r or %r" % (AGGREGATED, PER_CURVE))
        full = self.surface.points_required(self.target_class)
        if not 0 <= self.r <= full:
            raise InputError("r must lie between 0 and %d" % full)
        if (full - self.r) % 2:
            raise InputError("r must have the parity of c1.d - 1 = %d" % full)
        ks = [row.k for row in self.rows]
        if len(set(ks)) != len(ks):
            raise InputError("aggregated rows must have distinct k")
        for row in self.rows:
            # Raises if E is not a (-2)-curve or the budget is negative.
            tangency_budget(self.surface, self.target_class, self.minus_two_class, row.k)
        for rec in self.curves:
            budget = tangency_budget(
                self.surface, self.target_class, self.minus_two_class, rec.k
            )
            if rec.profile.budget != budget:
                raise InputError(
                    "curve at k=%d has alpha+2beta=%d, expected %d"
                    % (rec.k, rec.profile.budget, budget)
                )
        if self.mode == AGGREGATED:
            if self.curves:
                raise InputError("aggregated mode takes rows, not curve records")
            if not self.rows:
                raise InputError("aggregated mode needs at least one row")
        else:
            if not self.curves:
                raise InputError("perCurve mode needs at least one curve record")
            if self.rows:
                derived = {row.k: row for row in self.derived_rows()}
                for row in self.rows:
                    got = derived.get(row.k, AggregatedRow(row.k, 0, 0))
                    if (got.n_plus, got.n_minus) != (row.n_plus, row.n_minus):
                        raise InputError(
                            "redundant row at k=%d (n+=%d, n-=%d) disagrees with "
                            "records (n+=%d, n-=%d)"
                            % (row.k, row.n_plus, row.n_minus, got.n_plus, got.n_minus)
                        )

    def derived_rows(self) -> tuple[AggregatedRow, ...]:
        """Per-k totals; re-derived from curve records in perCurve mode."""
        if self.mode == AGGREGATED:
            return tuple(sorted(self.rows, key=lambda row: row.k))
        totals: dict[int, list[int]] = {}
        for rec in self.curves:
            cell = totals.setdefault(rec.k, [0, 0])
            p = rec.profile
            cell[0] += rec.count * mu_plus(rec.mass, p.alpha, p.beta, rec.k)
            cell[1] += rec.count * mu_minus(rec.mass, p.alpha, p.beta, rec.k)
        return tuple(AggregatedRow(k, np, nm) for k, (np, nm) in sorted(totals.items()))


def w_plus(count_set: RelativeCountSet) -> int:
    """Total of the mu_plus multiplicities over all k."""
    return sum(row.n_plus for row in count_set.derived_rows())


def w_minus(count_set: RelativeCountSet) -> int:
    """Total of the mu_minus multiplicities over all k."""
    return sum(row.n_minus for row in count_set.derived_rows())


def vanishing_applies(real_structure: RealStructureDescriptor, r: int) -> bool:
    """Invariants vanish whenever the real locus is disconnected and r >= 2."""
    return real_structure.component_count >= 2 and r >= 2


VANISHING_NOTE = "vanishing rule: disconnected real locus with r >= 2 forces W = 0"


def apply_morse(
    count_set: RelativeCountSet,
    target_chi: int,
    target_components: tuple[Component, ...] | None = None,
    selected: str | None = None,
) -> InvariantResult:
    """Welschinger invariant of the smoothing with the given Euler characteristic.

    The smoothing either keeps chi (value W+) or raises it by 2 (value W-);
    any other target is not a single Morse simplification of this source.
    When the target component list is known, the disconnected-locus
    vanishing rule is enforced on the produced value.
    """
    chi = count_set.real_structure.euler_char
    if target_chi == chi:
        value = w_plus(count_set)
        provenance = (
            "Morse simplification, chi preserved (%d -> %d): W = W+ of %s"
            % (chi, target_chi, count_set.source)
        )
    elif target_chi == chi + 2:
        value = w_minus(count_set)
        provenance = (
            "Morse simplification, chi raised by 2 (%d -> %d): W = W- of %s"
            % (chi, target_chi, count_set.source)
        )
    else:
        raise InputError(
            "target chi %d is not a Morse simplification of source chi %d "
            "(allowed: %d or %d)" % (target_chi, chi, chi, chi + 2)
        )
    structure = RealStructureDescriptor(target_chi, target_components or (), selected)
    if vanishing_applies(structure, count_set.r):
        if value != 0:
            raise AuditFailure(
                "vanishing rule violated: disconnected target with r=%d gave W=%d"
                % (count_set.r, value)
            )
        provenance += "; " + VANISHING_NOTE
    return InvariantResult(
        surface=count_set.surface.name,
        class_coeffs=count_set.target_class.coeffs,
        real_structure=structure,
        r=count_set.r,
        value=value,
        provenance=provenance,
    )


def complex_total(count_set: RelativeCountSet) -> int:
    """Complex Abramovich-Bertram total: attachment points chosen freely.

    Needs per-curve tangency profiles; masses are ignored.
    """
    if count_set.mode != PER_CURVE:
        raise InputError("complex total requires per-curve data")
    return sum(
        rec.count * complex_weight(rec.profile.alpha, rec.profile.beta, rec.k)
        for rec in count_set.curves
    )


def modified_w(count_set: RelativeCountSet, side: str) -> int:
    """W+/W- with signs from the solitary nodes inside S only."""
    if count_set.mode != PER_CURVE:
        raise InputError("modified invariants require per-curve data")
    if side == "plus":
        mu = mu_plus
    elif side == "minus":
        mu = mu_minus
    else:
        raise InputError("side must be 'plus' or 'minus'")
    return sum(
        rec.count * mu(rec.mass_in_s, rec.profile.alpha, rec.profile.beta, rec.k)
        for rec in count_set.curves
    )


@dataclass(frozen=True)
class MonotonicityViolation:
    lower_chi: InvariantResult
    higher_chi: InvariantResult

    def describe(self) -> str:
        return "chi=%d gives W=%d but chi=%d gives W=%d" % (
            self.lower_chi.real_structure.euler_char,
            self.lower_chi.value,
            self.higher_chi.real_structure.euler_char,
            self.higher_chi.value,
        )


_F0_FAMILY = "F0-type"
_CP26_FAMILY = "CP2_6-type"


def _canonical_family_class(result: InvariantResult) -> tuple[str, tuple[int, ...], int]:
    """Family tag, canonical class key, and the full-real point count.

    F0, F2 and the quadric ellipsoid Q are deformation equivalent; their
    classes are compared through the F0 bidegree (F2's aB+bF maps to
    (a, a+b), Q's dh to (d, d), unordered).
    """
    name, coeffs = result.surface, result.class_coeffs
    if name == "F0":
        a, b = coeffs
    elif name == "F2":
        a, b = coeffs[0], coeffs[0] + coeffs[1]
    elif name == "Q":
        (d,) = coeffs
        a, b = d, d
    elif name == "CP2_6_conic":
        model = surface(name)
        full = model.points_required(model.class_from_coeffs(coeffs))
        return _CP26_FAMILY, coeffs, full
    else:
        raise InputError(
            "monotonicity audit covers only the F0-type and CP2_6-type families, "
            "got surface %r" % name
        )
    key = (min(a, b), max(a, b))
    return _F0_FAMILY, key, 2 * (a + b) - 1


def monotonicity_audit(results: list[InvariantResult]) -> list[MonotonicityViolation]:
    """All ordered pairs violating: chi smaller or equal implies W at least as large."""
    if not results:
        return []
    canon = [_canonical_family_class(res) for res in results]
    if len({c[:2] for c in canon}) != 1:
        raise InputError("monotonicity audit needs results for one class on one family")
    for res, (_, _, full) in zip(results, canon):
        if res.r != full:
            raise InputError(
                "monotonicity audit needs fully real constraints (r=%d), got r=%d"
                % (full, res.r)
            )
    violations = []
    for low in results:
        for high in results:
            if low is high:
                continue
            if (
                low.real_structure.euler_char <= high.real_structure.euler_char
                and low.value < high.value
            ):
                violations.append(MonotonicityViolation(low, high))
    return violations


# ---------------------------------------------------------------------------
# Fixture files


def _parse_kv_fields(body: str, line_no: int) -> dict[str, int]:
    fields = {}
    for token in body.split():
        key, sep, raw = token.partition(":")
        if not sep:
            raise InputError("line %d: expected key:value tokens, got %r" % (line_no, token))
        try:
            fields[key] = int(raw)
        except ValueError:
            raise InputError("line %d: %r is not an integer" % (line_no, raw)) from None
    return fields


def _take(fields: dict[str, int], line_no: int, *keys: str) -> list[int]:
    missing = [key for key in keys if key not in fields]
    extra = [key for key in fields if key not in keys]
    if missing or extra:
        raise InputError(
            "line %d: expected fields %s" % (line_no, " ".join("%s:<int>" % k for k in keys))
        )
    return [fields[key] for key in keys]


def parse_fixture(text: str, source: str = "<string>") -> RelativeCountSet:
    scalars: dict[str, str] = {}
    rows: list[AggregatedRow] = []
    curves: list[CurveRecord] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise InputError("line %d: expected 'key = value'" % line_no)
        if key == "row":
            k, n_plus, n_minus = _take(
                _parse_kv_fields(value, line_no), line_no, "k", "n_plus", "n_minus"
            )
            rows.append(AggregatedRow(k, n_plus, n_minus))
        elif key == "curve":
            k, m, alpha, beta, m_in_s, count = _take(
                _parse_kv_fields(value, line_no),
                line_no,
                "k", "m", "alpha", "beta", "m_in_s", "count",
            )
            curves.append(CurveRecord(k, m, m_in_s, TangencyProfile(alpha, beta), count))
        elif key in scalars:
            raise InputError("line %d: duplicate key %r" % (line_no, key))
        else:
            scalars[key] = value

    required = ("surface", "class", "minus_two_class", "chi_source", "r", "mode")
    missing = [key for key in required if key not in scalars]
    if missing:
        raise InputError("fixture %s is missing keys: %s" % (source, ", ".join(missing)))
    unknown = set(scalars) - set(required) - {"components", "selected"}
    if unknown:
        raise InputError("fixture %s has unknown keys: %s" % (source, ", ".join(sorted(unknown))))

    model = surface(scalars["surface"])
    target = _parse_coeffs(model, scalars["class"])
    minus_two = _parse_coeffs(model, scalars["minus_two_class"])
    components = _parse_components(scalars.get("components", ""))
    structure = RealStructureDescriptor(
        _parse_int(scalars["chi_source"], "chi_source"),
        components,
        scalars.get("selected"),
    )
    return RelativeCountSet(
        surface=model,
        target_class=target,
        minus_two_class=minus_two,
        real_structure=structure,
        r=_parse_int(scalars["r"], "r"),
        mode=scalars["mode"],
        rows=tuple(rows),
        curves=tuple(curves),
        source=source,
    )


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InputError("%s must be an integer, got %r" % (key, raw)) from None


def _parse_coeffs(model: SurfaceModel, raw: str) -> DivisorClass:
    try:
        coeffs = tuple(int(p.strip()) for p in raw.split(","))
    except ValueError:
        raise InputError("class vector %r is not a comma-separated integer list" % raw) from None
    return model.class_from_coeffs(coeffs)


def _parse_components(raw: str) -> tuple[Component, ...]:
    raw = raw.strip()
    if not raw:
        return ()
    components = []
    for part in raw.split(","):
        label, sep, flag = part.strip().partition(":")
        if not sep or flag not in ("orientable", "nonorientable"):
            raise InputError(
                "component %r must look like LABEL:orientable or LABEL:nonorientable" % part
            )
        components.append(Component(label, flag == "orientable"))
    return tuple(components)


def load_fixture(path: str | Path) -> RelativeCountSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("cannot read fixture %s: %s" % (path, exc)) from None
    return parse_fixture(text, source=path.name)


def shipped_fixture_dir() -> Path:
    from importlib.resources import files

    return Path(str(files("wlab") / "fixtures"))


def shipped_fixture_paths() -> list[Path]:
    paths = sorted(shipped_fixture_dir().glob("*.fixture"))
    if not paths:
        raise InputError("no shipped fixtures found")

    def chi_of(path: Path) -> int:
        return parse_fixture(path.read_text(encoding="utf-8")).real_structure.euler_char

    return sorted(paths, key=chi_of)


def load_shipped_fixtures() -> list[RelativeCountSet]:
    """The four aggregated fixtures, ordered by source Euler characteristic."""
    return [load_fixture(path) for path in shipped_fixture_paths()]
