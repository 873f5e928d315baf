"""Slope arithmetic, the knot-group catalog, and Dehn filling constructions.

Peripheral words are never trusted: every catalog entry is validated at
construction time against the abelianization invariants (meridian maps to a
generator, longitude is null-homologous) and, for the figure-eight knot,
against the holonomy matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .presentations import (
    FinitePresentation,
    abelianization,
    add_relators,
    image_in_abelianization,
)
from .words import Word


class InvalidTorusParams(ValueError):
    pass


class InvalidCableParams(ValueError):
    pass


class InfiniteSlope(ValueError):
    pass


@dataclass(frozen=True)
class Slope:
    """A reduced rational p/q with q >= 0; (1, 0) is the infinite slope."""

    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        if q < 0:
            p, q = -p, -q
        if q == 0:
            p = 1  # a slope and its inverse are the same unoriented curve
        g = gcd(abs(p), q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if text in ("inf", "infinity", "1/0", "∞"):
            return cls(1, 0)
        if "/" in text:
            p, q = text.split("/")
            return cls(int(p), int(q))
        return cls(int(text), 1)

    def __str__(self) -> str:
        return "inf" if self.is_infinite else f"{self.p}/{self.q}"


def slope_distance(r1: Slope, r2: Slope) -> int:
    """Minimal geometric intersection number |p1 q2 - p2 q1|."""
    return abs(r1.p * r2.q - r2.p * r1.q)


def enumerate_slopes(max_p: int, max_q: int, include_infinity: bool = False) -> list[Slope]:
    if max_p < 1 or max_q < 1:
        raise ValueError("bounds must be >= 1")
    slopes = [
        Slope(p, q)
        for q in range(1, max_q + 1)
        for p in range(-max_p, max_p + 1)
        if gcd(abs(p), q) == 1
    ]
    if include_infinity:
        slopes.append(Slope(1, 0))
    return slopes


# ---------------------------------------------------------------------------
# Peripheralized knot groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PeripheralizedKnotGroup:
    presentation: FinitePresentation
    meridian: Word
    longitude: Word
    label: str
    torus_params: tuple[int, int] | None = None
    cable_params: tuple[tuple[int, int], tuple[int, int]] | None = None

    def __post_init__(self) -> None:
        self.presentation.require_word(self.meridian)
        self.presentation.require_word(self.longitude)
        inv = abelianization(self.presentation)
        if inv.torsion or inv.free_rank != 1:
            raise ValueError(f"{self.label}: abelianization is {inv.describe()}, not Z")
        mu_img = image_in_abelianization(self.presentation, self.meridian)
        if mu_img.coords not in ((1,), (-1,)):
            raise ValueError(f"{self.label}: meridian is not an H_1 generator")
        if not image_in_abelianization(self.presentation, self.longitude).is_zero:
            raise ValueError(f"{self.label}: longitude is not null-homologous")

    def to_json(self) -> dict:
        data = self.presentation.to_json()
        data.update(
            meridian=str(self.meridian),
            longitude=str(self.longitude),
            label=self.label,
        )
        if self.torus_params:
            data["torus_params"] = list(self.torus_params)
        if self.cable_params:
            data["cable_params"] = {
                "companion": list(self.cable_params[0]),
                "cable": list(self.cable_params[1]),
            }
        return data

    @classmethod
    def from_json(cls, data: dict) -> "PeripheralizedKnotGroup":
        return cls(
            presentation=FinitePresentation.from_json(data),
            meridian=Word.parse(data["meridian"]),
            longitude=Word.parse(data["longitude"]),
            label=data.get("label", "unlabeled"),
            torus_params=tuple(data["torus_params"]) if "torus_params" in data else None,
            cable_params=(
                (tuple(data["cable_params"]["companion"]), tuple(data["cable_params"]["cable"]))
                if "cable_params" in data
                else None
            ),
        )


def _meridian_exponents(a: int, b: int) -> tuple[int, int]:
    # smallest |s| with s*b + t*a = 1; ties resolved toward positive s
    s0, _ = _extended_euclid(b, a)
    s_mod = s0 % abs(a)
    best = None
    for s in (s_mod, s_mod - abs(a)):
        t = (1 - s * b) // a
        assert s * b + t * a == 1
        key = (abs(s), -s)
        if best is None or key < best[0]:
            best = (key, (s, t))
    return best[1]


def _extended_euclid(x: int, y: int) -> tuple[int, int]:
    if y == 0:
        return (1 if x > 0 else -1, 0)
    s, t = _extended_euclid(y, x % y)
    return t, s - (x // y) * t


@lru_cache(maxsize=None)
def torus_knot_group(a: int, b: int) -> PeripheralizedKnotGroup:
    """The (a, b)-torus knot group <x, y | x^a y^-b> with peripheral words.

    The meridian is x^s y^t for the minimal-|s| solution of s*b + t*a = 1 and
    the longitude is x^a mu^(-a*b); both choices are checked by the
    constructor's homology validation rather than trusted.
    """
    if abs(a) < 2 or abs(b) < 2 or gcd(abs(a), abs(b)) != 1:
        raise InvalidTorusParams(f"(a, b) = ({a}, {b})")
    x, y = Word([("x", 1)]), Word([("y", 1)])
    relator = x ** a * y ** -b
    s, t = _meridian_exponents(a, b)
    mu = x ** s * y ** t
    lam = x ** a * mu ** (-a * b)
    return PeripheralizedKnotGroup(
        presentation=FinitePresentation(generators=("x", "y"), relators=(relator,)),
        meridian=mu,
        longitude=lam,
        label=f"torus({a},{b})",
        torus_params=(a, b),
    )


# Two-bridge presentation on the meridian pair (mu, h); the relator says the
# word mu h^-1 mu^-1 h conjugates mu to h. It is a build-time fixture validated
# below against homology and against the holonomy matrices.
_FIG8_RELATOR = "mu h^-1 mu^-1 h mu h^-1 mu h mu^-1 h^-1"
_FIG8_LONGITUDE = "h mu^-1 h^-1 mu^2 h^-1 mu^-1 h"


def _figure_eight_presentation() -> FinitePresentation:
    return FinitePresentation(
        generators=("mu", "h"),
        relators=(Word.parse(_FIG8_RELATOR),),
    )


@lru_cache(maxsize=None)
def figure_eight_group() -> PeripheralizedKnotGroup:
    knot = PeripheralizedKnotGroup(
        presentation=_figure_eight_presentation(),
        meridian=Word.parse("mu"),
        longitude=Word.parse(_FIG8_LONGITUDE),
        label="figure8",
    )
    # the holonomy preset re-evaluates every relator to +-identity
    from .reps import figure_eight_holonomy

    figure_eight_holonomy()
    return knot


def build_filling(K: PeripheralizedKnotGroup, r: Slope) -> FinitePresentation:
    """Quotient presentation of the r-filling: append the relator mu^p la^q."""
    relator = K.meridian ** r.p * K.longitude ** r.q
    return add_relators(K.presentation, [relator])


def is_cyclic_torus_filling(a: int, b: int, r: Slope) -> bool:
    """True when m/n-filling of the (a, b)-torus knot has |a*b*n - m| = 1."""
    if abs(a) < 2 or abs(b) < 2 or gcd(abs(a), abs(b)) != 1:
        raise InvalidTorusParams(f"(a, b) = ({a}, {b})")
    if r.is_infinite:
        raise InfiniteSlope("cyclic-filling test needs a finite slope")
    return abs(a * b * r.q - r.p) == 1


# ---------------------------------------------------------------------------
# Cable filling case analysis
# ---------------------------------------------------------------------------

CASE_CYCLIC = "Cyclic"
CASE_IRREDUCIBLE = "IrreducibleFilling"
CASE_REDUCIBLE = "ReducibleConnectedSum"
CASE_SEIFERT_OR_GRAPH = "SeifertOrGraph"


@dataclass(frozen=True)
class FillingClassification:
    case: str
    companion_slope: Slope | None = None
    lens: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if (self.companion_slope is not None) != (self.case == CASE_IRREDUCIBLE):
            raise ValueError("companion slope only for the irreducible case")
        if (self.lens is not None) != (self.case == CASE_REDUCIBLE):
            raise ValueError("lens parameters only for the reducible case")


def classify_cable_filling(
    a: int, b: int, cable_q: int, cable_p: int, r: Slope
) -> FillingClassification:
    """Case split for m/n-filling of the (cable_p, cable_q)-cable of T(a, b)."""
    if cable_q < 2:
        raise InvalidCableParams(f"cable winding q = {cable_q} must be >= 2")
    if gcd(abs(cable_p), cable_q) != 1:
        raise InvalidCableParams(f"cable parameters ({cable_p}, {cable_q}) not coprime")
    if r.is_infinite:
        raise InfiniteSlope("cable classification needs a finite slope")
    m, n = r.p, r.q
    delta = abs(n * cable_p * cable_q - m)
    if delta > 1:
        return FillingClassification(case=CASE_SEIFERT_OR_GRAPH)
    if delta == 1:
        return FillingClassification(
            case=CASE_IRREDUCIBLE,
            companion_slope=Slope(m, n * cable_q * cable_q),
        )
    return FillingClassification(case=CASE_REDUCIBLE, lens=(cable_q, cable_p))


# ---------------------------------------------------------------------------
# Catalog loading
# ---------------------------------------------------------------------------


def load_knot(spec: str) -> PeripheralizedKnotGroup:
    """Resolve a catalog string: torus:a,b | figure8 | path to a JSON file."""
    if spec == "figure8":
        return figure_eight_group()
    if spec.startswith("torus:"):
        try:
            a, b = (int(v) for v in spec[len("torus:"):].split(","))
        except ValueError as exc:
            raise ValueError(f"bad torus spec {spec!r}") from exc
        return torus_knot_group(a, b)
    with open(spec, encoding="utf-8") as fh:
        return PeripheralizedKnotGroup.from_json(json.load(fh))
