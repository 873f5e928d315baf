"""Exact arithmetic in a quadratic field and projective 2x2 matrix evaluation.

Every value is exact: field elements are a + b*sqrt(d) with rational a, b and
a fixed square-free discriminant d, and matrices have determinant exactly 1.
Projective matrices are identified with their negatives through a
deterministic sign canonicalization, so equality and traces are PSL(2) facts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .presentations import FinitePresentation, UnknownGenerator
from .words import Word


class DiscriminantMismatch(ValueError):
    """Elements of different quadratic extensions cannot be combined."""


class DegenerateZeta(ValueError):
    """zeta^2 = 1 makes the diagonal matrix the identity; the element is trivial."""


class ZeroZeta(ValueError):
    """zeta = 0 makes the parabolic matrix the identity."""


def _check_square_free(d: int) -> None:
    if d in (0, 1):
        raise ValueError(f"discriminant {d} is not allowed")
    n = abs(d)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            raise ValueError(f"discriminant {d} is not square-free")
        if n % f == 0:
            n //= f
        else:
            f += 1


@dataclass(frozen=True)
class QuadExt:
    """The exact value a + b*sqrt(d) in the quadratic field Q(sqrt(d))."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        _check_square_free(self.d)
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    # -- coercion ----------------------------------------------------------

    def _coerce(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d == self.d:
                return other
            if other.b == 0:
                return QuadExt(other.a, Fraction(0), self.d)
            raise DiscriminantMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), self.d)
        return NotImplemented  # type: ignore[return-value]

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadExt":
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        return (-self) + other

    def __mul__(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    @property
    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadExt":
        n = self.norm
        if n == 0:
            raise ZeroDivisionError(f"{self} is not invertible")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: "int | Fraction | QuadExt") -> "QuadExt":
        return self.inverse() * other

    def __pow__(self, n: int) -> "QuadExt":
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt(Fraction(1), Fraction(0), self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            if self.d != other.d:
                if self.b == 0 and other.b == 0:
                    return self.a == other.a
                raise DiscriminantMismatch(f"sqrt({self.d}) vs sqrt({other.d})")
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def leading_positive(self) -> bool:
        """Sign test used for canonicalization: a > 0, ties by b > 0."""
        if self.a != 0:
            return self.a > 0
        return self.b > 0

    # -- text form ------------------------------------------------------------

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.b == 1:
            root = f"sqrt({self.d})"
        elif self.b == -1:
            root = f"-sqrt({self.d})"
        else:
            root = f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return root
        sign = "+" if not root.startswith("-") else ""
        return f"{self.a}{sign}{root}"

    def __repr__(self) -> str:
        return f"QuadExt({str(self)!r})"


_QUAD_RE = re.compile(
    r"^(?P<a>[+-]?\d+(?:/\d+)?)?"
    r"(?:(?P<op>[+-])?(?:(?P<b>\d+(?:/\d+)?)\*)?sqrt\((?P<d>-?\d+)\))?$"
)


def quad(a: "int | Fraction", b: "int | Fraction" = 0, d: int = -3) -> QuadExt:
    return QuadExt(Fraction(a), Fraction(b), d)


def parse_quad(text: str, d: int | None = None) -> QuadExt:
    """Parse 'a+b*sqrt(d)' and its abbreviations ('5', 'sqrt(-3)', '1-2*sqrt(5)')."""
    m = _QUAD_RE.match(text.replace(" ", ""))
    if m is None or (m.group("a") is None and m.group("d") is None):
        raise ValueError(f"bad field element {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    if m.group("d") is None:
        if d is None:
            raise ValueError(f"no discriminant in {text!r} and none supplied")
        return QuadExt(a, Fraction(0), d)
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("op") == "-":
        b = -b
    d_parsed = int(m.group("d"))
    if d is not None and d != d_parsed:
        raise DiscriminantMismatch(f"expected sqrt({d}), got sqrt({d_parsed})")
    return QuadExt(a, b, d_parsed)


def sign_canonical(x: QuadExt) -> QuadExt:
    """The representative of {x, -x} whose leading coefficient is positive."""
    if x.is_zero or x.leading_positive():
        return x
    return -x


# ---------------------------------------------------------------------------
# Projective matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjMatrix2:
    """Determinant-1 2x2 matrix over Q(sqrt(d)), identified with its negative.

    The stored representative makes the first nonzero entry in row-major
    order leading-positive, so equality is PSL(2) equality.
    """

    m11: QuadExt
    m12: QuadExt
    m21: QuadExt
    m22: QuadExt

    def __post_init__(self) -> None:
        d = self.m11.d
        for e in (self.m12, self.m21, self.m22):
            if e.d != d:
                raise DiscriminantMismatch("matrix entries live in different fields")
        det = self.m11 * self.m22 - self.m12 * self.m21
        if det != 1:
            raise ValueError(f"determinant is {det}, not 1")
        for e in self.entries():
            if e.is_zero:
                continue
            if not e.leading_positive():
                object.__setattr__(self, "m11", -self.m11)
                object.__setattr__(self, "m12", -self.m12)
                object.__setattr__(self, "m21", -self.m21)
                object.__setattr__(self, "m22", -self.m22)
            break

    def entries(self) -> tuple[QuadExt, QuadExt, QuadExt, QuadExt]:
        return (self.m11, self.m12, self.m21, self.m22)

    @property
    def d(self) -> int:
        return self.m11.d

    @classmethod
    def from_rows(
        cls, rows: "list[list[int | Fraction | QuadExt]]", d: int
    ) -> "ProjMatrix2":
        def lift(v: "int | Fraction | QuadExt") -> QuadExt:
            if isinstance(v, QuadExt):
                if v.d != d:
                    if v.b == 0:
                        return QuadExt(v.a, Fraction(0), d)
                    raise DiscriminantMismatch(f"sqrt({v.d}) entry in sqrt({d}) matrix")
                return v
            return QuadExt(Fraction(v), Fraction(0), d)

        (a, b), (c, e) = rows
        return cls(lift(a), lift(b), lift(c), lift(e))

    @classmethod
    def identity_matrix(cls, d: int) -> "ProjMatrix2":
        return cls.from_rows([[1, 0], [0, 1]], d)

    def __mul__(self, other: "ProjMatrix2") -> "ProjMatrix2":
        if not isinstance(other, ProjMatrix2):
            return NotImplemented
        return ProjMatrix2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def inverse(self) -> "ProjMatrix2":
        return ProjMatrix2(self.m22, -self.m12, -self.m21, self.m11)

    def __pow__(self, n: int) -> "ProjMatrix2":
        if n < 0:
            return self.inverse() ** (-n)
        result = ProjMatrix2.identity_matrix(self.d)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self == ProjMatrix2.identity_matrix(self.d)

    def __str__(self) -> str:
        return f"[[{self.m11}, {self.m12}], [{self.m21}, {self.m22}]]"

    def to_json(self) -> list[list[str]]:
        return [[str(self.m11), str(self.m12)], [str(self.m21), str(self.m22)]]

    @classmethod
    def from_json(cls, rows: list[list[str]], d: int) -> "ProjMatrix2":
        parsed = [[parse_quad(v, None) if "sqrt" in v else parse_quad(v, d) for v in row] for row in rows]
        return cls.from_rows(parsed, d)


def trace_pm(M: ProjMatrix2) -> QuadExt:
    """The PSL(2) trace +-(m11 + m22), canonicalized to leading-positive."""
    return sign_canonical(M.m11 + M.m22)


def is_peripheral_trace(M: ProjMatrix2) -> bool:
    """Parabolic-or-identity test under a holonomy preset: trace is +-2."""
    return trace_pm(M) == 2


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


@dataclass
class Representation:
    """Generator images in PSL(2) under which every relator is +-identity."""

    source: FinitePresentation
    assignment: Mapping[str, ProjMatrix2]
    _powers: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        missing = set(self.source.generators) - set(self.assignment)
        if missing:
            raise ValueError(f"no image for generators {sorted(missing)}")
        for r in self.source.relators:
            if not eval_word(self, r).is_identity():
                raise ValueError(f"relator {r} does not map to +-identity")

    def _power(self, gen: str, exp: int) -> ProjMatrix2:
        key = (gen, exp)
        cached = self._powers.get(key)
        if cached is None:
            cached = self._powers[key] = self.assignment[gen] ** exp
        return cached


def eval_word(rep: Representation, w: Word) -> ProjMatrix2:
    """Product of generator images along the word, with exact inverses."""
    d = next(iter(rep.assignment.values())).d
    result = ProjMatrix2.identity_matrix(d)
    for gen, exp in w.syllables:
        if gen not in rep.assignment:
            raise UnknownGenerator(f"word uses {gen!r}")
        result = result * rep._power(gen, exp)
    return result


@lru_cache(maxsize=None)
def figure_eight_holonomy() -> Representation:
    """The discrete faithful representation preset for the figure-eight knot.

    mu maps to [[1, 1], [0, 1]] and h to [[1, 0], [-w, 1]] where
    w = (-1 + sqrt(-3))/2; the source presentation's relator is re-evaluated
    to +-identity on construction.
    """
    from .knots import _figure_eight_presentation

    d = -3
    omega = QuadExt(Fraction(-1, 2), Fraction(1, 2), d)
    mu = ProjMatrix2.from_rows([[1, 1], [0, 1]], d)
    h = ProjMatrix2.from_rows([[1, 0], [-omega, 1]], d)
    return Representation(
        source=_figure_eight_presentation(),
        assignment={"mu": mu, "h": h},
    )


# ---------------------------------------------------------------------------
# Conjugacy invariants of g^(g^alpha) g^-2
# ---------------------------------------------------------------------------


def _in_field(zeta: QuadExt, d: int) -> QuadExt:
    if zeta.d == d:
        return zeta
    if zeta.is_rational:
        return QuadExt(zeta.a, Fraction(0), d)
    raise DiscriminantMismatch("zeta and alpha live in different fields")


def _trace_of_construction(g: ProjMatrix2, alpha: ProjMatrix2) -> QuadExt:
    gamma = alpha.inverse() * g * alpha
    return trace_pm(gamma.inverse() * g * gamma * g ** -2)


def invariant_nonperipheral(zeta: QuadExt, alpha: ProjMatrix2) -> QuadExt:
    """Conjugacy invariant of g^(g^alpha) g^-2 for rho(g) = diag(zeta, 1/zeta).

    Returns r = Q*(xu)^2 - Q*(xu) - 1 with Q = (zeta - 1/zeta)^2, and checks
    it against the trace of the explicit matrix product through the relation
    trace = +-(ad*((zeta + 1/zeta) - (zeta^3 + 1/zeta^3)) + zeta^3 + 1/zeta^3)
    with ad = -r.
    """
    if zeta.is_zero or zeta * zeta == 1:
        raise DegenerateZeta(f"zeta = {zeta}")
    z = _in_field(zeta, alpha.d)
    d = alpha.d
    zero = QuadExt(Fraction(0), Fraction(0), d)
    g = ProjMatrix2(z, zero, zero, z.inverse())
    xu = alpha.m11 * alpha.m22
    q = (z - z.inverse()) ** 2
    r = q * xu ** 2 - q * xu - 1
    s1 = z + z.inverse()
    s3 = z ** 3 + z.inverse() ** 3
    predicted = sign_canonical((-r) * (s1 - s3) + s3)
    if predicted != _trace_of_construction(g, alpha):
        raise AssertionError("non-peripheral invariant disagrees with direct trace")
    return r


def invariant_peripheral(zeta: QuadExt, alpha: ProjMatrix2) -> QuadExt:
    """Conjugacy invariant of g^(g^alpha) g^-2 for rho(g) = [[1, zeta], [0, 1]].

    Returns r = 2 z^4 zeta^4 + 2 where z is alpha's lower-left entry, checked
    against the trace of the explicit matrix product. When r is not +-2 the
    constructed element cannot be peripheral.
    """
    if zeta.is_zero:
        raise ZeroZeta("zeta = 0 gives the identity")
    zz = _in_field(zeta, alpha.d)
    d = alpha.d
    zero = QuadExt(Fraction(0), Fraction(0), d)
    one = QuadExt(Fraction(1), Fraction(0), d)
    g = ProjMatrix2(one, zz, zero, one)
    r = 2 * alpha.m21 ** 4 * zz ** 4 + 2
    if sign_canonical(r) != _trace_of_construction(g, alpha):
        raise AssertionError("peripheral invariant disagrees with direct trace")
    return r


def stays_peripheral(r: QuadExt) -> bool:
    """False exactly when the peripheral invariant rules out peripherality."""
    return r == 2 or r == -2
