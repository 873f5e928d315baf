"""Finite group presentations, relator quotients, and abelianization.

Abelian invariants come from the Smith normal form of the relator exponent
matrix, computed over arbitrary-precision integers with explicit unimodular
transform witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .words import Word, exponent_sum


class UnknownGenerator(ValueError):
    """A word mentions a generator the presentation does not declare."""


@dataclass(frozen=True)
class FinitePresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"duplicate generators in {self.generators}")
        declared = set(self.generators)
        for r in self.relators:
            unknown = r.generators() - declared
            if unknown:
                raise UnknownGenerator(f"relator {r} uses undeclared {sorted(unknown)}")

    def require_word(self, w: Word) -> None:
        unknown = w.generators() - set(self.generators)
        if unknown:
            raise UnknownGenerator(f"word {w} uses undeclared {sorted(unknown)}")

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [str(r) for r in self.relators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FinitePresentation":
        return cls(
            generators=tuple(data["generators"]),
            relators=tuple(Word.parse(r) for r in data["relators"]),
        )


def presentation(generators: Iterable[str], relators: Iterable[str | Word]) -> FinitePresentation:
    words = tuple(r if isinstance(r, Word) else Word.parse(r) for r in relators)
    return FinitePresentation(generators=tuple(generators), relators=words)


def add_relators(p: FinitePresentation, rs: Sequence[Word]) -> FinitePresentation:
    for r in rs:
        p.require_word(r)
    return FinitePresentation(generators=p.generators, relators=p.relators + tuple(rs))


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

Matrix = list[list[int]]


@dataclass(frozen=True)
class SmithNormalForm:
    """Diagonal d_1 | d_2 | ... with witnesses row_ops * M * col_ops = diag."""

    diagonal: tuple[int, ...]
    row_ops: tuple[tuple[int, ...], ...]
    col_ops: tuple[tuple[int, ...], ...]


def _identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a or not b:
        return [list(row) for row in a] if not b else []
    cols = len(b[0])
    inner = len(b)
    return [
        [sum(row[k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for row in a
    ]


def _det(m: Sequence[Sequence[int]]) -> int:
    # Bareiss fraction-free elimination; exact over the integers.
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _pick_pivot(a: Matrix, t: int) -> tuple[int, int] | None:
    best = None
    for i in range(t, len(a)):
        for j in range(t, len(a[0])):
            v = abs(a[i][j])
            if v and (best is None or v < best[0]):
                best = (v, i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithNormalForm:
    """Smith normal form with unimodular row/column witnesses.

    Pivot choice is the smallest nonzero absolute value, ties broken by
    row-major position, so the witnesses are deterministic. The witnesses
    are verified by multiplication before returning.
    """
    a: Matrix = [[int(v) for v in row] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    if any(len(row) != n for row in a):
        raise ValueError("ragged matrix")
    u = _identity_matrix(m)
    v = _identity_matrix(n)
    t = 0
    while t < min(m, n):
        piv = _pick_pivot(a, t)
        if piv is None:
            break
        while True:
            i, j = piv
            if i != t:
                a[t], a[i] = a[i], a[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
                for row in v:
                    row[t], row[j] = row[j], row[t]
            pivot = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // pivot
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // pivot
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        dirty = True
            if dirty:
                piv = _pick_pivot(a, t)
                continue
            # pivot must divide the remaining block for the divisor chain
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % pivot:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            u[t] = [x + y for x, y in zip(u[t], u[offender])]
            piv = _pick_pivot(a, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    diagonal = tuple(a[i][i] for i in range(min(m, n)))
    result = SmithNormalForm(
        diagonal=diagonal,
        row_ops=tuple(tuple(row) for row in u),
        col_ops=tuple(tuple(row) for row in v),
    )
    _verify_snf(matrix, result)
    return result


def _verify_snf(matrix: Sequence[Sequence[int]], snf: SmithNormalForm) -> None:
    m = len(snf.row_ops)
    n = len(snf.col_ops)
    product = _mat_mul(_mat_mul([list(r) for r in snf.row_ops], [list(r) for r in matrix]),
                       [list(r) for r in snf.col_ops])
    for i in range(m):
        for j in range(n):
            expect = snf.diagonal[i] if i == j and i < len(snf.diagonal) else 0
            if product[i][j] != expect:
                raise AssertionError("SNF witness product mismatch")
    if abs(_det(snf.row_ops)) != 1 or abs(_det(snf.col_ops)) != 1:
        raise AssertionError("SNF witnesses are not unimodular")
    nonzero = [d for d in snf.diagonal if d]
    for x, y in zip(nonzero, nonzero[1:]):
        if y % x:
            raise AssertionError("SNF diagonal violates divisibility")
    if any(d for d in snf.diagonal[len(nonzero):]):
        raise AssertionError("SNF zeros are not trailing")


# ---------------------------------------------------------------------------
# Abelianization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AbelianInvariants:
    """Invariant factors d_i >= 2 with d_i | d_{i+1}, plus the free rank."""

    torsion: tuple[int, ...]
    free_rank: int

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        result = 1
        for d in self.torsion:
            result *= d
        return result

    def describe(self) -> str:
        parts = [f"Z_{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "trivial"


@dataclass(frozen=True)
class AbelianImage:
    """Coordinates of a class over torsion + free summands; moduli 0 mean free."""

    coords: tuple[int, ...]
    moduli: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def scale(self, k: int) -> "AbelianImage":
        scaled = tuple(
            (c * k) % d if d else c * k for c, d in zip(self.coords, self.moduli)
        )
        return AbelianImage(coords=scaled, moduli=self.moduli)


def _relator_transpose(p: FinitePresentation) -> Matrix:
    # columns are relators, rows are generators
    return [
        [exponent_sum(r, g) for r in p.relators]
        for g in p.generators
    ]


def abelianization(p: FinitePresentation) -> AbelianInvariants:
    snf = smith_normal_form(_relator_transpose(p))
    torsion = tuple(d for d in snf.diagonal if d >= 2)
    free_rank = len(p.generators) - sum(1 for d in snf.diagonal if d)
    return AbelianInvariants(torsion=torsion, free_rank=free_rank)


def image_in_abelianization(p: FinitePresentation, w: Word) -> AbelianImage:
    p.require_word(w)
    snf = smith_normal_form(_relator_transpose(p))
    exponents = [exponent_sum(w, g) for g in p.generators]
    changed = [
        sum(u_ij * e for u_ij, e in zip(row, exponents)) for row in snf.row_ops
    ]
    torsion_coords = []
    torsion_moduli = []
    free_coords = []
    for i, c in enumerate(changed):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 1:
            continue
        if d >= 2:
            torsion_coords.append(c % d)
            torsion_moduli.append(d)
        else:
            free_coords.append(c)
    return AbelianImage(
        coords=tuple(torsion_coords) + tuple(free_coords),
        moduli=tuple(torsion_moduli) + (0,) * len(free_coords),
    )
