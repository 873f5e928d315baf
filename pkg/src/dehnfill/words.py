"""Exact free-group word calculus on named generators.

Words are stored run-length encoded as (generator, exponent) syllables and
are always kept freely reduced; construction reduces its input with a stack,
so every ``Word`` in circulation is a normal form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Syllable = tuple[str, int]
Letter = tuple[str, int]  # exponent is +1 or -1


class CommutingPair(ValueError):
    """The two words commute in the free group, so the construction degenerates."""


class InvalidN(ValueError):
    """Index parameter out of range."""


_SYLLABLE_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def _reduce(syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    stack: list[Syllable] = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return tuple(stack)


class Word:
    """A reduced word in a free group on named generators.

    >>> Word.parse("x y y^-1 x")
    Word('x^2')
    >>> Word.parse("x") * Word.parse("x^-1")
    Word('')
    """

    __slots__ = ("_syllables",)

    def __init__(self, syllables: Iterable[Syllable] = ()) -> None:
        object.__setattr__(self, "_syllables", _reduce(syllables))

    @property
    def syllables(self) -> tuple[Syllable, ...]:
        return self._syllables

    @classmethod
    def parse(cls, text: str) -> "Word":
        syllables = []
        for token in text.split():
            m = _SYLLABLE_RE.match(token)
            if m is None:
                raise ValueError(f"bad syllable {token!r}")
            gen, exp = m.group(1), m.group(2)
            syllables.append((gen, 1 if exp is None else int(exp)))
        return cls(syllables)

    @classmethod
    def identity(cls) -> "Word":
        return cls()

    def __str__(self) -> str:
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self._syllables)

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self._syllables == other._syllables

    def __hash__(self) -> int:
        return hash(self._syllables)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self._syllables + other._syllables)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self._syllables)))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        result = Word()
        for _ in range(n):
            result = result * self
        return result

    def is_identity(self) -> bool:
        return not self._syllables

    def letter_length(self) -> int:
        return sum(abs(e) for _, e in self._syllables)

    def letters(self) -> Iterator[Letter]:
        for gen, exp in self._syllables:
            sign = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield (gen, sign)

    def generators(self) -> frozenset[str]:
        return frozenset(g for g, _ in self._syllables)


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced core together with the peeled conjugator.

    The invariant is ``conjugator * base * conjugator**-1 == original``.
    """

    base: Word
    conjugator: Word

    def reassemble(self) -> Word:
        return self.conjugator * self.base * self.conjugator.inverse()


def invert(w: Word) -> Word:
    return w.inverse()


def conjugate(g: Word, b: Word) -> Word:
    """b^-1 g b, written g^b."""
    return b.inverse() * g * b


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def exponent_sum(w: Word, gen: str) -> int:
    return sum(e for g, e in w.syllables if g == gen)


def cyclic_reduce(w: Word) -> CyclicWord:
    letters = list(w.letters())
    i, j = 0, len(letters) - 1
    while i < j and letters[i][0] == letters[j][0] and letters[i][1] == -letters[j][1]:
        i += 1
        j -= 1
    base = Word(letters[i : j + 1])
    conjugator = Word(letters[:i])
    return CyclicWord(base=base, conjugator=conjugator)


def is_cyclically_reduced(w: Word) -> bool:
    letters = list(w.letters())
    if len(letters) < 2:
        return True
    return not (letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1])


def cyclic_canonical(w: Word) -> tuple[Letter, ...]:
    """Lexicographically least rotation of the cyclically reduced letter list.

    A total normal form for free-group conjugacy classes, usable as a dict key.
    """
    letters = tuple(cyclic_reduce(w).base.letters())
    if not letters:
        return ()
    return min(letters[k:] + letters[:k] for k in range(len(letters)))


def is_conjugate_free(w1: Word, w2: Word) -> bool:
    return cyclic_canonical(w1) == cyclic_canonical(w2)


def bmt_word(u: Word, v: Word) -> Word:
    """The one-relator word (v^(v^u)) v^-2 for a non-commuting pair u, v."""
    if commutator(u, v).is_identity():
        raise CommutingPair(f"{u!r} and {v!r} commute")
    return conjugate(v, conjugate(v, u)) * v ** -2


def iterate_construction(g: Word, alphas: Sequence[Word]) -> list[Word]:
    """Iterate g_{i+1} = (g_i^(g_i^alpha_i)) g_i^-2 starting from g_0 = g."""
    if g.is_identity():
        raise ValueError("iterate_construction needs a nonempty starting word")
    chain = [g]
    for alpha in alphas:
        gi = chain[-1]
        chain.append(conjugate(gi, conjugate(gi, alpha)) * gi ** -2)
    return chain


def torus_gn(n: int) -> tuple[Word, Word]:
    """Expanded and closed-form words g_n over generators x, y.

    g_n is built from g = [x, y] conjugated along w_n = y (x y)^(n+1); the
    closed form is the fully reduced spelling, which is cyclically reduced.
    Both are returned and checked equal at construction time.
    """
    if n < 1:
        raise InvalidN(f"n must be >= 1, got {n}")
    x, y = Word([("x", 1)]), Word([("y", 1)])
    X, Y = x.inverse(), y.inverse()
    g = commutator(x, y)
    w_n = y * (x * y) ** (n + 1)
    expanded = conjugate(g, conjugate(g, w_n)) * g ** -2
    closed = (
        (Y * X) ** n * Y ** 2 * X
        * y * (x * y) ** (n + 2)
        * X * Y ** 2 * X
        * (Y * X) ** n * Y
        * x * y ** 2 * (x * y) ** (n - 1) * x * y ** 2 * x
        * Y * X * y * x * Y * X
    )
    if expanded != closed or not is_cyclically_reduced(closed):
        raise AssertionError(f"torus_gn({n}) closed form mismatch")
    return expanded, closed
