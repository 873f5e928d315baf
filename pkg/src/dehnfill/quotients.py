"""Finite-quotient certificate engine.

Homomorphisms from a finite presentation into small finite groups are found
by backtracking over generator images, pruning with any relator whose
generators are already assigned. A certificate that a word survives is a
concrete homomorphism plus the word's non-identity image; it can be
rechecked from the certificate alone.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .presentations import (
    AbelianImage,
    FinitePresentation,
    abelianization,
    image_in_abelianization,
)
from .words import Word

DEFAULT_BUDGET = 10 ** 8


class BudgetExceeded(RuntimeError):
    """Search budget ran out; carries the partial progress made so far."""

    def __init__(self, message: str, visited: int, partial: object = None) -> None:
        super().__init__(message)
        self.visited = visited
        self.partial = partial


# ---------------------------------------------------------------------------
# Finite targets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteTarget:
    """Symmetric(n), Alternating(n) or PSL2(p), with a fixed element order."""

    kind: str  # "S" | "A" | "PSL2"
    n: int

    def __post_init__(self) -> None:
        if self.kind not in ("S", "A", "PSL2"):
            raise ValueError(f"unknown target kind {self.kind!r}")
        if self.kind in ("S", "A") and self.n < 1:
            raise ValueError("degree must be >= 1")
        if self.kind == "PSL2" and (self.n < 2 or not _is_prime(self.n)):
            raise ValueError(f"PSL2 target needs a prime, got {self.n}")

    @property
    def label(self) -> str:
        if self.kind == "PSL2":
            return f"PSL(2,{self.n})"
        return f"{self.kind}{self.n}"

    def order(self) -> int:
        if self.kind == "S":
            return _factorial(self.n)
        if self.kind == "A":
            return max(1, _factorial(self.n) // 2)
        p = self.n
        if p == 2:
            return 6
        return p * (p * p - 1) // 2

    def elements(self) -> tuple:
        return _elements(self)

    def identity(self):
        if self.kind in ("S", "A"):
            return tuple(range(self.n))
        return (1, 0, 0, 1)

    def mul(self, x, y):
        if self.kind in ("S", "A"):
            return tuple(x[y[i]] for i in range(self.n))
        return _psl2_mul(x, y, self.n)

    def inv(self, x):
        if self.kind in ("S", "A"):
            out = [0] * self.n
            for i, v in enumerate(x):
                out[v] = i
            return tuple(out)
        a, b, c, d = x
        return _psl2_canon((d, -b % self.n, -c % self.n, a), self.n)

    def element_str(self, x) -> str:
        if self.kind in ("S", "A"):
            return perm_to_cycles(x)
        a, b, c, d = x
        return f"[[{a},{b}],[{c},{d}]] mod {self.n}"

    def element_parse(self, text: str):
        if self.kind in ("S", "A"):
            return cycles_to_perm(text, self.n)
        m = re.match(r"^\[\[(\d+),(\d+)\],\[(\d+),(\d+)\]\] mod (\d+)$", text.strip())
        if not m or int(m.group(5)) != self.n:
            raise ValueError(f"bad PSL2 element {text!r}")
        return _psl2_canon(tuple(int(m.group(i)) for i in range(1, 5)), self.n)


def symmetric(n: int) -> FiniteTarget:
    return FiniteTarget(kind="S", n=n)


def alternating(n: int) -> FiniteTarget:
    return FiniteTarget(kind="A", n=n)


def psl2(p: int) -> FiniteTarget:
    return FiniteTarget(kind="PSL2", n=p)


def parse_target(text: str) -> FiniteTarget:
    text = text.strip()
    m = re.match(r"^([SA])(\d+)$", text)
    if m:
        return FiniteTarget(kind=m.group(1), n=int(m.group(2)))
    m = re.match(r"^PSL\(2, ?(\d+)\)$|^PSL2\((\d+)\)$|^psl2:(\d+)$", text)
    if m:
        p = int(next(g for g in m.groups() if g))
        return psl2(p)
    raise ValueError(f"unknown target {text!r}")


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def _perm_is_even(p: Sequence[int]) -> bool:
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity == 0


def _psl2_canon(x, p: int):
    x = tuple(v % p for v in x)
    for v in x:
        if v:
            if v > p // 2:
                return tuple((-w) % p for w in x)
            return x
    return x


def _psl2_mul(x, y, p: int):
    a, b, c, d = x
    e, f, g, h = y
    return _psl2_canon(
        (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), p
    )


@lru_cache(maxsize=None)
def _elements(target: FiniteTarget) -> tuple:
    if target.kind == "S":
        return tuple(itertools.permutations(range(target.n)))
    if target.kind == "A":
        return tuple(
            p for p in itertools.permutations(range(target.n)) if _perm_is_even(p)
        )
    p = target.n
    seen = set()
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            seen.add(_psl2_canon((a, b, c, d), p))
    return tuple(sorted(seen))


def perm_to_cycles(p: Sequence[int]) -> str:
    """One-based cycle notation; fixed points are omitted and identity is ()."""
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cycle = []
        j = i
        while not seen[j]:
            seen[j] = True
            cycle.append(j + 1)
            j = p[j]
        parts.append("(" + " ".join(str(v) for v in cycle) + ")")
    return "".join(parts) if parts else "()"


def cycles_to_perm(text: str, degree: int) -> tuple:
    images = list(range(degree))
    for group in re.findall(r"\(([^()]*)\)", text):
        entries = [int(v) - 1 for v in group.split()]
        for k, v in enumerate(entries):
            if not 0 <= v < degree:
                raise ValueError(f"entry {v + 1} out of range for degree {degree}")
            images[v] = entries[(k + 1) % len(entries)]
    return tuple(images)


# ---------------------------------------------------------------------------
# Homomorphism search
# ---------------------------------------------------------------------------


class _BudgetCounter:
    __slots__ = ("visited", "limit")

    def __init__(self, limit: int) -> None:
        self.visited = 0
        self.limit = limit

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.limit:
            raise BudgetExceeded(
                f"visited {self.visited} partial assignments", self.visited
            )


def _compiled_relators(p: FinitePresentation) -> list[list[tuple[int, int]]]:
    # flattened to single letters (generator index, sign)
    index = {g: i for i, g in enumerate(p.generators)}
    compiled = []
    for r in p.relators:
        letters = []
        for g, e in r.syllables:
            sign = 1 if e > 0 else -1
            letters.extend((index[g], sign) for _ in range(abs(e)))
        compiled.append(letters)
    return compiled


def evaluate_image(target: FiniteTarget, images: dict, w: Word):
    """Image of a word under a generator assignment into the target."""
    acc = target.identity()
    for g, e in w.syllables:
        x = images[g]
        if e < 0:
            x = target.inv(x)
            e = -e
        for _ in range(e):
            acc = target.mul(acc, x)
    return acc


def _iter_homs(
    p: FinitePresentation,
    target: FiniteTarget,
    counter: _BudgetCounter,
) -> Iterator[dict]:
    gens = p.generators
    if not gens:
        raise ValueError("presentation needs at least one generator")
    compiled = _compiled_relators(p)
    # relators become checkable at the first index where all their generators
    # exist; cheap ones run first so bad branches die early
    checkable: list[list] = [[] for _ in gens]
    for rel in compiled:
        if rel:
            checkable[max(gi for gi, _ in rel)].append(rel)
    for bucket in checkable:
        bucket.sort(key=len)
    elements = target.elements()
    identity = target.identity()
    mul = target.mul
    inv = target.inv
    images: list = [None] * len(gens)
    inverses: list = [None] * len(gens)

    def holds(relator) -> bool:
        acc = identity
        for gi, sign in relator:
            acc = mul(acc, images[gi] if sign > 0 else inverses[gi])
        return acc == identity

    def descend(k: int) -> Iterator[dict]:
        for e in elements:
            counter.tick()
            images[k] = e
            inverses[k] = inv(e)
            if not all(holds(rel) for rel in checkable[k]):
                continue
            if k + 1 == len(gens):
                yield dict(zip(gens, images))
            else:
                yield from descend(k + 1)

    yield from descend(0)


_HOM_CACHE: dict[tuple[FinitePresentation, FiniteTarget], tuple[dict, ...]] = {}


def enumerate_homs(
    p: FinitePresentation,
    target: FiniteTarget,
    limit: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[dict]:
    """All (or the first `limit`) homomorphisms, in deterministic order.

    The order is lexicographic over the target's fixed element ordering.
    Completed enumerations are cached per (presentation, target).
    """
    key = (p, target)
    cached = _HOM_CACHE.get(key)
    if cached is not None:
        return list(cached[:limit] if limit is not None else cached)
    counter = _BudgetCounter(budget)
    out: list[dict] = []
    try:
        for hom in _iter_homs(p, target, counter):
            out.append(hom)
            if limit is not None and len(out) >= limit:
                return out
    except BudgetExceeded as exc:
        raise BudgetExceeded(str(exc), exc.visited, partial=out) from None
    _HOM_CACHE[key] = tuple(out)
    return out


def clear_hom_cache() -> None:
    _HOM_CACHE.clear()


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class HomCertificate:
    """Self-contained evidence that witness_word survives in a finite quotient."""

    target: FiniteTarget
    images: dict
    witness_word: Word
    witness_image: object
    presentation: FinitePresentation

    def recheck(self) -> bool:
        identity = self.target.identity()
        for r in self.presentation.relators:
            if evaluate_image(self.target, self.images, r) != identity:
                return False
        image = evaluate_image(self.target, self.images, self.witness_word)
        return image == self.witness_image and image != identity

    def to_json(self) -> dict:
        return {
            "target": self.target.label,
            "images": {
                g: self.target.element_str(e) for g, e in sorted(self.images.items())
            },
            "witness": str(self.witness_word),
            "witness_image": self.target.element_str(self.witness_image),
            "presentation": self.presentation.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "HomCertificate":
        target = parse_target(data["target"])
        return cls(
            target=target,
            images={g: target.element_parse(s) for g, s in data["images"].items()},
            witness_word=Word.parse(data["witness"]),
            witness_image=target.element_parse(data["witness_image"]),
            presentation=FinitePresentation.from_json(data["presentation"]),
        )


@dataclass
class AbelianizationEvidence:
    """A nonzero class in the abelianization certifies nontriviality."""

    presentation: FinitePresentation
    word: Word
    image: AbelianImage
    invariants: object = None

    def recheck(self) -> bool:
        return (
            image_in_abelianization(self.presentation, self.word) == self.image
            and not self.image.is_zero
        )

    def to_json(self) -> dict:
        return {
            "kind": "abelianization",
            "word": str(self.word),
            "coords": list(self.image.coords),
            "moduli": list(self.image.moduli),
        }


def certify_nontrivial(
    p: FinitePresentation,
    w: Word,
    targets: Sequence[FiniteTarget],
    budget: int = DEFAULT_BUDGET,
) -> HomCertificate | None:
    """First homomorphism (deterministic order) under which w survives.

    Absence of a certificate never proves triviality; it only reports that
    the searched targets give no witness.
    """
    p.require_word(w)
    counter = _BudgetCounter(budget)
    for target in targets:
        key = (p, target)
        cached = _HOM_CACHE.get(key)
        if cached is not None:
            homs: Sequence[dict] | Iterator[dict] = cached
            completed = True
        else:
            homs = _iter_homs(p, target, counter)
            completed = False
        collected = [] if not completed else None
        identity = target.identity()
        try:
            for hom in homs:
                if collected is not None:
                    collected.append(hom)
                image = evaluate_image(target, hom, w)
                if image != identity:
                    return HomCertificate(
                        target=target,
                        images=hom,
                        witness_word=w,
                        witness_image=image,
                        presentation=p,
                    )
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), exc.visited, partial=None) from None
        if collected is not None:
            _HOM_CACHE[key] = tuple(collected)
    return None


def abelianization_certificate(
    p: FinitePresentation, w: Word
) -> AbelianizationEvidence | None:
    """Cheapest nontriviality witness: a nonzero image in H_1."""
    image = image_in_abelianization(p, w)
    if image.is_zero:
        return None
    return AbelianizationEvidence(
        presentation=p, word=w, image=image, invariants=abelianization(p)
    )


# ---------------------------------------------------------------------------
# BMT kill-test
# ---------------------------------------------------------------------------


@dataclass
class KillTestReport:
    relator: Word
    homs_checked: int
    violations: tuple


def kill_test(
    u: Word,
    v: Word,
    targets: Sequence[FiniteTarget],
    budget: int = DEFAULT_BUDGET,
) -> KillTestReport:
    """Check that every finite quotient of <a1, a2 | v^(v^u) v^-2> kills v.

    Enumerates, for each target, every generator assignment that kills the
    relator, and records any under which v survives. A violation would
    falsify the construction, so a correct build always reports none.
    """
    from .words import bmt_word

    w = bmt_word(u, v)
    gens = tuple(sorted(u.generators() | v.generators()))
    if len(gens) > 2:
        raise ValueError(f"kill_test expects a rank-2 alphabet, got {gens}")
    p = FinitePresentation(generators=gens, relators=(w,))
    counter = _BudgetCounter(budget)
    checked = 0
    violations = []
    for target in targets:
        identity = target.identity()
        for hom in _iter_homs(p, target, counter):
            checked += 1
            image = evaluate_image(target, hom, v)
            if image != identity:
                violations.append(
                    {
                        "target": target.label,
                        "images": {g: target.element_str(e) for g, e in hom.items()},
                        "survivor": target.element_str(image),
                    }
                )
    return KillTestReport(relator=w, homs_checked=checked, violations=tuple(violations))
