"""Slope-range scans: per-slope verdicts on whether an element dies in a filling.

A verdict is only ever decided with recheckable evidence. Positive rules
(cyclic-filling arithmetic for torus knots, explicit normal-closure
witnesses) run first, then negative certificates (abelianization, finite
quotients). Everything else stays an honest Unknown.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from .knots import (
    PeripheralizedKnotGroup,
    Slope,
    build_filling,
    is_cyclic_torus_filling,
)
from .quotients import (
    BudgetExceeded,
    FiniteTarget,
    abelianization_certificate,
    alternating,
    certify_nontrivial,
    symmetric,
)
from .words import Word, conjugate, exponent_sum

TRIVIALIZED = "Trivialized"
NOT_TRIVIALIZED = "NotTrivialized"
UNKNOWN = "Unknown"

DEFAULT_LADDER: tuple[FiniteTarget, ...] = (
    symmetric(3),
    symmetric(4),
    alternating(5),
    symmetric(5),
)


class UnknownSlopeInRule(KeyError):
    """A constraint rule references a slope missing from the report."""


# ---------------------------------------------------------------------------
# Evidence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicSlopeRule:
    """The filling is a cyclic-group quotient, so commutator elements die."""

    torus_params: tuple[int, int]
    slope: Slope

    def recheck(self, element: Word, generators: Sequence[str]) -> bool:
        a, b = self.torus_params
        return is_cyclic_torus_filling(a, b, self.slope) and all(
            exponent_sum(element, g) == 0 for g in generators
        )

    def to_json(self) -> dict:
        return {
            "kind": "cyclic_slope_rule",
            "torus_params": list(self.torus_params),
            "slope": str(self.slope),
        }


@dataclass(frozen=True)
class NormalClosureWitness:
    """element = product of conjugates relator^sign^conjugator, in the free group."""

    relator: Word
    factors: tuple[tuple[int, Word], ...]

    def expand(self) -> Word:
        out = Word()
        for sign, conj in self.factors:
            out = out * conjugate(self.relator ** sign, conj)
        return out

    def recheck(self, element: Word) -> bool:
        return self.expand() == element

    def to_json(self) -> dict:
        return {
            "kind": "normal_closure_witness",
            "relator": str(self.relator),
            "factors": [[sign, str(conj)] for sign, conj in self.factors],
        }


@dataclass(frozen=True)
class BudgetNote:
    note: str

    def to_json(self) -> dict:
        return {"kind": "budget_note", "note": self.note}


@dataclass(frozen=True)
class Verdict:
    status: str
    evidence: object

    def to_json(self) -> dict:
        return {"status": self.status, "evidence": self.evidence.to_json()}


@dataclass
class SlopeSetReport:
    knot_label: str
    element: Word
    scanned: dict[Slope, Verdict]
    constraints_checked: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "knot": self.knot_label,
            "element": str(self.element),
            "verdicts": [
                {"slope": str(s), **v.to_json()} for s, v in self.scanned.items()
            ],
            "constraints": list(self.constraints_checked),
        }

    def statuses(self) -> dict[Slope, str]:
        return {s: v.status for s, v in self.scanned.items()}


# ---------------------------------------------------------------------------
# Normal-closure witness search
# ---------------------------------------------------------------------------


def _conjugators(generators: Sequence[str], max_len: int) -> list[Word]:
    # reduced words by length then lexicographic order, identity first
    out = [Word()]
    layer = [Word()]
    letters = [Word([(g, s)]) for g in generators for s in (1, -1)]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for letter in letters:
                extended = w * letter
                if extended.letter_length() == w.letter_length() + 1:
                    nxt.append(extended)
        layer = nxt
        out.extend(layer)
    return out


def witness_search(
    generators: Sequence[str],
    relator: Word,
    g: Word,
    max_factors: int = 3,
    max_conj_len: int = 4,
    max_nodes: int = 2000,
) -> NormalClosureWitness | None:
    """Bounded search for g as a product of <= max_factors conjugates of relator.

    Breadth-first over the number of factors; the last factor is resolved by
    table lookup instead of a scan. Deterministic; gives up after max_nodes
    partial products without any claim about membership.
    """
    if relator.is_identity():
        return None
    nodes = 0
    factor_by_word: dict[Word, tuple[int, Word]] = {}
    for conj_word in _conjugators(generators, max_conj_len):
        for sign in (1, -1):
            nodes += 1
            if nodes > max_nodes:
                return None
            product = conjugate(relator ** sign, conj_word)
            factor_by_word.setdefault(product, (sign, conj_word))

    if g in factor_by_word:
        return NormalClosureWitness(relator=relator, factors=(factor_by_word[g],))

    factors = sorted(
        factor_by_word.items(), key=lambda kv: (kv[0].letter_length(), str(kv[0]))
    )
    # partial products with k - 1 factors; the k-th comes from the lookup table
    frontier: list[tuple[Word, tuple[tuple[int, Word], ...]]] = [(Word(), ())]
    for _ in range(1, max_factors):
        next_frontier = []
        for prefix_word, prefix_factors in frontier:
            for factor_word, descriptor in factors:
                nodes += 1
                if nodes > max_nodes:
                    return None
                partial = prefix_word * factor_word
                missing = partial.inverse() * g
                hit = factor_by_word.get(missing)
                if hit is not None:
                    return NormalClosureWitness(
                        relator=relator,
                        factors=prefix_factors + (descriptor, hit),
                    )
                next_frontier.append((partial, prefix_factors + (descriptor,)))
        frontier = next_frontier
    return None


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


def _verdict_for_slope(
    K: PeripheralizedKnotGroup,
    g: Word,
    r: Slope,
    targets: Sequence[FiniteTarget],
    witness_factors: int,
    witness_conj_len: int,
    witness_nodes: int,
    budget: int,
) -> Verdict:
    in_commutator = all(exponent_sum(g, gen) == 0 for gen in K.presentation.generators)
    if K.torus_params and in_commutator and not r.is_infinite:
        a, b = K.torus_params
        if is_cyclic_torus_filling(a, b, r):
            return Verdict(
                status=TRIVIALIZED,
                evidence=CyclicSlopeRule(torus_params=(a, b), slope=r),
            )
    filling = build_filling(K, r)
    relator = filling.relators[-1]
    abelian = abelianization_certificate(filling, g)
    if abelian is None:
        # only elements that die in H_1 of the filling can lie in the closure
        witness = witness_search(
            K.presentation.generators,
            relator,
            g,
            max_factors=witness_factors,
            max_conj_len=witness_conj_len,
            max_nodes=witness_nodes,
        )
        if witness is not None:
            return Verdict(status=TRIVIALIZED, evidence=witness)
    if abelian is not None:
        return Verdict(status=NOT_TRIVIALIZED, evidence=abelian)
    try:
        certificate = certify_nontrivial(filling, g, targets, budget=budget)
    except BudgetExceeded as exc:
        return Verdict(
            status=UNKNOWN,
            evidence=BudgetNote(note=f"hom search stopped after {exc.visited} nodes"),
        )
    if certificate is not None:
        return Verdict(status=NOT_TRIVIALIZED, evidence=certificate)
    ladder = ",".join(t.label for t in targets)
    return Verdict(
        status=UNKNOWN,
        evidence=BudgetNote(note=f"no certificate in ladder {ladder}"),
    )


def scan(
    K: PeripheralizedKnotGroup,
    g: Word,
    slopes: Iterable[Slope],
    targets: Sequence[FiniteTarget] = DEFAULT_LADDER,
    witness_factors: int = 3,
    witness_conj_len: int = 4,
    witness_nodes: int = 2000,
    budget: int = 10 ** 8,
    threads: int = 1,
) -> SlopeSetReport:
    """Per-slope verdicts for g across the given slopes.

    Slopes are independent work items; with threads > 1 they run in a pool
    but the report is assembled in input order, so output is deterministic.
    """
    K.presentation.require_word(g)
    slopes = list(slopes)

    def work(r: Slope) -> Verdict:
        return _verdict_for_slope(
            K, g, r, targets, witness_factors, witness_conj_len, witness_nodes, budget
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            verdicts = list(pool.map(work, slopes))
    else:
        verdicts = [work(r) for r in slopes]
    return SlopeSetReport(
        knot_label=K.label,
        element=g,
        scanned=dict(zip(slopes, verdicts)),
    )


# ---------------------------------------------------------------------------
# Constraint checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InclusionRule:
    """Normal-closure inclusion <<sub>> inside <<sup>>: sub trivialized forces sup."""

    sub: Slope
    sup: Slope

    def to_json(self) -> dict:
        return {"type": "inclusion", "sub": str(self.sub), "super": str(self.sup)}


@dataclass(frozen=True)
class DisjointRule:
    """The two closures meet only trivially: no element dies under both."""

    first: Slope
    second: Slope

    def to_json(self) -> dict:
        return {"type": "disjoint", "first": str(self.first), "second": str(self.second)}


@dataclass
class ConstraintCheckResult:
    passed: bool
    offenders: tuple


def check_constraints(
    report: SlopeSetReport,
    rules: Sequence[InclusionRule | DisjointRule],
    same_set_reports: Sequence[SlopeSetReport] = (),
) -> ConstraintCheckResult:
    """Flag verdict patterns that contradict known slope-set constraints.

    Inclusion rules forbid (sub Trivialized, sup NotTrivialized); reports for
    elements known to share the same trivializing set (the iterated
    construction) must never decide one slope in opposite directions.
    Unknown never offends.
    """
    statuses = report.statuses()
    offenders = []
    for rule in rules:
        if isinstance(rule, InclusionRule):
            for s in (rule.sub, rule.sup):
                if s not in statuses:
                    raise UnknownSlopeInRule(f"rule references unscanned slope {s}")
            if (
                statuses[rule.sub] == TRIVIALIZED
                and statuses[rule.sup] == NOT_TRIVIALIZED
            ):
                offenders.append(
                    {"rule": rule.to_json(), "pair": [str(rule.sub), str(rule.sup)]}
                )
        else:
            for s in (rule.first, rule.second):
                if s not in statuses:
                    raise UnknownSlopeInRule(f"rule references unscanned slope {s}")
            if (
                statuses[rule.first] == TRIVIALIZED
                and statuses[rule.second] == TRIVIALIZED
            ):
                offenders.append(
                    {"rule": rule.to_json(), "pair": [str(rule.first), str(rule.second)]}
                )
    for other in same_set_reports:
        other_statuses = other.statuses()
        for slope, status in statuses.items():
            partner = other_statuses.get(slope)
            decided = {status, partner}
            if decided == {TRIVIALIZED, NOT_TRIVIALIZED}:
                offenders.append(
                    {
                        "rule": {"type": "same_trivializing_set", "other": str(other.element)},
                        "pair": [str(slope), str(slope)],
                    }
                )
    result = ConstraintCheckResult(passed=not offenders, offenders=tuple(offenders))
    report.constraints_checked.append(
        {
            "rules": [r.to_json() for r in rules],
            "passed": result.passed,
            "offenders": list(result.offenders),
        }
    )
    return result


# ---------------------------------------------------------------------------
# Fixtures and JSON round-trip
# ---------------------------------------------------------------------------


def load_fixture_data(path: str | None = None) -> dict:
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    text = resources.files("dehnfill.data").joinpath("inclusions.json").read_text()
    return json.loads(text)


def inclusion_rules_for(label: str, path: str | None = None) -> list[InclusionRule]:
    data = load_fixture_data(path)
    entry = data.get(label, {})
    return [
        InclusionRule(sub=Slope.parse(rule["sub"]), sup=Slope.parse(rule["super"]))
        for rule in entry.get("inclusions", [])
    ]


def fiber_disjoint_rules_for(
    label: str, scanned: Iterable[Slope], path: str | None = None
) -> list[DisjointRule]:
    """Expand a torus-knot fiber-slope fact over the scanned slopes.

    The fiber slope's closure meets other closures trivially except at
    finite surgery slopes, so any scanned non-finite slope pairs off with it.
    """
    data = load_fixture_data(path)
    entry = data.get(label)
    if not entry or "fiber_slope" not in entry:
        return []
    fiber = Slope.parse(entry["fiber_slope"])
    finite = {Slope.parse(s) for s in entry.get("finite_surgery_slopes", [])}
    return [
        DisjointRule(first=fiber, second=s)
        for s in scanned
        if s != fiber and s not in finite
    ]


def report_to_json(report: SlopeSetReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True)
