"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 search budget exhausted. Output is deterministic for fixed arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .explorer import (
    DEFAULT_LADDER,
    check_constraints,
    inclusion_rules_for,
    scan,
)
from .knots import Slope, build_filling, load_knot
from .presentations import FinitePresentation, abelianization
from .quotients import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    certify_nontrivial,
    parse_target,
)
from .reps import eval_word, figure_eight_holonomy
from .verify import ALL_CHECKS, run_checks
from .words import Word, is_conjugate_free

FULL_LADDER_NAMES = (
    "S3", "S4", "A5", "PSL2(5)", "S5", "PSL2(7)", "S6", "PSL2(11)", "PSL2(13)", "S7"
)


def _emit(payload: dict, text: str, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load_presentation(args: argparse.Namespace) -> FinitePresentation:
    if getattr(args, "presentation", None):
        with open(args.presentation, encoding="utf-8") as fh:
            return FinitePresentation.from_json(json.load(fh))
    knot = load_knot(args.knot)
    if getattr(args, "slope", None):
        return build_filling(knot, Slope.parse(args.slope))
    return knot.presentation


def _scan_config(args: argparse.Namespace) -> dict:
    config = {
        "targets": list(args.targets.split(",")) if args.targets else None,
        "budget": args.budget,
        "witness_factors": 3,
        "witness_conj_len": 4,
        "witness_nodes": 2000,
    }
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            config.update(json.load(fh))
    targets = (
        tuple(parse_target(t) for t in config["targets"])
        if config["targets"]
        else DEFAULT_LADDER
    )
    return {
        "targets": targets,
        "budget": config["budget"],
        "witness_factors": config["witness_factors"],
        "witness_conj_len": config["witness_conj_len"],
        "witness_nodes": config["witness_nodes"],
    }


def cmd_reduce(args: argparse.Namespace) -> int:
    word = Word.parse(args.word)
    _emit({"word": str(word)}, str(word), args.json)
    return 0


def cmd_conjtest(args: argparse.Namespace) -> int:
    w1, w2 = Word.parse(args.word1), Word.parse(args.word2)
    conjugate = is_conjugate_free(w1, w2)
    _emit(
        {"word1": str(w1), "word2": str(w2), "conjugate": conjugate},
        "conjugate" if conjugate else "not conjugate",
        args.json,
    )
    return 0


def cmd_abelianize(args: argparse.Namespace) -> int:
    pres = _load_presentation(args)
    inv = abelianization(pres)
    _emit(
        {
            "torsion": list(inv.torsion),
            "free_rank": inv.free_rank,
            "description": inv.describe(),
        },
        inv.describe(),
        args.json,
    )
    return 0


def cmd_fill(args: argparse.Namespace) -> int:
    knot = load_knot(args.knot)
    filled = build_filling(knot, Slope.parse(args.slope))
    payload: dict = {"presentation": filled.to_json()}
    lines = [f"generators: {', '.join(filled.generators)}"]
    lines += [f"relator: {r}" for r in filled.relators]
    if args.abelianize:
        inv = abelianization(filled)
        payload["abelianization"] = inv.describe()
        lines.append(f"abelianization: {inv.describe()}")
    _emit(payload, "\n".join(lines), args.json)
    return 0


def cmd_rep_eval(args: argparse.Namespace) -> int:
    if args.preset != "figure8":
        print(f"unknown preset {args.preset!r}", file=sys.stderr)
        return 2
    rep = figure_eight_holonomy()
    matrix = eval_word(rep, Word.parse(args.word))
    _emit(
        {"word": args.word, "matrix": matrix.to_json(), "discriminant": matrix.d},
        str(matrix),
        args.json,
    )
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    pres = _load_presentation(args)
    word = Word.parse(args.word)
    names = args.targets.split(",") if args.targets else list(FULL_LADDER_NAMES)
    targets = [parse_target(t) for t in names]
    certificate = certify_nontrivial(pres, word, targets, budget=args.budget)
    if certificate is None:
        _emit(
            {"certificate": None, "status": "unknown"},
            "no certificate found (unknown; not a triviality proof)",
            args.json,
        )
        return 0
    _emit(
        {"certificate": certificate.to_json(), "rechecked": certificate.recheck()},
        f"witness survives in {certificate.target.label}: "
        f"{certificate.target.element_str(certificate.witness_image)}",
        args.json,
    )
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    knot = load_knot(args.knot)
    word = Word.parse(args.word)
    if args.slopes:
        slopes = [Slope.parse(s) for s in args.slopes.split(",")]
    else:
        from .knots import enumerate_slopes

        slopes = enumerate_slopes(args.max_p, args.max_q)
    config = _scan_config(args)
    report = scan(
        knot,
        word,
        slopes,
        targets=config["targets"],
        witness_factors=config["witness_factors"],
        witness_conj_len=config["witness_conj_len"],
        witness_nodes=config["witness_nodes"],
        budget=config["budget"],
        threads=args.threads,
    )
    if args.rules:
        rules = inclusion_rules_for(knot.label)
        if rules:
            check_constraints(report, rules)
    if args.json:
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
    else:
        for slope, verdict in report.scanned.items():
            print(f"{slope}: {verdict.status}")
        for entry in report.constraints_checked:
            print(f"constraints: {'pass' if entry['passed'] else 'FAIL'}")
    return 0


def cmd_verify_paper(args: argparse.Namespace) -> int:
    only = args.only.split(",") if args.only else None
    try:
        results = run_checks(only=only, seed=args.seed)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    print(f"seed: {args.seed}")
    failed = [r for r in results if not r.passed]
    if args.json:
        print(
            json.dumps(
                {
                    "seed": args.seed,
                    "results": [
                        {"name": r.name, "passed": r.passed, "detail": r.detail}
                        for r in results
                    ],
                },
                indent=2,
                sort_keys=True,
            )
        )
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{status}  {r.name:<{width}}  {r.detail}")
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(r.name for r in failed)}")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dehnfill",
        description="Dehn filling toolkit: word calculus, fillings, certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit JSON")

    p = sub.add_parser("reduce", help="freely reduce a word")
    p.add_argument("word")
    common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("conjtest", help="free-group conjugacy test")
    p.add_argument("word1")
    p.add_argument("word2")
    common(p)
    p.set_defaults(func=cmd_conjtest)

    p = sub.add_parser("abelianize", help="abelian invariants of a presentation")
    p.add_argument("--knot", help="torus:a,b | figure8 | JSON file")
    p.add_argument("--slope", help="fill at this slope first")
    p.add_argument("--presentation", help="presentation JSON file")
    common(p)
    p.set_defaults(func=cmd_abelianize)

    p = sub.add_parser("fill", help="build a Dehn filling presentation")
    p.add_argument("--knot", required=True)
    p.add_argument("--slope", required=True)
    p.add_argument("--abelianize", action="store_true")
    common(p)
    p.set_defaults(func=cmd_fill)

    p = sub.add_parser("rep-eval", help="evaluate a word in a holonomy preset")
    p.add_argument("--preset", default="figure8")
    p.add_argument("--word", required=True)
    common(p)
    p.set_defaults(func=cmd_rep_eval)

    p = sub.add_parser("certify", help="finite-quotient nontriviality certificate")
    p.add_argument("--knot")
    p.add_argument("--slope")
    p.add_argument("--presentation")
    p.add_argument("--word", required=True)
    p.add_argument("--targets", help="comma-separated, e.g. S3,S4,A5")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scan", help="slope-range scan of the trivializing set")
    p.add_argument("--knot", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--slopes", help="comma-separated slope list")
    p.add_argument("--max-p", type=int, default=5)
    p.add_argument("--max-q", type=int, default=1)
    p.add_argument("--targets")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--rules", action="store_true", help="check fixture rules")
    p.add_argument("--config", help="JSON config override")
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-paper", help="rerun every anchored computation")
    p.add_argument("--only", help=f"subset of: {', '.join(ALL_CHECKS)}")
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify_paper)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("abelianize", "certify") and not (
        getattr(args, "knot", None) or getattr(args, "presentation", None)
    ):
        parser.error("need --knot or --presentation")
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
