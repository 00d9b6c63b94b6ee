"""Explanation queries over a classifier and a classified instance.

Sufficient reasons are prime implicants of the complete reason; their
general variants are variable-minimal prime implicants of the general
reason.  Necessary reasons are prime implicates of the complete reason;
their general variants are variable-minimal prime implicates of the
general reason, computed with the fixated-CNF shortcut.  Targeting a
specific alternative class reduces to running the same pipelines against
the disjunction of all other classes' formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import InvalidArgumentError
from .logic import Classifier, Clause, Instance, Literal, Term
from .primes import (
    fixated_prime_implicates,
    prime_implicants,
    prime_implicates,
    to_cnf,
    variable_minimal,
)
from .quantify import Reason, quantify_instance

KINDS = ("cr", "gr", "sr", "gsr", "nr", "gnr")


@dataclass(frozen=True)
class ExplanationSet:
    """A set of explanation items of one kind for one decision.

    ``items`` holds terms for sr/gsr and clauses for nr/gnr, ordered by
    (variable-set size, table order) so output is deterministic.
    """

    kind: str
    items: tuple
    instance: Instance
    class_label: str
    target_class: Optional[str] = None


def _ordered(items) -> tuple:
    return tuple(
        sorted(
            items,
            key=lambda it: (
                len(it.literals),
                tuple(l.var for l in it.literals),
                tuple(l.mask for l in it.literals),
            ),
        )
    )


def _decided_label(classifier: Classifier, instance: Instance) -> str:
    return classifier.labels[classifier.class_index_of(instance)]


def merged_complement_formula(classifier: Classifier, target_class: str):
    """Disjunction of every class formula except the target's."""
    j = classifier.label_index(target_class)
    return classifier.table.disj(
        f for k, f in enumerate(classifier.formulas) if k != j
    )


def targeted_reason(
    classifier: Classifier, instance: Instance, target_class: str, kind: str
) -> Reason:
    """Reason for the instance *not* being in the target class.

    Violating the prime implicates of this reason is guaranteed to land
    the instance in the target class.  The instance must not already be
    in the target class.
    """
    if kind not in ("complete", "general"):
        raise InvalidArgumentError(f"unknown reason kind {kind!r}")
    j = classifier.label_index(target_class)
    if classifier.formulas[j].evaluate(instance):
        raise InvalidArgumentError(
            f"instance is already in class {target_class!r}"
        )
    current = _decided_label(classifier, instance)
    merged = merged_complement_formula(classifier, target_class)
    return Reason(
        formula=quantify_instance(merged, instance, kind),
        kind=kind,
        instance=instance,
        class_label=current,
        target_class=target_class,
    )


def _reason_formula(
    classifier: Classifier,
    instance: Instance,
    kind: str,
    target_class: Optional[str],
):
    if target_class is not None:
        reason = targeted_reason(classifier, instance, target_class, kind)
        return reason.formula, reason.class_label
    idx = classifier.class_index_of(instance)
    formula = quantify_instance(classifier.formulas[idx], instance, kind)
    return formula, classifier.labels[idx]


def sufficient_reasons(classifier: Classifier, instance: Instance) -> ExplanationSet:
    """Minimal characteristic sets of the instance that force its decision."""
    formula, label = _reason_formula(classifier, instance, "complete", None)
    return ExplanationSet(
        kind="sr",
        items=_ordered(prime_implicants(formula)),
        instance=instance,
        class_label=label,
    )


def general_sufficient_reasons(
    classifier: Classifier, instance: Instance
) -> ExplanationSet:
    """Weakest instance-consistent conditions that force the decision."""
    formula, label = _reason_formula(classifier, instance, "general", None)
    return ExplanationSet(
        kind="gsr",
        items=_ordered(variable_minimal(prime_implicants(formula))),
        instance=instance,
        class_label=label,
    )


def necessary_reasons(
    classifier: Classifier,
    instance: Instance,
    target_class: Optional[str] = None,
) -> ExplanationSet:
    """Clauses over instance characteristics whose full violation can
    minimally flip the decision (into the target class when given)."""
    formula, label = _reason_formula(classifier, instance, "complete", target_class)
    return ExplanationSet(
        kind="nr",
        items=_ordered(prime_implicates(formula)),
        instance=instance,
        class_label=label,
        target_class=target_class,
    )


def general_necessary_reasons(
    classifier: Classifier,
    instance: Instance,
    target_class: Optional[str] = None,
) -> ExplanationSet:
    """Clauses whose every violation flips the decision (into the target
    class when given)."""
    formula, label = _reason_formula(classifier, instance, "general", target_class)
    cnf = to_cnf(formula)
    return ExplanationSet(
        kind="gnr",
        items=_ordered(fixated_prime_implicates(cnf, instance)),
        instance=instance,
        class_label=label,
        target_class=target_class,
    )


def intersect_with_instance(term: Term, instance: Instance) -> Term:
    """Smallest subset of the instance's characteristics implying the term."""
    for lit in term.literals:
        if not instance.consistent_with(lit):
            raise InvalidArgumentError(
                "term is inconsistent with the instance at "
                + instance.table.format_literal(lit)
            )
    return Term(
        tuple(
            Literal(lit.var, 1 << instance.states[lit.var])
            for lit in term.literals
        )
    )
