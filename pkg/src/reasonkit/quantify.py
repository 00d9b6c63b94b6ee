"""State quantification and the reasons it computes.

Two operators over NNF formulas, one per reason kind:

* complete: quantifying state ``s`` of variable ``X`` keeps the worlds
  whose class membership survives arbitrary reassignment of the features
  on which they disagree with the instance.
* general: the weaker variant that only requires survival when
  disagreeing features are moved *to* the instance's states.

Both distribute over conjunctions unconditionally and over disjunctions
whose disjuncts share no variables, which makes them linear-time on
or-decomposable NNF; elsewhere they fall back to their defining
expansions, built with DAG sharing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .logic import AND, LIT, OR, Classifier, Formula, Instance, VariableTable


def is_or_decomposable(formula: Formula) -> bool:
    """True iff every OR node's children have pairwise disjoint variables."""
    for node in formula.walk():
        if node.kind == OR and not _children_disjoint(node):
            return False
    return True


def _children_disjoint(node: Formula) -> bool:
    total = 0
    union: set = set()
    for c in node.children:
        total += len(c.vars)
        union |= c.vars
    return total == len(union)


def forall_state(formula: Formula, var, state, general: bool = False) -> Formula:
    """Quantify one state of one variable out of a formula.

    With ``general=False`` this is the complete-reason operator: on an
    ``X``-literal it yields the quantified state itself when the literal
    contains it and false otherwise.  With ``general=True`` it is the
    general-reason operator, whose literal base case keeps the whole
    literal instead of shrinking it.
    """
    table = formula.table
    v, s = table.state_ref(var, state)
    memo: dict[int, Formula] = {}

    def rec(f: Formula) -> Formula:
        if v not in f.vars:
            return f
        r = memo.get(id(f))
        if r is not None:
            return r
        if f.kind == LIT:
            if f.mask >> s & 1:
                r = f if general else table.lit(v, 1 << s)
            else:
                r = table.false
        elif f.kind == AND:
            r = table.conj(rec(c) for c in f.children)
        elif f.kind == OR and _children_disjoint(f):
            r = table.disj(rec(c) for c in f.children)
        else:
            r = _expand(f, v, s, general)
        memo[id(f)] = r
        return r

    return rec(formula)


def forall_bar_state(formula: Formula, var, state) -> Formula:
    return forall_state(formula, var, state, general=True)


def _expand(f: Formula, v: int, s: int, general: bool) -> Formula:
    # Defining expansion at a node whose disjuncts share variables.
    table = f.table
    conditioned_s = f.condition({v: s})
    if general:
        return table.conj([conditioned_s, f])
    parts = [conditioned_s]
    quantified = table.lit(v, 1 << s)
    for j in range(table.variables[v].size):
        if j != s:
            parts.append(table.disj([quantified, f.condition({v: j})]))
    return table.conj(parts)


def quantify_instance(formula: Formula, instance: Instance, kind: str) -> Formula:
    """Quantify every characteristic of the instance, in table order.

    The operators commute, so the order only affects syntax, never the
    model set; table order keeps outputs reproducible.
    """
    if kind not in ("complete", "general"):
        raise ValueError(f"unknown reason kind {kind!r}")
    general = kind == "general"
    out = formula
    for v, s in enumerate(instance.states):
        out = forall_state(out, v, s, general=general)
    return out


@dataclass(frozen=True)
class Reason:
    """A reason for one decision: a formula fixated on the instance.

    Complete reasons additionally contain only simple literals drawn from
    the instance (hence are monotone).  ``target_class`` is set when the
    reason was computed against the merged formula of all classes other
    than a target.
    """

    formula: Formula
    kind: str  # "complete" | "general"
    instance: Instance
    class_label: str
    target_class: Optional[str] = None


def complete_reason(classifier: Classifier, instance: Instance) -> Reason:
    return _reason(classifier, instance, "complete")


def general_reason(classifier: Classifier, instance: Instance) -> Reason:
    return _reason(classifier, instance, "general")


def _reason(classifier: Classifier, instance: Instance, kind: str) -> Reason:
    idx = classifier.class_index_of(instance)
    formula = quantify_instance(classifier.formulas[idx], instance, kind)
    return Reason(
        formula=formula,
        kind=kind,
        instance=instance,
        class_label=classifier.labels[idx],
    )
