"""Human-readable rendering of literals, items and reports.

Literals over variables carrying interval metadata render as threshold
phrases ("age >= 18", "27 <= bmi < 30"); non-contiguous state sets fall
back to explicit interval lists.  Phrases are re-parseable, and the
machine sections of a report always denote exactly the same literals as
the rendered strings.
"""

from __future__ import annotations

import re
from decimal import Decimal
from typing import Optional, Union

from .documents import ModelBundle, formula_to_json
from .errors import InvalidArgumentError
from .logic import (
    AND,
    FALSE,
    LIT,
    OR,
    TRUE,
    Clause,
    Formula,
    Instance,
    Literal,
    Term,
    VariableTable,
    simplify,
)
from .quantify import quantify_instance
from .reasons import (
    KINDS,
    general_necessary_reasons,
    general_sufficient_reasons,
    necessary_reasons,
    sufficient_reasons,
    targeted_reason,
)

_SET_KINDS = {"sr", "gsr", "nr", "gnr"}


def _fmt_bound(d: Optional[Decimal]) -> str:
    if d is None:
        return "inf"
    if d == d.to_integral_value():
        return str(int(d))
    return str(d)


def _runs(states: list[int]) -> list[tuple[int, int]]:
    runs = []
    start = prev = states[0]
    for s in states[1:]:
        if s == prev + 1:
            prev = s
            continue
        runs.append((start, prev))
        start = prev = s
    runs.append((start, prev))
    return runs


def literal_phrase(table: VariableTable, lit: Literal) -> Optional[str]:
    """Threshold phrase for a literal, or None without interval metadata."""
    var = table.variables[lit.var]
    if var.intervals is None:
        return None
    states = sorted(lit.states())
    runs = _runs(states)
    last = var.size - 1
    if len(runs) == 1:
        i, j = runs[0]
        if i == 0 and j < last:
            return f"{var.name} < {_fmt_bound(var.intervals[j][1])}"
        if i > 0 and j == last:
            return f"{var.name} >= {_fmt_bound(var.intervals[i][0])}"
        if i > 0 and j < last:
            lo = _fmt_bound(var.intervals[i][0])
            hi = _fmt_bound(var.intervals[j][1])
            return f"{lo} <= {var.name} < {hi}"
        return None  # full domain cannot occur in a literal
    parts = []
    for i, j in runs:
        lo = _fmt_bound(var.intervals[i][0])
        hi = _fmt_bound(var.intervals[j][1])
        parts.append(f"[{lo},{hi})")
    return f"{var.name} in " + " u ".join(parts)


_LT_RE = re.compile(r"^(\S+) < (\S+)$")
_GE_RE = re.compile(r"^(\S+) >= (\S+)$")
_BETWEEN_RE = re.compile(r"^(\S+) <= (\S+) < (\S+)$")
_IN_RE = re.compile(r"^(\S+) in (.+)$")
_INTERVAL_RE = re.compile(r"^\[([^,]+),([^)]+)\)$")


def parse_threshold_phrase(table: VariableTable, text: str) -> Literal:
    """Inverse of :func:`literal_phrase`; exact bounds required."""
    m = _LT_RE.match(text)
    if m:
        var = table.variable(m.group(1))
        j = _state_with_hi(table, m.group(1), m.group(2))
        return table.literal(m.group(1), (1 << (j + 1)) - 1)
    m = _GE_RE.match(text)
    if m:
        var = table.variable(m.group(1))
        i = _state_with_lo(table, m.group(1), m.group(2))
        full = var.full_mask
        return table.literal(m.group(1), full & ~((1 << i) - 1))
    m = _BETWEEN_RE.match(text)
    if m:
        i = _state_with_lo(table, m.group(2), m.group(1))
        j = _state_with_hi(table, m.group(2), m.group(3))
        mask = ((1 << (j + 1)) - 1) & ~((1 << i) - 1)
        return table.literal(m.group(2), mask)
    m = _IN_RE.match(text)
    if m:
        mask = 0
        for part in m.group(2).split(" u "):
            iv = _INTERVAL_RE.match(part.strip())
            if not iv:
                raise InvalidArgumentError(f"cannot parse interval {part!r}")
            lo, hi = iv.group(1), iv.group(2)
            i = 0 if lo == "-inf" else _state_with_lo(table, m.group(1), lo)
            var = table.variable(m.group(1))
            j = (
                var.size - 1
                if hi == "inf"
                else _state_with_hi(table, m.group(1), hi)
            )
            mask |= ((1 << (j + 1)) - 1) & ~((1 << i) - 1)
        return table.literal(m.group(1), mask)
    raise InvalidArgumentError(f"cannot parse threshold phrase {text!r}")


def _state_with_lo(table, name, bound) -> int:
    var = table.variable(name)
    if var.intervals is None:
        raise InvalidArgumentError(f"{name!r} has no interval metadata")
    for k, (lo, _) in enumerate(var.intervals):
        if lo is not None and lo == Decimal(bound):
            return k
        if bound == "-inf" and lo is None:
            return k
    raise InvalidArgumentError(f"{bound!r} is not an interval bound of {name!r}")


def _state_with_hi(table, name, bound) -> int:
    var = table.variable(name)
    if var.intervals is None:
        raise InvalidArgumentError(f"{name!r} has no interval metadata")
    for k, (_, hi) in enumerate(var.intervals):
        if hi is not None and hi == Decimal(bound):
            return k
        if bound == "inf" and hi is None:
            return k
    raise InvalidArgumentError(f"{bound!r} is not an interval bound of {name!r}")


def render_literal(
    table: VariableTable, lit: Literal, phrases: bool = False
) -> str:
    if phrases:
        phrase = literal_phrase(table, lit)
        if phrase is not None:
            return phrase
    return table.format_literal(lit)


def render_item(
    table: VariableTable, item: Union[Term, Clause], phrases: bool = False
) -> str:
    joiner = " AND " if isinstance(item, Term) else " OR "
    if not item.literals:
        return "true" if isinstance(item, Term) else "false"
    return joiner.join(render_literal(table, l, phrases) for l in item.literals)


def render_formula(
    table: VariableTable, formula: Formula, phrases: bool = False
) -> str:
    def rec(f: Formula, parent: Optional[int]) -> str:
        if f.kind == TRUE:
            return "true"
        if f.kind == FALSE:
            return "false"
        if f.kind == LIT:
            text = render_literal(table, Literal(f.var, f.mask), phrases)
            return f"({text})" if phrases and " " in text and parent else text
        sep = " AND " if f.kind == AND else " OR "
        body = sep.join(rec(c, f.kind) for c in f.children)
        if parent is not None and f.kind != parent:
            return f"({body})"
        return body

    return rec(formula, None)


def _literal_json(table: VariableTable, lit: Literal) -> dict:
    var = table.variables[lit.var]
    return {
        "variable": var.name,
        "states": [var.states[s] for s in sorted(lit.states())],
    }


def _has_intervals(table: VariableTable, vars_) -> bool:
    return any(table.variables[v].intervals is not None for v in vars_)


def explanation_report(
    bundle: ModelBundle,
    instance: Instance,
    input_values: dict,
    kinds: list[str],
    target_class: Optional[str] = None,
) -> dict:
    """Answer the requested explanation kinds and assemble the report.

    The report carries both rendered strings and a machine-readable
    mirror denoting exactly the same literals.
    """
    for kind in kinds:
        if kind not in KINDS:
            raise InvalidArgumentError(f"unknown explanation kind {kind!r}")
    if target_class is not None:
        unsupported = [k for k in kinds if k in ("sr", "gsr")]
        if unsupported:
            raise InvalidArgumentError(
                "targeted mode supports cr, gr, nr and gnr only"
            )
        bundle.classifier.label_index(target_class)
    classifier = bundle.classifier
    table = bundle.table
    decision = classifier.classify(instance)

    explanations = {}
    for kind in kinds:
        if kind in ("cr", "gr"):
            reason_kind = "complete" if kind == "cr" else "general"
            if target_class is None:
                idx = classifier.class_index_of(instance)
                formula = quantify_instance(
                    classifier.formulas[idx], instance, reason_kind
                )
            else:
                formula = targeted_reason(
                    classifier, instance, target_class, reason_kind
                ).formula
            shown = simplify(formula)
            entry = {
                "kind": kind,
                "rendered": render_formula(table, shown),
                "formula": formula_to_json(shown),
            }
            if _has_intervals(table, shown.vars):
                entry["threshold_rendered"] = render_formula(
                    table, shown, phrases=True
                )
            explanations[kind] = entry
        else:
            query = {
                "sr": sufficient_reasons,
                "gsr": general_sufficient_reasons,
                "nr": necessary_reasons,
                "gnr": general_necessary_reasons,
            }[kind]
            if kind in ("nr", "gnr") and target_class is not None:
                result = query(classifier, instance, target_class=target_class)
            else:
                result = query(classifier, instance)
            items = []
            for item in result.items:
                entry = {
                    "literals": [_literal_json(table, l) for l in item.literals],
                    "rendered": render_item(table, item),
                }
                if _has_intervals(table, item.vars):
                    entry["threshold_rendered"] = render_item(
                        table, item, phrases=True
                    )
                items.append(entry)
            explanations[kind] = {"kind": kind, "items": items}

    return {
        "format": "explanation-report/v1",
        "instance": {
            "values": input_values,
            "states": instance.as_names(),
        },
        "decision": decision,
        "target_class": target_class,
        "kinds": list(kinds),
        "explanations": explanations,
    }


_KIND_TITLES = {
    "cr": "complete reason",
    "gr": "general reason",
    "sr": "sufficient reasons",
    "gsr": "general sufficient reasons",
    "nr": "necessary reasons",
    "gnr": "general necessary reasons",
}


def report_text(report: dict) -> str:
    """Plain-text view of an explanation report."""
    lines = []
    states = report["instance"]["states"]
    lines.append("instance: " + ", ".join(f"{k}={v}" for k, v in states.items()))
    lines.append(f"decision: {report['decision']}")
    if report.get("target_class"):
        lines.append(f"target class: {report['target_class']}")
    for kind in report["kinds"]:
        entry = report["explanations"][kind]
        if "items" in entry:
            lines.append(f"{_KIND_TITLES[kind]} ({len(entry['items'])}):")
            for item in entry["items"]:
                text = item["rendered"]
                if item.get("threshold_rendered"):
                    text += f"   [{item['threshold_rendered']}]"
                lines.append(f"  - {text}")
        else:
            lines.append(f"{_KIND_TITLES[kind]}:")
            text = entry["rendered"]
            if entry.get("threshold_rendered"):
                text += f"   [{entry['threshold_rendered']}]"
            lines.append(f"  {text}")
    return "\n".join(lines)
