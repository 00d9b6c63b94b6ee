"""Prime implicant and implicate computation for discrete formulas.

Implicates come from closing a CNF under a state-set resolution rule with
subsumption sweeps; implicants come from dualizing (complementing the
prime implicates of the negated formula), with a direct
distribute-and-absorb path for monotone inputs.  A locally fixated CNF
additionally admits discarding non-variable-minimal clauses inside the
closure loop, which computes variable-minimal prime implicates directly.
"""

from __future__ import annotations

from typing import Iterable, Optional, Union

from .errors import CapacityError, InvalidArgumentError
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
    subsumes,
)

DEFAULT_CLAUSE_GUARDRAIL = 100_000


def _merge_clause_lits(table, parts: Iterable[Literal]) -> Optional[dict[int, int]]:
    """Per-variable union of literal masks; None when tautologous."""
    masks: dict[int, int] = {}
    for lit in parts:
        masks[lit.var] = masks.get(lit.var, 0) | lit.mask
        if masks[lit.var] == table.variables[lit.var].full_mask:
            return None
    return masks


def _clause_from_masks(masks: dict[int, int]) -> Clause:
    return Clause(tuple(Literal(v, masks[v]) for v in sorted(masks)))


def _term_from_masks(masks: dict[int, int]) -> Term:
    return Term(tuple(Literal(v, masks[v]) for v in sorted(masks)))


def _sort_key(item: Union[Term, Clause]):
    return tuple((l.var, l.mask) for l in item.literals)


def prune_clauses(clauses: Iterable[Clause]) -> set[Clause]:
    """Antichain of strongest clauses: drop any clause another one entails."""
    items = set(clauses)
    return {
        c
        for c in items
        if not any(d is not c and d != c and subsumes(d, c) for d in items)
    }


def prune_terms(terms: Iterable[Term]) -> set[Term]:
    """Antichain of weakest terms: drop any term that entails another."""
    items = set(terms)
    return {
        t
        for t in items
        if not any(d is not t and d != t and subsumes(t, d) for d in items)
    }


def to_cnf(formula: Formula, max_clauses: Optional[int] = None) -> set[Clause]:
    """A clause set whose conjunction is model-equal to the formula.

    Clauses carry one merged literal per variable; tautologous clauses are
    dropped and subsumed clauses pruned.  Distribution size is guarded.
    """
    return _distribute(formula, to_clauses=True, guardrail=max_clauses)


def to_dnf(formula: Formula, max_terms: Optional[int] = None) -> set[Term]:
    """A term set whose disjunction is model-equal to the formula."""
    return _distribute(formula, to_clauses=False, guardrail=max_terms)


def _distribute(formula: Formula, to_clauses: bool, guardrail: Optional[int]):
    table = formula.table
    limit = DEFAULT_CLAUSE_GUARDRAIL if guardrail is None else guardrail
    # For CNF the crossing connective is OR (clauses multiply across OR
    # children); for DNF it is AND.
    cross_kind = OR if to_clauses else AND
    empty_result: frozenset = frozenset()
    memo: dict[int, frozenset] = {}

    def check(n: int):
        if n > limit:
            raise CapacityError("clause distribution", n, limit)

    def rec(f: Formula) -> frozenset:
        r = memo.get(id(f))
        if r is not None:
            return r
        if f.kind == (TRUE if to_clauses else FALSE):
            r = empty_result
        elif f.kind == (FALSE if to_clauses else TRUE):
            r = frozenset(
                {Clause(()) if to_clauses else Term(())}
            )
        elif f.kind == LIT:
            lit = Literal(f.var, f.mask)
            r = frozenset({Clause((lit,)) if to_clauses else Term((lit,))})
        elif f.kind != cross_kind:
            acc: set = set()
            for c in f.children:
                acc |= rec(c)
                check(len(acc))
            r = frozenset(prune_clauses(acc) if to_clauses else prune_terms(acc))
        else:
            parts = [Clause(()) if to_clauses else Term(())]
            for c in f.children:
                child = rec(c)
                nxt = []
                for a in parts:
                    for b in child:
                        masks: dict[int, int] = {}
                        taut = False
                        for lit in (*a.literals, *b.literals):
                            if to_clauses:
                                masks[lit.var] = masks.get(lit.var, 0) | lit.mask
                                if (
                                    masks[lit.var]
                                    == table.variables[lit.var].full_mask
                                ):
                                    taut = True
                                    break
                            else:
                                masks[lit.var] = masks.get(
                                    lit.var, table.variables[lit.var].full_mask
                                ) & lit.mask
                                if masks[lit.var] == 0:
                                    taut = True  # inconsistent term
                                    break
                        if not taut:
                            nxt.append(
                                _clause_from_masks(masks)
                                if to_clauses
                                else _term_from_masks(masks)
                            )
                    check(len(nxt))
                parts = list(prune_clauses(nxt) if to_clauses else prune_terms(nxt))
            r = frozenset(parts)
        memo[id(f)] = r
        return r

    return set(rec(formula))


def resolve(c1: Clause, c2: Clause, var, table: VariableTable) -> Optional[Clause]:
    """State-set resolution of two clauses on one shared variable.

    The resolvent takes the intersection of the two literals on the
    resolved variable (omitted when empty) and the per-variable union of
    all remaining literals.  Returns None when the resolvent is
    tautologous or equal to either input.
    """
    v = table.var_index(var)
    l1, l2 = c1.get(v), c2.get(v)
    if l1 is None or l2 is None:
        raise InvalidArgumentError(
            f"both clauses must contain a literal on "
            f"{table.variables[v].name!r} to resolve"
        )
    masks: dict[int, int] = {}
    for lit in (*c1.literals, *c2.literals):
        if lit.var == v:
            continue
        masks[lit.var] = masks.get(lit.var, 0) | lit.mask
        if masks[lit.var] == table.variables[lit.var].full_mask:
            return None
    inter = l1.mask & l2.mask
    if inter:
        masks[v] = inter
    resolvent = _clause_from_masks(masks)
    if resolvent == c1 or resolvent == c2:
        return None
    return resolvent


def _resolution_closure(
    clauses: Iterable[Clause],
    table: VariableTable,
    variable_minimal_inline: bool = False,
    max_clauses: Optional[int] = None,
) -> set[Clause]:
    limit = DEFAULT_CLAUSE_GUARDRAIL if max_clauses is None else max_clauses
    current = prune_clauses(clauses)
    if variable_minimal_inline:
        current = variable_minimal(current)
    seen = set(current)
    while True:
        ordered = sorted(current, key=_sort_key)
        fresh: set[Clause] = set()
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                for v in sorted(a.vars & b.vars):
                    r = resolve(a, b, v, table)
                    if r is not None and r not in seen:
                        fresh.add(r)
        if not fresh:
            return current
        seen |= fresh
        if len(seen) > limit:
            raise CapacityError("resolution closure", len(seen), limit)
        current = prune_clauses(current | fresh)
        if variable_minimal_inline:
            current = variable_minimal(current)


def prime_implicates(
    formula: Formula, max_clauses: Optional[int] = None
) -> set[Clause]:
    """All prime implicates: resolution closure of a CNF with subsumption."""
    cnf = to_cnf(formula, max_clauses=max_clauses)
    return _resolution_closure(cnf, formula.table, max_clauses=max_clauses)


def prime_implicants(formula: Formula, max_clauses: Optional[int] = None) -> set[Term]:
    """All prime implicants.

    Monotone formulas distribute to DNF and close under absorption; the
    general case complements the prime implicates of the negation.
    """
    if formula.is_monotone():
        return prune_terms(to_dnf(formula, max_terms=max_clauses))
    table = formula.table
    implicates = prime_implicates(formula.negate(), max_clauses=max_clauses)
    out = set()
    for clause in implicates:
        out.add(
            Term(
                tuple(
                    Literal(
                        l.var, table.variables[l.var].full_mask & ~l.mask
                    )
                    for l in clause.literals
                )
            )
        )
    return out


def variable_minimal(items: Iterable[Union[Term, Clause]]) -> set:
    """Members whose variable set strictly contains no other member's."""
    pool = set(items)
    var_sets = {item: item.vars for item in pool}
    return {
        item
        for item in pool
        if not any(
            other != item and var_sets[other] < var_sets[item] for other in pool
        )
    }


def fixated_prime_implicates(
    cnf: Iterable[Clause],
    instance: Instance,
    max_clauses: Optional[int] = None,
) -> set[Clause]:
    """Variable-minimal prime implicates of a locally fixated CNF.

    Fixation (every literal consistent with the instance) lets the closure
    discard non-variable-minimal clauses after each resolution round; the
    result equals ``variable_minimal(prime_implicates(...))``.
    """
    table = instance.table
    clauses = list(cnf)
    for clause in clauses:
        for lit in clause.literals:
            if not instance.consistent_with(lit):
                raise InvalidArgumentError(
                    "CNF is not fixated on the instance: literal "
                    f"{table.format_literal(lit)} excludes its state"
                )
    return _resolution_closure(
        clauses, table, variable_minimal_inline=True, max_clauses=max_clauses
    )
