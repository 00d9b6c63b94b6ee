"""Brute-force reference implementations used to cross-check every
semantic claim: selection-semantics reason model sets, exhaustive prime
implicant/implicate enumeration, partition checks and decision
equivalence.

Everything here re-derives truth values by direct recursion over formula
nodes and exhaustive world iteration; none of it calls the optimized
evaluation paths of the other modules.
"""

from __future__ import annotations

import itertools

from .errors import CapacityError, ClassifierIntegrityError
from .logic import AND, FALSE, LIT, OR, TRUE, Clause, Literal, Term

DEFAULT_CANDIDATE_BUDGET = 2_000_000
DEFAULT_WORLD_BUDGET = 1 << 20


def holds(formula, world) -> bool:
    """Recursive truth of a formula at a world (tuple of state indices)."""
    k = formula.kind
    if k == TRUE:
        return True
    if k == FALSE:
        return False
    if k == LIT:
        return bool(formula.mask >> world[formula.var] & 1)
    if k == AND:
        return all(holds(c, world) for c in formula.children)
    return any(holds(c, world) for c in formula.children)


def all_worlds(table, budget=None):
    sizes = [v.size for v in table.variables]
    total = 1
    for s in sizes:
        total *= s
    limit = DEFAULT_WORLD_BUDGET if budget is None else budget
    if total > limit:
        raise CapacityError("world enumeration", total, limit)
    return list(itertools.product(*(range(s) for s in sizes)))


def models(formula, table, budget=None) -> set:
    return {w for w in all_worlds(table, budget) if holds(formula, w)}


def classify_world(classifier, world) -> int:
    hits = [i for i, f in enumerate(classifier.formulas) if holds(f, world)]
    if len(hits) != 1:
        raise ClassifierIntegrityError(
            f"world {world} satisfies {len(hits)} class formulas"
        )
    return hits[0]


def partition_counts(classifier, budget=None) -> dict:
    """Exhaustive mutual-exclusion/exhaustiveness check; per-class counts."""
    counts = {label: 0 for label in classifier.labels}
    for w in all_worlds(classifier.table, budget):
        counts[classifier.labels[classify_world(classifier, w)]] += 1
    return counts


def reason_models(classifier, instance, kind, budget=None) -> set:
    """Model set of the complete or general reason, from first principles.

    A world in the decided class is selected by the complete reason iff
    arbitrarily reassigning any subset of the features where it disagrees
    with the instance never leaves the class; for the general reason the
    reassignments are restricted to the instance's own states.
    """
    if kind not in ("complete", "general"):
        raise ValueError(f"unknown reason kind {kind!r}")
    table = classifier.table
    inst = instance.states
    delta = classifier.formulas[classify_world(classifier, inst)]
    worlds = all_worlds(table, budget)
    truth = {w: holds(delta, w) for w in worlds}
    sizes = [v.size for v in table.variables]
    n = len(sizes)

    selected = set()
    if kind == "complete":
        allin_memo: dict[frozenset, bool] = {}

        def allin(agree: frozenset) -> bool:
            ok = allin_memo.get(agree)
            if ok is None:
                ranges = [
                    [inst[v]] if v in agree else range(sizes[v]) for v in range(n)
                ]
                ok = all(truth[w] for w in itertools.product(*ranges))
                allin_memo[agree] = ok
            return ok

        for w in worlds:
            if truth[w]:
                agree = frozenset(v for v in range(n) if w[v] == inst[v])
                if allin(agree):
                    selected.add(w)
    else:
        for w in worlds:
            if not truth[w]:
                continue
            disagree = [v for v in range(n) if w[v] != inst[v]]
            ok = True
            for r in range(1, len(disagree) + 1):
                for subset in itertools.combinations(disagree, r):
                    moved = list(w)
                    for v in subset:
                        moved[v] = inst[v]
                    if not truth[tuple(moved)]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                selected.add(w)
    return selected


def _state_bits(sizes):
    # bits[v][s] = bitmask over world indices where variable v has state s
    bits = [[0] * s for s in sizes]
    for i, w in enumerate(itertools.product(*(range(s) for s in sizes))):
        for v, s in enumerate(w):
            bits[v][s] |= 1 << i
    return bits


def prime_sets(formula, table, candidate_budget=None, budget=None):
    """Exhaustively enumerated (prime implicants, prime implicates).

    Candidates range over all terms/clauses on the formula's variables; a
    candidate is prime when no single-step weakening (resp. strengthening)
    survives, which suffices because the weaker/stronger orders are graded
    by one-state steps.
    """
    scope = sorted(formula.vars)
    sizes = [table.variables[v].size for v in scope]
    total = 1
    for s in sizes:
        total *= s
    limit = DEFAULT_WORLD_BUDGET if budget is None else budget
    if total > limit:
        raise CapacityError("world enumeration", total, limit)

    n_candidates = 1
    for s in sizes:
        n_candidates *= (1 << s) - 1
    climit = DEFAULT_CANDIDATE_BUDGET if candidate_budget is None else candidate_budget
    if n_candidates > climit:
        raise CapacityError("term/clause enumeration", n_candidates, climit)

    sbits = _state_bits(sizes)
    ones = (1 << total) - 1
    model_bits = 0
    for i, w in enumerate(itertools.product(*(range(s) for s in sizes))):
        if holds(formula, dict(zip(scope, w))):
            model_bits |= 1 << i

    def lit_bits(pos, mask):
        acc = 0
        for s in range(sizes[pos]):
            if mask >> s & 1:
                acc |= sbits[pos][s]
        return acc

    # candidate option per variable: None (absent) or a proper nonempty mask
    options = [
        [None] + [m for m in range(1, (1 << s) - 1)] for s in sizes
    ]

    def term_bits(assign):
        acc = ones
        for pos, mask in enumerate(assign):
            if mask is not None:
                acc &= lit_bits(pos, mask)
        return acc

    def clause_bits(assign):
        acc = 0
        for pos, mask in enumerate(assign):
            if mask is not None:
                acc |= lit_bits(pos, mask)
        return acc

    implicants = []
    implicates = []
    for assign in itertools.product(*options):
        tb = term_bits(assign)
        if tb & ~model_bits == 0:
            implicants.append(assign)
        cb = clause_bits(assign)
        if model_bits & ~cb == 0:
            implicates.append(assign)

    implicant_set = set(implicants)
    implicate_set = set(implicates)

    def is_prime_implicant(assign):
        for pos, mask in enumerate(assign):
            if mask is None:
                continue
            dropped = assign[:pos] + (None,) + assign[pos + 1 :]
            if dropped in implicant_set:
                return False
            for s in range(sizes[pos]):
                if not mask >> s & 1:
                    wider = mask | (1 << s)
                    if wider == (1 << sizes[pos]) - 1:
                        widened = dropped
                    else:
                        widened = assign[:pos] + (wider,) + assign[pos + 1 :]
                    if widened in implicant_set:
                        return False
        return True

    def is_prime_implicate(assign):
        for pos, mask in enumerate(assign):
            if mask is None:
                continue
            for s in range(sizes[pos]):
                if mask >> s & 1:
                    narrower = mask & ~(1 << s)
                    if narrower == 0:
                        cand = assign[:pos] + (None,) + assign[pos + 1 :]
                    else:
                        cand = assign[:pos] + (narrower,) + assign[pos + 1 :]
                    if cand in implicate_set:
                        return False
        return True

    def to_term(assign):
        return Term(
            tuple(
                Literal(scope[pos], mask)
                for pos, mask in enumerate(assign)
                if mask is not None
            )
        )

    def to_clause(assign):
        return Clause(
            tuple(
                Literal(scope[pos], mask)
                for pos, mask in enumerate(assign)
                if mask is not None
            )
        )

    prime_implicants = {to_term(a) for a in implicants if is_prime_implicant(a)}
    prime_implicates = {to_clause(a) for a in implicates if is_prime_implicate(a)}
    return prime_implicants, prime_implicates


def decision_equivalent(decide_a, decide_b, table, budget=None):
    """Exhaustively compare two world -> label procedures.

    Returns ``(True, None)`` on agreement, else ``(False, world)`` with the
    first counterexample in enumeration order.
    """
    for w in all_worlds(table, budget):
        if decide_a(w) != decide_b(w):
            return False, w
    return True, None
