"""Discrete-logic kernel.

Variables with named states, state-set literals, hash-consed NNF formula
DAGs, and the exhaustive operations the rest of the package builds on:
conditioning, evaluation, negation, entailment, subsumption and model
enumeration.

A literal is a nonempty *proper* subset of one variable's states; the
empty and full sets are unrepresentable as literals and collapse to
false/true at construction time.  Formulas are immutable and interned per
:class:`VariableTable`, so reference equality implies structural equality
(never semantic equality).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from decimal import Decimal
from functools import lru_cache, reduce
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import (
    CapacityError,
    ClassifierIntegrityError,
    InvalidArgumentError,
    UnknownStateError,
    UnknownVariableError,
)

DEFAULT_WORLD_BUDGET = 1 << 20

# formula node kinds
TRUE, FALSE, LIT, AND, OR = range(5)

Bound = Optional[Decimal]  # None encodes an infinite endpoint


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Variable:
    """One discrete feature: a name, ordered states, optional numeric intervals.

    When ``intervals`` is present it gives one half-open interval ``[lo, hi)``
    per state, in state order; the intervals must be disjoint, contiguous and
    ordered.  ``None`` bounds stand for -infinity / +infinity.
    """

    name: str
    states: tuple[str, ...]
    intervals: Optional[tuple[tuple[Bound, Bound], ...]] = None

    def __post_init__(self):
        if len(self.states) < 2:
            raise InvalidArgumentError(
                f"variable {self.name!r} needs at least 2 states"
            )
        if len(set(self.states)) != len(self.states):
            raise InvalidArgumentError(
                f"variable {self.name!r} has duplicate state names"
            )
        if self.intervals is not None:
            if len(self.intervals) != len(self.states):
                raise InvalidArgumentError(
                    f"variable {self.name!r}: one interval per state required"
                )
            for k, (lo, hi) in enumerate(self.intervals):
                if lo is not None and hi is not None and not lo < hi:
                    raise InvalidArgumentError(
                        f"variable {self.name!r}: interval {k} is empty"
                    )
                if k > 0:
                    prev_hi = self.intervals[k - 1][1]
                    if prev_hi is None or lo is None or prev_hi != lo:
                        raise InvalidArgumentError(
                            f"variable {self.name!r}: intervals must be "
                            f"contiguous and ordered at position {k}"
                        )

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.states)) - 1

    def state_index(self, state: str) -> int:
        try:
            return self.states.index(state)
        except ValueError:
            raise UnknownStateError(self.name, state) from None

    def state_for_value(self, value) -> int:
        """Map a numeric point value to the state whose interval contains it."""
        if self.intervals is None:
            raise InvalidArgumentError(
                f"variable {self.name!r} has no interval metadata"
            )
        v = Decimal(str(value))
        for k, (lo, hi) in enumerate(self.intervals):
            if (lo is None or v >= lo) and (hi is None or v < hi):
                return k
        raise InvalidArgumentError(
            f"value {value!r} outside the declared range of {self.name!r}"
        )


@dataclass(frozen=True)
class Literal:
    """A state-set literal: variable index plus a bitmask over its states.

    The mask is always a nonempty proper subset of the variable's domain;
    use :meth:`VariableTable.literal` to build validated instances.
    """

    var: int
    mask: int

    def is_simple(self) -> bool:
        return _popcount(self.mask) == 1

    def states(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.mask.bit_length()) if self.mask >> i & 1)


class Formula:
    """A node of an interned NNF DAG: true, false, literal, AND or OR.

    Instances are created through :class:`VariableTable` constructors and
    are unique per table: ``f is g`` iff the two were built from the same
    structure.  AND/OR children are flattened, deduplicated, constant-folded
    and merged per variable at construction, and always number at least two.
    """

    __slots__ = ("table", "kind", "var", "mask", "children", "vars", "uid")

    def __init__(self, table, kind, var, mask, children, vars_, uid):
        self.table = table
        self.kind = kind
        self.var = var
        self.mask = mask
        self.children = children
        self.vars = vars_
        self.uid = uid

    # Identity-based equality/hash: interning makes it structural.

    def __repr__(self) -> str:
        return f"<Formula {self.table.format_formula(self)}>"

    def walk(self) -> Iterator["Formula"]:
        """Yield every node of the DAG once, depth-first."""
        seen = {id(self)}
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if node.children is not None:
                for child in node.children:
                    if id(child) not in seen:
                        seen.add(id(child))
                        stack.append(child)

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())

    def literals(self) -> Iterator[Literal]:
        for node in self.walk():
            if node.kind == LIT:
                yield Literal(node.var, node.mask)

    def is_simple(self) -> bool:
        """True iff every literal in the formula is a single state."""
        return all(lit.is_simple() for lit in self.literals())

    def is_monotone(self) -> bool:
        """True iff each variable's literal occurrences are simple and equal."""
        seen: dict[int, int] = {}
        for lit in self.literals():
            if not lit.is_simple():
                return False
            if seen.setdefault(lit.var, lit.mask) != lit.mask:
                return False
        return True

    # -- semantic operations --------------------------------------------

    def evaluate(self, world) -> bool:
        """Truth value at a world (an :class:`Instance`, full state tuple, or
        a mapping from variable index to state index covering ``self.vars``)."""
        assign = _world_assignment(self, world)
        memo: dict[int, bool] = {}

        def rec(f: Formula) -> bool:
            r = memo.get(id(f))
            if r is not None:
                return r
            if f.kind == TRUE:
                r = True
            elif f.kind == FALSE:
                r = False
            elif f.kind == LIT:
                r = bool(f.mask >> assign[f.var] & 1)
            elif f.kind == AND:
                r = all(rec(c) for c in f.children)
            else:
                r = any(rec(c) for c in f.children)
            memo[id(f)] = r
            return r

        return rec(self)

    def condition(self, term) -> "Formula":
        """Substitute a simple term's states into the formula.

        Every literal of ``term`` must be simple; the result never mentions
        a conditioned variable, and constants fold upward.
        """
        assign = _simple_assignment(self.table, term)
        t = self.table
        memo: dict[int, Formula] = {}

        def rec(f: Formula) -> Formula:
            r = memo.get(id(f))
            if r is not None:
                return r
            if f.kind == LIT and f.var in assign:
                r = t.true if f.mask >> assign[f.var] & 1 else t.false
            elif f.kind == AND:
                r = t.conj(rec(c) for c in f.children)
            elif f.kind == OR:
                r = t.disj(rec(c) for c in f.children)
            else:
                r = f
            memo[id(f)] = r
            return r

        return rec(self)

    def negate(self) -> "Formula":
        """NNF complement: swaps AND/OR and complements literal state sets."""
        t = self.table
        memo: dict[int, Formula] = {}

        def rec(f: Formula) -> Formula:
            r = memo.get(id(f))
            if r is not None:
                return r
            if f.kind == TRUE:
                r = t.false
            elif f.kind == FALSE:
                r = t.true
            elif f.kind == LIT:
                r = t.lit(f.var, t.variables[f.var].full_mask & ~f.mask)
            elif f.kind == AND:
                r = t.disj(rec(c) for c in f.children)
            else:
                r = t.conj(rec(c) for c in f.children)
            memo[id(f)] = r
            return r

        return rec(self)

    def truth_bits(self, scope: Sequence[int]) -> int:
        """Big-integer truth table over the worlds of ``scope``.

        Bit ``i`` is the formula's value at the world with mixed-radix index
        ``i`` (first scope variable most significant).  ``scope`` must cover
        ``self.vars``.
        """
        scope = tuple(scope)
        if not self.vars <= set(scope):
            raise InvalidArgumentError("scope does not cover the formula's variables")
        sizes = tuple(self.table.variables[v].size for v in scope)
        digit = _digit_masks(sizes)
        pos = {v: k for k, v in enumerate(scope)}
        total = 1
        for s in sizes:
            total *= s
        ones = (1 << total) - 1
        memo: dict[int, int] = {}

        def rec(f: Formula) -> int:
            r = memo.get(id(f))
            if r is not None:
                return r
            if f.kind == TRUE:
                r = ones
            elif f.kind == FALSE:
                r = 0
            elif f.kind == LIT:
                k = pos[f.var]
                acc = 0
                for s in range(sizes[k]):
                    if f.mask >> s & 1:
                        acc |= digit[k][s]
                r = acc
            elif f.kind == AND:
                r = ones
                for c in f.children:
                    r &= rec(c)
            else:
                r = 0
                for c in f.children:
                    r |= rec(c)
            memo[id(f)] = r
            return r

        return rec(self)

    def entails(self, other: "Formula", budget: Optional[int] = None) -> bool:
        """True iff every model of ``self`` is a model of ``other``."""
        if other.table is not self.table:
            raise InvalidArgumentError("formulas belong to different tables")
        scope = sorted(self.vars | other.vars)
        _check_world_budget(self.table, scope, budget)
        return self.truth_bits(scope) & ~other.truth_bits(scope) == 0

    def model_equal(self, other: "Formula", budget: Optional[int] = None) -> bool:
        if other.table is not self.table:
            raise InvalidArgumentError("formulas belong to different tables")
        scope = sorted(self.vars | other.vars)
        _check_world_budget(self.table, scope, budget)
        return self.truth_bits(scope) == other.truth_bits(scope)

    def enumerate_models(
        self, scope: Sequence[int], budget: Optional[int] = None
    ) -> list[tuple[int, ...]]:
        """All models over ``scope`` (a superset of the formula's variables),
        as state tuples aligned with ``scope`` order."""
        scope = tuple(scope)
        if not self.vars <= set(scope):
            raise InvalidArgumentError("scope does not cover the formula's variables")
        _check_world_budget(self.table, scope, budget)
        bits = self.truth_bits(scope)
        sizes = [self.table.variables[v].size for v in scope]
        out = []
        for i, world in enumerate(itertools.product(*(range(s) for s in sizes))):
            if bits >> i & 1:
                out.append(world)
        return out

    def count_models(self, scope: Sequence[int], budget: Optional[int] = None) -> int:
        scope = tuple(scope)
        if not self.vars <= set(scope):
            raise InvalidArgumentError("scope does not cover the formula's variables")
        _check_world_budget(self.table, scope, budget)
        return _popcount(self.truth_bits(scope))


def _world_assignment(formula: Formula, world) -> Mapping[int, int]:
    table = formula.table
    if isinstance(world, Instance):
        if world.table is not table:
            raise InvalidArgumentError("instance belongs to a different table")
        return world.states
    if isinstance(world, Mapping):
        missing = formula.vars - set(world)
        if missing:
            names = sorted(table.variables[v].name for v in missing)
            raise InvalidArgumentError(f"partial world: missing {', '.join(names)}")
        return world
    world = tuple(world)
    if len(world) != len(table.variables):
        raise InvalidArgumentError(
            f"world has {len(world)} entries, table has {len(table.variables)}"
        )
    return world


def _simple_assignment(table: "VariableTable", term) -> dict[int, int]:
    """Normalize a conditioning argument to {var index: state index}."""
    if isinstance(term, Term):
        lits = term.literals
    elif isinstance(term, Instance):
        lits = term.term().literals
    elif isinstance(term, Mapping):
        lits = []
        for var, state in term.items():
            v = table.var_index(var)
            s = state if isinstance(state, int) else table.variables[v].state_index(state)
            if not 0 <= s < table.variables[v].size:
                raise UnknownStateError(table.variables[v].name, state)
            lits.append(Literal(v, 1 << s))
        lits = tuple(lits)
    else:
        raise InvalidArgumentError(f"cannot condition on {type(term).__name__}")
    assign: dict[int, int] = {}
    for lit in lits:
        if not 0 <= lit.var < len(table.variables):
            raise UnknownVariableError(lit.var)
        if not lit.is_simple():
            raise InvalidArgumentError(
                "conditioning requires simple literals, got "
                + table.format_literal(lit)
            )
        assign[lit.var] = lit.mask.bit_length() - 1
    return assign


def _check_world_budget(table, scope, budget) -> int:
    limit = DEFAULT_WORLD_BUDGET if budget is None else budget
    count = 1
    for v in scope:
        count *= table.variables[v].size
    if count > limit:
        raise CapacityError("world enumeration", count, limit)
    return count


@lru_cache(maxsize=4096)
def _digit_masks(sizes: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Per (position, digit) bitmasks of mixed-radix world indices."""
    total = 1
    for s in sizes:
        total *= s
    out = []
    stride = total
    for size in sizes:
        stride //= size
        period = stride * size
        per_digit = []
        for d in range(size):
            rep = ((1 << stride) - 1) << (d * stride)
            span = period
            while span < total:
                rep |= rep << span
                span <<= 1
            per_digit.append(rep & ((1 << total) - 1))
        out.append(tuple(per_digit))
    return tuple(out)


class VariableTable:
    """The ordered universe of discrete features plus the formula intern pool.

    All formulas, terms, clauses, instances and classifiers are expressed
    against one table.  Construction of formulas is synchronized; built
    formulas are immutable and safe to share across threads.
    """

    def __init__(self, variables: Iterable[Variable]):
        self.variables: tuple[Variable, ...] = tuple(variables)
        if len({v.name for v in self.variables}) != len(self.variables):
            raise InvalidArgumentError("duplicate variable names")
        self._index = {v.name: i for i, v in enumerate(self.variables)}
        self._intern: dict = {}
        self._lock = threading.Lock()
        self._next_uid = 0
        self.true = self._make(TRUE, None, None, None, frozenset())
        self.false = self._make(FALSE, None, None, None, frozenset())

    def var_index(self, var: Union[int, str]) -> int:
        if isinstance(var, int):
            if not 0 <= var < len(self.variables):
                raise UnknownVariableError(var)
            return var
        try:
            return self._index[var]
        except KeyError:
            raise UnknownVariableError(var) from None

    def variable(self, var: Union[int, str]) -> Variable:
        return self.variables[self.var_index(var)]

    def state_ref(self, var: Union[int, str], state: Union[int, str]) -> tuple[int, int]:
        v = self.var_index(var)
        if isinstance(state, int):
            if not 0 <= state < self.variables[v].size:
                raise UnknownStateError(self.variables[v].name, state)
            return v, state
        return v, self.variables[v].state_index(state)

    # -- literal / term / clause helpers --------------------------------

    def literal(self, var: Union[int, str], states) -> Literal:
        """A validated literal from state names, indices or a bitmask."""
        v = self.var_index(var)
        mask = self._state_mask(v, states)
        full = self.variables[v].full_mask
        if mask == 0 or mask == full:
            raise InvalidArgumentError(
                f"literal over {self.variables[v].name!r} must be a nonempty "
                "proper subset of its states"
            )
        return Literal(v, mask)

    def _state_mask(self, v: int, states) -> int:
        if isinstance(states, int):
            mask = states
            if mask < 0 or mask > self.variables[v].full_mask:
                raise InvalidArgumentError(f"state mask {states} out of range")
            return mask
        mask = 0
        for s in states:
            _, k = self.state_ref(v, s)
            mask |= 1 << k
        return mask

    def term(self, lits: Iterable[Literal]) -> "Term":
        return Term(_sorted_unique_lits(self, lits, "term"))

    def clause(self, lits: Iterable[Literal]) -> "Clause":
        return Clause(_sorted_unique_lits(self, lits, "clause"))

    def instance(self, assignment: Mapping) -> "Instance":
        """A total assignment from {variable: state} with names or indices."""
        states = [None] * len(self.variables)
        for var, state in assignment.items():
            v, k = self.state_ref(var, state)
            states[v] = k
        missing = [self.variables[i].name for i, s in enumerate(states) if s is None]
        if missing:
            raise InvalidArgumentError(f"instance is missing: {', '.join(missing)}")
        return Instance(self, tuple(states))

    # -- formula constructors --------------------------------------------

    def _make(self, kind, var, mask, children, vars_) -> Formula:
        if kind in (TRUE, FALSE):
            key = kind
        elif kind == LIT:
            key = (LIT, var, mask)
        else:
            key = (kind, tuple(c.uid for c in children))
        with self._lock:
            f = self._intern.get(key)
            if f is None:
                f = Formula(self, kind, var, mask, children, vars_, self._next_uid)
                self._next_uid += 1
                self._intern[key] = f
            return f

    def lit(self, var: Union[int, str], states) -> Formula:
        """Literal formula; empty/full state sets collapse to false/true."""
        v = self.var_index(var)
        mask = self._state_mask(v, states)
        full = self.variables[v].full_mask
        if mask == 0:
            return self.false
        if mask == full:
            return self.true
        return self._make(LIT, v, mask, None, frozenset((v,)))

    def lit_formula(self, literal: Literal) -> Formula:
        return self.lit(literal.var, literal.mask)

    def conj(self, items: Iterable[Formula]) -> Formula:
        return self._combine(AND, items)

    def disj(self, items: Iterable[Formula]) -> Formula:
        return self._combine(OR, items)

    def _combine(self, kind, items) -> Formula:
        # Flatten nested nodes of the same kind, fold constants, merge
        # same-variable literal children, deduplicate, unwrap singletons.
        absorbing = self.false if kind == AND else self.true
        identity = self.true if kind == AND else self.false
        flat: list[Formula] = []
        stack = list(items)
        stack.reverse()
        while stack:
            f = stack.pop()
            if not isinstance(f, Formula):
                raise InvalidArgumentError(f"not a formula: {f!r}")
            if f.table is not self:
                raise InvalidArgumentError("formula belongs to a different table")
            if f is absorbing:
                return absorbing
            if f is identity:
                continue
            if f.kind == kind:
                stack.extend(reversed(f.children))
            else:
                flat.append(f)

        lit_masks: dict[int, int] = {}
        rest: dict[int, Formula] = {}
        for f in flat:
            if f.kind == LIT:
                if f.var in lit_masks:
                    if kind == AND:
                        lit_masks[f.var] &= f.mask
                    else:
                        lit_masks[f.var] |= f.mask
                else:
                    lit_masks[f.var] = f.mask
            else:
                rest.setdefault(f.uid, f)

        children: list[Formula] = []
        for v, mask in lit_masks.items():
            lf = self.lit(v, mask)
            if lf is absorbing:
                return absorbing
            if lf is identity:
                continue
            children.append(lf)
        children.extend(rest.values())
        if not children:
            return identity
        if len(children) == 1:
            return children[0]
        children.sort(key=lambda f: f.uid)
        vars_ = frozenset().union(*(c.vars for c in children))
        return self._make(kind, None, None, tuple(children), vars_)

    def formula_from_term(self, term: "Term") -> Formula:
        return self.conj(self.lit_formula(l) for l in term.literals)

    def formula_from_clause(self, clause: "Clause") -> Formula:
        return self.disj(self.lit_formula(l) for l in clause.literals)

    # -- rendering --------------------------------------------------------

    def format_literal(self, lit: Literal) -> str:
        var = self.variables[lit.var]
        states = [var.states[i] for i in lit.states()]
        if len(states) == 1:
            return f"{var.name}={states[0]}"
        return f"{var.name} in {{{','.join(states)}}}"

    def format_formula(self, f: Formula, parent_kind: Optional[int] = None) -> str:
        if f.kind == TRUE:
            return "true"
        if f.kind == FALSE:
            return "false"
        if f.kind == LIT:
            return self.format_literal(Literal(f.var, f.mask))
        sep = " AND " if f.kind == AND else " OR "
        body = sep.join(self.format_formula(c, f.kind) for c in f.children)
        if parent_kind is not None and f.kind != parent_kind:
            return f"({body})"
        return body


def _sorted_unique_lits(table, lits, what: str) -> tuple[Literal, ...]:
    out: dict[int, Literal] = {}
    for lit in lits:
        if not isinstance(lit, Literal):
            raise InvalidArgumentError(f"{what} items must be literals")
        var = table.variables[lit.var]
        if lit.mask == 0 or lit.mask == var.full_mask:
            raise InvalidArgumentError(
                f"literal over {var.name!r} must be a nonempty proper subset"
            )
        if lit.var in out:
            raise InvalidArgumentError(
                f"{what} has two literals for variable {var.name!r}"
            )
        out[lit.var] = lit
    return tuple(out[v] for v in sorted(out))


@dataclass(frozen=True)
class Term:
    """A conjunction of literals over pairwise distinct variables.

    The empty term denotes true.  Terms are never inconsistent.
    """

    literals: tuple[Literal, ...]

    @property
    def vars(self) -> frozenset[int]:
        return frozenset(l.var for l in self.literals)

    def get(self, var: int) -> Optional[Literal]:
        for l in self.literals:
            if l.var == var:
                return l
        return None

    def to_formula(self, table: VariableTable) -> Formula:
        return table.formula_from_term(self)


@dataclass(frozen=True)
class Clause:
    """A disjunction of literals over pairwise distinct variables.

    The empty clause denotes false.  Clauses are never valid.
    """

    literals: tuple[Literal, ...]

    @property
    def vars(self) -> frozenset[int]:
        return frozenset(l.var for l in self.literals)

    def get(self, var: int) -> Optional[Literal]:
        for l in self.literals:
            if l.var == var:
                return l
        return None

    def to_formula(self, table: VariableTable) -> Formula:
        return table.formula_from_clause(self)


def subsumes(a: Union[Term, Clause], b: Union[Term, Clause]) -> bool:
    """Syntactic entailment between two terms or two clauses.

    For terms, ``a`` entails ``b`` iff every literal of ``b`` is covered by
    an ``a``-literal on the same variable with a subset of its states; for
    clauses the direction reverses.  Agrees with model-based entailment.
    """
    if isinstance(a, Term) and isinstance(b, Term):
        amap = {l.var: l.mask for l in a.literals}
        return all(
            lb.var in amap and amap[lb.var] & ~lb.mask == 0 for lb in b.literals
        )
    if isinstance(a, Clause) and isinstance(b, Clause):
        bmap = {l.var: l.mask for l in b.literals}
        return all(
            la.var in bmap and la.mask & ~bmap[la.var] == 0 for la in a.literals
        )
    raise InvalidArgumentError("subsumption needs two terms or two clauses")


@dataclass(frozen=True)
class Instance:
    """A total assignment of one state per feature (equivalently: a world)."""

    table: VariableTable
    states: tuple[int, ...]

    def __post_init__(self):
        if len(self.states) != len(self.table.variables):
            raise InvalidArgumentError("instance must assign every variable")
        for v, s in enumerate(self.states):
            if not 0 <= s < self.table.variables[v].size:
                raise UnknownStateError(self.table.variables[v].name, s)

    def characteristic(self, var: Union[int, str]) -> Literal:
        v = self.table.var_index(var)
        return Literal(v, 1 << self.states[v])

    def term(self) -> Term:
        return Term(tuple(Literal(v, 1 << s) for v, s in enumerate(self.states)))

    def consistent_with(self, lit: Literal) -> bool:
        return bool(lit.mask >> self.states[lit.var] & 1)

    def as_names(self) -> dict[str, str]:
        return {
            var.name: var.states[self.states[i]]
            for i, var in enumerate(self.table.variables)
        }

    def __str__(self) -> str:
        return " AND ".join(f"{k}={v}" for k, v in self.as_names().items())


@dataclass(frozen=True)
class Classifier:
    """Mutually exclusive, exhaustive class formulas with class labels."""

    table: VariableTable
    labels: tuple[str, ...]
    formulas: tuple[Formula, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.formulas):
            raise InvalidArgumentError("one formula per class label required")
        if len(set(self.labels)) != len(self.labels):
            raise InvalidArgumentError("duplicate class labels")
        for f in self.formulas:
            if f.table is not self.table:
                raise InvalidArgumentError("class formula from a different table")

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"unknown class label {label!r}") from None

    def class_index_of(self, instance: Instance) -> int:
        """Index of the unique class formula the instance satisfies."""
        hits = [i for i, f in enumerate(self.formulas) if f.evaluate(instance)]
        if len(hits) != 1:
            raise ClassifierIntegrityError(
                f"instance satisfies {len(hits)} class formulas "
                f"({', '.join(self.labels[i] for i in hits) or 'none'})"
            )
        return hits[0]

    def classify(self, instance: Instance) -> str:
        return self.labels[self.class_index_of(instance)]

    def scope(self) -> list[int]:
        return list(range(len(self.table.variables)))

    def check_partition(self, budget: Optional[int] = None) -> dict[str, int]:
        """Exhaustively verify mutual exclusion and exhaustiveness.

        Returns per-class model counts; raises on any violating world.
        """
        scope = self.scope()
        total = _check_world_budget(self.table, scope, budget)
        ones = (1 << total) - 1
        union = 0
        counts = {}
        bits = []
        for label, f in zip(self.labels, self.formulas):
            b = f.truth_bits(scope)
            if union & b:
                raise ClassifierIntegrityError(
                    f"class formulas overlap at world index {_lowest_bit(union & b)}"
                )
            union |= b
            bits.append(b)
            counts[label] = _popcount(b)
        if union != ones:
            raise ClassifierIntegrityError(
                f"class formulas miss world index {_lowest_bit(ones & ~union)}"
            )
        return counts


def _lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def simplify(formula: Formula) -> Formula:
    """Light syntactic cleanup for readable output: constant folding,
    absorption, and pruning of branches dead under conjunctive context.

    Semantically neutral; makes no attempt at canonical minimization.
    """
    t = formula.table
    imp_memo: dict[tuple[int, int], bool] = {}

    def implies(a: Formula, b: Formula) -> bool:
        # cheap syntactic sufficient condition for a |= b
        if a is b or b is t.true or a is t.false:
            return True
        key = (a.uid, b.uid)
        r = imp_memo.get(key)
        if r is not None:
            return r
        r = False
        if a.kind == LIT and b.kind == LIT and a.var == b.var:
            r = a.mask & ~b.mask == 0
        if not r and b.kind == OR:
            r = any(implies(a, c) for c in b.children)
        if not r and a.kind == AND:
            r = any(implies(c, b) for c in a.children)
        if not r and b.kind == AND:
            r = all(implies(a, c) for c in b.children)
        if not r and a.kind == OR:
            r = all(implies(c, b) for c in a.children)
        imp_memo[key] = r
        return r

    def absorb(kind: int, kids: list[Formula]) -> list[Formula]:
        kept = []
        for i, c in enumerate(kids):
            redundant = False
            for j, d in enumerate(kids):
                if i == j:
                    continue
                # for AND drop c when a sibling implies it; dually for OR;
                # of two mutually-implying children keep the earlier one
                covered = implies(d, c) if kind == AND else implies(c, d)
                mutual = implies(c, d) if kind == AND else implies(d, c)
                if covered and (not mutual or j < i):
                    redundant = True
                    break
            if not redundant:
                kept.append(c)
        return kept

    memo: dict[tuple[int, tuple], Formula] = {}

    def rec(f: Formula, ctx: dict[int, int]) -> Formula:
        # ctx: per-variable allowed-state masks established by enclosing
        # conjunctions; sound to assume anywhere below them.
        if f.kind in (TRUE, FALSE):
            return f
        local = tuple(sorted((v, m) for v, m in ctx.items() if v in f.vars))
        key = (f.uid, local)
        r = memo.get(key)
        if r is not None:
            return r
        if f.kind == LIT:
            allowed = ctx.get(f.var, t.variables[f.var].full_mask)
            if allowed & ~f.mask == 0:
                r = t.true  # satisfied by every context-allowed state
            else:
                r = t.lit(f.var, f.mask & allowed)
        elif f.kind == OR:
            r = t.disj(absorb(OR, [rec(c, ctx) for c in f.children]))
        else:
            lit_masks: dict[int, int] = {}
            rest: list[Formula] = []
            for c in f.children:
                if c.kind == LIT:
                    lit_masks[c.var] = c.mask  # constructor merged duplicates
                else:
                    rest.append(c)
            inner = dict(ctx)
            emitted: list[Formula] = []
            contradiction = False
            for v, mask in lit_masks.items():
                outer = ctx.get(v, t.variables[v].full_mask)
                narrowed = mask & outer
                if narrowed == 0:
                    contradiction = True
                    break
                inner[v] = narrowed
                if narrowed != outer:  # else implied by the context
                    emitted.append(t.lit(v, narrowed))
            if contradiction:
                r = t.false
            else:
                emitted.extend(rec(c, inner) for c in rest)
                r = t.conj(absorb(AND, emitted))
        memo[key] = r
        return r

    return rec(formula, {})
