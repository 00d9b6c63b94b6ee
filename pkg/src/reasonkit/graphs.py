"""Decision graphs, numeric-tree discretization and forest compilation.

Graphs are validated DAGs whose internal nodes branch on state-set edge
labels partitioning the variable's domain.  Class formulas come in two
constructions: the path DNF (one term per root-to-leaf path) and the
complement NNF, which conjoins complemented edge labels and is linear in
the graph size; for test-once graphs the latter is or-decomposable, which
is what makes reason computation linear end to end.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Mapping, Optional, Union

from .errors import (
    CapacityError,
    ConfigurationError,
    InvalidArgumentError,
    ValidationError,
)
from .logic import Bound, Classifier, Formula, Literal, Variable, VariableTable

DEFAULT_PATH_GUARDRAIL = 100_000


@dataclass(frozen=True)
class GraphLeaf:
    label: str


@dataclass(frozen=True)
class GraphNode:
    var: int
    edges: tuple[tuple[Literal, str], ...]  # (edge literal, child node id)


@dataclass(frozen=True)
class DecisionGraph:
    """A rooted DAG classifier over a variable table."""

    table: VariableTable
    classes: tuple[str, ...]
    root: str
    nodes: Mapping[str, Union[GraphLeaf, GraphNode]]

    def validate(self) -> None:
        """Check structure; raises ValidationError naming offending nodes."""
        issues = []
        if self.root not in self.nodes:
            issues.append(f"root {self.root!r} is not a node id")
        if len(set(self.classes)) != len(self.classes):
            issues.append("duplicate class labels")
        for nid, node in self.nodes.items():
            if isinstance(node, GraphLeaf):
                if node.label not in self.classes:
                    issues.append(f"node {nid!r}: unknown class {node.label!r}")
                continue
            if not 0 <= node.var < len(self.table.variables):
                issues.append(f"node {nid!r}: unknown variable index {node.var}")
                continue
            var = self.table.variables[node.var]
            if len(node.edges) < 2:
                issues.append(
                    f"node {nid!r}: needs at least two edges to partition "
                    f"{var.name!r}"
                )
            seen = 0
            for lit, child in node.edges:
                if lit.var != node.var:
                    issues.append(
                        f"node {nid!r}: edge literal is on a different variable"
                    )
                    continue
                if lit.mask & seen:
                    issues.append(f"node {nid!r}: overlapping edge labels")
                seen |= lit.mask
                if child not in self.nodes:
                    issues.append(f"node {nid!r}: unknown child {child!r}")
            if seen != var.full_mask:
                issues.append(
                    f"node {nid!r}: edges do not cover all states of {var.name!r}"
                )
        if issues:
            raise ValidationError(issues)
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {nid: 0 for nid in self.nodes}
        stack = [(self.root, iter(self._children(self.root)))]
        color[self.root] = GRAY
        while stack:
            nid, it = stack[-1]
            child = next(it, None)
            if child is None:
                color[nid] = BLACK
                stack.pop()
            elif color[child] == GRAY:
                raise ValidationError(f"cycle through node {child!r}")
            elif color[child] == WHITE:
                color[child] = GRAY
                stack.append((child, iter(self._children(child))))

    def _children(self, nid: str):
        node = self.nodes[nid]
        if isinstance(node, GraphLeaf):
            return ()
        return tuple(child for _, child in node.edges)

    def decide(self, world) -> str:
        """Walk the graph on a world (tuple of state indices)."""
        node = self.nodes[self.root]
        while isinstance(node, GraphNode):
            state = world[node.var]
            for lit, child in node.edges:
                if lit.mask >> state & 1:
                    node = self.nodes[child]
                    break
            else:
                raise ValidationError(
                    f"no edge for state index {state} of variable "
                    f"{self.table.variables[node.var].name!r}"
                )
        return node.label

    def size(self) -> tuple[int, int]:
        edges = sum(
            len(n.edges) for n in self.nodes.values() if isinstance(n, GraphNode)
        )
        return len(self.nodes), edges


def check_test_once(graph: DecisionGraph) -> bool:
    """True iff no root-to-leaf path tests a variable twice."""
    below: dict[str, frozenset[int]] = {}

    def reach(nid: str) -> frozenset[int]:
        got = below.get(nid)
        if got is not None:
            return got
        node = graph.nodes[nid]
        if isinstance(node, GraphLeaf):
            got = frozenset()
        else:
            got = frozenset((node.var,)).union(
                *(reach(child) for _, child in node.edges)
            )
        below[nid] = got
        return got

    for nid, node in graph.nodes.items():
        if isinstance(node, GraphNode):
            for _, child in node.edges:
                if node.var in reach(child):
                    return False
    return True


def class_formula_dnf(
    graph: DecisionGraph, label: str, max_paths: Optional[int] = None
) -> Formula:
    """Disjunction of one term per root-to-leaf path into the class.

    On DAGs the path count may be exponential in the graph size, hence the
    guardrail; prefer the complement NNF there.
    """
    if label not in graph.classes:
        raise InvalidArgumentError(f"unknown class {label!r}")
    limit = DEFAULT_PATH_GUARDRAIL if max_paths is None else max_paths
    table = graph.table
    terms: list[Formula] = []
    visited = 0

    def walk(nid: str, masks: dict[int, int]):
        nonlocal visited
        node = graph.nodes[nid]
        if isinstance(node, GraphLeaf):
            visited += 1
            if visited > limit:
                raise CapacityError("path enumeration", visited, limit)
            if node.label == label:
                terms.append(
                    table.conj(table.lit(v, masks[v]) for v in sorted(masks))
                )
            return
        for lit, child in node.edges:
            prev = masks.get(node.var)
            merged = lit.mask if prev is None else prev & lit.mask
            if merged == 0:
                continue  # infeasible path through a repeated variable
            masks[node.var] = merged
            walk(child, masks)
            if prev is None:
                del masks[node.var]
            else:
                masks[node.var] = prev

    walk(graph.root, {})
    return table.disj(terms)


def class_formula_complement_nnf(graph: DecisionGraph, label: str) -> Formula:
    """NNF circuit for the class, linear in the graph size.

    Each internal node becomes the conjunction over its edges of
    (complemented edge label OR child circuit); leaves map to true for the
    class and false otherwise.  Equivalent to negating the circuit of the
    union of the other classes.  Or-decomposable whenever the graph is
    test-once.
    """
    if label not in graph.classes:
        raise InvalidArgumentError(f"unknown class {label!r}")
    table = graph.table
    memo: dict[str, Formula] = {}

    def build(nid: str) -> Formula:
        got = memo.get(nid)
        if got is not None:
            return got
        node = graph.nodes[nid]
        if isinstance(node, GraphLeaf):
            got = table.true if node.label == label else table.false
        else:
            full = table.variables[node.var].full_mask
            got = table.conj(
                table.disj([table.lit(node.var, full & ~lit.mask), build(child)])
                for lit, child in node.edges
            )
        memo[nid] = got
        return got

    return build(graph.root)


def classifier_from_graph(graph: DecisionGraph, method: str = "cnnf") -> Classifier:
    if method == "cnnf":
        formulas = tuple(
            class_formula_complement_nnf(graph, c) for c in graph.classes
        )
    elif method == "dnf":
        formulas = tuple(class_formula_dnf(graph, c) for c in graph.classes)
    else:
        raise InvalidArgumentError(f"unknown compilation method {method!r}")
    return Classifier(graph.table, graph.classes, formulas)


# -- numeric trees ------------------------------------------------------


@dataclass(frozen=True)
class NumericFeature:
    name: str
    min_value: Bound = None  # lower bound of the first interval
    state_prefix: Optional[str] = None


@dataclass(frozen=True)
class NumericSplit:
    feature: str
    threshold: Decimal
    lt: str  # child for value < threshold
    ge: str  # child for value >= threshold


@dataclass(frozen=True)
class NumericTree:
    """A decision tree whose splits are threshold tests on numeric features."""

    features: tuple[NumericFeature, ...]
    classes: tuple[str, ...]
    root: str
    nodes: Mapping[str, Union[GraphLeaf, NumericSplit]]


def discretize_numeric_tree(
    tree: NumericTree,
) -> tuple[DecisionGraph, VariableTable]:
    """Turn threshold splits into interval states and state-set edges.

    Each feature's sorted distinct thresholds induce half-open intervals,
    one state per interval, recorded as interval metadata on the new
    variable table; every split edge becomes the set of states entirely on
    its side of the threshold.
    """
    by_name = {f.name: f for f in tree.features}
    if len(by_name) != len(tree.features):
        raise ValidationError("duplicate feature names")
    thresholds: dict[str, set[Decimal]] = {f.name: set() for f in tree.features}
    for nid, node in tree.nodes.items():
        if isinstance(node, NumericSplit):
            if node.feature not in by_name:
                raise ValidationError(f"node {nid!r}: unknown feature {node.feature!r}")
            thresholds[node.feature].add(Decimal(str(node.threshold)))

    prefixes = _state_prefixes(tree.features)
    variables = []
    cuts: dict[str, list[Decimal]] = {}
    for feat in tree.features:
        ts = sorted(thresholds[feat.name])
        if not ts:
            raise ValidationError(
                f"feature {feat.name!r} is never tested; nothing to discretize"
            )
        lo = feat.min_value
        if lo is not None:
            lo = Decimal(str(lo))
            if lo >= ts[0]:
                raise ValidationError(
                    f"feature {feat.name!r}: declared minimum is not below "
                    "the smallest threshold"
                )
        bounds = [lo, *ts, None]
        intervals = tuple(
            (bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)
        )
        states = tuple(
            f"{prefixes[feat.name]}{i + 1}" for i in range(len(intervals))
        )
        variables.append(Variable(feat.name, states, intervals))
        cuts[feat.name] = ts

    table = VariableTable(variables)
    nodes: dict[str, Union[GraphLeaf, GraphNode]] = {}
    for nid, node in tree.nodes.items():
        if isinstance(node, GraphLeaf):
            nodes[nid] = node
            continue
        v = table.var_index(node.feature)
        ts = cuts[node.feature]
        cut = ts.index(Decimal(str(node.threshold)))
        lt_mask = (1 << (cut + 1)) - 1
        full = table.variables[v].full_mask
        nodes[nid] = GraphNode(
            v,
            (
                (Literal(v, lt_mask), node.lt),
                (Literal(v, full & ~lt_mask), node.ge),
            ),
        )

    graph = DecisionGraph(table, tree.classes, tree.root, nodes)
    graph.validate()
    return graph, table


def _state_prefixes(features) -> dict[str, str]:
    firsts = [f.name[:1].lower() for f in features]
    unambiguous = len(set(firsts)) == len(firsts) and all(firsts)
    out = {}
    for feat, first in zip(features, firsts):
        if feat.state_prefix is not None:
            out[feat.name] = feat.state_prefix
        elif unambiguous:
            out[feat.name] = first
        else:
            out[feat.name] = feat.name.lower() + "_"
    return out


# -- forests ------------------------------------------------------------


@dataclass(frozen=True)
class Forest:
    """Trees over one table, two classes, majority voting."""

    trees: tuple[DecisionGraph, ...]
    classes: tuple[str, ...]
    tie_rule: Optional[str] = None  # class awarded ties for even tree counts

    def validate(self) -> None:
        if len(self.classes) != 2:
            raise ValidationError("forests support exactly two classes")
        if not self.trees:
            raise ValidationError("forest has no trees")
        table = self.trees[0].table
        for k, tree in enumerate(self.trees):
            if tree.table is not table:
                raise ValidationError(f"tree {k} uses a different variable table")
            if set(tree.classes) != set(self.classes):
                raise ValidationError(f"tree {k} has different classes")
            tree.validate()
        if len(self.trees) % 2 == 0 and self.tie_rule is None:
            raise ConfigurationError(
                "even number of trees requires a tie rule"
            )
        if self.tie_rule is not None and self.tie_rule not in self.classes:
            raise ConfigurationError(f"tie rule {self.tie_rule!r} is not a class")

    def decide(self, world) -> str:
        votes = sum(1 for t in self.trees if t.decide(world) == self.classes[0])
        total = len(self.trees)
        if votes * 2 > total:
            return self.classes[0]
        if votes * 2 < total:
            return self.classes[1]
        return self.tie_rule


def forest_class_formula(forest: Forest, label: str) -> Formula:
    """Majority circuit over the trees' complement-NNF class formulas.

    Not or-decomposable in general even when every tree circuit is.
    """
    forest.validate()
    if label not in forest.classes:
        raise InvalidArgumentError(f"unknown class {label!r}")
    table = forest.trees[0].table
    other = forest.classes[0] if label == forest.classes[1] else forest.classes[1]
    total = len(forest.trees)
    if total % 2 == 1:
        needed = (total + 1) // 2
    else:
        needed = total // 2 if forest.tie_rule == label else total // 2 + 1
    pos = [class_formula_complement_nnf(t, label) for t in forest.trees]
    neg = [class_formula_complement_nnf(t, other) for t in forest.trees]
    memo: dict[tuple[int, int], Formula] = {}

    def at_least(idx: int, j: int) -> Formula:
        if j <= 0:
            return table.true
        if total - idx < j:
            return table.false
        got = memo.get((idx, j))
        if got is None:
            got = table.disj(
                [
                    table.conj([pos[idx], at_least(idx + 1, j - 1)]),
                    table.conj([neg[idx], at_least(idx + 1, j)]),
                ]
            )
            memo[(idx, j)] = got
        return got

    return at_least(0, needed)


def classifier_from_forest(forest: Forest) -> Classifier:
    formulas = tuple(forest_class_formula(forest, c) for c in forest.classes)
    return Classifier(forest.trees[0].table, forest.classes, formulas)
