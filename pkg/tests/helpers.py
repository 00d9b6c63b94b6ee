"""Shared generators and small utilities for the test suite.

Everything is seeded by the caller; no module-level randomness.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from reasonkit.graphs import DecisionGraph, GraphLeaf, GraphNode, classifier_from_graph
from reasonkit.logic import Classifier, Instance, Literal, Variable, VariableTable


def make_table(sizes, prefix="v"):
    return VariableTable(
        [
            Variable(f"{prefix}{i}", tuple(f"s{j}" for j in range(sz)))
            for i, sz in enumerate(sizes)
        ]
    )


def random_table(rng: random.Random, max_vars=5, max_states=4, min_vars=2):
    sizes = [
        rng.randint(2, max_states) for _ in range(rng.randint(min_vars, max_vars))
    ]
    return make_table(sizes)


def random_formula(rng: random.Random, table, depth=3):
    if depth == 0 or rng.random() < 0.3:
        v = rng.randrange(len(table.variables))
        full = table.variables[v].full_mask
        return table.lit(v, rng.randint(1, full - 1))
    kids = [random_formula(rng, table, depth - 1) for _ in range(rng.randint(2, 3))]
    return (table.conj if rng.random() < 0.5 else table.disj)(kids)


def random_monotone_formula(rng: random.Random, table, depth=3):
    chosen = {
        v: rng.randrange(var.size) for v, var in enumerate(table.variables)
    }

    def build(depth):
        if depth == 0 or rng.random() < 0.3:
            v = rng.randrange(len(table.variables))
            return table.lit(v, 1 << chosen[v])
        kids = [build(depth - 1) for _ in range(rng.randint(2, 3))]
        return (table.conj if rng.random() < 0.5 else table.disj)(kids)

    return build(depth)


def random_tree_graph(rng: random.Random, table, labels, max_depth=3):
    """A random test-once decision tree over a random variable subset."""
    nodes = {}
    counter = itertools.count()

    def leaf(label):
        nid = f"l{next(counter)}"
        nodes[nid] = GraphLeaf(label)
        return nid

    def build(avail, depth):
        if not avail or depth == 0 or rng.random() < 0.25:
            return leaf(rng.choice(labels))
        v = rng.choice(avail)
        rest = [u for u in avail if u != v]
        size = table.variables[v].size
        states = list(range(size))
        rng.shuffle(states)
        n_edges = rng.randint(2, size)
        groups = [[] for _ in range(n_edges)]
        for i, s in enumerate(states):
            groups[i % n_edges].append(s)
        edges = []
        for group in groups:
            mask = 0
            for s in group:
                mask |= 1 << s
            edges.append((Literal(v, mask), build(rest, depth - 1)))
        nid = f"n{next(counter)}"
        nodes[nid] = GraphNode(v, tuple(edges))
        return nid

    root = build(list(range(len(table.variables))), max_depth)
    graph = DecisionGraph(table, tuple(labels), root, nodes)
    graph.validate()
    return graph


def random_classifier(
    rng: random.Random,
    table,
    n_classes=2,
    method=None,
    require_all_classes=False,
):
    labels = tuple(f"c{k}" for k in range(n_classes))
    for _ in range(200):
        graph = random_tree_graph(rng, table, labels)
        if require_all_classes:
            reached = {
                node.label
                for node in graph.nodes.values()
                if isinstance(node, GraphLeaf)
            }
            if reached != set(labels):
                continue
        picked = method or rng.choice(("cnnf", "dnf"))
        return classifier_from_graph(graph, picked), graph
    raise AssertionError("could not generate a classifier with all classes")


def random_instance(rng: random.Random, table) -> Instance:
    return Instance(
        table, tuple(rng.randrange(v.size) for v in table.variables)
    )


def all_worlds(table):
    return itertools.product(*(range(v.size) for v in table.variables))


def models_of(formula, table):
    scope = range(len(table.variables))
    return set(formula.enumerate_models(scope))


def random_distribution(rng: random.Random, size) -> tuple[Fraction, ...]:
    cuts = sorted(rng.sample(range(1, 100), size - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [100])]
    return tuple(Fraction(p, 100) for p in parts)


def term_of(table, mapping) -> "Term":
    from reasonkit.logic import Term

    lits = []
    for var, states in mapping.items():
        lits.append(table.literal(var, states))
    return table.term(lits)


def clause_of(table, mapping) -> "Clause":
    lits = []
    for var, states in mapping.items():
        lits.append(table.literal(var, states))
    return table.clause(lits)
