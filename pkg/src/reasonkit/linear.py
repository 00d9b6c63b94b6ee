"""Compilation of linear-threshold models into ordered decision graphs.

A naive Bayes model with a posterior cutoff is first rewritten in
log-odds form and integerized at a fixed decimal precision; an integer
linear rule is then compiled by depth-first search over the features,
merging two partial instantiations whenever their residual thresholds
fall in the same equivalence interval of the remaining features'
achievable sums.  The memo is keyed on that interval, which bounds the
graph at n*(2W+1) nodes for weight magnitude W.  Step-activation neurons
are the same kind of linear rule, so binary step networks compile by
composing per-neuron graphs into one circuit.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    CapacityError,
    InvalidArgumentError,
    InvalidDistributionError,
    ValidationError,
)
from .graphs import DecisionGraph, GraphLeaf, GraphNode, class_formula_complement_nnf
from .logic import Classifier, Formula, Literal, Variable, VariableTable

DEFAULT_NODE_GUARDRAIL = 1_000_000
DEFAULT_PRECISION = 6


@dataclass(frozen=True)
class LinearClassifierSpec:
    """Decide positive iff the per-state weights sum to at least the threshold."""

    table: VariableTable
    features: tuple[int, ...]  # variable indices, in compilation order
    weights: tuple[tuple[int, ...], ...]  # per feature, per state
    threshold: int
    pos_label: str = "yes"
    neg_label: str = "no"
    scale: int = 1  # multiplier used when integerizing real weights

    def __post_init__(self):
        if len(self.features) != len(self.weights):
            raise InvalidArgumentError("one weight row per feature required")
        if len(set(self.features)) != len(self.features):
            raise InvalidArgumentError("duplicate features")
        for k, v in enumerate(self.features):
            if len(self.weights[k]) != self.table.variables[v].size:
                raise InvalidArgumentError(
                    f"feature {self.table.variables[v].name!r}: one weight "
                    "per state required"
                )

    @property
    def weight_bound(self) -> int:
        """|threshold| plus the per-feature maximum absolute weights."""
        return abs(self.threshold) + sum(
            max(abs(w) for w in row) for row in self.weights
        )

    def decide(self, world) -> str:
        total = sum(
            self.weights[k][world[v]] for k, v in enumerate(self.features)
        )
        return self.pos_label if total >= self.threshold else self.neg_label


def compile_linear(
    spec: LinearClassifierSpec, max_nodes: Optional[int] = None
) -> DecisionGraph:
    """Ordered decision graph deciding exactly like the linear rule.

    Residual thresholds are canonicalized to the smallest achievable
    suffix sum at or above them before memo lookup; residuals below every
    achievable sum or above all of them close immediately as leaves.
    """
    limit = DEFAULT_NODE_GUARDRAIL if max_nodes is None else max_nodes
    n = len(spec.features)
    # achievable[k] = sorted distinct sums of features k..n-1
    achievable: list[list[int]] = [[0]] * (n + 1)
    acc = {0}
    for k in range(n - 1, -1, -1):
        acc = {w + v for w in spec.weights[k] for v in acc}
        achievable[k] = sorted(acc)

    nodes: dict[str, Union[GraphLeaf, GraphNode]] = {
        "leaf_pos": GraphLeaf(spec.pos_label),
        "leaf_neg": GraphLeaf(spec.neg_label),
    }
    memo: dict[tuple[int, int], str] = {}
    counter = 0

    def build(k: int, residual: int) -> str:
        nonlocal counter
        sums = achievable[k]
        pos = bisect_left(sums, residual)
        if pos == len(sums):
            return "leaf_neg"  # no completion reaches the threshold
        canonical = sums[pos]
        if canonical == sums[0]:
            return "leaf_pos"  # every completion reaches the threshold
        key = (k, canonical)
        got = memo.get(key)
        if got is not None:
            return got
        var = spec.features[k]
        children = [
            build(k + 1, residual - w) for w in spec.weights[k]
        ]
        first = children[0]
        if all(c == first for c in children):
            memo[key] = first
            return first
        groups: dict[str, int] = {}
        for state, child in enumerate(children):
            groups[child] = groups.get(child, 0) | (1 << state)
        nid = f"n{counter}"
        counter += 1
        if len(nodes) + 1 > limit:
            raise CapacityError("linear compilation", len(nodes) + 1, limit)
        nodes[nid] = GraphNode(
            var,
            tuple((Literal(var, mask), child) for child, mask in groups.items()),
        )
        memo[key] = nid
        return nid

    root = build(0, spec.threshold)
    graph = DecisionGraph(
        spec.table, (spec.pos_label, spec.neg_label), root, nodes
    )
    graph.validate()
    return graph


def classifier_from_linear(
    spec: LinearClassifierSpec, max_nodes: Optional[int] = None
) -> Classifier:
    from .graphs import classifier_from_graph

    return classifier_from_graph(compile_linear(spec, max_nodes))


# -- naive Bayes ---------------------------------------------------------


@dataclass(frozen=True)
class NaiveBayesSpec:
    """Two-class naive Bayes with a posterior decision threshold.

    ``prior`` is the positive-class probability; ``likelihoods[k][c][s]``
    is the probability of state ``s`` of feature ``k`` given class ``c``
    (0 positive, 1 negative).  All probabilities are exact fractions and
    must be strictly positive and normalized.
    """

    table: VariableTable
    features: tuple[int, ...]
    prior: Fraction
    likelihoods: tuple[tuple[tuple[Fraction, ...], tuple[Fraction, ...]], ...]
    threshold: Fraction
    pos_label: str = "yes"
    neg_label: str = "no"
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if not 0 < self.prior < 1:
            raise InvalidDistributionError("class prior must lie in (0, 1)")
        if not 0 < self.threshold < 1:
            raise InvalidDistributionError("decision threshold must lie in (0, 1)")
        if len(self.features) != len(self.likelihoods):
            raise InvalidArgumentError("one likelihood table per feature required")
        for k, v in enumerate(self.features):
            size = self.table.variables[v].size
            for row in self.likelihoods[k]:
                if len(row) != size:
                    raise InvalidDistributionError(
                        f"feature {self.table.variables[v].name!r}: one "
                        "probability per state required"
                    )
                if any(p <= 0 for p in row):
                    raise InvalidDistributionError(
                        f"feature {self.table.variables[v].name!r}: zero or "
                        "negative probability"
                    )
                if sum(row) != 1:
                    raise InvalidDistributionError(
                        f"feature {self.table.variables[v].name!r}: "
                        "probabilities do not sum to 1"
                    )

    def decide(self, world) -> str:
        """Exact posterior-threshold decision via cross-multiplication."""
        pos = self.prior
        neg = 1 - self.prior
        for k, v in enumerate(self.features):
            s = world[v]
            pos *= self.likelihoods[k][0][s]
            neg *= self.likelihoods[k][1][s]
        decide_pos = pos * (1 - self.threshold) >= neg * self.threshold
        return self.pos_label if decide_pos else self.neg_label


def nbc_to_linear(spec: NaiveBayesSpec) -> LinearClassifierSpec:
    """Log-odds rewrite with fixed-precision integer weights.

    The positive decision ``posterior >= t`` becomes ``sum of per-state
    log likelihood ratios >= log-odds(t) - log-odds(prior)``; weights are
    multiplied by ``10**precision`` and truncated toward zero.
    """
    scale = 10**spec.precision
    weights = []
    for k in range(len(spec.features)):
        pos_row, neg_row = spec.likelihoods[k]
        weights.append(
            tuple(
                math.trunc(math.log(p / q) * scale)
                for p, q in zip(pos_row, neg_row)
            )
        )
    t_real = math.log(spec.threshold / (1 - spec.threshold)) - math.log(
        spec.prior / (1 - spec.prior)
    )
    return LinearClassifierSpec(
        table=spec.table,
        features=spec.features,
        weights=tuple(weights),
        threshold=math.trunc(t_real * scale),
        pos_label=spec.pos_label,
        neg_label=spec.neg_label,
        scale=scale,
    )


# -- step-activation networks -------------------------------------------


@dataclass(frozen=True)
class Neuron:
    id: str
    inputs: tuple[str, ...]  # input variable names or earlier neuron ids
    weights: tuple[int, ...]
    threshold: int


@dataclass(frozen=True)
class StepNetworkSpec:
    """A feed-forward network of step neurons over binary inputs.

    Every signal is binary: state index 1 of an input variable is the
    "on" level.  Neurons may reference input variables and previously
    listed neurons only, which makes the layering acyclic by construction.
    """

    table: VariableTable
    inputs: tuple[int, ...]
    neurons: tuple[Neuron, ...]
    output: str
    pos_label: str = "1"
    neg_label: str = "0"

    def __post_init__(self):
        for v in self.inputs:
            if self.table.variables[v].size != 2:
                raise ValidationError(
                    f"input {self.table.variables[v].name!r} is not binary"
                )
        known = {self.table.variables[v].name for v in self.inputs}
        ids = set()
        for neuron in self.neurons:
            if neuron.id in ids or neuron.id in known:
                raise ValidationError(f"duplicate signal id {neuron.id!r}")
            if len(neuron.inputs) != len(neuron.weights):
                raise ValidationError(
                    f"neuron {neuron.id!r}: one weight per input required"
                )
            for ref in neuron.inputs:
                if ref not in known and ref not in ids:
                    raise ValidationError(
                        f"neuron {neuron.id!r}: reference {ref!r} is not an "
                        "input or an earlier neuron"
                    )
            ids.add(neuron.id)
        if self.output not in ids:
            raise ValidationError(f"output {self.output!r} is not a neuron")

    def forward(self, world) -> str:
        """Direct evaluation: threshold each neuron in listed order."""
        signal = {
            self.table.variables[v].name: world[v] for v in self.inputs
        }
        for neuron in self.neurons:
            total = sum(
                w * signal[ref] for ref, w in zip(neuron.inputs, neuron.weights)
            )
            signal[neuron.id] = 1 if total >= neuron.threshold else 0
        return self.pos_label if signal[self.output] else self.neg_label


def compile_step_network(
    net: StepNetworkSpec, max_nodes: Optional[int] = None
) -> dict[str, Formula]:
    """Class formulas of the network over its input variables.

    Each neuron compiles through the linear pipeline over a local table of
    its fan-in signals; inner-signal literals are then substituted by the
    already-composed formulas (negated for "off" occurrences).
    """
    table = net.table
    input_vars = {table.variables[v].name: v for v in net.inputs}
    on: dict[str, Formula] = {}
    off: dict[str, Formula] = {}

    for neuron in net.neurons:
        local_table = VariableTable(
            [Variable(ref, ("0", "1")) for ref in neuron.inputs]
        )
        local_spec = LinearClassifierSpec(
            table=local_table,
            features=tuple(range(len(neuron.inputs))),
            weights=tuple((0, w) for w in neuron.weights),
            threshold=neuron.threshold,
            pos_label="1",
            neg_label="0",
        )
        local_graph = compile_linear(local_spec, max_nodes)
        local_formula = class_formula_complement_nnf(local_graph, "1")
        composed = _substitute_signals(
            local_formula, neuron.inputs, table, input_vars, on, off
        )
        on[neuron.id] = composed
        off[neuron.id] = composed.negate()

    return {
        net.pos_label: on[net.output],
        net.neg_label: off[net.output],
    }


def _substitute_signals(formula, refs, table, input_vars, on, off) -> Formula:
    from .logic import AND, LIT, OR, TRUE

    memo: dict[int, Formula] = {}

    def rec(f) -> Formula:
        got = memo.get(id(f))
        if got is not None:
            return got
        if f.kind == LIT:
            ref = refs[f.var]
            if ref in input_vars:
                got = table.lit(input_vars[ref], f.mask)
            elif f.mask == 0b10:  # signal on
                got = on[ref]
            else:  # 0b01: signal off
                got = off[ref]
        elif f.kind == AND:
            got = table.conj(rec(c) for c in f.children)
        elif f.kind == OR:
            got = table.disj(rec(c) for c in f.children)
        else:
            got = table.true if f.kind == TRUE else table.false
        memo[id(f)] = got
        return got

    return rec(formula)


def classifier_from_step_network(
    net: StepNetworkSpec, max_nodes: Optional[int] = None
) -> Classifier:
    formulas = compile_step_network(net, max_nodes)
    return Classifier(
        net.table,
        (net.pos_label, net.neg_label),
        (formulas[net.pos_label], formulas[net.neg_label]),
    )
