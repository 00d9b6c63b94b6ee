"""JSON document formats: classifier models, instances and compiled formulas.

Documents are plain JSON (schemas shipped under ``docs/schemas``); state
sets always serialize as sorted state-name arrays so fixtures diff
cleanly.  Numbers that participate in discretization are handled with
exact decimal semantics; instance values for interval variables may be
numeric points and are discretized on ingestion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Union

from .errors import (
    InvalidArgumentError,
    UnknownStateError,
    UnknownVariableError,
    ValidationError,
)
from .graphs import (
    DecisionGraph,
    Forest,
    GraphLeaf,
    GraphNode,
    NumericFeature,
    NumericSplit,
    NumericTree,
    check_test_once,
    class_formula_complement_nnf,
    class_formula_dnf,
    classifier_from_forest,
    classifier_from_graph,
    discretize_numeric_tree,
)
from .linear import (
    LinearClassifierSpec,
    NaiveBayesSpec,
    Neuron,
    StepNetworkSpec,
    classifier_from_linear,
    classifier_from_step_network,
    compile_linear,
    nbc_to_linear,
)
from .logic import (
    AND,
    FALSE,
    LIT,
    OR,
    TRUE,
    Classifier,
    Formula,
    Instance,
    Literal,
    Variable,
    VariableTable,
)

MODEL_FORMAT = "classifier-model/v1"
INSTANCE_FORMAT = "instance/v1"
FORMULA_FORMAT = "formula-document/v1"

MODEL_TYPES = (
    "decision_graph",
    "decision_tree_numeric",
    "naive_bayes",
    "linear",
    "forest",
    "step_network",
)


def _as_decimal(x) -> Decimal:
    if isinstance(x, Decimal):
        return x
    if isinstance(x, bool) or x is None:
        raise ValidationError(f"expected a number, got {x!r}")
    try:
        return Decimal(str(x))
    except InvalidOperation:
        raise ValidationError(f"not a number: {x!r}") from None


def _as_fraction(x) -> Fraction:
    return Fraction(_as_decimal(x))


def load_json(path) -> dict:
    """Parse a JSON file keeping non-integer numbers as exact decimals."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh, parse_float=Decimal)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from None


@dataclass
class ModelBundle:
    """A parsed model document: the table, the source model and its
    compiled classifier.

    ``decide`` evaluates the *source* model directly (graph walk, exact
    posterior, forward pass); the classifier evaluates compiled class
    formulas.  Keeping both is what makes decision-equivalence checks
    meaningful.
    """

    model_type: str
    table: VariableTable
    classes: tuple[str, ...]
    decide: Callable  # world tuple -> class label
    classifier: Classifier
    graph: Optional[DecisionGraph] = None
    source: object = None

    def graph_backed(self) -> bool:
        return self.graph is not None


def parse_model_document(doc: dict, method: str = "cnnf") -> ModelBundle:
    """Validate and build a model document.

    ``method`` picks the class-formula construction for graph-backed
    models ("cnnf" or "dnf"); compiled model families always go through
    their own pipelines.
    """
    if not isinstance(doc, dict):
        raise ValidationError("model document must be a JSON object")
    if doc.get("format") != MODEL_FORMAT:
        raise ValidationError(
            f"unsupported document format {doc.get('format')!r}; "
            f"expected {MODEL_FORMAT!r}"
        )
    model = doc.get("model")
    if not isinstance(model, dict) or "type" not in model:
        raise ValidationError("missing model section with a type tag")
    mtype = model["type"]
    if mtype not in MODEL_TYPES:
        raise ValidationError(f"unknown model type {mtype!r}")
    builder = _BUILDERS[mtype]
    return builder(doc, model, method)


def load_model(path, method: str = "cnnf") -> ModelBundle:
    return parse_model_document(load_json(path), method=method)


def _parse_variables(doc: dict) -> VariableTable:
    section = doc.get("variables")
    if not isinstance(section, list) or not section:
        raise ValidationError("missing or empty variables section")
    variables = []
    for entry in section:
        name = entry.get("name")
        states = entry.get("states")
        if not isinstance(name, str) or not isinstance(states, list):
            raise ValidationError(f"variable entry {entry!r} needs name and states")
        intervals = None
        if entry.get("intervals") is not None:
            raw = entry["intervals"]
            if len(raw) != len(states):
                raise ValidationError(
                    f"variable {name!r}: one interval per state required"
                )
            intervals = tuple(
                (
                    None if lo is None else _as_decimal(lo),
                    None if hi is None else _as_decimal(hi),
                )
                for lo, hi in raw
            )
        variables.append(Variable(name, tuple(states), intervals))
    return VariableTable(variables)


def _parse_graph_nodes(table, classes, section, where: str):
    nodes: dict[str, Union[GraphLeaf, GraphNode]] = {}
    issues = []
    for entry in section:
        nid = entry.get("id")
        if not isinstance(nid, str):
            issues.append(f"{where}: node without a string id: {entry!r}")
            continue
        if nid in nodes:
            issues.append(f"{where}: duplicate node id {nid!r}")
            continue
        if "class" in entry:
            nodes[nid] = GraphLeaf(entry["class"])
            continue
        try:
            v = table.var_index(entry["variable"])
        except (KeyError, UnknownVariableError):
            issues.append(
                f"{where}: node {nid!r}: unknown variable "
                f"{entry.get('variable')!r}"
            )
            continue
        edges = []
        for edge in entry.get("edges", ()):
            mask = 0
            try:
                for s in edge["states"]:
                    mask |= 1 << table.variables[v].state_index(s)
            except UnknownStateError as exc:
                issues.append(f"{where}: node {nid!r}: {exc.args[0]}")
                continue
            if mask == 0 or mask == table.variables[v].full_mask:
                issues.append(
                    f"{where}: node {nid!r}: edge states must be a nonempty "
                    "proper subset"
                )
                continue
            edges.append((Literal(v, mask), edge["to"]))
        nodes[nid] = GraphNode(v, tuple(edges))
    if issues:
        raise ValidationError(issues)
    return nodes


def _build_decision_graph(doc, model, method) -> ModelBundle:
    table = _parse_variables(doc)
    classes = tuple(model["classes"])
    nodes = _parse_graph_nodes(table, classes, model["nodes"], "decision_graph")
    graph = DecisionGraph(table, classes, model["root"], nodes)
    graph.validate()
    return ModelBundle(
        model_type="decision_graph",
        table=table,
        classes=classes,
        decide=graph.decide,
        classifier=classifier_from_graph(graph, method),
        graph=graph,
        source=graph,
    )


def _build_numeric_tree(doc, model, method) -> ModelBundle:
    if doc.get("variables"):
        raise ValidationError(
            "decision_tree_numeric derives its variables by discretization; "
            "remove the variables section"
        )
    classes = tuple(model["classes"])
    features = tuple(
        NumericFeature(
            name=f["name"],
            min_value=None if f.get("min") is None else _as_decimal(f["min"]),
            state_prefix=f.get("state_prefix"),
        )
        for f in model["features"]
    )
    nodes: dict[str, Union[GraphLeaf, NumericSplit]] = {}
    for entry in model["nodes"]:
        nid = entry["id"]
        if "class" in entry:
            nodes[nid] = GraphLeaf(entry["class"])
        elif "threshold" in entry:
            nodes[nid] = NumericSplit(
                feature=entry["feature"],
                threshold=_as_decimal(entry["threshold"]),
                lt=entry["lt"],
                ge=entry["ge"],
            )
        else:
            raise ValidationError(
                f"numeric tree node {nid!r}: expected a class leaf or a "
                "threshold split"
            )
    tree = NumericTree(features, classes, model["root"], nodes)
    graph, table = discretize_numeric_tree(tree)
    return ModelBundle(
        model_type="decision_tree_numeric",
        table=table,
        classes=classes,
        decide=graph.decide,
        classifier=classifier_from_graph(graph, method),
        graph=graph,
        source=tree,
    )


def _two_classes(model) -> tuple[str, str]:
    classes = tuple(model["classes"])
    if len(classes) != 2:
        raise ValidationError("this model type needs exactly two classes")
    return classes


def _build_naive_bayes(doc, model, method) -> ModelBundle:
    table = _parse_variables(doc)
    pos, neg = _two_classes(model)
    features = []
    likelihoods = []
    for f in model["features"]:
        v = table.var_index(f["variable"])
        features.append(v)
        likelihoods.append(
            (
                tuple(_as_fraction(p) for p in f["positive"]),
                tuple(_as_fraction(p) for p in f["negative"]),
            )
        )
    spec = NaiveBayesSpec(
        table=table,
        features=tuple(features),
        prior=_as_fraction(model["prior"]),
        likelihoods=tuple(likelihoods),
        threshold=_as_fraction(model["threshold"]),
        pos_label=pos,
        neg_label=neg,
        precision=model.get("precision", 6),
    )
    graph = compile_linear(nbc_to_linear(spec))
    return ModelBundle(
        model_type="naive_bayes",
        table=table,
        classes=(pos, neg),
        decide=spec.decide,
        classifier=classifier_from_graph(graph, "cnnf"),
        graph=graph,
        source=spec,
    )


def _build_linear(doc, model, method) -> ModelBundle:
    table = _parse_variables(doc)
    pos, neg = _two_classes(model)
    precision = model.get("precision")
    scale = 1 if precision is None else 10 ** int(precision)

    def integerize(x) -> int:
        if isinstance(x, int):
            return x * scale
        if precision is None:
            raise ValidationError(
                "non-integer weights require a precision field"
            )
        return int(_as_decimal(x).scaleb(precision).to_integral_value("ROUND_DOWN"))

    features = []
    weights = []
    for f in model["features"]:
        v = table.var_index(f["variable"])
        features.append(v)
        weights.append(tuple(integerize(w) for w in f["weights"]))
    order = model.get("order")
    if order is not None:
        wanted = [table.var_index(name) for name in order]
        if sorted(wanted) != sorted(features):
            raise ValidationError("order must permute exactly the model features")
        reindex = {v: k for k, v in enumerate(features)}
        features, weights = wanted, [weights[reindex[v]] for v in wanted]
    spec = LinearClassifierSpec(
        table=table,
        features=tuple(features),
        weights=tuple(weights),
        threshold=integerize(model["threshold"]),
        pos_label=pos,
        neg_label=neg,
        scale=scale,
    )
    graph = compile_linear(spec)
    return ModelBundle(
        model_type="linear",
        table=table,
        classes=(pos, neg),
        decide=spec.decide,
        classifier=classifier_from_graph(graph, "cnnf"),
        graph=graph,
        source=spec,
    )


def _build_forest(doc, model, method) -> ModelBundle:
    table = _parse_variables(doc)
    classes = _two_classes(model)
    trees = []
    for k, tdoc in enumerate(model["trees"]):
        nodes = _parse_graph_nodes(table, classes, tdoc["nodes"], f"tree {k}")
        tree = DecisionGraph(table, classes, tdoc["root"], nodes)
        trees.append(tree)
    forest = Forest(tuple(trees), classes, model.get("tie_rule"))
    forest.validate()
    return ModelBundle(
        model_type="forest",
        table=table,
        classes=classes,
        decide=forest.decide,
        classifier=classifier_from_forest(forest),
        graph=None,
        source=forest,
    )


def _build_step_network(doc, model, method) -> ModelBundle:
    table = _parse_variables(doc)
    pos, neg = _two_classes(model)
    inputs = tuple(table.var_index(name) for name in model["inputs"])
    neurons = tuple(
        Neuron(
            id=n["id"],
            inputs=tuple(n["inputs"]),
            weights=tuple(int(w) for w in n["weights"]),
            threshold=int(n["threshold"]),
        )
        for n in model["neurons"]
    )
    net = StepNetworkSpec(
        table=table,
        inputs=inputs,
        neurons=neurons,
        output=model["output"],
        pos_label=pos,
        neg_label=neg,
    )
    return ModelBundle(
        model_type="step_network",
        table=table,
        classes=(pos, neg),
        decide=net.forward,
        classifier=classifier_from_step_network(net),
        graph=None,
        source=net,
    )


_BUILDERS = {
    "decision_graph": _build_decision_graph,
    "decision_tree_numeric": _build_numeric_tree,
    "naive_bayes": _build_naive_bayes,
    "linear": _build_linear,
    "forest": _build_forest,
    "step_network": _build_step_network,
}


# -- instances -----------------------------------------------------------


def parse_instance(bundle: ModelBundle, doc: dict) -> Instance:
    """Build an instance from a document or bare values mapping.

    Values are state names, state indices, or numeric points for interval
    variables (discretized here).  Missing features are reported together.
    """
    if not isinstance(doc, dict):
        raise InvalidArgumentError("instance document must be a JSON object")
    values = doc.get("values", doc if "format" not in doc else None)
    if not isinstance(values, dict):
        raise InvalidArgumentError("instance document needs a values mapping")
    table = bundle.table
    states: dict[int, int] = {}
    for name, value in values.items():
        v = table.var_index(name)
        var = table.variables[v]
        if isinstance(value, str):
            states[v] = var.state_index(value)
        elif isinstance(value, bool):
            raise InvalidArgumentError(
                f"feature {name!r}: booleans are not states"
            )
        elif isinstance(value, (int, float, Decimal)) and var.intervals is not None:
            states[v] = var.state_for_value(value)
        elif isinstance(value, int) and 0 <= value < var.size:
            states[v] = value
        else:
            raise InvalidArgumentError(
                f"feature {name!r}: cannot interpret value {value!r}"
            )
    missing = [
        var.name for i, var in enumerate(table.variables) if i not in states
    ]
    if missing:
        raise InvalidArgumentError(
            "instance is missing features: " + ", ".join(sorted(missing))
        )
    return Instance(table, tuple(states[i] for i in range(len(table.variables))))


# -- formula documents ---------------------------------------------------


def _variables_section(table: VariableTable) -> list:
    out = []
    for var in table.variables:
        entry: dict = {"name": var.name, "states": list(var.states)}
        if var.intervals is not None:
            entry["intervals"] = [
                [
                    None if lo is None else _num(lo),
                    None if hi is None else _num(hi),
                ]
                for lo, hi in var.intervals
            ]
        out.append(entry)
    return out


def _num(d: Decimal):
    return int(d) if d == d.to_integral_value() else float(d)


def formula_to_json(formula: Formula) -> dict:
    table = formula.table
    if formula.kind == TRUE:
        return {"const": True}
    if formula.kind == FALSE:
        return {"const": False}
    if formula.kind == LIT:
        var = table.variables[formula.var]
        return {
            "var": var.name,
            "states": sorted(
                (var.states[s] for s in Literal(formula.var, formula.mask).states()),
                key=var.states.index,
            ),
        }
    op = "and" if formula.kind == AND else "or"
    return {"op": op, "args": [formula_to_json(c) for c in formula.children]}


def formula_from_json(table: VariableTable, node: dict) -> Formula:
    if not isinstance(node, dict):
        raise ValidationError(f"formula node must be an object, got {node!r}")
    if "const" in node:
        return table.true if node["const"] else table.false
    if "var" in node:
        return table.lit(node["var"], node["states"])
    if "op" in node:
        args = (formula_from_json(table, a) for a in node["args"])
        if node["op"] == "and":
            return table.conj(args)
        if node["op"] == "or":
            return table.disj(args)
        raise ValidationError(f"unknown operator {node['op']!r}")
    raise ValidationError(f"unrecognized formula node: {node!r}")


def formula_document(
    formula: Formula,
    class_label: str,
    method: str,
    test_once: Optional[bool],
) -> dict:
    from .quantify import is_or_decomposable

    return {
        "format": FORMULA_FORMAT,
        "variables": _variables_section(formula.table),
        "class": class_label,
        "method": method,
        "or_decomposable": is_or_decomposable(formula),
        "test_once": test_once,
        "formula": formula_to_json(formula),
    }


def parse_formula_document(doc: dict) -> tuple[VariableTable, Formula, dict]:
    if doc.get("format") != FORMULA_FORMAT:
        raise ValidationError(
            f"unsupported document format {doc.get('format')!r}; "
            f"expected {FORMULA_FORMAT!r}"
        )
    table = _parse_variables(doc)
    formula = formula_from_json(table, doc["formula"])
    meta = {
        "class": doc.get("class"),
        "method": doc.get("method"),
        "or_decomposable": doc.get("or_decomposable"),
        "test_once": doc.get("test_once"),
    }
    return table, formula, meta


def graph_model_document(graph: DecisionGraph) -> dict:
    """Serialize a decision graph as a re-ingestable model document."""
    nodes = []
    for nid in sorted(graph.nodes):
        node = graph.nodes[nid]
        if isinstance(node, GraphLeaf):
            nodes.append({"id": nid, "class": node.label})
        else:
            var = graph.table.variables[node.var]
            nodes.append(
                {
                    "id": nid,
                    "variable": var.name,
                    "edges": [
                        {
                            "states": [var.states[s] for s in lit.states()],
                            "to": child,
                        }
                        for lit, child in node.edges
                    ],
                }
            )
    return {
        "format": MODEL_FORMAT,
        "variables": _variables_section(graph.table),
        "model": {
            "type": "decision_graph",
            "classes": list(graph.classes),
            "root": graph.root,
            "nodes": nodes,
        },
    }


def compile_to_document(bundle: ModelBundle, class_label: str, method: str) -> dict:
    """The payload of the compile command: a formula or graph document."""
    if method == "graph":
        if bundle.graph is None:
            raise InvalidArgumentError(
                f"model type {bundle.model_type!r} does not compile to a "
                "single decision graph"
            )
        return graph_model_document(bundle.graph)
    if class_label not in bundle.classes:
        raise InvalidArgumentError(f"unknown class {class_label!r}")
    if method == "dnf":
        if bundle.graph is not None:
            formula = class_formula_dnf(bundle.graph, class_label)
        else:
            from .primes import to_dnf

            base = bundle.classifier.formulas[
                bundle.classifier.label_index(class_label)
            ]
            formula = bundle.table.disj(
                t.to_formula(bundle.table) for t in sorted(
                    to_dnf(base),
                    key=lambda t: tuple((l.var, l.mask) for l in t.literals),
                )
            )
    elif method == "cnnf":
        if bundle.graph is not None:
            formula = class_formula_complement_nnf(bundle.graph, class_label)
        else:
            formula = bundle.classifier.formulas[
                bundle.classifier.label_index(class_label)
            ]
    else:
        raise InvalidArgumentError(f"unknown compilation method {method!r}")
    test_once = check_test_once(bundle.graph) if bundle.graph is not None else None
    return formula_document(formula, class_label, method, test_once)
