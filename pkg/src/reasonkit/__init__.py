"""Symbolic explanation engine for discrete classifiers.

Compiles decision graphs, random forests, naive Bayes models and
step-activation networks into discrete-logic class formulas and computes
formally guaranteed explanations: complete and general reasons,
sufficient and necessary reasons (plus their general variants) and
targeted contrastive explanations.
"""

from .errors import (
    CapacityError,
    ClassifierIntegrityError,
    ConfigurationError,
    InvalidArgumentError,
    InvalidDistributionError,
    ReasonKitError,
    UnknownStateError,
    UnknownVariableError,
    UnsupportedSplitError,
    ValidationError,
)
from .logic import (
    Classifier,
    Clause,
    Formula,
    Instance,
    Literal,
    Term,
    Variable,
    VariableTable,
    simplify,
    subsumes,
)
from .quantify import (
    Reason,
    complete_reason,
    forall_bar_state,
    forall_state,
    general_reason,
    is_or_decomposable,
)
from .primes import (
    fixated_prime_implicates,
    prime_implicants,
    prime_implicates,
    resolve,
    to_cnf,
    to_dnf,
    variable_minimal,
)
from .reasons import (
    ExplanationSet,
    general_necessary_reasons,
    general_sufficient_reasons,
    intersect_with_instance,
    necessary_reasons,
    sufficient_reasons,
    targeted_reason,
)

__version__ = "0.1.0"
