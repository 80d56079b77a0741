"""Combinatorial auctions with exact rational valuations.

Valuation classes and their hierarchy checks, the OR/XOR bidding algebra,
winner determination (exact, greedy, ascending prices, matching) and VCG
payment analysis, all verified by brute force at small scale.
"""

from .algebra import (
    Bid,
    Or,
    OrValuation,
    Xor,
    XorValuation,
    XosExpression,
    XosValuation,
    dedupe_clauses,
    eval_expression,
    eval_xos,
    expression_valuation,
    or_,
    or_of,
    oxs_clauses,
    sm_to_xos,
    xor,
    xor_of,
)
from .allocation import (
    Allocation,
    AuctionInstance,
    WalrasianCertificate,
    exists_walrasian,
    greedy_allocate,
    greedy_order_heuristic,
    kelso_crawford,
    knapsack_instance,
    most_valuable_first,
    optimal_allocate,
    optimal_allocations,
    optimal_welfare,
    item_classes,
    optimal_allocate_by_classes,
    oxs_matching_allocate,
    supporting_prices,
    verify_walrasian,
)
from .core import (
    AdditiveValuation,
    BudgetedAdditiveValuation,
    CoverageValuation,
    ItemSet,
    PriceVector,
    SingletonValuation,
    SymmetricValuation,
    TableValuation,
    UnitDemandValuation,
    Valuation,
    build_valuation,
    demand_set,
    evaluate,
    marginal,
    restrict,
    single_minded,
    surplus,
    table_from_function,
    to_money,
)
from .errors import (
    SubauctError,
    ValuationError,
    MonotonicityViolation,
    NormalizationViolation,
    NegativeValue,
    UniverseMismatch,
    UniverseTooLarge,
    UniverseTooSmall,
    NotSubmodular,
    NotSymmetric,
    UnboundedComplementarity,
    PerturbationTooLarge,
    InstanceTooLarge,
    NonTermination,
    NotOxsExpression,
    DimensionMismatch,
    ParseError,
    SchemaError,
)
from .hierarchy import (
    Check,
    ClassReport,
    classify,
    gs_triple_property,
    is_a_submodular,
    is_complement_free,
    is_downward_sloping,
    is_gross_substitutes,
    is_submodular,
    is_xos,
    min_complementarity,
    perturbed_central,
    single_improvement_step,
    single_improvement_witness,
    xos_supporting_prices,
)
from .mechanisms import (
    agents_substitutes_check,
    false_name_analysis,
    greedy_truthfulness_fixture,
    vcg,
    vcg_payments_by_welfare,
)

__version__ = "0.1.0"

__all__ = [
    "Bid", "Or", "OrValuation", "Xor", "XorValuation", "XosExpression", "XosValuation",
    "dedupe_clauses", "eval_expression", "eval_xos", "expression_valuation", "or_", "or_of",
    "oxs_clauses", "sm_to_xos", "xor", "xor_of", "Allocation", "AuctionInstance",
    "WalrasianCertificate", "exists_walrasian", "greedy_allocate", "greedy_order_heuristic",
    "kelso_crawford", "knapsack_instance", "most_valuable_first", "optimal_allocate",
    "optimal_allocations", "optimal_welfare", "item_classes", "optimal_allocate_by_classes",
    "oxs_matching_allocate", "supporting_prices", "verify_walrasian", "AdditiveValuation",
    "BudgetedAdditiveValuation", "CoverageValuation", "ItemSet", "PriceVector",
    "SingletonValuation", "SymmetricValuation", "TableValuation", "UnitDemandValuation",
    "Valuation", "build_valuation", "demand_set", "evaluate", "marginal", "restrict",
    "single_minded", "surplus", "table_from_function", "to_money", "SubauctError",
    "ValuationError", "MonotonicityViolation", "NormalizationViolation", "NegativeValue",
    "UniverseMismatch", "UniverseTooLarge", "UniverseTooSmall", "NotSubmodular", "NotSymmetric",
    "UnboundedComplementarity", "PerturbationTooLarge", "InstanceTooLarge", "NonTermination",
    "NotOxsExpression", "DimensionMismatch", "ParseError", "SchemaError", "Check",
    "ClassReport", "classify", "gs_triple_property", "is_a_submodular", "is_complement_free",
    "is_downward_sloping", "is_gross_substitutes", "is_submodular", "is_xos",
    "min_complementarity", "perturbed_central", "single_improvement_step",
    "single_improvement_witness", "xos_supporting_prices", "agents_substitutes_check",
    "false_name_analysis", "greedy_truthfulness_fixture", "vcg", "vcg_payments_by_welfare",
]
