"""short: find the few decisions that matter in large goal models.

Pipeline: sample label propagation under random decisions, evolve good
decision sets, rank decisions by how often they appear in the best solutions,
then test ranked prefixes until the outcome variance collapses.
"""

from short.model import (
    CostAssignment,
    CostSpec,
    Edge,
    EdgeKind,
    GoalModel,
    Label,
    ModelError,
    Node,
    NodeKind,
    Violation,
    leaves,
    load_model,
    model_from_dict,
    model_to_dict,
    parse_model,
    render_model,
    sample_costs,
    validate,
)

__all__ = [
    "CostAssignment",
    "CostSpec",
    "Edge",
    "EdgeKind",
    "GoalModel",
    "Label",
    "ModelError",
    "Node",
    "NodeKind",
    "Violation",
    "leaves",
    "load_model",
    "model_from_dict",
    "model_to_dict",
    "parse_model",
    "render_model",
    "sample_costs",
    "validate",
]

__version__ = "0.1.0"
