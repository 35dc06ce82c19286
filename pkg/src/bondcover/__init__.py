"""Approximate minimum-weight c-bond covers (theta_c-minor deletion)."""

from .detect import (
    ThetaModel,
    find_separating_model,
    find_theta_model,
    is_theta_free,
    is_valid_model,
    max_separating_theta,
    minimize_model,
    model_to_bond,
    reverse_delete,
    verify_cover,
)
from .driver import PeelTrace, SolveConfig, SolveResult, reconstruct, solve
from .errors import BudgetExceededError, ValidationError
from .exact import constrained_cover, exact_cover, opt
from .instance import generate, parse_instance, serialize_instance
from .multigraph import ClusterCollection, WeightedMultigraph, contract_clusters
from .replacer import ReplacementRecord, lift_solution, replace_outgrowth
from .structure import (
    Clusters,
    LargeOutgrowth,
    Outgrowth,
    SmallModel,
    StructureParams,
    ThetaFree,
    find_outgrowth,
    structure,
)
from .weighting import ThinLayer, cluster_layer, cluster_weighting, model_layer, subtract_layer

__version__ = "0.1.0"
