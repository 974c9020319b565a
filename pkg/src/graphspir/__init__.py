"""Verified symmetric private retrieval on graph-stored databases.

The package builds linear retrieval schemes in which every message lives on
exactly two servers of a storage graph, converts plain-retrieval schemes
into symmetric ones by masking answers with shared server randomness, and
machine-checks correctness, user privacy, and database privacy with exact
arithmetic.
"""

from .audit import (
    AuditReport,
    audit_family,
    linear_entropy,
    verify_database_privacy,
    verify_reliability,
    verify_user_privacy,
)
from .capacity import (
    BoundSet,
    achievable_rate,
    bound_set,
    general_rate_rho,
    pir_capacity,
    upper_bound,
)
from .catalog import family_names, get_family
from .converse import converse_suite
from .convert import conversion_params, convert_pir_to_spir, scheme_stats
from .forms import LinearForm, Msg, Rand, SchemeFamily, SchemeInstance
from .graphdb import Graph, build_graph, validate_graph
from .oracle import entropy_oracle
from .schemes import (
    build_cycle3_pir,
    build_p3_capacity_spir,
    build_path_pir,
    check_srp,
    cycle3_pir_family,
    p3_capacity_family,
    path_pir_family,
)
from .tables import golden_table, instance_to_json

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "BoundSet",
    "Graph",
    "LinearForm",
    "Msg",
    "Rand",
    "SchemeFamily",
    "SchemeInstance",
    "achievable_rate",
    "audit_family",
    "bound_set",
    "build_cycle3_pir",
    "build_graph",
    "build_p3_capacity_spir",
    "build_path_pir",
    "check_srp",
    "conversion_params",
    "converse_suite",
    "convert_pir_to_spir",
    "cycle3_pir_family",
    "entropy_oracle",
    "family_names",
    "general_rate_rho",
    "get_family",
    "golden_table",
    "instance_to_json",
    "linear_entropy",
    "p3_capacity_family",
    "path_pir_family",
    "pir_capacity",
    "scheme_stats",
    "upper_bound",
    "validate_graph",
    "verify_database_privacy",
    "verify_reliability",
    "verify_user_privacy",
]
